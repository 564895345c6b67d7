#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ckballs/matrix_core.hpp"
#include "ckballs/oracle.hpp"

namespace ckballs {

/// phi_a(z) = (z - a) / (1 - conj(a) z). Throws near the pole z = 1/conj(a).
cplx mobius(cplx a, cplx z);

/// Interpolation nodes alpha_1..alpha_k: either all in the open disk or all
/// on the unit circle (within 1e-12). Mixed configurations are rejected, as
/// are nodes closer than 1e-12 to each other.
class PickNodes {
public:
    explicit PickNodes(std::vector<cplx> alpha);

    int k() const { return static_cast<int>(alpha_.size()); }
    bool circle_mode() const { return circle_mode_; }
    const std::vector<cplx>& alpha() const { return alpha_; }

private:
    std::vector<cplx> alpha_;
    bool circle_mode_ = false;
};

/// Entry (i,j) = (1 - conj(w_i) w_j) / (1 - conj(alpha_i) alpha_j).
/// Only defined for open-disk nodes.
HermitianMatrix pick_matrix(const PickNodes& nodes, std::span<const cplx> w);

/// Open-disk nodes: member iff the Pick matrix is PSD. Circle nodes: the
/// body is the closed polydisk, so the test is max_i |w_i| <= 1 + tol.
Membership pick_membership(const PickNodes& nodes, std::span<const cplx> w, double tol = 1e-10);

BallOracle pick_oracle(PickNodes nodes, double tol = 1e-10);

/// Minkowski functional of the oracle's ball, by bisection on membership of
/// w/t. The bracket starts at [max|w_i|*(1-eps), 2k*max|w_i|] and the upper
/// end doubles until w/t is a member; final bracket width <= 1e-9.
double ball_norm(const BallOracle& oracle, std::span<const cplx> w);

/// Section {(v_2..v_k) : (0, v_2..v_k) in ball}, one dimension down.
BallOracle hat_section(const BallOracle& oracle);

/// Lift {(a, v_2..v_k) : (phi_a(v_2)..phi_a(v_k)) in section}; |a| > 1 is
/// never a member.
BallOracle tilde_lift(const BallOracle& section);

/// Positivity of ((conj(v_i)v_j - conj(w_i)w_j) / (1 - conj(v_i)v_j)).
/// Requires all |v_i| < 1.
bool schwarz_pick_dominates(std::span<const cplx> v, std::span<const cplx> w, double tol = 1e-10);

struct VkCheckReport {
    bool absconv_closed = true;       // absolute convex combinations stay inside
    bool product_closed = true;       // coordinatewise products stay inside
    bool dominance_closed = true;     // Schwarz-Pick dominated points stay inside
    bool pass = true;
    std::string counterexample;       // empty when pass
    std::vector<PointCk> witness;     // offending points, when any
};

/// Samples-based battery of the necessary conditions for a set to be a
/// hat-section: closure under absolute convex combinations, coordinatewise
/// products, and Schwarz-Pick dominance. The ball oracle decides membership
/// of the derived points; samples must be members inside the closed polydisk.
VkCheckReport vk_necessary_check(const BallOracle& ball, const std::vector<PointCk>& section_samples,
                                 int product_trials, int dominance_trials, std::uint64_t seed);

}  // namespace ckballs
