#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ckballs/matrix_core.hpp"
#include "ckballs/oracle.hpp"

namespace ckballs {

/// Finite generating set of a Schur ideal, with the non-triviality flag and
/// the boundedness constant delta computed by ideal_analyze.
struct SchurIdealGens {
    int k = 0;
    std::vector<HermitianMatrix> gens;
    double delta = 0.0;       // largest value with P >= delta^2 Diag(P) for every generator
    bool nontrivial = false;  // each diagonal index is hit by some generator
};

/// Validates the generators (PSD, equal dimension) and computes delta and
/// non-triviality. delta^2 is the smallest generalized eigenvalue of
/// Diag(P)^{-1/2} P Diag(P)^{-1/2} over generators, restricted to indices
/// with p_ii > tol; the generator-level bound extends to the whole ideal.
SchurIdealGens ideal_analyze(std::vector<HermitianMatrix> gens, double tol = 1e-10);

/// Member iff ((1 - conj(w_i) w_j) p_ij) is PSD for every generator.
Membership perp_membership(const SchurIdealGens& ideal, std::span<const cplx> w,
                           double tol = 1e-10);

BallOracle perp_oracle(SchurIdealGens ideal, double tol = 1e-10);

/// The 3x3 matrix [[1,1,1],[1,a+1,1],[1,1,c+1]]; PSD for all a, c > 0.
HermitianMatrix pac_matrix(double a, double c);

/// Closed-form membership of (0, x, y) in the perp of {P_{a,c}}:
/// x^2 <= a/(a+1) and y^2 <= (ac - (ac+c)x^2) / ((ac+a) - (ac+a+c)x^2).
Membership pac_slice_membership(double a, double c, double x, double y, double tol = 1e-10);

/// Ball of the idempotent algebra affiliated with {Q}: membership via
/// ||Q^{1/2} Diag(w) Q^{-1/2}|| <= 1 + tol.
BallOracle idempotent_oracle_from_matrix(const HermitianMatrix& q, double tol = 1e-10);

/// Witness that w is outside the biperp of D: a matrix P with P >= epsilon*I
/// that passes every constraint of D while the matrix at w has an eigenvalue
/// at or below -margin.
struct SeparationCertificate {
    HermitianMatrix P;
    double margin = 0.0;
    double epsilon = 0.0;
};

/// Re-derives every certificate property from scratch at tolerance tol:
/// P PSD, P >= epsilon*I, all constraint matrices of D PSD, and the matrix
/// at w with smallest eigenvalue <= -margin.
bool verify_certificate(const SeparationCertificate& cert, const std::vector<PointCk>& D,
                        std::span<const cplx> w, double tol = 1e-11);

/// Projected subgradient descent on the smallest eigenvalue of the matrix at
/// w, with Dykstra-style alternating projections onto the constraint cones of
/// D (pre-shrunk by 1 - 1e-6). Returns a certificate re-verified at 10x
/// tighter tolerance against the original D, or nullopt when the budget is
/// exhausted. Deterministic given (inputs, seed).
std::optional<SeparationCertificate> biperp_separation(const std::vector<PointCk>& D,
                                                       std::span<const cplx> w, int budget,
                                                       std::uint64_t seed, double tol = 1e-10);

struct BiperpResult {
    Membership result = Membership::unknown;
    std::optional<SeparationCertificate> certificate;  // present iff non_member
};

/// member when w is reproduced by the inner-approximation sampler of the
/// generated ball; non_member with certificate when separation succeeds;
/// otherwise unknown.
BiperpResult biperp_membership(const std::vector<PointCk>& D, std::span<const cplx> w, int budget,
                               std::uint64_t seed, double tol = 1e-10);

}  // namespace ckballs
