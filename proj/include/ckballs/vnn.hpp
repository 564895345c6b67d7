#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ckballs/matrix_core.hpp"
#include "ckballs/oracle.hpp"

namespace ckballs {

/// n commuting contractions, either as explicit matrices (commutators checked
/// at 1e-10 relative) or as a joint diagonalization T_j = Q Diag(d_j) Q^{-1}.
class CommutingTuple {
public:
    CommutingTuple() = default;  // empty placeholder; build via the factories
    static CommutingTuple general(std::vector<ComplexMatrix> matrices);
    static CommutingTuple diagonalizable(ComplexMatrix q, std::vector<std::vector<cplx>> diagonals);

    int n() const { return n_; }
    int dim() const { return dim_; }
    bool is_diagonalizable_form() const { return diagonal_form_; }
    const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
    const ComplexMatrix& q() const { return q_; }
    const ComplexMatrix& q_inverse() const { return q_inv_; }
    const std::vector<std::vector<cplx>>& diagonals() const { return diagonals_; }

private:
    void validate_contractions() const;

    int n_ = 0;
    int dim_ = 0;
    bool diagonal_form_ = false;
    std::vector<ComplexMatrix> matrices_;  // expanded operators (both forms)
    ComplexMatrix q_, q_inv_;
    std::vector<std::vector<cplx>> diagonals_;
};

/// Polynomial in n variables: exponent multi-index -> complex coefficient.
struct Poly {
    int n = 0;
    std::map<std::vector<int>, cplx> terms;

    int degree() const;
    cplx eval(std::span<const cplx> z) const;
    Poly scaled(cplx factor) const;
};

/// p(T_1..T_n); the diagonalizable form short-circuits through
/// Q Diag(p(diagonal rows)) Q^{-1}.
ComplexMatrix poly_eval_matrices(const Poly& p, const CommutingTuple& t);

/// max |p| over the grid_per_var^n torus grid; a lower bound for the true
/// sup norm, monotone under grid refinement.
double sup_norm_torus(const Poly& p, int grid_per_var);

/// Rigorous factor bounding the true sup by the grid sup: with per-variable
/// degrees d_v, ||p|| <= sup_norm_torus(p, N) * bound where
/// bound = 1/sqrt(1 - (pi/N)^2 (sum d_v)^2 / 2) (Bernstein's inequality for
/// |p|^2 at the off-grid maximizer). Returns +inf when the grid is too
/// coarse for the degree.
double sup_inflation_bound(const Poly& p, int grid_per_var);

/// operator_norm(p(T)) / sup_norm_torus(p); a value above 1 flags a
/// von Neumann violation at the grid resolution.
double vnn_ratio(const Poly& p, const CommutingTuple& t, int grid);

struct ViolationCertificate {
    CommutingTuple tuple;
    Poly poly;
    double ratio = 0.0;
    int grid_used = 0;
};

struct SearchResult {
    double best_ratio = 0.0;  // certified: raw grid ratio / sup_inflation_bound
    int grid_used = 0;
    CommutingTuple tuple;
    Poly poly;
    std::optional<ViolationCertificate> certificate;  // present iff best_ratio > 1
};

/// Randomized hill-climb over (Q, diagonal rows, polynomial coefficients of
/// degree <= 3): perturb, rescale each operator to a contraction, keep the
/// move when the ratio improves. The reported ratio is deflated by
/// sup_inflation_bound, so a value above 1 is a genuine violation and
/// dimension-1 searches can never report one. Deterministic given the seed.
SearchResult violation_search(int n, int dim, std::uint64_t seed, int iters, int grid);

/// Ball of the idempotent family E_i = Q E_ii Q^{-1}: membership via
/// ||Q Diag(w) Q^{-1}|| <= 1 + tol. Rejects condition numbers above 1e8.
BallOracle example31_ball(const ComplexMatrix& q, double tol = 1e-10);

struct FalsifyOutcome {
    bool falsified = false;
    PointCk witness;       // p(T_points) coordinatewise (deflated p)
    double witness_norm = 0.0;  // ball norm of the witness, > 1 when falsified
};

/// Feeds the member points through p (sup-norm deflated by 1 + 1e-6, as in
/// the hull sampler) and reports whether the image escapes the ball.
FalsifyOutcome hyperconvexity_falsify(const BallOracle& oracle,
                                      const std::vector<PointCk>& t_points, const Poly& p,
                                      int grid);

}  // namespace ckballs
