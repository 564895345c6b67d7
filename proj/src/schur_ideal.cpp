#include "ckballs/schur_ideal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ckballs/generated_balls.hpp"
#include "ckballs/rng.hpp"

namespace ckballs {

SchurIdealGens ideal_analyze(std::vector<HermitianMatrix> gens, double tol) {
    if (gens.empty()) throw std::invalid_argument("ideal_analyze: empty generator list");
    const int k = gens.front().dim();
    for (const auto& g : gens) {
        if (g.dim() != k) throw std::invalid_argument("ideal_analyze: generator dimensions differ");
        if (!psd_check(g, tol).is_psd)
            throw std::invalid_argument("ideal_analyze: generator is not PSD");
    }

    SchurIdealGens ideal;
    ideal.k = k;
    ideal.gens = std::move(gens);

    std::vector<bool> diag_hit(k, false);
    double delta_sq = 1.0;
    for (const auto& g : ideal.gens) {
        std::vector<int> support;
        for (int i = 0; i < k; ++i) {
            if (g(i, i).real() > tol) {
                support.push_back(i);
                diag_hit[i] = true;
            }
        }
        if (support.empty()) continue;
        const int m = static_cast<int>(support.size());
        ComplexMatrix normalized(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                normalized(a, b) = g(support[a], support[b]) /
                                   std::sqrt(g(support[a], support[a]).real() *
                                             g(support[b], support[b]).real());
        const auto eig = hermitian_eig(HermitianMatrix(std::move(normalized)));
        delta_sq = std::min(delta_sq, std::max(0.0, eig.eigenvalues.front()));
    }
    ideal.nontrivial = std::all_of(diag_hit.begin(), diag_hit.end(), [](bool b) { return b; });
    ideal.delta = std::sqrt(delta_sq);
    return ideal;
}

namespace {

HermitianMatrix point_constraint_matrix(const HermitianMatrix& p, std::span<const cplx> w) {
    const int k = p.dim();
    ComplexMatrix m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = (1.0 - std::conj(w[i]) * w[j]) * p(i, j);
    return HermitianMatrix(std::move(m));
}

}  // namespace

Membership perp_membership(const SchurIdealGens& ideal, std::span<const cplx> w, double tol) {
    if (static_cast<int>(w.size()) != ideal.k)
        throw std::invalid_argument("perp_membership: point dimension mismatch");
    for (const auto& g : ideal.gens) {
        if (!psd_check(point_constraint_matrix(g, w), tol).is_psd) return Membership::non_member;
    }
    return Membership::member;
}

BallOracle perp_oracle(SchurIdealGens ideal, double tol) {
    BallOracle oracle;
    oracle.k = ideal.k;
    oracle.family = FamilyTag::schur_perp;
    oracle.tol = tol;
    oracle.membership_fn = [ideal = std::move(ideal), tol](std::span<const cplx> w) {
        return perp_membership(ideal, w, tol);
    };
    return oracle;
}

HermitianMatrix pac_matrix(double a, double c) {
    if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("pac_matrix: a and c must be > 0");
    HermitianMatrix p{{1.0, 1.0, 1.0}, {1.0, a + 1.0, 1.0}, {1.0, 1.0, c + 1.0}};
    if (!psd_check(p).is_psd) throw std::runtime_error("pac_matrix: construction is not PSD");
    return p;
}

Membership pac_slice_membership(double a, double c, double x, double y, double tol) {
    if (!(a > 0.0) || !(c > 0.0))
        throw std::invalid_argument("pac_slice_membership: a and c must be > 0");
    const double u = x * x;
    const double right = a / (a + 1.0);
    if (u > right + tol) return Membership::non_member;
    const double uc = std::min(u, right);
    const double bound = (a * c - (a * c + c) * uc) / ((a * c + a) - (a * c + a + c) * uc);
    return y * y <= bound + tol ? Membership::member : Membership::non_member;
}

BallOracle idempotent_oracle_from_matrix(const HermitianMatrix& q, double tol) {
    // similarity_rep_norm rejects singular q on every call; fail fast here
    const auto eig = hermitian_eig(q);
    if (eig.eigenvalues.front() <= tol * std::max(1.0, q.max_abs_diagonal()))
        throw std::invalid_argument("idempotent_oracle_from_matrix: not invertible");
    BallOracle oracle;
    oracle.k = q.dim();
    oracle.family = FamilyTag::idempotent;
    oracle.tol = tol;
    oracle.membership_fn = [q, tol](std::span<const cplx> w) {
        return similarity_rep_norm(q, w, tol) <= 1.0 + tol ? Membership::member
                                                           : Membership::non_member;
    };
    return oracle;
}

bool verify_certificate(const SeparationCertificate& cert, const std::vector<PointCk>& D,
                        std::span<const cplx> w, double tol) {
    if (cert.margin < 1e-8 || cert.epsilon <= 0.0) return false;
    const int k = cert.P.dim();
    if (!psd_check(cert.P, tol).is_psd) return false;

    ComplexMatrix shifted = cert.P.matrix();
    for (int i = 0; i < k; ++i) shifted(i, i) -= cert.epsilon;
    if (!psd_check(HermitianMatrix(std::move(shifted)), tol).is_psd) return false;

    for (const auto& v : D) {
        if (static_cast<int>(v.size()) != k) return false;
        if (!psd_check(point_constraint_matrix(cert.P, v), tol).is_psd) return false;
    }
    const auto excluded = psd_check(point_constraint_matrix(cert.P, w), tol);
    return excluded.min_eigenvalue <= -cert.margin;
}

namespace {

// Projection heuristics for the Dykstra pass. The map P -> (K o P) is
// inverted entrywise after projecting K o P onto the PSD cone, which is why
// the defining points are pre-shrunk away from the torus.
struct ConstraintKernel {
    ComplexMatrix K;          // (1 - conj(v_i) v_j)
    ComplexMatrix K_inv;      // entrywise reciprocal
};

HermitianMatrix project_psd(const HermitianMatrix& m, double floor_value) {
    const auto eig = hermitian_eig(m);
    const int n = m.dim();
    ComplexMatrix scaled(n, n);
    for (int j = 0; j < n; ++j) {
        const double lambda = std::max(eig.eigenvalues[j], floor_value);
        for (int i = 0; i < n; ++i) scaled(i, j) = eig.eigenvectors(i, j) * lambda;
    }
    return HermitianMatrix(scaled * eig.eigenvectors.adjoint());
}

HermitianMatrix project_constraint(const HermitianMatrix& p, const ConstraintKernel& kernel) {
    const int n = p.dim();
    ComplexMatrix prod(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prod(i, j) = kernel.K(i, j) * p(i, j);
    const HermitianMatrix projected = project_psd(HermitianMatrix(std::move(prod)), 0.0);
    ComplexMatrix back(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) back(i, j) = projected(i, j) * kernel.K_inv(i, j);
    return HermitianMatrix(std::move(back));
}

HermitianMatrix normalize_trace(const HermitianMatrix& p, double target) {
    const int n = p.dim();
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += p(i, i).real();
    ComplexMatrix out = p.matrix();
    const double shift = (target - tr) / n;
    for (int i = 0; i < n; ++i) out(i, i) += shift;
    return HermitianMatrix(std::move(out));
}

}  // namespace

std::optional<SeparationCertificate> biperp_separation(const std::vector<PointCk>& D,
                                                       std::span<const cplx> w, int budget,
                                                       std::uint64_t seed, double tol) {
    if (D.empty()) throw std::invalid_argument("biperp_separation: empty defining set");
    const int k = static_cast<int>(w.size());
    for (const auto& v : D) {
        if (static_cast<int>(v.size()) != k)
            throw std::invalid_argument("biperp_separation: dimension mismatch");
        if (max_coordinate(v) > 1.0 + 1e-9)
            throw std::invalid_argument("biperp_separation: defining point outside polydisk");
    }
    if (max_coordinate(w) > 1.0 + 1e-9)
        throw std::invalid_argument("biperp_separation: query point outside polydisk");

    constexpr double kShrink = 1.0 - 1e-6;  // keeps the back-map entries away from zero
    std::vector<ConstraintKernel> kernels;
    kernels.reserve(D.size());
    for (const auto& v : D) {
        ConstraintKernel kern;
        kern.K = ComplexMatrix(k, k);
        kern.K_inv = ComplexMatrix(k, k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const cplx e = 1.0 - std::conj(kShrink * v[i]) * (kShrink * v[j]);
                kern.K(i, j) = e;
                kern.K_inv(i, j) = 1.0 / e;
            }
        }
        kernels.push_back(std::move(kern));
    }

    ComplexMatrix Kw(k, k), Kw_conj(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Kw(i, j) = 1.0 - std::conj(w[i]) * w[j];
            Kw_conj(i, j) = std::conj(Kw(i, j));
        }

    auto objective = [&](const HermitianMatrix& p) {
        ComplexMatrix prod(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) prod(i, j) = Kw(i, j) * p(i, j);
        return hermitian_eig(HermitianMatrix(std::move(prod)));
    };

    auto try_certify = [&](const HermitianMatrix& p, double epsilon)
        -> std::optional<SeparationCertificate> {
        const auto eig = objective(p);
        const double margin = -eig.eigenvalues.front();
        if (margin < 1e-8) return std::nullopt;  // margin floor
        SeparationCertificate cert{p, margin * 0.999, epsilon};
        if (verify_certificate(cert, D, w, tol / 10.0)) return cert;
        return std::nullopt;
    };

    Rng rng(seed);

    // Dykstra pass over the constraint cones, the epsilon*I cone and the
    // trace normalization
    auto project_feasible = [&](HermitianMatrix candidate, double epsilon, int cycles) {
        const std::size_t sets = kernels.size() + 1;
        std::vector<ComplexMatrix> corrections(sets, ComplexMatrix::zero(k, k));
        for (int cycle = 0; cycle < cycles; ++cycle) {
            for (std::size_t s = 0; s < sets; ++s) {
                HermitianMatrix input(candidate.matrix() + corrections[s]);
                HermitianMatrix projected = s < kernels.size()
                                                ? project_constraint(input, kernels[s])
                                                : project_psd(input, epsilon);
                corrections[s] = input.matrix() - projected.matrix();
                candidate = std::move(projected);
            }
            candidate = normalize_trace(candidate, static_cast<double>(k));
        }
        return candidate;
    };

    auto random_feasible = [&](double epsilon) {
        ComplexMatrix m = ComplexMatrix::identity(k);
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const cplx v = 0.6 * rng.complex_normal();
                m(i, j) += v;
                m(j, i) += std::conj(v);
            }
            m(i, i) += 0.4 * rng.normal();
        }
        return project_feasible(HermitianMatrix(std::move(m)), epsilon, 8);
    };

    double epsilon = 1e-4;  // relative to the trace normalization tr P = k
    HermitianMatrix p = random_feasible(epsilon);
    double best = 1.0;
    int stalled = 0;
    int local_iter = 0;

    for (int iter = 0; iter < budget; ++iter, ++local_iter) {
        const auto eig = objective(p);
        const double lambda_min = eig.eigenvalues.front();
        if (lambda_min < best - 1e-12) {
            best = lambda_min;
            stalled = 0;
        } else if (++stalled > 40) {
            // mirror "P plus a small positive multiple": relax the floor,
            // then restart from a fresh random feasible point
            epsilon = std::max(epsilon * 0.5, 1e-9);
            p = random_feasible(epsilon);
            stalled = 0;
            local_iter = 0;
            continue;
        }
        if (lambda_min < -2e-8) {
            if (auto cert = try_certify(p, epsilon)) return cert;
        }

        // subgradient of the smallest eigenvalue: conj(K_w) o (u u*)
        ComplexMatrix grad(k, k);
        double gnorm = 0.0;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                grad(i, j) = Kw_conj(i, j) * eig.eigenvectors(i, 0) *
                             std::conj(eig.eigenvectors(j, 0));
                gnorm += std::norm(grad(i, j));
            }
        }
        gnorm = std::sqrt(gnorm);
        if (gnorm < 1e-14) {
            p = random_feasible(epsilon);
            local_iter = 0;
            continue;
        }
        const double step =
            (0.6 + 0.4 * rng.uniform()) / std::sqrt(static_cast<double>(local_iter + 1));
        ComplexMatrix moved = p.matrix();
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) moved(i, j) -= step / gnorm * grad(i, j);
        p = project_feasible(HermitianMatrix(std::move(moved)), epsilon, 4);
    }
    if (auto cert = try_certify(p, epsilon)) return cert;
    return std::nullopt;  // budget exhausted; never a false "member" claim
}

BiperpResult biperp_membership(const std::vector<PointCk>& D, std::span<const cplx> w, int budget,
                               std::uint64_t seed, double tol) {
    BiperpResult out;
    const int k = static_cast<int>(w.size());

    // inner approximation first: hull of the sampled generated ball
    const SampleCloud cloud = generated_ball_sample(D, 4, 48, seed);
    if (hull_membership(cloud, w, std::max(tol, 1e-7)) == Membership::member) {
        out.result = Membership::member;
        return out;
    }
    if (auto cert = biperp_separation(D, w, budget, seed, tol)) {
        out.result = Membership::non_member;
        out.certificate = std::move(cert);
        return out;
    }
    out.result = Membership::unknown;
    (void)k;
    return out;
}

}  // namespace ckballs
