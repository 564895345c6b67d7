#include "ckballs/vnn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "ckballs/parallel.hpp"
#include "ckballs/rng.hpp"

namespace ckballs {

CommutingTuple CommutingTuple::general(std::vector<ComplexMatrix> matrices) {
    if (matrices.empty()) throw std::invalid_argument("tuple: no operators");
    CommutingTuple t;
    t.n_ = static_cast<int>(matrices.size());
    t.dim_ = matrices.front().rows();
    for (const auto& m : matrices) {
        if (m.rows() != t.dim_ || m.cols() != t.dim_)
            throw std::invalid_argument("tuple: operators must be square of equal dimension");
        if (!m.all_finite()) throw std::invalid_argument("tuple: non-finite entries");
    }
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        for (std::size_t j = i + 1; j < matrices.size(); ++j) {
            const ComplexMatrix comm = matrices[i] * matrices[j] - matrices[j] * matrices[i];
            const double scale = std::max(1.0, matrices[i].max_abs() * matrices[j].max_abs());
            if (operator_norm(comm) > 1e-10 * scale)
                throw std::invalid_argument("tuple: operators do not commute at tolerance");
        }
    }
    t.matrices_ = std::move(matrices);
    t.validate_contractions();
    return t;
}

CommutingTuple CommutingTuple::diagonalizable(ComplexMatrix q,
                                              std::vector<std::vector<cplx>> diagonals) {
    if (diagonals.empty()) throw std::invalid_argument("tuple: no operators");
    CommutingTuple t;
    t.diagonal_form_ = true;
    t.n_ = static_cast<int>(diagonals.size());
    t.dim_ = q.rows();
    if (q.rows() != q.cols()) throw std::invalid_argument("tuple: Q must be square");
    for (const auto& d : diagonals)
        if (static_cast<int>(d.size()) != t.dim_)
            throw std::invalid_argument("tuple: diagonal length differs from dim");
    t.q_ = std::move(q);
    t.q_inv_ = inverse(t.q_);
    t.diagonals_ = std::move(diagonals);
    for (const auto& d : t.diagonals_)
        t.matrices_.push_back(t.q_ * diag_matrix(d) * t.q_inv_);
    t.validate_contractions();
    return t;
}

void CommutingTuple::validate_contractions() const {
    for (const auto& m : matrices_) {
        if (operator_norm(m) > 1.0 + 1e-10)
            throw std::invalid_argument("tuple: operator norm exceeds 1 at tolerance");
    }
}

int Poly::degree() const {
    int deg = 0;
    for (const auto& [exp, coef] : terms) {
        int total = 0;
        for (int e : exp) total += e;
        deg = std::max(deg, total);
    }
    return deg;
}

cplx Poly::eval(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != n) throw std::invalid_argument("poly: arity mismatch");
    cplx acc = 0.0;
    for (const auto& [exp, coef] : terms) {
        cplx term = coef;
        for (int v = 0; v < n; ++v)
            for (int rep = 0; rep < exp[v]; ++rep) term *= z[v];
        acc += term;
    }
    return acc;
}

Poly Poly::scaled(cplx factor) const {
    Poly out = *this;
    for (auto& [exp, coef] : out.terms) coef *= factor;
    return out;
}

ComplexMatrix poly_eval_matrices(const Poly& p, const CommutingTuple& t) {
    if (p.n != t.n()) throw std::invalid_argument("poly_eval: variable count mismatch");
    const int dim = t.dim();

    if (t.is_diagonalizable_form()) {
        std::vector<cplx> values(dim);
        std::vector<cplx> z(t.n());
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < t.n(); ++j) z[j] = t.diagonals()[j][i];
            values[i] = p.eval(z);
        }
        return t.q() * diag_matrix(values) * t.q_inverse();
    }

    // cache operator powers up to the degree actually used per variable
    std::vector<int> max_exp(t.n(), 0);
    for (const auto& [exp, coef] : p.terms)
        for (int v = 0; v < t.n(); ++v) max_exp[v] = std::max(max_exp[v], exp[v]);
    std::vector<std::vector<ComplexMatrix>> powers(t.n());
    for (int v = 0; v < t.n(); ++v) {
        powers[v].push_back(ComplexMatrix::identity(dim));
        for (int d = 1; d <= max_exp[v]; ++d)
            powers[v].push_back(powers[v].back() * t.matrices()[v]);
    }

    ComplexMatrix acc(dim, dim);
    for (const auto& [exp, coef] : p.terms) {
        ComplexMatrix term = ComplexMatrix::identity(dim);
        for (int v = 0; v < t.n(); ++v)
            if (exp[v] > 0) term = term * powers[v][exp[v]];
        acc += term * coef;
    }
    return acc;
}

double sup_norm_torus(const Poly& p, int grid_per_var) {
    if (grid_per_var < 8) throw std::invalid_argument("sup_norm_torus: grid_per_var must be >= 8");
    double total = 1.0;
    for (int v = 0; v < p.n; ++v) total *= grid_per_var;
    if (total > 1e8) throw std::invalid_argument("sup_norm_torus: grid exceeds 1e8 evaluations");
    if (p.n == 0) {
        cplx c = 0.0;
        for (const auto& [exp, coef] : p.terms) c += coef;
        return std::abs(c);
    }

    // per-variable power tables at the grid roots
    const int deg = p.degree();
    std::vector<std::vector<cplx>> pow_table(grid_per_var);
    for (int t = 0; t < grid_per_var; ++t) {
        const double th = 2.0 * M_PI * t / grid_per_var;
        const cplx z{std::cos(th), std::sin(th)};
        pow_table[t].resize(deg + 1);
        pow_table[t][0] = 1.0;
        for (int d = 1; d <= deg; ++d) pow_table[t][d] = pow_table[t][d - 1] * z;
    }

    const std::size_t outer = static_cast<std::size_t>(grid_per_var);
    std::vector<double> best_per_slice(outer, 0.0);
    parallel_for(outer, [&](std::size_t first) {
        std::vector<int> odo(p.n, 0);
        odo[0] = static_cast<int>(first);
        double best = 0.0;
        while (true) {
            cplx val = 0.0;
            for (const auto& [exp, coef] : p.terms) {
                cplx term = coef;
                for (int v = 0; v < p.n; ++v) term *= pow_table[odo[v]][exp[v]];
                val += term;
            }
            best = std::max(best, std::abs(val));
            int pos = 1;  // the first coordinate stays fixed per slice
            while (pos < p.n && ++odo[pos] == grid_per_var) odo[pos++] = 0;
            if (pos >= p.n) break;
        }
        best_per_slice[first] = best;
    });
    return *std::max_element(best_per_slice.begin(), best_per_slice.end());
}

double vnn_ratio(const Poly& p, const CommutingTuple& t, int grid) {
    const double sup = sup_norm_torus(p, grid);
    if (sup < 1e-12) throw std::invalid_argument("vnn_ratio: polynomial is degenerate");
    return operator_norm(poly_eval_matrices(p, t)) / sup;
}

namespace {

struct SearchState {
    ComplexMatrix q;
    std::vector<std::vector<cplx>> raw_diagonals;
    Poly poly;
};

CommutingTuple contraction_tuple(const SearchState& s) {
    // expand, then rescale each diagonal so the operator is a contraction
    const ComplexMatrix q_inv = inverse(s.q);
    std::vector<std::vector<cplx>> scaled = s.raw_diagonals;
    for (auto& d : scaled) {
        const double nrm = operator_norm(s.q * diag_matrix(d) * q_inv);
        const double f = 1.0 / (nrm + 1e-12);
        for (auto& v : d) v *= f;
    }
    return CommutingTuple::diagonalizable(s.q, std::move(scaled));
}

double ratio_of(const SearchState& s, int grid) {
    return vnn_ratio(s.poly, contraction_tuple(s), grid);
}

}  // namespace

SearchResult violation_search(int n, int dim, std::uint64_t seed, int iters, int grid) {
    if (iters < 1) throw std::invalid_argument("violation_search: iters must be >= 1");
    Rng rng(seed);

    std::vector<std::vector<int>> monomials;
    {
        std::vector<int> exp(n, 0);
        while (true) {
            int total = 0;
            for (int e : exp) total += e;
            if (total >= 1 && total <= 3) monomials.push_back(exp);
            int pos = 0;
            while (pos < n && ++exp[pos] > 3) exp[pos++] = 0;
            if (pos == n) break;
        }
    }

    auto random_state = [&]() {
        SearchState s;
        s.q = ComplexMatrix::identity(dim);
        for (auto& e : s.q.data()) e += 0.5 * rng.complex_normal();
        s.raw_diagonals.assign(n, std::vector<cplx>(dim));
        for (auto& d : s.raw_diagonals)
            for (auto& v : d) v = rng.unit_disk();
        s.poly.n = n;
        for (const auto& mono : monomials) s.poly.terms[mono] = rng.complex_normal();
        return s;
    };

    SearchState best_state = random_state();
    double best_ratio = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        try {
            best_ratio = ratio_of(best_state, grid);
            break;
        } catch (const std::exception&) {
            best_state = random_state();
        }
    }

    SearchState current = best_state;
    double current_ratio = best_ratio;
    double step = 0.3;
    int since_improvement = 0;
    for (int iter = 0; iter < iters; ++iter) {
        SearchState trial = current;
        const int what = static_cast<int>(rng.uniform_index(3));
        if (what == 0) {
            auto span = trial.q.data();
            span[rng.uniform_index(span.size())] += step * rng.complex_normal();
        } else if (what == 1) {
            auto& d = trial.raw_diagonals[rng.uniform_index(trial.raw_diagonals.size())];
            d[rng.uniform_index(d.size())] += step * rng.complex_normal();
        } else {
            auto it = trial.poly.terms.begin();
            std::advance(it, rng.uniform_index(trial.poly.terms.size()));
            it->second += step * rng.complex_normal();
        }
        double trial_ratio;
        try {
            trial_ratio = ratio_of(trial, grid);
        } catch (const std::exception&) {
            continue;  // singular Q or degenerate polynomial; skip the move
        }
        if (trial_ratio > current_ratio) {
            current = std::move(trial);
            current_ratio = trial_ratio;
            since_improvement = 0;
            if (current_ratio > best_ratio) {
                best_ratio = current_ratio;
                best_state = current;
            }
        } else if (++since_improvement > 200) {
            // restart from a fresh random point with a reset step
            current = random_state();
            try {
                current_ratio = ratio_of(current, grid);
            } catch (const std::exception&) {
                current_ratio = 0.0;
            }
            step = 0.3;
            since_improvement = 0;
        } else if (since_improvement % 50 == 0) {
            step = std::max(step * 0.5, 1e-3);
        }
    }

    SearchResult out;
    out.best_ratio = best_ratio;
    out.grid_used = grid;
    out.tuple = contraction_tuple(best_state);
    out.poly = best_state.poly;
    if (best_ratio > 1.0) {
        out.certificate = ViolationCertificate{out.tuple, out.poly, best_ratio, grid};
    }
    return out;
}

BallOracle example31_ball(const ComplexMatrix& q, double tol) {
    if (q.rows() != q.cols()) throw std::invalid_argument("example31_ball: Q must be square");
    const ComplexMatrix q_inv = inverse(q);
    const double cond = operator_norm(q) * operator_norm(q_inv);
    if (cond > 1e8) throw std::invalid_argument("example31_ball: condition number above 1e8");

    BallOracle oracle;
    oracle.k = q.rows();
    oracle.family = FamilyTag::idempotent;
    oracle.tol = tol;
    oracle.membership_fn = [q, q_inv, tol](std::span<const cplx> w) {
        std::vector<cplx> wv(w.begin(), w.end());
        const double nrm = operator_norm(q * diag_matrix(wv) * q_inv);
        return nrm <= 1.0 + tol ? Membership::member : Membership::non_member;
    };
    return oracle;
}

FalsifyOutcome hyperconvexity_falsify(const BallOracle& oracle,
                                      const std::vector<PointCk>& t_points, const Poly& p,
                                      int grid) {
    if (static_cast<int>(t_points.size()) != p.n)
        throw std::invalid_argument("hyperconvexity_falsify: need one point per variable");
    for (const auto& t : t_points) {
        if (static_cast<int>(t.size()) != oracle.k)
            throw std::invalid_argument("hyperconvexity_falsify: point dimension mismatch");
        if (oracle.membership(t) != Membership::member)
            throw std::invalid_argument("hyperconvexity_falsify: T_points must be members");
    }

    const double sup = sup_norm_torus(p, grid);
    if (sup < 1e-12) throw std::invalid_argument("hyperconvexity_falsify: degenerate polynomial");
    const Poly deflated = p.scaled(1.0 / (sup * (1.0 + 1e-6)));

    FalsifyOutcome out;
    out.witness.resize(oracle.k);
    std::vector<cplx> z(p.n);
    for (int i = 0; i < oracle.k; ++i) {
        for (int v = 0; v < p.n; ++v) z[v] = t_points[v][i];
        out.witness[i] = deflated.eval(z);
    }
    out.falsified = oracle.membership(out.witness) == Membership::non_member;
    if (out.falsified) {
        // quantify how far outside the ball the witness sits
        out.witness_norm = [&] {
            std::vector<cplx> probe(out.witness);
            double lo = 1.0, hi = 2.0;
            auto member_at = [&](double t) {
                for (int i = 0; i < oracle.k; ++i) probe[i] = out.witness[i] / t;
                return oracle.membership(probe) == Membership::member;
            };
            int guard = 0;
            while (!member_at(hi) && ++guard < 60) hi *= 2.0;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                (member_at(mid) ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }();
    }
    return out;
}

}  // namespace ckballs
