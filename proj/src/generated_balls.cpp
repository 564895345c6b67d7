#include "ckballs/generated_balls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ckballs/parallel.hpp"
#include "ckballs/rng.hpp"

namespace ckballs {

namespace {

double fermat_objective(cplx t, cplx z1, cplx z2) {
    return std::abs(z1 - t) + std::abs(z2 - t) + std::abs(t);
}

}  // namespace

double example24_norm(cplx z1, cplx z2) {
    if (!std::isfinite(z1.real()) || !std::isfinite(z1.imag()) || !std::isfinite(z2.real()) ||
        !std::isfinite(z2.imag()))
        throw std::invalid_argument("example24_norm: non-finite input");

    const cplx anchors[3] = {z1, z2, cplx{0.0, 0.0}};
    const double scale = std::max({1.0, std::abs(z1), std::abs(z2)});

    // coincident anchors: the doubled point carries weight 2 and wins outright
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(anchors[i] - anchors[j]) <= 1e-14 * scale)
                return fermat_objective(anchors[i], z1, z2);
        }
    }

    // anchor optimality: the sum of unit vectors to the other two has norm <= 1.
    // This also settles every collinear configuration. The 1e-7 band absorbs
    // near-anchor optima, where Weiszfeld crawls; the value error it admits is
    // of second order in the band width.
    for (int i = 0; i < 3; ++i) {
        cplx pull = 0.0;
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            pull += (anchors[i] - anchors[j]) / std::abs(anchors[i] - anchors[j]);
        }
        if (std::abs(pull) <= 1.0 + 1e-7) return fermat_objective(anchors[i], z1, z2);
    }

    // interior Fermat point: Weiszfeld from the centroid, then a damped
    // Newton polish on the smooth objective (Weiszfeld alone crawls when the
    // optimum sits close to an anchor)
    cplx t = (z1 + z2) / 3.0;
    double best = fermat_objective(t, z1, z2);
    for (int iter = 0; iter < 200; ++iter) {
        cplx num = 0.0;
        double den = 0.0;
        bool hit_anchor = false;
        for (const cplx& a : anchors) {
            const double d = std::abs(t - a);
            if (d < 1e-15 * scale) {
                // landing on an anchor that failed the optimality test: nudge off
                t += 1e-9 * scale * cplx{1.0, 0.5};
                hit_anchor = true;
                break;
            }
            num += a / d;
            den += 1.0 / d;
        }
        if (hit_anchor) continue;
        const cplx next = num / den;
        const double step = std::abs(next - t);
        t = next;
        best = std::min(best, fermat_objective(t, z1, z2));
        if (step <= 1e-12 * scale) return best;
    }

    for (int iter = 0; iter < 100; ++iter) {
        double gx = 0.0, gy = 0.0;
        double hxx = 0.0, hxy = 0.0, hyy = 0.0;
        for (const cplx& a : anchors) {
            const cplx r = t - a;
            const double d = std::abs(r);
            if (d < 1e-15 * scale) return std::min(best, fermat_objective(a, z1, z2));
            const double ux = r.real() / d, uy = r.imag() / d;
            gx += ux;
            gy += uy;
            hxx += (1.0 - ux * ux) / d;
            hxy += (-ux * uy) / d;
            hyy += (1.0 - uy * uy) / d;
        }
        const double gnorm = std::hypot(gx, gy);
        if (gnorm <= 1e-12) return std::min(best, fermat_objective(t, z1, z2));
        const double det = hxx * hyy - hxy * hxy;
        if (std::abs(det) < 1e-300) break;
        const double sx = (hyy * gx - hxy * gy) / det;
        const double sy = (hxx * gy - hxy * gx) / det;
        double damping = 1.0;
        cplx trial = t;
        for (int back = 0; back < 40; ++back) {
            trial = t - damping * cplx{sx, sy};
            if (fermat_objective(trial, z1, z2) < fermat_objective(t, z1, z2)) break;
            damping *= 0.5;
        }
        const double moved = std::abs(trial - t);
        t = trial;
        best = std::min(best, fermat_objective(t, z1, z2));
        if (moved <= 1e-14 * scale) return best;
    }
    throw std::runtime_error("example24_norm: no convergence, best value " +
                             std::to_string(best));
}

BallOracle example24_oracle(double tol) {
    BallOracle oracle;
    oracle.k = 2;
    oracle.family = FamilyTag::generated;
    oracle.tol = tol;
    oracle.membership_fn = [tol](std::span<const cplx> w) {
        return example24_norm(w[0], w[1]) <= 1.0 + tol ? Membership::member
                                                       : Membership::non_member;
    };
    return oracle;
}

namespace {

void clamp_to_polydisk(PointCk& p) {
    for (auto& c : p) {
        const double r = std::abs(c);
        if (r > 1.0) c /= r;
    }
}

bool push_dedup(std::vector<PointCk>& cloud, PointCk p) {
    clamp_to_polydisk(p);
    for (const auto& q : cloud) {
        if (max_coordinate_distance(p, q) < 1e-9) return false;
    }
    cloud.push_back(std::move(p));
    return true;
}

void validate_inside_polydisk(const std::vector<PointCk>& D, int* k_out) {
    if (D.empty()) throw std::invalid_argument("sampling: empty generating set");
    const int k = static_cast<int>(D.front().size());
    for (const auto& v : D) {
        if (static_cast<int>(v.size()) != k)
            throw std::invalid_argument("sampling: points of different dimension");
        if (max_coordinate(v) > 1.0 + 1e-9)
            throw std::invalid_argument("sampling: point outside the closed polydisk");
    }
    *k_out = k;
}

}  // namespace

SampleCloud generated_ball_sample(const std::vector<PointCk>& D, int rounds, int per_round,
                                  std::uint64_t seed) {
    int k = 0;
    validate_inside_polydisk(D, &k);

    SampleCloud cloud;
    cloud.k = k;
    cloud.seed = seed;
    cloud.kind = "bball";
    cloud.points.push_back(zero_point(k));
    cloud.points.push_back(unit_point(k));
    for (const auto& v : D) push_dedup(cloud.points, v);

    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        ++cloud.rounds;
        const std::vector<PointCk> snapshot = cloud.points;
        double growth = 0.0;
        auto distance_to_snapshot = [&](const PointCk& p) {
            double best = 1e300;
            for (const auto& q : snapshot) best = std::min(best, max_coordinate_distance(p, q));
            return best;
        };
        for (int c = 0; c < per_round; ++c) {
            PointCk candidate;
            if (rng.uniform() < 0.5) {
                // absolute convex combination of two or three existing points
                const int parts = 2 + static_cast<int>(rng.uniform_index(2));
                std::vector<double> mass(parts);
                double total = 0.0;
                for (auto& m : mass) {
                    m = rng.uniform();
                    total += m;
                }
                const double budget = rng.uniform() < 0.8 ? 1.0 : rng.uniform();
                candidate.assign(k, cplx{});
                for (int s = 0; s < parts; ++s) {
                    const PointCk& base = snapshot[rng.uniform_index(snapshot.size())];
                    const cplx coeff = budget * mass[s] / total * rng.unit_circle();
                    for (int i = 0; i < k; ++i) candidate[i] += coeff * base[i];
                }
            } else {
                const PointCk& a = snapshot[rng.uniform_index(snapshot.size())];
                const PointCk& b = snapshot[rng.uniform_index(snapshot.size())];
                candidate = coordinatewise_product(a, b);
            }
            const double d = distance_to_snapshot(candidate);
            if (push_dedup(cloud.points, std::move(candidate))) growth = std::max(growth, d);
        }
        if (growth < 1e-6) break;
    }
    return cloud;
}

namespace {

struct MultiIndex {
    std::vector<int> exp;
};

void enumerate_monomials(int vars, int max_degree, std::vector<MultiIndex>& out) {
    MultiIndex current;
    current.exp.assign(vars, 0);
    // odometer over exponents with total degree <= max_degree
    while (true) {
        int total = 0;
        for (int e : current.exp) total += e;
        if (total <= max_degree) out.push_back(current);
        int pos = 0;
        while (pos < vars) {
            if (++current.exp[pos] > max_degree) {
                current.exp[pos] = 0;
                ++pos;
            } else {
                break;
            }
        }
        if (pos == vars) break;
    }
}

struct RandomPoly {
    std::vector<MultiIndex> exps;
    std::vector<cplx> coefs;
};

cplx eval_poly_at(const RandomPoly& p, std::span<const cplx> z) {
    cplx acc = 0.0;
    for (std::size_t t = 0; t < p.exps.size(); ++t) {
        cplx term = p.coefs[t];
        for (std::size_t v = 0; v < z.size(); ++v) {
            for (int rep = 0; rep < p.exps[t].exp[v]; ++rep) term *= z[v];
        }
        acc += term;
    }
    return acc;
}

double sup_on_torus_grid(const RandomPoly& p, int vars, int grid) {
    std::vector<cplx> roots(grid);
    for (int t = 0; t < grid; ++t) {
        const double th = 2.0 * M_PI * t / grid;
        roots[t] = {std::cos(th), std::sin(th)};
    }
    std::vector<int> odo(vars, 0);
    std::vector<cplx> z(vars, cplx{1.0, 0.0});
    double best = 0.0;
    while (true) {
        for (int v = 0; v < vars; ++v) z[v] = roots[odo[v]];
        best = std::max(best, std::abs(eval_poly_at(p, z)));
        int pos = 0;
        while (pos < vars && ++odo[pos] == grid) odo[pos++] = 0;
        if (pos == vars) break;
    }
    return best;
}

}  // namespace

SampleCloud hc_hull_sample(const std::vector<PointCk>& D, int max_degree, int n_polys, int grid,
                           std::uint64_t seed) {
    int k = 0;
    validate_inside_polydisk(D, &k);
    const int m = static_cast<int>(D.size());
    if (grid < 2) throw std::invalid_argument("hc_hull_sample: grid too small");
    double grid_points = 1.0;
    for (int v = 0; v < m; ++v) grid_points *= grid;
    if (grid_points > 1e7)
        throw std::invalid_argument("hc_hull_sample: torus grid exceeds 1e7 evaluations");

    SampleCloud cloud;
    cloud.k = k;
    cloud.seed = seed;
    cloud.kind = "hc";
    cloud.points.push_back(zero_point(k));
    cloud.points.push_back(unit_point(k));

    // the point of D seen by coordinate i, as arguments of the polynomials
    auto image_of = [&](auto&& poly_value) {
        PointCk img(k);
        std::vector<cplx> args(m);
        for (int i = 0; i < k; ++i) {
            for (int v = 0; v < m; ++v) args[v] = D[v][i];
            img[i] = poly_value(args);
        }
        return img;
    };

    // monomials have sup exactly 1 on the torus; their images need no deflation
    std::vector<MultiIndex> monomials;
    enumerate_monomials(m, max_degree, monomials);
    for (const auto& mono : monomials) {
        RandomPoly p{{mono}, {cplx{1.0, 0.0}}};
        push_dedup(cloud.points,
                   image_of([&](std::span<const cplx> z) { return eval_poly_at(p, z); }));
    }

    std::vector<PointCk> sampled(n_polys);
    Rng master(seed);
    parallel_for(static_cast<std::size_t>(n_polys), [&](std::size_t task) {
        Rng rng = master.child(task);
        RandomPoly p;
        const int terms = 2 + static_cast<int>(rng.uniform_index(
                                  static_cast<std::uint64_t>(monomials.size())));
        for (int t = 0; t < terms; ++t) {
            p.exps.push_back(monomials[rng.uniform_index(monomials.size())]);
            p.coefs.push_back(rng.complex_normal());
        }
        const double sup = sup_on_torus_grid(p, m, grid);
        if (sup < 1e-14) {
            sampled[task] = zero_point(k);
            return;
        }
        const double deflate = sup * (1.0 + 1e-6);
        for (auto& c : p.coefs) c /= deflate;
        PointCk img(k);
        std::vector<cplx> args(m);
        for (int i = 0; i < k; ++i) {
            for (int v = 0; v < m; ++v) args[v] = D[v][i];
            img[i] = eval_poly_at(p, args);
        }
        sampled[task] = std::move(img);
    });
    for (auto& img : sampled) push_dedup(cloud.points, std::move(img));
    cloud.rounds = 1;
    return cloud;
}

Membership hull_membership(const SampleCloud& cloud, std::span<const cplx> w, double tol) {
    if (cloud.points.empty()) throw std::invalid_argument("hull_membership: empty cloud");
    const int k = cloud.k;
    if (static_cast<int>(w.size()) != k)
        throw std::invalid_argument("hull_membership: point dimension mismatch");

    // iterate x = sum lambda_i c_i, sum |lambda_i| <= 1, minimizing ||x - w||^2
    std::vector<cplx> lambda(cloud.points.size(), cplx{});
    PointCk x(k, cplx{});

    auto inner = [&](std::span<const cplx> a, const PointCk& c) {
        cplx s = 0.0;
        for (int i = 0; i < k; ++i) s += std::conj(a[i]) * c[i];
        return s;
    };

    // exact line search along d with step capped at m; returns (decrease, step)
    auto line_search = [&](const PointCk& d, double m) {
        double dir_sq = 0.0, slope = 0.0;
        for (int i = 0; i < k; ++i) {
            dir_sq += std::norm(d[i]);
            slope += (std::conj(w[i] - x[i]) * d[i]).real();
        }
        if (slope <= 0.0 || dir_sq < 1e-30 || m <= 0.0) return std::pair{0.0, 0.0};
        const double step = std::min(m, slope / dir_sq);
        return std::pair{slope * step - 0.5 * dir_sq * step * step, step};
    };

    PointCk grad(k), d_fw(k), d_pair(k);
    for (int iter = 0; iter < 200; ++iter) {
        for (int i = 0; i < k; ++i) grad[i] = x[i] - w[i];

        // Frank-Wolfe atom: phase-aligned vertex with the most negative slope
        std::size_t fw_index = 0;
        double fw_score = 0.0;
        cplx fw_phase = 1.0;
        for (std::size_t c = 0; c < cloud.points.size(); ++c) {
            const cplx s = inner(grad, cloud.points[c]);
            const double mag = std::abs(s);
            if (mag > fw_score) {
                fw_score = mag;
                fw_index = c;
                fw_phase = -std::conj(s) / mag;
            }
        }
        if (fw_score < 1e-18) break;  // gradient orthogonal to every atom

        // away atom: the active mass with the largest slope is the worst
        // contributor
        double slack = 1.0;
        for (std::size_t c = 0; c < cloud.points.size(); ++c) slack -= std::abs(lambda[c]);
        std::size_t away_index = cloud.points.size();
        double away_slope = -1e300;
        for (std::size_t c = 0; c < cloud.points.size(); ++c) {
            const double m = std::abs(lambda[c]);
            if (m < 1e-15) continue;
            const double slope = (inner(grad, cloud.points[c]) * (lambda[c] / m)).real();
            if (slope > away_slope) {
                away_slope = slope;
                away_index = c;
            }
        }

        // candidate 1: classic step toward the FW atom (shrinks all mass)
        for (int i = 0; i < k; ++i) d_fw[i] = fw_phase * cloud.points[fw_index][i] - x[i];
        const auto [dec_fw, step_fw] = line_search(d_fw, 1.0);

        // candidate 2: pairwise transfer from the away atom (or the origin
        // slack) onto the FW atom
        double dec_pair = 0.0, step_pair = 0.0;
        bool pair_from_origin = true;
        double pair_cap = slack;
        for (int i = 0; i < k; ++i) d_pair[i] = fw_phase * cloud.points[fw_index][i];
        if (away_index < cloud.points.size()) {
            const cplx away_phase = lambda[away_index] / std::abs(lambda[away_index]);
            PointCk d_away(k);
            for (int i = 0; i < k; ++i)
                d_away[i] = d_pair[i] - away_phase * cloud.points[away_index][i];
            const auto [dec_a, step_a] = line_search(d_away, std::abs(lambda[away_index]));
            const auto [dec_o, step_o] = line_search(d_pair, slack);
            if (dec_a > dec_o) {
                dec_pair = dec_a;
                step_pair = step_a;
                pair_from_origin = false;
                d_pair = std::move(d_away);
            } else {
                dec_pair = dec_o;
                step_pair = step_o;
            }
        } else {
            const auto [dec_o, step_o] = line_search(d_pair, pair_cap);
            dec_pair = dec_o;
            step_pair = step_o;
        }

        if (std::max(dec_fw, dec_pair) < 1e-30) break;
        if (dec_pair >= dec_fw) {
            for (int i = 0; i < k; ++i) x[i] += step_pair * d_pair[i];
            lambda[fw_index] += step_pair * fw_phase;
            if (!pair_from_origin) {
                const cplx away_phase = lambda[away_index] / std::abs(lambda[away_index]);
                lambda[away_index] -= step_pair * away_phase;
            }
        } else {
            for (int i = 0; i < k; ++i) x[i] += step_fw * d_fw[i];
            for (auto& l : lambda) l *= 1.0 - step_fw;
            lambda[fw_index] += step_fw * fw_phase;
        }
    }

    return max_coordinate_distance(x, w) <= tol ? Membership::member : Membership::unknown;
}

}  // namespace ckballs
