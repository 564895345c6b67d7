#include "ckballs/mobius_pick.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ckballs/rng.hpp"

namespace ckballs {

const char* to_string(Membership m) {
    switch (m) {
        case Membership::member: return "member";
        case Membership::non_member: return "non_member";
        case Membership::unknown: return "unknown";
    }
    return "unknown";
}

Membership BallOracle::membership(std::span<const cplx> w) const {
    if (static_cast<int>(w.size()) != k)
        throw std::invalid_argument("oracle: point dimension mismatch");
    return membership_fn(w);
}

PointCk unit_point(int k) { return PointCk(k, cplx{1.0, 0.0}); }
PointCk zero_point(int k) { return PointCk(k, cplx{0.0, 0.0}); }

double max_coordinate(std::span<const cplx> w) {
    double m = 0.0;
    for (const auto& c : w) m = std::max(m, std::abs(c));
    return m;
}

double max_coordinate_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("points of different dimension");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

PointCk coordinatewise_product(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("points of different dimension");
    PointCk out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

cplx mobius(cplx a, cplx z) {
    const cplx denom = 1.0 - std::conj(a) * z;
    if (std::abs(denom) < 1e-14) throw std::runtime_error("mobius: pole at z = 1/conj(a)");
    return (z - a) / denom;
}

PickNodes::PickNodes(std::vector<cplx> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) throw std::invalid_argument("pick nodes: empty");
    int on_circle = 0, in_disk = 0;
    for (const auto& a : alpha_) {
        const double r = std::abs(a);
        if (std::abs(r - 1.0) <= 1e-12)
            ++on_circle;
        else if (r < 1.0)
            ++in_disk;
        else
            throw std::invalid_argument("pick nodes: node outside the closed disk");
    }
    if (on_circle != 0 && in_disk != 0)
        throw std::invalid_argument("pick nodes: mixed circle/disk configuration");
    circle_mode_ = on_circle == static_cast<int>(alpha_.size());
    for (std::size_t i = 0; i < alpha_.size(); ++i)
        for (std::size_t j = i + 1; j < alpha_.size(); ++j)
            if (std::abs(alpha_[i] - alpha_[j]) < 1e-12)
                throw std::invalid_argument("pick nodes: nodes must be distinct");
}

HermitianMatrix pick_matrix(const PickNodes& nodes, std::span<const cplx> w) {
    if (nodes.circle_mode())
        throw std::invalid_argument("pick_matrix: undefined for circle-mode nodes");
    const int k = nodes.k();
    if (static_cast<int>(w.size()) != k)
        throw std::invalid_argument("pick_matrix: point dimension mismatch");
    const auto& a = nodes.alpha();
    ComplexMatrix m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = (1.0 - std::conj(w[i]) * w[j]) / (1.0 - std::conj(a[i]) * a[j]);
    return HermitianMatrix(std::move(m));
}

Membership pick_membership(const PickNodes& nodes, std::span<const cplx> w, double tol) {
    if (nodes.circle_mode())
        return max_coordinate(w) <= 1.0 + tol ? Membership::member : Membership::non_member;
    return psd_check(pick_matrix(nodes, w), tol).is_psd ? Membership::member
                                                        : Membership::non_member;
}

BallOracle pick_oracle(PickNodes nodes, double tol) {
    BallOracle oracle;
    oracle.k = nodes.k();
    oracle.family = FamilyTag::pick;
    oracle.tol = tol;
    oracle.membership_fn = [nodes = std::move(nodes), tol](std::span<const cplx> w) {
        return pick_membership(nodes, w, tol);
    };
    return oracle;
}

double ball_norm(const BallOracle& oracle, std::span<const cplx> w) {
    const double peak = max_coordinate(w);
    if (peak == 0.0) return 0.0;

    std::vector<cplx> scaled(w.size());
    auto member_at = [&](double t) {
        for (std::size_t i = 0; i < w.size(); ++i) scaled[i] = w[i] / t;
        const Membership m = oracle.membership(scaled);
        if (m == Membership::unknown) throw std::runtime_error("ball_norm: oracle incomplete");
        return m == Membership::member;
    };

    // the ball sits inside the polydisk, so ||w|| >= max|w_i|
    double lo = peak * (1.0 - 1e-9);
    double hi = 2.0 * oracle.k * peak;
    int doublings = 0;
    while (!member_at(hi)) {
        hi *= 2.0;
        if (++doublings > 60) throw std::runtime_error("ball_norm: no finite upper bracket");
    }
    if (member_at(lo)) return lo;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (member_at(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

BallOracle hat_section(const BallOracle& oracle) {
    if (oracle.k < 2) throw std::invalid_argument("hat_section: requires k >= 2");
    BallOracle out;
    out.k = oracle.k - 1;
    out.family = oracle.family;
    out.tol = oracle.tol;
    out.membership_fn = [parent = oracle](std::span<const cplx> v) {
        PointCk padded(parent.k);
        padded[0] = 0.0;
        std::copy(v.begin(), v.end(), padded.begin() + 1);
        return parent.membership(padded);
    };
    return out;
}

BallOracle tilde_lift(const BallOracle& section) {
    BallOracle out;
    out.k = section.k + 1;
    out.family = section.family;
    out.tol = section.tol;
    out.membership_fn = [section](std::span<const cplx> w) {
        const cplx a = w[0];
        if (std::abs(a) > 1.0 + section.tol) return Membership::non_member;
        PointCk mapped(section.k);
        for (int i = 0; i < section.k; ++i) mapped[i] = mobius(a, w[i + 1]);
        return section.membership(mapped);
    };
    return out;
}

bool schwarz_pick_dominates(std::span<const cplx> v, std::span<const cplx> w, double tol) {
    if (v.size() != w.size())
        throw std::invalid_argument("schwarz_pick_dominates: dimension mismatch");
    const int n = static_cast<int>(v.size());
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (std::abs(v[i]) >= 1.0)
            throw std::invalid_argument("schwarz_pick_dominates: |v_i| must be < 1");
        for (int j = 0; j < n; ++j)
            m(i, j) = (std::conj(v[i]) * v[j] - std::conj(w[i]) * w[j]) /
                      (1.0 - std::conj(v[i]) * v[j]);
    }
    return psd_check(HermitianMatrix(std::move(m)), tol).is_psd;
}

namespace {

std::string describe_point(const PointCk& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << p[i].real() << (p[i].imag() < 0 ? "-" : "+") << std::abs(p[i].imag()) << "i";
    }
    os << ")";
    return os.str();
}

}  // namespace

VkCheckReport vk_necessary_check(const BallOracle& ball, const std::vector<PointCk>& samples,
                                 int product_trials, int dominance_trials, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("vk_necessary_check: empty sample set");
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != ball.k)
            throw std::invalid_argument("vk_necessary_check: sample dimension mismatch");
        if (max_coordinate(s) > 1.0 + 1e-9)
            throw std::invalid_argument("vk_necessary_check: sample outside closed polydisk");
    }

    VkCheckReport report;
    Rng rng(seed);
    auto pick_sample = [&]() -> const PointCk& {
        return samples[rng.uniform_index(samples.size())];
    };

    // condition 2: absolute convex combinations of members stay members
    for (int t = 0; t < product_trials && report.absconv_closed; ++t) {
        const PointCk& u = pick_sample();
        const PointCk& v = pick_sample();
        const double split = rng.uniform();
        const cplx lu = split * rng.unit_circle();
        const cplx lv = (1.0 - split) * rng.unit_circle();
        PointCk combo(ball.k);
        for (int i = 0; i < ball.k; ++i) combo[i] = lu * u[i] + lv * v[i];
        if (ball.membership(combo) != Membership::member) {
            report.absconv_closed = false;
            report.counterexample = "absolute convex combination leaves the set: " +
                                    describe_point(combo);
            report.witness = {u, v, combo};
        }
    }

    // condition 3: coordinatewise products of members stay members
    for (int t = 0; t < product_trials && report.product_closed; ++t) {
        const PointCk& u = pick_sample();
        const PointCk& v = pick_sample();
        const PointCk prod = coordinatewise_product(u, v);
        if (ball.membership(prod) != Membership::member) {
            report.product_closed = false;
            report.counterexample = "coordinatewise product leaves the set: " +
                                    describe_point(prod);
            report.witness = {u, v, prod};
        }
    }

    // condition 4 via the matrix reformulation: if v is a member and w is
    // Schwarz-Pick dominated by v, then w must be a member. Candidates come
    // from maps z -> e^{i theta} z phi_b(z)^m, which dominate automatically,
    // plus rejection-sampled random points.
    for (int t = 0; t < dominance_trials && report.dominance_closed; ++t) {
        const PointCk& v = pick_sample();
        if (max_coordinate(v) >= 1.0 - 1e-9) continue;  // dominance matrix needs |v_i| < 1
        PointCk w(ball.k);
        const int mode = static_cast<int>(rng.uniform_index(3));
        if (mode == 0) {
            w = coordinatewise_product(v, v);
        } else if (mode == 1) {
            const cplx b = 0.95 * rng.unit_disk();
            const cplx phase = rng.unit_circle();
            for (int i = 0; i < ball.k; ++i) w[i] = phase * v[i] * mobius(b, v[i]);
        } else {
            for (int i = 0; i < ball.k; ++i) w[i] = rng.unit_disk();
        }
        if (!schwarz_pick_dominates(v, w, ball.tol)) continue;
        if (ball.membership(w) != Membership::member) {
            report.dominance_closed = false;
            report.counterexample = "Schwarz-Pick dominated point leaves the set: " +
                                    describe_point(w);
            report.witness = {v, w};
        }
    }

    report.pass = report.absconv_closed && report.product_closed && report.dominance_closed;
    return report;
}

}  // namespace ckballs
