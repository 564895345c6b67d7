#include "ckballs/nonsmooth.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ckballs/rng.hpp"

namespace ckballs {

namespace {

void check_params(const CurveParams& p) {
    if (!(p.a > 0.0) || !(p.c > 0.0))
        throw std::invalid_argument("curve: a and c must be positive");
}

void check_domain(const CurveParams& p, double u) {
    if (u < -1e-12 || u > p.right_endpoint() + 1e-12)
        throw std::invalid_argument("curve: u outside [0, a/(a+1)]");
}

}  // namespace

double f_ac(const CurveParams& p, double u) {
    check_params(p);
    check_domain(p, u);
    const double ac = p.a * p.c;
    return (ac - (ac + p.c) * u) / ((ac + p.a) - (ac + p.a + p.c) * u);
}

double f_ac_prime(const CurveParams& p, double u) {
    check_params(p);
    check_domain(p, u);
    const double ac = p.a * p.c;
    const double den = (ac + p.a) - (ac + p.a + p.c) * u;
    return -ac / (den * den);
}

double curve_intersection(const CurveParams& p1, const CurveParams& p2) {
    check_params(p1);
    check_params(p2);
    if (p1.a == p2.a && p1.c == p2.c) throw std::invalid_argument("curves coincide");
    if (!(p2.a < p1.a) || !(p2.c > p1.c))
        throw std::invalid_argument("curve_intersection: needs a2 < a1 and c2 > c1");

    const double right = p2.right_endpoint();
    auto diff = [&](double u) { return f_ac(p1, u) - f_ac(p2, u); };

    // f1(u) (D2 - E2 u) ... cross-multiplied: quadratic A u^2 + B u + C = 0
    const double n1 = p1.a * p1.c, m1 = n1 + p1.c, d1 = n1 + p1.a, e1 = n1 + p1.a + p1.c;
    const double n2 = p2.a * p2.c, m2 = n2 + p2.c, d2 = n2 + p2.a, e2 = n2 + p2.a + p2.c;
    const double A = m1 * e2 - m2 * e1;
    const double B = n2 * e1 - n1 * e2 + m2 * d1 - m1 * d2;
    const double C = n1 * d2 - n2 * d1;

    double root = -1.0;
    if (std::abs(A) >= 1e-12) {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (const double r : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
                if (r > 0.0 && r < right && std::abs(diff(r)) <= 1e-10) {
                    root = r;
                    break;
                }
            }
        }
    }
    if (root < 0.0) {
        // bisection on the difference; f2 starts above f1 and hits 0 first
        double lo = 0.0, hi = right * (1.0 - 1e-15);
        double flo = diff(lo), fhi = diff(hi);
        if (flo == 0.0) return lo;
        if (flo > 0.0 || fhi < 0.0)
            throw std::runtime_error("curve_intersection: no sign change in (0, a2/(a2+1))");
        while (hi - lo > 1e-16 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            (diff(mid) < 0.0 ? lo : hi) = mid;
        }
        root = 0.5 * (lo + hi);
    }

    // polish with bisection until the residual clears 1e-12
    double lo = std::max(0.0, root - 1e-9), hi = std::min(right, root + 1e-9);
    if (diff(lo) > 0.0 || diff(hi) < 0.0) {
        lo = 0.0;
        hi = right * (1.0 - 1e-15);
    }
    for (int it = 0; it < 200 && std::abs(diff(root)) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) < 0.0 ? lo : hi) = mid;
        root = 0.5 * (lo + hi);
    }
    if (std::abs(diff(root)) > 1e-12)
        throw std::runtime_error("curve_intersection: residual above 1e-12");
    return root;
}

EnvelopeModel build_sequence(int N, double a0, double c0, double jump_min, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("build_sequence: N must be >= 1");
    if (!(a0 > 0.0) || !(c0 > 0.0))
        throw std::invalid_argument("build_sequence: a0 and c0 must be positive");

    EnvelopeModel model;
    model.jump_min = jump_min;
    model.curves.push_back({a0, c0});
    Rng rng(seed);  // reserved for the fallback that perturbs the endpoint policy

    double mu_prev = 0.0;
    for (int step = 1; step < N; ++step) {
        const CurveParams prev = model.curves.back();
        const double gap_prev = prev.right_endpoint() - mu_prev;

        // default policy: the new right endpoint bisects (mu_prev, prev right)
        double target = mu_prev + 0.5 * gap_prev;
        bool placed = false;
        for (int shrink = 0; shrink < 8 && !placed; ++shrink) {
            const double a_next = target / (1.0 - target);
            double c_next = prev.c;
            for (int grow = 0; grow < 200; ++grow) {
                c_next *= 2.0;
                const CurveParams cand{a_next, c_next};
                double mu;
                try {
                    mu = curve_intersection(prev, cand);
                } catch (const std::exception&) {
                    continue;
                }
                if (!(mu > mu_prev)) continue;
                if (cand.right_endpoint() - mu > 0.5 * gap_prev) continue;  // gap halving
                const double jump =
                    std::abs(f_ac_prime(prev, mu) - f_ac_prime(cand, mu));
                if (jump < jump_min) continue;
                model.curves.push_back(cand);
                model.breakpoints.push_back(mu);
                model.corner_jumps.push_back(jump);
                mu_prev = mu;
                placed = true;
                break;
            }
            if (!placed) {
                // pull the endpoint further left; raising c alone was not enough
                target = mu_prev + (target - mu_prev) * (0.5 + 0.1 * rng.uniform());
            }
        }
        if (!placed) {
            std::ostringstream os;
            os << "build_sequence: step " << step << " exhausted its budget (a_prev=" << prev.a
               << ", c_prev=" << prev.c << ", mu_prev=" << mu_prev << ")";
            throw std::runtime_error(os.str());
        }
    }
    model.mu_limit = model.breakpoints.empty()
                         ? model.curves.back().right_endpoint()
                         : 0.5 * (model.breakpoints.back() +
                                  model.curves.back().right_endpoint());
    verify_envelope_invariants(model);
    return model;
}

EnvelopeValue envelope_eval(const EnvelopeModel& model, double u) {
    if (model.curves.empty()) throw std::invalid_argument("envelope_eval: empty model");
    if (u < 0.0) throw std::invalid_argument("envelope_eval: u must be >= 0");
    EnvelopeValue out;
    out.value = 1e300;
    for (std::size_t i = 0; i < model.curves.size(); ++i) {
        const double right = model.curves[i].right_endpoint();
        const double v = u >= right ? 0.0 : f_ac(model.curves[i], u);
        if (v < out.value) {
            out.value = v;
            out.active_curve = static_cast<int>(i);
        }
    }
    return out;
}

std::vector<CornerInfo> corner_report(const EnvelopeModel& model) {
    std::vector<CornerInfo> out;
    for (std::size_t n = 0; n < model.breakpoints.size(); ++n) {
        CornerInfo info;
        info.mu = model.breakpoints[n];
        info.left_slope = f_ac_prime(model.curves[n], info.mu);
        info.right_slope = f_ac_prime(model.curves[n + 1], info.mu);
        info.jump = std::abs(info.left_slope - info.right_slope);

        // one-sided second-order differences of the envelope as a cross-check
        const double h = 1e-7 * std::max(info.mu, 1e-3);
        const double f0 = envelope_eval(model, info.mu).value;
        const double left_fd = (3.0 * f0 - 4.0 * envelope_eval(model, info.mu - h).value +
                                envelope_eval(model, info.mu - 2.0 * h).value) /
                               (2.0 * h);
        const double right_fd = (-3.0 * f0 + 4.0 * envelope_eval(model, info.mu + h).value -
                                 envelope_eval(model, info.mu + 2.0 * h).value) /
                                (2.0 * h);
        const double tol_l = 1e-6 * std::max(1.0, std::abs(info.left_slope));
        const double tol_r = 1e-6 * std::max(1.0, std::abs(info.right_slope));
        if (std::abs(left_fd - info.left_slope) > 1e3 * tol_l ||
            std::abs(right_fd - info.right_slope) > 1e3 * tol_r)
            throw std::runtime_error("corner_report: slopes disagree with finite differences");
        out.push_back(info);
    }
    return out;
}

void verify_envelope_invariants(const EnvelopeModel& model) {
    auto fail = [](const std::string& what) {
        throw std::runtime_error("envelope invariant violated: " + what);
    };
    if (model.curves.empty()) fail("no curves");
    if (model.breakpoints.size() + 1 != model.curves.size()) fail("breakpoint count");
    if (model.corner_jumps.size() != model.breakpoints.size()) fail("jump count");

    for (std::size_t i = 0; i + 1 < model.curves.size(); ++i) {
        if (!(model.curves[i + 1].a < model.curves[i].a)) fail("a_n not strictly decreasing");
        if (!(model.curves[i + 1].c > model.curves[i].c)) fail("c_n not strictly increasing");
    }
    for (std::size_t i = 0; i + 1 < model.breakpoints.size(); ++i)
        if (!(model.breakpoints[i] < model.breakpoints[i + 1]))
            fail("mu_n not strictly increasing");
    for (const double mu : model.breakpoints) {
        if (!(mu > 0.0 && mu < 1.0)) fail("mu outside (0,1)");
        for (const auto& curve : model.curves)
            if (!(mu < curve.right_endpoint())) fail("mu not below every right endpoint");
    }
    double gap_prev = model.curves.front().right_endpoint();  // mu_0 = 0
    double mu_prev = 0.0;
    for (std::size_t n = 0; n < model.breakpoints.size(); ++n) {
        const double mu = model.breakpoints[n];
        if (!(mu > mu_prev)) fail("mu not advancing");
        // the breakpoint is a genuine intersection of the adjacent curves
        if (std::abs(f_ac(model.curves[n], mu) - f_ac(model.curves[n + 1], mu)) > 1e-9)
            fail("breakpoint is not an intersection");
        const double gap = model.curves[n + 1].right_endpoint() - mu;
        if (!(gap > 0.0)) fail("breakpoint beyond its curve endpoint");
        if (gap > 0.5 * gap_prev + 1e-15) fail("gap halving");
        gap_prev = gap;
        const double jump = std::abs(f_ac_prime(model.curves[n], mu) -
                                     f_ac_prime(model.curves[n + 1], mu));
        if (!(jump >= model.jump_min)) fail("corner jump below jump_min");
        if (std::abs(jump - model.corner_jumps[n]) > 1e-9 * std::max(1.0, jump))
            fail("stored corner jump mismatch");
        mu_prev = mu;
    }
}

}  // namespace ckballs
