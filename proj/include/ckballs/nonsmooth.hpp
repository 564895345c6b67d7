#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ckballs {

/// Parameters of the boundary curve u -> (ac - (ac+c)u) / ((ac+a) - (ac+a+c)u)
/// on [0, a/(a+1)].
struct CurveParams {
    double a = 0.0;
    double c = 0.0;

    double right_endpoint() const { return a / (a + 1.0); }
};

/// Piecewise model of the lower envelope of a curve family: strictly
/// decreasing a_n, strictly increasing c_n, breakpoints mu_1 < ... where the
/// active curve switches and the slope jumps.
struct EnvelopeModel {
    std::vector<CurveParams> curves;
    std::vector<double> breakpoints;    // one fewer than curves
    std::vector<double> corner_jumps;   // |left slope - right slope| at each breakpoint
    double mu_limit = 0.0;              // estimated common limit of mu_n and a_n/(a_n+1)
    double jump_min = 0.0;
};

double f_ac(const CurveParams& p, double u);

/// Derivative -ac / ((ac+a) - (ac+a+c) u)^2; matches central finite
/// differences of f_ac to 1e-6 relative.
double f_ac_prime(const CurveParams& p, double u);

/// Intersection of two curves with a2 < a1, c2 > c1: the quadratic from
/// clearing denominators, with a bisection fallback; the root lies in
/// (0, a2/(a2+1)) and the residual |f1 - f2| is at most 1e-12.
double curve_intersection(const CurveParams& p1, const CurveParams& p2);

/// Inductive construction: each step bisects the remaining gap with the new
/// right endpoint and raises c until the breakpoint advances, the gap halves
/// and the slope jump clears jump_min. N is the number of curves; N = 1
/// yields a single curve and no breakpoints.
EnvelopeModel build_sequence(int N, double a0, double c0, double jump_min, std::uint64_t seed);

struct EnvelopeValue {
    double value = 0.0;
    int active_curve = 0;
};

/// Pointwise minimum over the stored curves; a curve contributes 0 at and
/// beyond its right endpoint, matching the membership region y^2 <= f.
EnvelopeValue envelope_eval(const EnvelopeModel& model, double u);

struct CornerInfo {
    double mu = 0.0;
    double left_slope = 0.0;
    double right_slope = 0.0;
    double jump = 0.0;
};

/// Slopes of the adjacent active curves at each breakpoint, cross-checked
/// against one-sided finite differences of envelope_eval.
std::vector<CornerInfo> corner_report(const EnvelopeModel& model);

/// Re-derives every model invariant from the stored numbers alone; throws
/// with a diagnostic on the first violation.
void verify_envelope_invariants(const EnvelopeModel& model);

}  // namespace ckballs
