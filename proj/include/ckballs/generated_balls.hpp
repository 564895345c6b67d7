#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckballs/oracle.hpp"

namespace ckballs {

/// Inner-approximation point cloud of a generated ball or hyperconvex hull.
/// Always contains e and 0; every point stays in the closed polydisk.
struct SampleCloud {
    int k = 0;
    std::vector<PointCk> points;
    std::uint64_t seed = 0;
    int rounds = 0;
    std::string kind;  // "bball" or "hc"
};

/// Norm of z = (z1, z2) in the ball generated by {e1, e2}: the minimum of
/// |z1 - t| + |z2 - t| + |t| over complex t, i.e. the Fermat-point objective
/// for {z1, z2, 0}. Weiszfeld iteration with an anchor optimality test for
/// the degenerate configurations.
double example24_norm(cplx z1, cplx z2);

BallOracle example24_oracle(double tol = 1e-10);

/// Random absolute convex combinations and coordinatewise products of
/// D u {e}, iterated; an inner approximation of the generated ball. Stops
/// early when a round grows the cloud by less than 1e-6 in the
/// max-coordinate metric.
SampleCloud generated_ball_sample(const std::vector<PointCk>& D, int rounds, int per_round,
                                  std::uint64_t seed);

/// Images of D under random polynomials in |D| variables, each normalized by
/// its sup over a torus grid deflated by (1 + 1e-6); an inner approximation
/// of the hyperconvex hull. All monomial images up to max_degree are always
/// included.
SampleCloud hc_hull_sample(const std::vector<PointCk>& D, int max_degree, int n_polys, int grid,
                           std::uint64_t seed);

/// member when w lies within tol (max-coordinate metric) of the absolutely
/// convex hull of the cloud; otherwise unknown, because an inner
/// approximation cannot certify exclusion. Away-step Frank-Wolfe on
/// min ||w - sum lambda_i c_i||_2 with sum |lambda_i| <= 1, 200 iterations.
Membership hull_membership(const SampleCloud& cloud, std::span<const cplx> w, double tol);

}  // namespace ckballs
