#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ckballs/matrix.hpp"

namespace ckballs {

/// A candidate member of a ball in C^k; e = (1,...,1) is the algebra unit.
using PointCk = std::vector<cplx>;

enum class Membership { member, non_member, unknown };

enum class FamilyTag { pick, schur_perp, idempotent, generated, hc_sample, custom };

const char* to_string(Membership m);

/// Membership predicate plus metadata; the common currency between modules.
/// Membership functions must be safe for concurrent invocation.
struct BallOracle {
    int k = 0;
    FamilyTag family = FamilyTag::custom;
    double tol = 1e-10;
    std::function<Membership(std::span<const cplx>)> membership_fn;

    Membership membership(std::span<const cplx> w) const;
    Membership membership(const PointCk& w) const { return membership(std::span<const cplx>(w)); }
};

PointCk unit_point(int k);
PointCk zero_point(int k);
double max_coordinate(std::span<const cplx> w);
double max_coordinate_distance(std::span<const cplx> a, std::span<const cplx> b);
PointCk coordinatewise_product(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace ckballs
