#include <doctest.h>

#include <cmath>

#include "ckballs/generated_balls.hpp"
#include "ckballs/mobius_pick.hpp"
#include "ckballs/schur_ideal.hpp"
#include "test_support.hpp"

using namespace ckballs;

TEST_SUITE("generated_balls") {

TEST_CASE("example24_norm on the anchor configurations") {
    CHECK(example24_norm(0.0, 0.0) == 0.0);
    CHECK(example24_norm(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(example24_norm(1.0, -1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(example24_norm(cplx{1.0, 0.0}, cplx{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK_THROWS(example24_norm(std::nan(""), 0.0));
}

TEST_CASE("example24_norm equals the basis-vector norms") {
    CHECK(example24_norm(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(example24_norm(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("example24_norm hat section is the modulus") {
    Rng rng(113);
    for (int t = 0; t < 1000; ++t) {
        const cplx w2 = 2.0 * rng.unit_disk();
        CHECK(example24_norm(0.0, w2) == doctest::Approx(std::abs(w2)).epsilon(1e-9));
    }
}

TEST_CASE("example24_norm is submultiplicative") {
    Rng rng(127);
    for (int t = 0; t < 1000; ++t) {
        const cplx w1 = rng.unit_disk(), w2 = rng.unit_disk();
        const cplx z1 = rng.unit_disk(), z2 = rng.unit_disk();
        CHECK(example24_norm(w1 * z1, w2 * z2) <=
              example24_norm(w1, w2) * example24_norm(z1, z2) + 1e-8);
    }
}

TEST_CASE("example24_norm matches a brute-force grid minimization") {
    // independent oracle: coarse grid plus local refinement over the free anchor
    Rng rng(131);
    for (int t = 0; t < 20; ++t) {
        const cplx z1 = 1.5 * rng.unit_disk();
        const cplx z2 = 1.5 * rng.unit_disk();
        auto objective = [&](cplx w) { return std::abs(z1 - w) + std::abs(z2 - w) + std::abs(w); };
        cplx best = 0.0;
        double best_val = objective(best);
        double radius = 2.0;
        cplx center = (z1 + z2) / 3.0;
        for (int level = 0; level < 40; ++level) {
            for (int gx = -8; gx <= 8; ++gx) {
                for (int gy = -8; gy <= 8; ++gy) {
                    const cplx w = center + radius * cplx{gx / 8.0, gy / 8.0};
                    const double v = objective(w);
                    if (v < best_val) {
                        best_val = v;
                        best = w;
                    }
                }
            }
            center = best;
            radius *= 0.5;
        }
        CHECK(example24_norm(z1, z2) == doctest::Approx(best_val).epsilon(1e-8));
    }
}

TEST_CASE("generated ball of {e} stays on the segment of multiples of e") {
    const SampleCloud cloud = generated_ball_sample({unit_point(3)}, 4, 64, 137);
    for (const auto& p : cloud.points) {
        CHECK(max_coordinate(p) <= 1.0 + 1e-9);
        CHECK(std::abs(p[0] - p[1]) <= 1e-12);
        CHECK(std::abs(p[0] - p[2]) <= 1e-12);
    }
}

TEST_CASE("generated ball of {e1, e2} respects the exact norm") {
    const std::vector<PointCk> D{PointCk{1.0, 0.0}, PointCk{0.0, 1.0}};
    const SampleCloud cloud = generated_ball_sample(D, 4, 96, 139);
    CHECK(cloud.points.size() > 10);
    for (const auto& p : cloud.points) CHECK(example24_norm(p[0], p[1]) <= 1.0 + 1e-6);
}

TEST_CASE("non-separating generators keep coordinates equal") {
    const cplx c{0.4, 0.3};
    const SampleCloud cloud = generated_ball_sample({PointCk{c, c}}, 4, 64, 149);
    for (const auto& p : cloud.points) CHECK(std::abs(p[0] - p[1]) <= 1e-12);
}

TEST_CASE("cloud always contains e and 0 inside the polydisk") {
    Rng rng(151);
    const std::vector<PointCk> D{testsupport::random_polydisk_point(rng, 3),
                                 testsupport::random_polydisk_point(rng, 3)};
    const SampleCloud cloud = generated_ball_sample(D, 3, 48, 157);
    bool has_unit = false, has_zero = false;
    for (const auto& p : cloud.points) {
        CHECK(max_coordinate(p) <= 1.0 + 1e-9);
        if (max_coordinate_distance(p, unit_point(3)) < 1e-12) has_unit = true;
        if (max_coordinate(p) < 1e-12) has_zero = true;
    }
    CHECK(has_unit);
    CHECK(has_zero);
}

TEST_CASE("hc hull sample of a one-point set satisfies Pick membership") {
    // coordinates of the single generating point double as Pick nodes
    const std::vector<cplx> alpha{cplx{0.3, 0.1}, cplx{-0.2, 0.4}, cplx{0.1, -0.5}};
    const PickNodes nodes(alpha);
    const SampleCloud cloud = hc_hull_sample({alpha}, 6, 60, 2048, 163);
    CHECK(cloud.points.size() > 20);
    for (const auto& p : cloud.points) {
        CHECK(max_coordinate(p) <= 1.0 + 1e-9);
        // a 2048-point circle grid saturates a degree-6 sup to ~7e-4 relative
        CHECK(pick_membership(nodes, p, 1e-2) == Membership::member);
    }
}

TEST_CASE("hc hull sample contains the generators via coordinate monomials") {
    Rng rng(167);
    const std::vector<PointCk> D{testsupport::random_polydisk_point(rng, 3),
                                 testsupport::random_polydisk_point(rng, 3)};
    const SampleCloud cloud = hc_hull_sample(D, 4, 20, 32, 173);
    for (const auto& v : D) {
        bool found = false;
        for (const auto& p : cloud.points)
            if (max_coordinate_distance(p, v) < 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("hc hull sample rejects an oversized grid") {
    Rng rng(177);
    std::vector<PointCk> D;
    for (int i = 0; i < 4; ++i) D.push_back(testsupport::random_polydisk_point(rng, 2));
    CHECK_THROWS(hc_hull_sample(D, 3, 10, 100, 1));  // 100^4 > 1e7
}

TEST_CASE("hull membership basics") {
    Rng rng(179);
    const std::vector<PointCk> D{testsupport::random_polydisk_point(rng, 2),
                                 testsupport::random_polydisk_point(rng, 2)};
    const SampleCloud cloud = generated_ball_sample(D, 3, 48, 181);

    for (std::size_t i = 0; i < cloud.points.size(); i += 7)
        CHECK(hull_membership(cloud, cloud.points[i], 1e-6) == Membership::member);

    // midpoint of two cloud points
    PointCk mid(2);
    for (int i = 0; i < 2; ++i) mid[i] = 0.5 * (cloud.points[0][i] + cloud.points[1][i]);
    CHECK(hull_membership(cloud, mid, 1e-6) == Membership::member);

    // outside the polydisk: cannot be in any hull of polydisk points
    PointCk two_e{2.0, 2.0};
    CHECK(hull_membership(cloud, two_e, 1e-6) == Membership::unknown);
}

TEST_CASE("hull membership accepts random absolute convex combinations") {
    Rng rng(191);
    const std::vector<PointCk> D{testsupport::random_polydisk_point(rng, 3),
                                 testsupport::random_polydisk_point(rng, 3)};
    const SampleCloud cloud = generated_ball_sample(D, 2, 32, 193);
    for (int t = 0; t < 20; ++t) {
        PointCk combo(3, cplx{});
        double mass = 0.0;
        std::vector<double> weights(3);
        for (auto& w : weights) {
            w = rng.uniform();
            mass += w;
        }
        for (int s = 0; s < 3; ++s) {
            const auto& base = cloud.points[rng.uniform_index(cloud.points.size())];
            const cplx coeff = weights[s] / mass * rng.unit_circle();
            for (int i = 0; i < 3; ++i) combo[i] += coeff * base[i];
        }
        CHECK(hull_membership(cloud, combo, 1e-6) == Membership::member);
    }
}

TEST_CASE("sampled inclusion chain: generated ball inside the hyperconvex hull") {
    // separating pair in C^3 with distinct coordinates
    const std::vector<PointCk> D{PointCk{0.5, cplx{0.1, 0.3}, cplx{-0.4, 0.1}},
                                 PointCk{cplx{0.2, -0.6}, 0.7, cplx{0.0, 0.2}}};
    const SampleCloud ball = generated_ball_sample(D, 2, 24, 199);
    const SampleCloud hull = hc_hull_sample(D, 6, 120, 24, 211);
    for (const auto& p : ball.points) {
        CHECK(hull_membership(hull, p, 1e-3) == Membership::member);
        CHECK_FALSE(biperp_separation(D, p, 300, 223).has_value());
    }
}

}  // TEST_SUITE
