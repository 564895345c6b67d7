#include <doctest.h>

#include <cmath>

#include "ckballs/generated_balls.hpp"
#include "ckballs/schur_ideal.hpp"
#include "test_support.hpp"

using namespace ckballs;
using testsupport::det_small;
using testsupport::eig3_closed_form;
using testsupport::random_psd;

TEST_SUITE("schur_ideal") {

TEST_CASE("ideal_analyze on the identity") {
    const SchurIdealGens ideal = ideal_analyze({HermitianMatrix::identity(3)});
    CHECK(ideal.nontrivial);
    CHECK(ideal.delta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ideal.k == 3);
}

TEST_CASE("ideal_analyze flags a missing diagonal index") {
    // only the (1,1) entry is populated; index 2 is never hit
    const SchurIdealGens ideal = ideal_analyze({HermitianMatrix{{1.0, 0.0}, {0.0, 0.0}}});
    CHECK_FALSE(ideal.nontrivial);
}

TEST_CASE("ideal_analyze rejects bad input") {
    CHECK_THROWS(ideal_analyze({}));
    CHECK_THROWS(ideal_analyze({HermitianMatrix{{-1.0, 0.0}, {0.0, 1.0}}}));
    CHECK_THROWS(ideal_analyze({HermitianMatrix::identity(2), HermitianMatrix::identity(3)}));
}

TEST_CASE("ideal_analyze delta for {P_{1,1}} matches the closed-form eigensolver") {
    const SchurIdealGens ideal = ideal_analyze({pac_matrix(1.0, 1.0)});
    // D = diag(1,2,2); delta^2 = min eig of D^{-1/2} P D^{-1/2}
    const double s = 1.0 / std::sqrt(2.0);
    const HermitianMatrix normalized{{1.0, s, s}, {s, 1.0, 0.5}, {s, 0.5, 1.0}};
    const auto eigs = eig3_closed_form(normalized);
    CHECK(ideal.delta * ideal.delta == doctest::Approx(eigs[0]).epsilon(1e-10));
    CHECK(ideal.nontrivial);
}

TEST_CASE("perp membership of e and 0") {
    Rng rng(83);
    const SchurIdealGens ideal = ideal_analyze({random_psd(rng, 3, 100.0)});
    CHECK(perp_membership(ideal, unit_point(3)) == Membership::member);
    CHECK(perp_membership(ideal, zero_point(3)) == Membership::member);
}

TEST_CASE("perp membership bound from the closed-form slice") {
    const SchurIdealGens ideal = ideal_analyze({pac_matrix(1.0, 1.0)});
    // x = 0.5 allows y^2 <= 0.4 < 0.49
    CHECK(perp_membership(ideal, PointCk{0.0, 0.5, 0.7}) == Membership::non_member);
    CHECK(perp_membership(ideal, PointCk{0.0, 0.5, 0.6}) == Membership::member);
}

TEST_CASE("perp membership is invariant under positive scaling of generators") {
    Rng rng(89);
    for (int t = 0; t < 50; ++t) {
        const HermitianMatrix g = random_psd(rng, 3, 100.0);
        const double scale = 0.1 + 10.0 * rng.uniform();
        const HermitianMatrix scaled(g.matrix() * cplx{scale, 0.0});
        const SchurIdealGens a = ideal_analyze({g});
        const SchurIdealGens b = ideal_analyze({scaled});
        const PointCk w = testsupport::random_polydisk_point(rng, 3);
        CHECK(perp_membership(a, w) == perp_membership(b, w));
    }
}

TEST_CASE("pac_matrix template and validation") {
    const HermitianMatrix p = pac_matrix(1.0, 1.0);
    CHECK(p(0, 0).real() == 1.0);
    CHECK(p(1, 1).real() == 2.0);
    CHECK(p(2, 2).real() == 2.0);
    CHECK(p(0, 1).real() == 1.0);
    CHECK_THROWS(pac_matrix(0.0, 1.0));
    CHECK_THROWS(pac_matrix(1.0, -2.0));

    // independent minors: 1, a, and det = a*c
    const HermitianMatrix q = pac_matrix(2.0, 3.0);
    CHECK(det_small(q.matrix()).real() == doctest::Approx(6.0));
    CHECK(psd_check(q).is_psd);

    // a -> 0+ limit is singular (rows 1 and 2 coincide)
    const HermitianMatrix nearly = pac_matrix(1e-12, 1.0);
    CHECK(std::abs(det_small(nearly.matrix()).real()) <= 1e-10);
}

TEST_CASE("pac_slice_membership basics") {
    CHECK(pac_slice_membership(1.0, 1.0, 0.0, 0.0) == Membership::member);

    // right endpoint: y must vanish
    const double edge = std::sqrt(0.5);
    CHECK(pac_slice_membership(1.0, 1.0, edge, 0.0) == Membership::member);
    CHECK(pac_slice_membership(1.0, 1.0, edge, 1e-3) == Membership::non_member);

    // x = 0.5 gives the bound y^2 <= 0.4
    CHECK(pac_slice_membership(1.0, 1.0, 0.5, std::sqrt(0.4) - 1e-8) == Membership::member);
    CHECK(pac_slice_membership(1.0, 1.0, 0.5, std::sqrt(0.4) + 1e-6) == Membership::non_member);
}

TEST_CASE("pac slice agrees with the direct Schur-product PSD test") {
    Rng rng(97);
    int tested = 0;
    for (int t = 0; t < 2000; ++t) {
        const double a = 5.0 * rng.uniform() + 1e-6;
        const double c = 5.0 * rng.uniform() + 1e-6;
        const double x = 2.0 * rng.uniform() - 1.0;
        const double y = 2.0 * rng.uniform() - 1.0;

        // exclusion band of width 1e-9 around the slice boundary
        const double u = x * x;
        const double right = a / (a + 1.0);
        if (std::abs(u - right) < 1e-9) continue;
        if (u < right) {
            const double bound = (a * c - (a * c + c) * u) / ((a * c + a) - (a * c + a + c) * u);
            if (std::abs(y * y - bound) < 1e-9) continue;
        }

        const PointCk w{0.0, x, y};
        ComplexMatrix m(3, 3);
        const HermitianMatrix p = pac_matrix(a, c);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = (1.0 - std::conj(w[i]) * w[j]) * p(i, j);
        const bool direct = psd_check(HermitianMatrix(std::move(m))).is_psd;
        CHECK((pac_slice_membership(a, c, x, y) == Membership::member) == direct);
        ++tested;
    }
    CHECK(tested > 1900);
}

TEST_CASE("idempotent oracle from the identity is the polydisk") {
    const BallOracle oracle = idempotent_oracle_from_matrix(HermitianMatrix::identity(3));
    CHECK(oracle.membership(PointCk{0.5, cplx{0.0, -1.0}, 0.9}) == Membership::member);
    CHECK(oracle.membership(PointCk{1.05, 0.0, 0.0}) == Membership::non_member);
    CHECK(oracle.membership(unit_point(3)) == Membership::member);
    CHECK(oracle.membership(zero_point(3)) == Membership::member);
}

TEST_CASE("idempotent oracle from P_{1,1} matches the closed-form slice") {
    const BallOracle oracle = idempotent_oracle_from_matrix(pac_matrix(1.0, 1.0));
    CHECK(oracle.membership(unit_point(3)) == Membership::member);
    Rng rng(101);
    int tested = 0;
    for (int t = 0; t < 1000; ++t) {
        const double x = 2.0 * rng.uniform() - 1.0;
        const double y = 2.0 * rng.uniform() - 1.0;
        const double u = x * x;
        if (std::abs(u - 0.5) < 1e-8) continue;
        if (u < 0.5) {
            const double bound = (1.0 - 2.0 * u) / (2.0 - 3.0 * u);
            if (std::abs(y * y - bound) < 1e-8) continue;
        }
        CHECK(oracle.membership(PointCk{0.0, x, y}) == pac_slice_membership(1.0, 1.0, x, y));
        ++tested;
    }
    CHECK(tested > 900);
}

TEST_CASE("idempotent oracle rejects a singular matrix") {
    CHECK_THROWS(idempotent_oracle_from_matrix(HermitianMatrix{{1.0, 1.0}, {1.0, 1.0}}));
}

TEST_CASE("a hand-built separation certificate verifies") {
    // D = {(0.5, -0.5)}, w = (0.9, 0): P = [[1, q],[q, 1]] with q^2 = 0.3
    // passes the constraint (0.36 > 0.3 > 0.19 scaled) and fails at w
    const double q = std::sqrt(0.3);
    SeparationCertificate cert{HermitianMatrix{{1.0, q}, {q, 1.0}}, 0.08, 0.4};
    const std::vector<PointCk> D{PointCk{0.5, -0.5}};
    const PointCk w{0.9, 0.0};
    CHECK(verify_certificate(cert, D, w));

    SeparationCertificate bad{cert.P, 0.2, 0.4};  // claims more margin than exists
    CHECK_FALSE(verify_certificate(bad, D, w));
}

TEST_CASE("biperp separation finds a certificate outside a Pick body") {
    // rho(0.9, 0) = 0.9 > rho(0.5, -0.5) = 0.8, so (0.9, 0) lies outside
    const std::vector<PointCk> D{PointCk{0.5, -0.5}};
    const PointCk w{0.9, 0.0};
    const auto cert = biperp_separation(D, w, 10000, 7);
    REQUIRE(cert.has_value());
    CHECK(verify_certificate(*cert, D, w));
    CHECK(cert->margin >= 1e-8);
}

TEST_CASE("biperp separation never certifies points of the generated ball") {
    const std::vector<PointCk> D{PointCk{0.5, -0.5}};
    // products and convex combinations of D u {e} stay inside
    const std::vector<PointCk> inside{
        PointCk{0.5, -0.5}, PointCk{0.25, 0.25},  PointCk{0.75, 0.25},
        unit_point(2),      zero_point(2),        PointCk{0.125, -0.125},
    };
    for (const auto& w : inside) {
        CHECK_FALSE(biperp_separation(D, w, 400, 11).has_value());
    }
}

TEST_CASE("certificates are monotone in the defining set") {
    // any certificate for D2 = {v1, v2} also separates from D1 = {v1}
    const std::vector<PointCk> D2{PointCk{0.5, -0.5}, PointCk{0.3, 0.1}};
    const std::vector<PointCk> D1{PointCk{0.5, -0.5}};
    const PointCk w{0.9, 0.0};
    const auto cert = biperp_separation(D2, w, 10000, 13);
    REQUIRE(cert.has_value());
    CHECK(verify_certificate(*cert, D2, w));
    CHECK(verify_certificate(*cert, D1, w));
}

TEST_CASE("biperp membership three-way answers") {
    const std::vector<PointCk> D{PointCk{0.5, -0.5}};
    CHECK(biperp_membership(D, unit_point(2), 500, 17).result == Membership::member);
    CHECK(biperp_membership(D, PointCk{0.5, -0.5}, 500, 17).result == Membership::member);

    const BiperpResult outside = biperp_membership(D, PointCk{0.9, 0.0}, 10000, 17);
    CHECK(outside.result == Membership::non_member);
    REQUIRE(outside.certificate.has_value());
    CHECK(verify_certificate(*outside.certificate, D, PointCk{0.9, 0.0}));
}

TEST_CASE("biperp separation validates its inputs") {
    CHECK_THROWS(biperp_separation({}, PointCk{0.5, 0.5}, 10, 1));
    CHECK_THROWS(biperp_separation({PointCk{1.5, 0.0}}, PointCk{0.5, 0.5}, 10, 1));
    CHECK_THROWS(biperp_separation({PointCk{0.5, 0.0}}, PointCk{1.5, 0.5}, 10, 1));
}

}  // TEST_SUITE
