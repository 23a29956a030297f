#include <doctest.h>

#include "oracles.hpp"
#include "psym/error.hpp"
#include "psym/symplectic.hpp"

using namespace psym;

namespace {

PBoundary rot(double theta, double tau, PiBranch b = PiBranch::Unset) {
    const double a[] = {theta};
    return boundary_from_angles(a, tau, b);
}

}  // namespace

TEST_CASE("order and fixed space of rotation twists") {
    CHECK(rot(2 * oracle::pi / 3, 1.0).k == 3);
    CHECK(rot(2 * oracle::pi / 3, 1.0).fixed_dim() == 0);
    CHECK(rot(0.0, 1.0).k == 1);
    CHECK(rot(0.0, 1.0).fixed_dim() == 2);

    Mat P = Mat::Identity(4, 4);
    P(0, 0) = P(2, 2) = -1.0;
    const auto pb = validate_P(P, 1.0);
    CHECK(pb.k == 2);
    CHECK(pb.fixed_dim() == 2);
    REQUIRE(pb.angles);
    CHECK((*pb.angles)[0].theta == doctest::Approx(0.0));
    CHECK((*pb.angles)[1].theta == doctest::Approx(oracle::pi));
}

TEST_CASE("validation errors") {
    Mat S = Mat::Identity(2, 2);
    S(0, 0) = 2.0;
    CHECK_THROWS_AS(validate_P(S, 1.0), Error);
    try {
        validate_P(S, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotSymplectic);
    }
    try {
        validate_P(rotation(1.0), 1.0);
        FAIL("irrational rotation accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFiniteOrder);
    }
    CHECK_THROWS_AS(validate_P(Mat::Identity(3, 3), 1.0), Error);
}

TEST_CASE("unitary angles follow the (p, q) -> p + iq convention") {
    const auto pb = rot(2 * oracle::pi / 3, 1.0);
    CHECK((*pb.angles)[0].theta == doctest::Approx(2 * oracle::pi / 3));
    const auto neg = rot(-oracle::pi / 2, 1.0);
    CHECK((*neg.angles)[0].theta == doctest::Approx(-oracle::pi / 2));
    // J is multiplication by i
    CHECK((real_form(CMat::Identity(1, 1) * cplx(0, 1)) - standard_J(1)).norm() < 1e-15);
}

TEST_CASE("gamma_P path runs from I to P and stays symplectic") {
    const auto pb = rot(2 * oracle::pi / 3, 0.7);
    CHECK((gamma_P_path(pb, 0.0) - Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK((gamma_P_path(pb, 0.7) - pb.P).norm() < 1e-12);
    for (double t : {0.1, 0.33, 0.6}) {
        CHECK(symplectic_defect(gamma_P_path(pb, t)) < 1e-12);
        const double h = 1e-6;
        const Mat fd = (gamma_P_path(pb, t + h) - gamma_P_path(pb, t - h)) / (2 * h);
        CHECK((fd - gamma_P_velocity(pb, t)).norm() < 1e-8);
    }
}

TEST_CASE("angle pi needs a branch") {
    const auto pb = rot(oracle::pi, 1.0);
    try {
        gamma_P_path(pb, 0.5);
        FAIL("missing branch accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LogarithmBranchAmbiguous);
    }
    const auto plus = rot(oracle::pi, 1.0, PiBranch::Plus);
    const auto minus = rot(oracle::pi, 1.0, PiBranch::Minus);
    CHECK((gamma_P_path(plus, 1.0) - plus.P).norm() < 1e-12);
    CHECK((gamma_P_path(minus, 1.0) - minus.P).norm() < 1e-12);
    CHECK((gamma_P_path(plus, 0.5) - rotation(oracle::pi / 2)).norm() < 1e-12);
    CHECK((gamma_P_path(minus, 0.5) - rotation(-oracle::pi / 2)).norm() < 1e-12);
}

TEST_CASE("conjugation to an orthogonal representative") {
    Mat S(2, 2);
    S << 2.0, 0.0, 0.0, 0.5;  // symplectic in dimension 2 (det 1)
    const Mat R = rotation(2 * oracle::pi / 3);
    const Mat P = S * R * S.inverse();
    CHECK((conjugate_to_orthogonal(P, S) - R).norm() < 1e-12);
    CHECK_THROWS_AS(unitary_identification(validate_P(P, 1.0)), Error);
}
