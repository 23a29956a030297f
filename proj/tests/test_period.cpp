#include <doctest.h>

#include "oracles.hpp"
#include "psym/error.hpp"
#include "psym/period.hpp"

using namespace psym;

namespace {

PBoundary rot(double theta, double tau) {
    const double a[] = {theta};
    return boundary_from_angles(a, tau);
}

ExtendedOrbit circle(double omega, double period, double radius = 1.0) {
    return extend_function([=](double t) -> Vec { return radius * (rotation(omega * t) * Vec::Unit(2, 0)); },
                           period, 768);
}

}  // namespace

TEST_CASE("minimal period from harmonics") {
    CHECK(minimal_period(circle(1.0, 2 * oracle::pi)).T_min == doctest::Approx(oracle::kTminRho1));
    CHECK(minimal_period(circle(4.0, 2 * oracle::pi)).T_min == doctest::Approx(oracle::kTminRho2));
    const auto two = extend_function(
        [](double t) -> Vec {
            Vec x(2);
            x << std::cos(2 * t) + 0.3 * std::cos(4 * t), std::sin(2 * t);
            return x;
        },
        2 * oracle::pi, 512);
    const auto mp = minimal_period(two);
    CHECK(mp.gcd == 2);
    CHECK(mp.T_min == doctest::Approx(oracle::pi));
    CHECK(mp.active_harmonics == std::vector<int>{2, 4});
}

TEST_CASE("constant orbits have no minimal period") {
    const auto c = extend_function([](double) -> Vec { return Vec::Ones(2); }, 1.0, 64);
    try {
        minimal_period(c);
        FAIL("constant accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConstantOrbit);
    }
}

TEST_CASE("both dichotomy branches on the rotation twist") {
    const auto pb = rot(2 * oracle::pi / 3, oracle::kTauRot);
    const auto r1 = minimal_p_symmetric_period(circle(1.0, 2 * oracle::pi), pb);
    CHECK(r1.T_min == doctest::Approx(oracle::kTminRho1));
    CHECK(r1.s_star == doctest::Approx(oracle::kTauRot));
    CHECK(r1.T_psym == doctest::Approx(oracle::kTpsymRho1));
    CHECK(r1.branch == DichotomyBranch::KTau);

    const auto r2 = minimal_p_symmetric_period(circle(4.0, 2 * oracle::pi, 2.0), pb);
    CHECK(r2.T_min == doctest::Approx(oracle::kTminRho2));
    CHECK(r2.s_star == doctest::Approx(oracle::kSstarRho2));
    CHECK(r2.T_psym == doctest::Approx(oracle::kTpsymRho2));
    CHECK(r2.branch == DichotomyBranch::KTauOverKPlusOne);

    // shift test holds at s*, fails on a grid inside (0, s*)
    const auto o = circle(4.0, 2 * oracle::pi, 2.0);
    CHECK(shift_defect(o, pb.P, r2.s_star) < 1e-6);
    for (int i = 1; i < 64; ++i) CHECK(shift_defect(o, pb.P, r2.s_star * i / 64.0) > 1e-6);
    // k s* is a period
    CHECK(shift_defect(o, Mat::Identity(2, 2), pb.k * r2.s_star) < 1e-6);
}

TEST_CASE("identity twist specializes to s* = T_min") {
    const auto pb = rot(0.0, 2 * oracle::pi);
    const auto r = minimal_p_symmetric_period(circle(1.0, 2 * oracle::pi), pb);
    CHECK(r.s_star == doctest::Approx(2 * oracle::pi));
    CHECK(r.T_psym == doctest::Approx(r.T_min));
    CHECK(r.branch == DichotomyBranch::KTau);
    const auto half = minimal_p_symmetric_period(circle(2.0, 2 * oracle::pi), pb);
    CHECK(half.branch == DichotomyBranch::KTauOverKPlusOne);
}

TEST_CASE("extension of Galerkin coefficients wraps around") {
    const auto pb = rot(2 * oracle::pi / 3, oracle::kTauRot);
    const GalerkinSpace sp(pb, 8);
    Vec a = Vec::Zero(sp.dim());
    a[sp.find(0, 0, Phase::Cos)] = 1.0;
    a[sp.find(0, 1, Phase::Sin)] = 0.2;
    const auto ext = extend(sp, a);
    CHECK(ext.period == doctest::Approx(2 * oracle::pi));
    CHECK(ext.wrap_defect < 1e-8);
    for (double t : {0.1, 1.0}) CHECK((ext.eval(t + pb.tau) - pb.P * ext.eval(t)).norm() < 1e-12);
    // a fixed vector of P extends to a constant
    const auto pbI = rot(0.0, 1.0);
    const GalerkinSpace spI(pbI, 4);
    Vec c = Vec::Zero(spI.dim());
    c[spI.find(0, 0, Phase::Cos)] = 1.0;
    const auto e2 = extend(spI, c);
    for (const auto& x : e2.x) CHECK((x - e2.x.front()).norm() < 1e-14);
}
