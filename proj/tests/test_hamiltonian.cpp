#include <doctest.h>

#include "oracles.hpp"
#include "psym/error.hpp"
#include "psym/hamiltonian.hpp"

#include <random>

using namespace psym;

namespace {

PBoundary rot(double theta, double tau) {
    const double a[] = {theta};
    return boundary_from_angles(a, tau);
}

std::vector<HamiltonianModel> families() {
    return {builtin_family("quartic_radial", 1, {{"c", 1.0}}),
            builtin_family("quartic_radial", 2, {{"c", 0.5}, {"h0", 0.3}}),
            builtin_family("asymptotically_linear", 1, {{"beta", 2.0}, {"gamma", 1.0}}),
            builtin_family("subquadratic_sqrt", 2, nlohmann::json::object())};
}

}  // namespace

TEST_CASE("derivatives match central differences") {
    for (const auto& m : families()) {
        CAPTURE(m.name());
        const auto d = check_derivatives(m, 200, 3.0);
        CHECK(d.grad_error < 1e-6);
        CHECK(d.hess_error < 1e-6);
    }
}

TEST_CASE("truncated quartic: derivatives and smooth joins") {
    const auto m = truncate(builtin_family("quartic_radial", 1, {{"c", 1.0}}), 2.0);
    REQUIRE(m.truncation);
    CHECK(m.truncation->R_K > 0.25);  // H / |z|^4 = 1/4 on the annulus, 1.2 margin
    CHECK(m.truncation->R_K == doctest::Approx(0.3).epsilon(1e-9));
    const auto d = check_derivatives(m, 200, 3.5);
    CHECK(d.grad_error < 1e-6);
    CHECK(d.hess_error < 1e-6);

    // second differences along a ray across |z| = K and K + 1
    const Vec e = Vec::Unit(2, 0);
    auto second = [&](double r, double h) { return (m.H((r + h) * e) - 2 * m.H(r * e) + m.H((r - h) * e)) / (h * h); };
    for (double edge : {2.0, 3.0}) {
        const double left = second(edge - 1e-3, 1e-4), right = second(edge + 1e-3, 1e-4);
        CHECK(std::abs(left - right) <= 1e-2 * std::max(1.0, std::abs(left)));
    }
    // explicit override and equality inside the ball
    const auto o = truncate(builtin_family("quartic_radial", 1, {{"c", 1.0}}), 2.0, 0.4);
    CHECK(o.truncation->R_K == 0.4);
    const Vec z = Vec::Constant(2, 0.9);
    CHECK(o.H(z) == builtin_family("quartic_radial", 1, {{"c", 1.0}}).H(z));
    CHECK((o.H(10.0 * e)) == doctest::Approx(0.4 * 1e4));
}

TEST_CASE("cutoff is monotone and flat at the ends") {
    const Cutoff chi{1.0};
    CHECK(chi.value(1.0) == 1.0);
    CHECK(chi.value(2.0) == 0.0);
    double prev = 1.0;
    for (int i = 1; i < 100; ++i) {
        const double y = 1.0 + i / 100.0;
        CHECK(chi.value(y) <= prev);
        CHECK(chi.d1(y) <= 0.0);
        prev = chi.value(y);
        const double h = 1e-6;
        CHECK((chi.value(y + h) - chi.value(y - h)) / (2 * h) == doctest::Approx(chi.d1(y)).epsilon(1e-5).scale(1e-3));
    }
    CHECK(chi.d1(1.0 + 1e-4) == doctest::Approx(0.0));
}

TEST_CASE("gradient is P-equivariant") {
    const auto pb = rot(2 * oracle::pi / 3, 1.0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    for (const auto& m : families()) {
        if (m.n() != 1) continue;
        for (int i = 0; i < 20; ++i) {
            const Vec x = Vec::NullaryExpr(2, [&] { return nd(rng); });
            CHECK((m.grad(pb.P * x) - pb.P * m.grad(x)).norm() < 1e-9);
        }
    }
}

TEST_CASE("family metadata") {
    const auto al = builtin_family("asymptotically_linear", 1, {{"beta", 2.0}, {"gamma", 1.0}});
    CHECK((*al.h0 - 3.0 * Mat::Identity(2, 2)).norm() < 1e-15);
    CHECK((*al.h_inf - 2.0 * Mat::Identity(2, 2)).norm() < 1e-15);
    // H'(z) - beta z is bounded by gamma
    for (double r : {0.1, 1.0, 100.0, 1e5}) {
        const Vec z = Vec::Constant(2, r);
        CHECK((al.grad(z) - 2.0 * z).norm() < 1.0);
    }
    try {
        builtin_family("cubic", 1, nlohmann::json::object());
        FAIL("unknown family accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownFamily);
    }
    const auto g = fit_growth_floor(builtin_family("quartic_radial", 1, {{"c", 1.0}}), 4.0, 5.0);
    CHECK(g.a1 > 0.0);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    const auto q = builtin_family("quartic_radial", 1, {{"c", 1.0}});
    for (int i = 0; i < 100; ++i) {
        const Vec z = Vec::NullaryExpr(2, [&] { return ud(rng); });
        CHECK(q.H(z) >= g.a1 * std::pow(z.norm(), 4.0) - g.a2);
    }
}

TEST_CASE("hypothesis report for the quartic family") {
    const auto pb = rot(2 * oracle::pi / 3, 2 * oracle::pi / 3);
    const auto m = builtin_family("quartic_radial", 1, {{"c", 1.0}});
    MaslovIndexPair zero;  // index of h0 = 0 for this twist
    IndexContext ctx;
    ctx.h0 = zero;
    // sample the rho = 1 orbit x(t) = R(t) e1
    OrbitSamples orbit;
    for (int q = 0; q <= 64; ++q) {
        const double t = pb.tau * q / 64;
        orbit.t.push_back(t);
        orbit.x.push_back(rotation(t) * Vec::Unit(2, 0));
    }
    const auto rep = check_hypotheses(m, pb, orbit, ctx);
    for (const char* name : {"H0", "H1", "H2", "H3", "H4", "H7", "H9"}) {
        CAPTURE(name);
        REQUIRE(rep.find(name));
        CHECK(rep.find(name)->status == HypothesisStatus::SampledOnly);
    }
    CHECK(rep.find("HX1")->status == HypothesisStatus::Holds);
    CHECK(rep.find("HX2")->status == HypothesisStatus::Holds);
    CHECK(rep.find("HX3")->status == HypothesisStatus::Holds);
    CHECK(rep.find("H5")->status == HypothesisStatus::Indeterminate);
    CHECK(rep.find("H8")->status == HypothesisStatus::Fails);
    CHECK(rep.entries.size() == 15);
}

TEST_CASE("subquadratic family satisfies its sampled growth bounds") {
    const auto pb = rot(2 * oracle::pi / 3, 2 * oracle::pi / 3);
    const auto rep = check_hypotheses(builtin_family("subquadratic_sqrt", 1, nlohmann::json::object()), pb,
                                      std::nullopt, {});
    CHECK(rep.find("H8")->status == HypothesisStatus::SampledOnly);
    CHECK(rep.find("H9")->status == HypothesisStatus::SampledOnly);
    CHECK(rep.find("H5")->status == HypothesisStatus::SampledOnly);
    CHECK(rep.find("HX1")->status == HypothesisStatus::Indeterminate);
}
