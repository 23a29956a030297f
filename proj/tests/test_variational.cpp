#include <doctest.h>

#include "oracles.hpp"
#include "psym/error.hpp"
#include "psym/variational.hpp"

#include <random>

using namespace psym;

namespace {

PBoundary rot(double theta, double tau) {
    const double a[] = {theta};
    return boundary_from_angles(a, tau);
}

PBoundary rot3() { return rot(2 * oracle::pi / 3, oracle::kTauRot); }

SpacePtr space(const PBoundary& pb, int m) { return std::make_shared<const GalerkinSpace>(pb, m); }

HamiltonianModel quartic() { return builtin_family("quartic_radial", 1, {{"c", 1.0}}); }

}  // namespace

TEST_CASE("quadratic part is k/2 sum lambda a^2") {
    const auto sp = space(rot3(), 8);
    const auto rf = assemble(sp, quartic(), ActionKind::F);
    Vec a = Vec::LinSpaced(sp->dim(), -1.0, 1.0);
    double expect = 0.0;
    for (int i = 0; i < sp->dim(); ++i) expect += 1.5 * (*sp)[i].lambda * a[i] * a[i];
    CHECK(rf.quadratic_part(a) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rf.gradient(Vec::Zero(sp->dim())).norm() == 0.0);
}

TEST_CASE("exact quartic orbit value") {
    const auto sp = space(rot3(), 8);
    const auto rf = assemble(sp, quartic(), ActionKind::F);
    // x(t) = R(t) x0 with |x0| = 1 is the first cos-like positive mode scaled by sqrt(tau)
    Vec a = Vec::Zero(sp->dim());
    a[sp->find(0, 0, Phase::Cos)] = std::sqrt(oracle::kTauRot);
    CHECK(rf.value(a) == doctest::Approx(oracle::kQuarticActionRho1).epsilon(1e-12));
    CHECK(rf.gradient(a).norm() < 1e-12);
}

TEST_CASE("quadratic Hamiltonian: Hessian equals k times the form matrix") {
    const auto pb = rot3();
    const auto sp = space(pb, 8);
    const Mat h0 = 1.7 * Mat::Identity(2, 2);
    const auto m = builtin_family("quartic_radial", 1, {{"c", 1e-300}, {"h0", 1.7}});
    const auto rf = assemble(sp, m, ActionKind::F);
    const Mat F = form_matrix(LinearSystem::constant(pb, h0), *sp);
    CHECK((rf.hessian(Vec::Zero(sp->dim())) - pb.k * F).norm() < 1e-10);
}

TEST_CASE("gradient and Hessian-vector products against finite differences") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    const auto sp = space(rot3(), 8);
    const std::vector<ReducedFunctional> fs{
        assemble(sp, truncate(quartic(), 2.0), ActionKind::F),
        assemble(sp, builtin_family("asymptotically_linear", 1, {{"beta", 2.0}, {"gamma", 1.0}}), ActionKind::F),
        assemble(sp, builtin_family("subquadratic_sqrt", 1, nlohmann::json::object()), ActionKind::G, 3.0)};
    for (const auto& rf : fs) {
        for (int s = 0; s < 10; ++s) {
            const Vec a = Vec::NullaryExpr(sp->dim(), [&] { return 0.5 * nd(rng); });
            const Vec v = Vec::NullaryExpr(sp->dim(), [&] { return nd(rng); }).normalized();
            const double h = 1e-5;
            const double dd = (rf.value(a + h * v) - rf.value(a - h * v)) / (2 * h);
            const double gv = rf.gradient(a).dot(v);
            CHECK(std::abs(dd - gv) / (1 + std::abs(gv)) < 1e-6);
            const Vec hv_fd = (rf.gradient(a + h * v) - rf.gradient(a - h * v)) / (2 * h);
            const Vec hv = rf.hessian_vector(a, v);
            CHECK((hv_fd - hv).norm() / (1 + hv.norm()) < 1e-6);
            CHECK((rf.hessian(a) * v - hv).norm() < 1e-10 * (1 + hv.norm()));
        }
    }
}

TEST_CASE("linking split sizes") {
    const auto pb = rot3();
    const GalerkinSpace sp(pb, 4);
    auto s0 = linking_split(sp, Mat::Zero(2, 2));
    CHECK(s0.X.size() == 4);
    CHECK(s0.Y.size() == 4);
    auto s2 = linking_split(sp, 2.0 * Mat::Identity(2, 2));
    CHECK(s2.X.size() == 6);
    const GalerkinSpace si(rot(0.0, 2 * oracle::pi), 4);
    auto sI = linking_split(si, Mat::Zero(2, 2));
    CHECK(sI.X.size() == 6);  // negative block plus the constants
    Mat bad = Mat::Zero(2, 2);
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(linking_split(sp, bad), Error);
}

TEST_CASE("saddle search finds both quartic branches") {
    const auto pb = rot3();
    const auto sp = space(pb, 16);
    const auto rf = assemble(sp, truncate(quartic(), 4.0), ActionKind::F);
    SaddleOptions o;
    o.random_starts = 2;
    const auto res = find_saddle(rf, linking_split(*sp, Mat::Zero(2, 2)), o);
    REQUIRE(res.orbits.size() >= 2);
    CHECK(res.orbits[0].action == doctest::Approx(oracle::kQuarticActionRho1).epsilon(1e-9));
    CHECK(res.orbits[1].action == doctest::Approx(oracle::kQuarticActionRho2).epsilon(1e-9));
    CHECK(res.orbits[0].sup_norm == doctest::Approx(1.0));
    CHECK(res.orbits[1].sup_norm == doctest::Approx(2.0));
    for (const auto& orb : res.orbits) {
        CHECK(orb.grad_norm < 1e-10);
        CHECK(orb.boundary_defect <= 1e-8);
        CHECK_FALSE(orb.is_constant);
    }
    // time shift leaves the action unchanged
    const auto& o0 = res.orbits[0];
    for (double s : {0.1, 0.77, 1.9})
        CHECK(rf.value(shift_coefficients(*sp, o0.coeffs, s)) == doctest::Approx(o0.action).epsilon(1e-8));
}

TEST_CASE("nondegenerate quadratic model has no saddle") {
    const auto sp = space(rot3(), 8);
    const auto m = builtin_family("quartic_radial", 1, {{"c", 1e-300}, {"h0", 0.5}});
    const auto rf = assemble(sp, m, ActionKind::F);
    try {
        find_saddle(rf, linking_split(*sp, *m.h0), SaddleOptions{});
        FAIL("found a saddle");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSaddleFound);
    }
}

TEST_CASE("certificate of the rho = 1 orbit") {
    const auto pb = rot3();
    const auto sp = space(pb, 16);
    const auto rf = assemble(sp, truncate(quartic(), 4.0), ActionKind::F);
    const auto res = find_saddle(rf, linking_split(*sp, Mat::Zero(2, 2)), SaddleOptions{});
    CertifyOptions co;
    const auto c = certify(res.orbits[0], rf, co);
    CHECK(c.certificate.certified);
    REQUIRE(c.index_pair);
    CHECK(c.index_pair->i_P == 1);
    CHECK(c.index_pair->nu_P == 1);
    CHECK(c.index_pair->i_P <= pb.fixed_dim() + 1);
    REQUIRE(c.hypotheses);
    CHECK(c.hypotheses->find("HX1")->status == HypothesisStatus::Holds);
    REQUIRE(c.period_report);
    CHECK(c.period_report->branch == DichotomyBranch::KTau);
    CHECK(c.sup_norm < 4.0);

    // constant input is rejected
    OrbitSolution constant = res.orbits[0];
    constant.coeffs.setZero();
    const auto cc = certify(constant, rf, co);
    CHECK(cc.is_constant);
    CHECK_FALSE(cc.certificate.certified);
}

TEST_CASE("canonical phase fixes the dominant mode") {
    const auto sp = space(rot3(), 8);
    Vec a = Vec::Zero(sp->dim());
    const int c = sp->find(0, 0, Phase::Cos), s = sp->find(0, 0, Phase::Sin);
    a[c] = 0.3;
    a[s] = -0.4;
    a[sp->find(0, 1, Phase::Cos)] = 0.1;
    const Vec b = canonical_phase(*sp, a);
    CHECK(b[c] == doctest::Approx(0.5));
    CHECK(b[s] == 0.0);
    CHECK((mode_energies(*sp, a) - mode_energies(*sp, b)).norm() < 1e-14);
    CHECK((canonical_phase(*sp, shift_coefficients(*sp, a, 0.4)) - b).norm() < 1e-12);
}

TEST_CASE("collocation refinement keeps an exact solution") {
    const auto sp = space(rot3(), 8);
    const auto rf = assemble(sp, quartic(), ActionKind::F);
    Vec a = Vec::Zero(sp->dim());
    a[sp->find(0, 0, Phase::Cos)] = std::sqrt(oracle::kTauRot) * 1.001;
    const Vec r = refine_collocation(rf, a);
    OrbitSolution o;
    o.space = sp;
    o.coeffs = r;
    update_diagnostics(o, rf.model());
    CHECK(o.ode_residual < 1e-10);
}

TEST_CASE("lambda_tau estimate") {
    const auto sp = space(rot3(), 16);
    const auto est = estimate_lambda_tau(*sp, builtin_family("subquadratic_sqrt", 1, nlohmann::json::object()));
    CHECK(est.sigma > 0.0);
    CHECK(est.lambda_tau > 1.0);
    CHECK(est.lambda_tau == doctest::Approx((1.5 + 1.0) / est.sigma + 1.0));
}

TEST_CASE("subquadratic orbit matches the circular closed form") {
    const auto pb = rot3();
    const auto sp = space(pb, 16);
    const double lambda = 6.0;
    const auto rf = assemble(sp, builtin_family("subquadratic_sqrt", 1, nlohmann::json::object()), ActionKind::G, lambda);
    const auto res = find_saddle(rf, linking_split(*sp, Mat::Zero(2, 2)), SaddleOptions{});
    bool found = false;
    for (const auto& o : res.orbits) {
        if (std::abs(o.sup_norm - oracle::subquadratic_radius(lambda, 1.0)) < 1e-8) {
            CHECK(o.action == doctest::Approx(oracle::subquadratic_g(lambda, 1.0, 3, oracle::kTauRot)).epsilon(1e-9));
            found = true;
        }
    }
    CHECK(found);
}
