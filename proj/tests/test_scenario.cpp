#include <doctest.h>

#include "oracles.hpp"
#include "psym/error.hpp"
#include "psym/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace psym;
namespace fs = std::filesystem;

namespace {

std::string config_error_of(const nlohmann::json& j) {
    try {
        parse_scenario(j);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) return e.what();
        return std::string("other: ") + e.what();
    }
    return "accepted";
}

nlohmann::json base() {
    return nlohmann::json::parse(R"({
        "boundary": {"rotation_angles": ["2pi/3"], "tau": "2pi/3"},
        "model": {"family": "quartic_radial", "params": {"c": 1.0}},
        "regime": "superquadratic"
    })");
}

int count_lines(const fs::path& p) {
    std::ifstream in(p);
    int n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("psym_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("time expressions") {
    CHECK(parse_time_expression("2pi/3") == doctest::Approx(2 * oracle::pi / 3));
    CHECK(parse_time_expression("2*pi/3") == doctest::Approx(2 * oracle::pi / 3));
    CHECK(parse_time_expression("pi") == doctest::Approx(oracle::pi));
    CHECK(parse_time_expression("1.5") == 1.5);
    CHECK(parse_time_expression("(1 + 1) * pi / 4") == doctest::Approx(oracle::pi / 2));
    CHECK(parse_time_expression("-pi/2") == doctest::Approx(-oracle::pi / 2));
    CHECK_THROWS_AS(parse_time_expression("2pi/"), Error);
    CHECK_THROWS_AS(parse_time_expression("tau"), Error);
}

TEST_CASE("config errors name the offending field") {
    auto j = base();
    j["boundary"].erase("tau");
    CHECK(config_error_of(j).find("boundary.tau") != std::string::npos);

    j = base();
    j["model"].erase("family");
    CHECK(config_error_of(j).find("model.family") != std::string::npos);

    j = base();
    j["model"]["family"] = "cubic";
    CHECK(config_error_of(j).find("model.family") != std::string::npos);

    j = base();
    j["regime"] = "subquadratic";
    CHECK(config_error_of(j).find("model.params.h_inf") != std::string::npos);

    j = base();
    j["m_schedule"] = {8, 15};
    CHECK(config_error_of(j).find("m_schedule") != std::string::npos);

    j = base();
    j["solve"] = {{"m", 7}};
    CHECK(config_error_of(j).find("solve.m") != std::string::npos);

    j = base();
    j["boundary"]["rotation_angles"] = {"2pi/"};
    CHECK(config_error_of(j).find("boundary.rotation_angles[0]") != std::string::npos);

    j = base();
    j["boundary"] = {{"matrix", {{2, 0}, {0, 2}}}, {"tau", 1}};
    CHECK(config_error_of(j).find("boundary") != std::string::npos);

    j = base();
    j["systems"] = nlohmann::json::array({{{"label", "s"}, {"type", "bogus"}}});
    CHECK(config_error_of(j).find("systems.s.type") != std::string::npos);

    CHECK(config_error_of(base()) == "accepted");
}

TEST_CASE("index-only scenario agrees with the cross-checks") {
    const auto sc = load_scenario(fs::path(PSYM_CONFIG_DIR) / "index_only.json");
    CHECK_FALSE(sc.solve);
    const auto rep = run_scenario(sc);
    CHECK_FALSE(rep.structural_failure());
    REQUIRE(rep.indices.size() == 3);
    const auto* zero = rep.index("zero");
    REQUIRE(zero);
    CHECK(zero->pair.i_P == 0);
    CHECK(zero->pair.nu_P == 2);
    const auto* one = rep.index("one");
    REQUIRE(one);
    CHECK(one->pair.i_P == 2);
    CHECK(one->pair.nu_P == 0);
    for (const auto& row : rep.indices) {
        CHECK(row.pair.provenance.stabilized);
        REQUIRE(row.nullity_ode);
        CHECK(*row.nullity_ode == row.pair.nu_P);
        REQUIRE(row.spectral_flow);
        CHECK(*row.spectral_flow == row.pair.i_P);
    }
}

TEST_CASE("quartic scenario end to end") {
    const auto sc = load_scenario(fs::path(PSYM_CONFIG_DIR) / "quartic.json");
    const auto rep = run_scenario(sc);
    CHECK_FALSE(rep.structural_failure());
    REQUIRE(rep.orbits.size() >= 2);
    const auto& o = rep.orbits[0];
    CHECK(o.action == doctest::Approx(oracle::kQuarticActionRho1).epsilon(1e-8));
    CHECK(o.certificate.certified);
    REQUIRE(o.period_report);
    CHECK(o.period_report->T_psym == doctest::Approx(oracle::kTpsymRho1).epsilon(1e-6));
    CHECK(o.period_report->branch == DichotomyBranch::KTau);
    REQUIRE(rep.truncation_K);
    CHECK(o.sup_norm < *rep.truncation_K);
    // zero system on R(2 pi / 3): i = 0, nu = 0
    const auto* z = rep.index("zero");
    REQUIRE(z);
    const auto expect = oracle::rotation_index(2 * oracle::pi / 3, oracle::kTauRot, 0.0);
    CHECK(z->pair.i_P == expect.first);
    CHECK(z->pair.nu_P == expect.second);

    // determinism up to timings
    const auto again = run_scenario(sc);
    CHECK(to_json(rep, false).dump() == to_json(again, false).dump());

    const auto dir = scratch("quartic");
    emit(rep, dir);
    std::ifstream in(dir / "report.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j["scenario"] == "quartic");
    CHECK(j["orbits"].size() == rep.orbits.size());
    CHECK(j["orbits"][0]["certificate"]["certified"] == true);
    CHECK(j["orbits"][0]["action"].get<double>() == doctest::Approx(oracle::kQuarticActionRho1).epsilon(1e-8));
    CHECK(j.contains("timings"));

    CHECK(count_lines(dir / "indices.csv") == 1 + static_cast<int>(rep.indices.size()));
    for (std::size_t i = 0; i < rep.orbits.size(); ++i) {
        const auto& orb = rep.orbits[i];
        const int nt = orb.space->quadrature().size();
        CHECK(count_lines(dir / "orbits" / ("orbit_" + std::to_string(i) + ".csv")) == 1 + nt + 1);
    }
    for (const auto& row : rep.indices) {
        if (!row.flow_trace) continue;
        const int rows = static_cast<int>(row.flow_trace->eigenvalues.cols() * row.flow_trace->s.size());
        CHECK(count_lines(dir / "plotdata" / ("flow_" + row.label + ".csv")) == 1 + rows);
        CHECK(row.flow_trace->s.size() >= static_cast<std::size_t>(sc.flow_steps + 1));
    }
    CHECK(fs::exists(dir / "plotdata" / "continuation.csv"));
    fs::remove_all(dir);
}

TEST_CASE("report keeps module errors as entries") {
    auto j = base();
    j["model"]["params"]["h0"] = 0.5;  // quadratic part dominates near 0, no saddle at small c
    j["model"]["params"]["c"] = 1e-12;
    j["solve"] = {{"m", 8}, {"random_starts", 1}, {"max_truncation_doublings", 0}};
    const auto rep = run_scenario(parse_scenario(j));
    CHECK(rep.indices.size() >= 1);
    CHECK(rep.hypotheses.has_value());
    for (const auto& e : rep.errors) CHECK_FALSE(e.message.empty());
}
