#pragma once

#include "psym/hamiltonian.hpp"
#include "psym/index_engine.hpp"
#include "psym/variational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace psym {

/// Evaluates a time expression such as "2pi/3", "2*pi/3", "pi" or "1.5".
double parse_time_expression(const std::string& text);

/// Linear system spec for the index table.
struct SystemSpec {
    std::string label;
    std::string type;  // constant | scaled_identity | rotating_harmonic
    nlohmann::json params;
};

LinearSystem make_system(const SystemSpec& spec, const PBoundary& pb);

/// B(t) = gamma_P(t) C(t) gamma_P(t)^T with C tau-periodic symmetric:
/// C = C0 + C1 cos(2 pi t / tau) + S1 sin(2 pi t / tau). Compatible with P by construction.
MatrixFunction rotating_harmonic(const PBoundary& pb, const Mat& C0, const Mat& C1, const Mat& S1);

/// Random symmetric C0, C1, S1 with entries of size `scale`.
MatrixFunction random_rotating_harmonic(const PBoundary& pb, std::uint64_t seed, double scale = 1.0);

struct SolveSpec {
    int m = 16;
    std::vector<int> continuation;
    int random_starts = 6;
    double K0 = 4.0;
    int max_truncation_doublings = 5;
    int workers = 1;
};

struct Scenario {
    std::string name = "scenario";
    PBoundary pb;
    std::optional<nlohmann::json> model;  // {"family": ..., "params": {...}}
    Regime regime = Regime::Superquadratic;
    std::vector<int> m_schedule;
    bool solve = true;
    SolveSpec solve_spec;
    std::vector<double> lambda_factors{1.0, 2.0, 4.0};
    std::uint64_t seed = 1;
    std::vector<SystemSpec> systems;
    int flow_steps = 100;
};

/// Parses a scenario; ConfigError messages carry the offending field path.
Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::filesystem::path& file);

struct IndexRow {
    std::string label;
    MaslovIndexPair pair;
    std::optional<int> nullity_ode;
    std::optional<int> spectral_flow;
    std::optional<SpectralFlowTrace> flow_trace;
    std::vector<std::string> errors;
};

struct LambdaRecord {
    double factor = 0.0;
    double lambda = 0.0;
    int orbits = 0;
    int certified = 0;
    std::string outcome;
};

struct ReportError {
    std::string stage;
    std::string code;
    std::string message;
    bool structural = true;
};

struct RunReport {
    std::string scenario;
    Regime regime = Regime::Superquadratic;
    PBoundary pb;
    std::vector<IndexRow> indices;
    std::optional<HypothesisReport> hypotheses;
    std::optional<LambdaTauEstimate> lambda_tau;
    std::vector<LambdaRecord> lambda_sweep;
    std::optional<double> truncation_K;
    std::vector<OrbitSolution> orbits;
    std::vector<ReportError> errors;
    std::map<std::string, double> timings;  // seconds, excluded from determinism

    bool structural_failure() const;
    const IndexRow* index(const std::string& label) const;
};

/// Pipeline: indices of h0 / h_inf and listed systems, hypotheses, solve,
/// certify, period analysis. Module errors become report entries.
RunReport run_scenario(const Scenario& sc);

/// Structured report without timings; timings are under "timings" only when requested.
nlohmann::json to_json(const RunReport& report, bool with_timings = true);

/// report.json, indices.csv, orbits/*.csv, plotdata/*.csv.
void emit(const RunReport& report, const std::filesystem::path& dir);

}  // namespace psym
