#include "psym/error.hpp"
#include "psym/scenario.hpp"

#include <CLI11.hpp>

#include <future>
#include <iomanip>
#include <iostream>

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::vector<int> m;
};

psym::Scenario prepare(const std::string& file, const Overrides& ov) {
    psym::Scenario sc = psym::load_scenario(file);
    if (ov.seed) sc.seed = *ov.seed;
    if (!ov.m.empty()) {
        for (int m : ov.m)
            if (m <= 0 || m % 2) throw psym::Error(psym::ErrorCode::ConfigError, "--m: entries must be positive and even");
        sc.m_schedule = ov.m;
        sc.solve_spec.m = ov.m.front();
        sc.solve_spec.continuation.assign(ov.m.begin() + 1, ov.m.end());
    }
    return sc;
}

void summarize(const psym::RunReport& r, std::ostream& os) {
    os << "scenario " << r.scenario << " (" << psym::to_string(r.regime) << "), k = " << r.pb.k
       << ", dim ker(P - I) = " << r.pb.fixed_dim() << "\n";
    for (const auto& row : r.indices) {
        os << "  index " << std::setw(12) << std::left << row.label << " i_P = " << row.pair.i_P
           << "  nu_P = " << row.pair.nu_P;
        if (row.nullity_ode) os << "  ode nullity = " << *row.nullity_ode;
        if (row.spectral_flow) os << "  flow = " << *row.spectral_flow;
        os << "\n";
    }
    if (r.lambda_tau) os << "  lambda_tau ~ " << r.lambda_tau->lambda_tau << " (sigma = " << r.lambda_tau->sigma << ")\n";
    for (std::size_t i = 0; i < r.orbits.size(); ++i) {
        const auto& o = r.orbits[i];
        os << "  orbit " << i << ": action = " << std::setprecision(12) << o.action << std::setprecision(6)
           << ", residual = " << o.ode_residual;
        if (o.index_pair) os << ", (i_P, nu_P) = (" << o.index_pair->i_P << ", " << o.index_pair->nu_P << ")";
        if (o.period_report)
            os << ", T_min = " << o.period_report->T_min << ", T_psym = " << o.period_report->T_psym << " ["
               << psym::to_string(o.period_report->branch) << "]";
        os << (o.certificate.certified ? ", certified" : ", not certified") << "\n";
    }
    for (const auto& e : r.errors)
        os << "  " << (e.structural ? "error" : "note") << " [" << e.stage << "] " << e.message << "\n";
}

int execute(const std::vector<std::string>& files, const Overrides& ov, const std::string& out, int jobs,
            std::optional<bool> solve) {
    std::vector<psym::Scenario> scenarios;
    for (const auto& f : files) {
        scenarios.push_back(prepare(f, ov));
        if (solve) {
            if (*solve && !scenarios.back().model)
                throw psym::Error(psym::ErrorCode::ConfigError, f + ": model: solve needs a model");
            scenarios.back().solve = *solve;
        }
    }
    std::vector<psym::RunReport> reports(scenarios.size());
    for (std::size_t b = 0; b < scenarios.size(); b += jobs) {
        std::vector<std::future<psym::RunReport>> fut;
        for (std::size_t i = b; i < std::min(scenarios.size(), b + jobs); ++i)
            fut.push_back(std::async(std::launch::async, [&, i] { return psym::run_scenario(scenarios[i]); }));
        for (std::size_t i = 0; i < fut.size(); ++i) reports[b + i] = fut[i].get();
    }
    bool failed = false;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const std::filesystem::path dir =
            reports.size() == 1 ? std::filesystem::path(out) : std::filesystem::path(out) / reports[i].scenario;
        psym::emit(reports[i], dir);
        summarize(reports[i], std::cout);
        std::cout << "  artifacts: " << dir.string() << "\n";
        failed = failed || reports[i].structural_failure();
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maslov P-index pairs and P-symmetric periodic orbits"};
    app.require_subcommand(1);
    Overrides ov;
    std::string out = "out";
    int jobs = 1;
    std::uint64_t seed = 0;
    app.add_option("--out", out, "artifact directory");
    auto* seed_opt = app.add_option("--seed", seed, "multi-start seed");
    app.add_option("--m", ov.m, "m schedule (first entry also the solve truncation)")->delimiter(',');
    app.add_option("--jobs", jobs, "scenarios run in parallel")->check(CLI::PositiveNumber);

    std::vector<std::string> files;
    app.fallthrough();  // global options may follow the subcommand
    auto* index = app.add_subcommand("index", "index table and cross-checks only");
    index->add_option("config", files, "scenario JSON")->required()->check(CLI::ExistingFile);
    auto* solve = app.add_subcommand("solve", "solve, certify and classify orbits");
    solve->add_option("config", files, "scenario JSON")->required()->check(CLI::ExistingFile);
    auto* run = app.add_subcommand("run", "full pipeline as configured");
    run->add_option("config", files, "scenario JSON files")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) ov.seed = seed;

    try {
        std::optional<bool> mode;
        if (index->parsed()) mode = false;
        if (solve->parsed()) mode = true;
        return execute(files, ov, out, jobs, mode);
    } catch (const psym::Error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == psym::ErrorCode::ConfigError ? 2 : 1;
    }
}
