#include "psym/scenario.hpp"

#include "psym/error.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace psym {

// ---------------------------------------------------------------------------
// time expressions

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    double parse() {
        const double v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::ConfigError, "time expression '" + s_ + "': " + why);
    }
    double expr() {
        double v = term();
        while (true) {
            if (peek('+')) { ++pos_; v += term(); }
            else if (peek('-')) { ++pos_; v -= term(); }
            else return v;
        }
    }
    double term() {
        double v = factor();
        while (true) {
            skip();
            if (pos_ >= s_.size()) return v;
            const char c = s_[pos_];
            if (c == '*') { ++pos_; v *= factor(); }
            else if (c == '/') { ++pos_; v /= factor(); }
            else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.') v *= factor();  // 2pi
            else return v;
        }
    }
    double factor() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '-') { ++pos_; return -factor(); }
        if (c == '+') { ++pos_; return factor(); }
        if (c == '(') {
            ++pos_;
            const double v = expr();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return v;
        }
        if (s_.compare(pos_, 2, "pi") == 0) {
            pos_ += 2;
            return std::numbers::pi;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return v;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

[[noreturn]] void config_error(const std::string& path, const std::string& why) {
    throw Error(ErrorCode::ConfigError, path + ": " + why);
}

double number_at(const nlohmann::json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            return parse_time_expression(j.get<std::string>());
        } catch (const Error& e) {
            config_error(path, e.what());
        }
    }
    config_error(path, "expected a number or expression string");
}

Mat matrix_at(const nlohmann::json& j, int dim, const std::string& path) {
    if (j.is_number()) return j.get<double>() * Mat::Identity(dim, dim);
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        config_error(path, "expected a scalar or a " + std::to_string(dim) + " x " + std::to_string(dim) + " matrix");
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
            config_error(path + "[" + std::to_string(r) + "]", "row length mismatch");
        for (int c = 0; c < dim; ++c)
            m(r, c) = number_at(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

std::vector<int> int_list(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array()) config_error(path, "expected a list of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) config_error(path + "[" + std::to_string(i) + "]", "expected an integer");
        out.push_back(j[i].get<int>());
    }
    return out;
}

PBoundary parse_boundary(const nlohmann::json& b) {
    if (!b.is_object()) config_error("boundary", "missing or not an object");
    if (!b.contains("tau")) config_error("boundary.tau", "missing");
    const double tau = number_at(b["tau"], "boundary.tau");
    if (!(tau > 0.0)) config_error("boundary.tau", "must be positive");
    PiBranch branch = PiBranch::Unset;
    if (b.contains("pi_branch")) {
        const auto s = b["pi_branch"].get<std::string>();
        if (s == "plus") branch = PiBranch::Plus;
        else if (s == "minus") branch = PiBranch::Minus;
        else config_error("boundary.pi_branch", "expected 'plus' or 'minus'");
    }
    const int k_max = b.value("k_max", 64);
    try {
        if (b.contains("rotation_angles")) {
            const auto& a = b["rotation_angles"];
            if (!a.is_array() || a.empty()) config_error("boundary.rotation_angles", "expected a non-empty list");
            std::vector<double> angles;
            for (std::size_t i = 0; i < a.size(); ++i)
                angles.push_back(number_at(a[i], "boundary.rotation_angles[" + std::to_string(i) + "]"));
            PBoundary pb = boundary_from_angles(angles, tau, branch);
            if (pb.k > k_max) throw Error(ErrorCode::NotFiniteOrder, "order exceeds k_max");
            return pb;
        }
        if (b.contains("matrix")) {
            const auto& m = b["matrix"];
            if (!m.is_array() || m.empty() || m.size() % 2) config_error("boundary.matrix", "expected a 2n x 2n matrix");
            return validate_P(matrix_at(m, static_cast<int>(m.size()), "boundary.matrix"), tau, k_max, branch);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        config_error("boundary", e.what());
    }
    config_error("boundary", "needs 'rotation_angles' or 'matrix'");
}

}  // namespace

double parse_time_expression(const std::string& text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// systems

MatrixFunction rotating_harmonic(const PBoundary& pb, const Mat& C0, const Mat& C1, const Mat& S1) {
    const double tau = pb.tau;
    return [pb, tau, C0, C1, S1](double t) -> Mat {
        const Mat g = gamma_P_path(pb, t);
        const double w = 2.0 * std::numbers::pi * t / tau;
        const Mat C = C0 + std::cos(w) * C1 + std::sin(w) * S1;
        return symmetrize(g * C * g.transpose());
    };
}

MatrixFunction random_rotating_harmonic(const PBoundary& pb, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, scale);
    const int dim = pb.dim();
    auto sym = [&] {
        Mat m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = nd(rng);
        return symmetrize(m);
    };
    const Mat C0 = sym(), C1 = sym(), S1 = sym();
    return rotating_harmonic(pb, C0, C1, S1);
}

LinearSystem make_system(const SystemSpec& spec, const PBoundary& pb) {
    const std::string path = "systems." + spec.label;
    const int dim = pb.dim();
    if (spec.type == "scaled_identity") {
        if (!spec.params.contains("b")) config_error(path + ".b", "missing");
        return LinearSystem::constant(pb, number_at(spec.params["b"], path + ".b") * Mat::Identity(dim, dim), spec.label);
    }
    if (spec.type == "constant") {
        if (!spec.params.contains("B")) config_error(path + ".B", "missing");
        return LinearSystem::constant(pb, matrix_at(spec.params["B"], dim, path + ".B"), spec.label);
    }
    if (spec.type == "rotating_harmonic") {
        if (spec.params.contains("random_seed"))
            return LinearSystem(pb,
                                random_rotating_harmonic(pb, spec.params["random_seed"].get<std::uint64_t>(),
                                                         spec.params.value("scale", 1.0)),
                                spec.label);
        const Mat zero = Mat::Zero(dim, dim);
        auto get = [&](const char* key) {
            return spec.params.contains(key) ? matrix_at(spec.params[key], dim, path + "." + key) : zero;
        };
        return LinearSystem(pb, rotating_harmonic(pb, get("C0"), get("C1"), get("S1")), spec.label);
    }
    config_error(path + ".type", "unknown system type '" + spec.type + "'");
}

// ---------------------------------------------------------------------------
// scenario parsing

Scenario parse_scenario(const nlohmann::json& c) {
    if (!c.is_object()) config_error("<root>", "expected a JSON object");
    Scenario sc;
    sc.name = c.value("name", std::string("scenario"));
    sc.pb = parse_boundary(c.contains("boundary") ? c["boundary"] : nlohmann::json());
    if (c.contains("seed")) sc.seed = c["seed"].get<std::uint64_t>();
    if (c.contains("regime")) {
        try {
            sc.regime = regime_from_string(c["regime"].get<std::string>());
        } catch (const Error& e) {
            config_error("regime", e.what());
        }
    }
    sc.m_schedule = c.contains("m_schedule") ? int_list(c["m_schedule"], "m_schedule") : default_m_schedule(sc.pb);
    for (int m : sc.m_schedule)
        if (m <= 0 || m % 2) config_error("m_schedule", "entries must be positive and even");
    sc.flow_steps = c.value("flow_steps", 100);

    if (c.contains("model")) {
        const auto& m = c["model"];
        if (!m.is_object()) config_error("model", "expected an object");
        if (!m.contains("family")) config_error("model.family", "missing");
        if (!m["family"].is_string()) config_error("model.family", "expected a string");
        const nlohmann::json params = m.value("params", nlohmann::json::object());
        HamiltonianModel probe = [&] {
            try {
                return builtin_family(m["family"].get<std::string>(), sc.pb.n, params);
            } catch (const Error& e) {
                config_error(e.code() == ErrorCode::UnknownFamily ? "model.family" : "model.params", e.what());
            }
        }();
        const bool needs_inf = sc.regime == Regime::AsymptoticallyLinear ||
                               sc.regime == Regime::AsymptoticallyLinearDeg || sc.regime == Regime::Subquadratic;
        if (needs_inf && !probe.h_inf)
            config_error("model.params.h_inf", "regime " + to_string(sc.regime) + " needs h_inf");
        if (sc.regime == Regime::Superquadratic && !probe.h0)
            config_error("model.params.h0", "superquadratic regime needs h0");
        sc.model = nlohmann::json{{"family", m["family"]}, {"params", params}};
    }

    sc.solve = sc.model.has_value() && c.value("solve_enabled", true);
    if (c.contains("solve")) {
        const auto& s = c["solve"];
        if (!s.is_object()) config_error("solve", "expected an object");
        sc.solve_spec.m = s.value("m", sc.solve_spec.m);
        if (sc.solve_spec.m <= 0 || sc.solve_spec.m % 2) config_error("solve.m", "must be positive and even");
        if (s.contains("continuation")) sc.solve_spec.continuation = int_list(s["continuation"], "solve.continuation");
        sc.solve_spec.random_starts = s.value("random_starts", sc.solve_spec.random_starts);
        if (s.contains("K0")) sc.solve_spec.K0 = number_at(s["K0"], "solve.K0");
        sc.solve_spec.max_truncation_doublings = s.value("max_truncation_doublings", 5);
        sc.solve_spec.workers = s.value("workers", 1);
    }
    if (c.contains("lambda_factors")) {
        sc.lambda_factors.clear();
        for (std::size_t i = 0; i < c["lambda_factors"].size(); ++i)
            sc.lambda_factors.push_back(number_at(c["lambda_factors"][i], "lambda_factors[" + std::to_string(i) + "]"));
    }
    if (c.contains("systems")) {
        const auto& list = c["systems"];
        if (!list.is_array()) config_error("systems", "expected a list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& s = list[i];
            const std::string path = "systems[" + std::to_string(i) + "]";
            if (!s.is_object() || !s.contains("type")) config_error(path + ".type", "missing");
            SystemSpec spec{s.value("label", "system_" + std::to_string(i)), s["type"].get<std::string>(), s};
            make_system(spec, sc.pb);  // validate early
            sc.systems.push_back(std::move(spec));
        }
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        config_error(file.string(), e.what());
    }
    return parse_scenario(j);
}

// ---------------------------------------------------------------------------
// pipeline

bool RunReport::structural_failure() const {
    for (const auto& e : errors)
        if (e.structural) return true;
    return false;
}

const IndexRow* RunReport::index(const std::string& label) const {
    for (const auto& r : indices)
        if (r.label == label) return &r;
    return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void record(RunReport& rep, const std::string& stage, const Error& e) {
    const bool outcome = e.code() == ErrorCode::NoSaddleFound || e.code() == ErrorCode::NonstationaryLimit;
    rep.errors.push_back({stage, std::string(to_string(e.code())), e.what(), !outcome});
}

IndexRow index_row(const LinearSystem& sys, const std::vector<int>& schedule, int flow_steps) {
    IndexRow row;
    row.label = sys.label();
    row.pair = maslov_p_index(sys, schedule);
    try {
        row.nullity_ode = nullity_from_monodromy(monodromy(sys), sys.boundary());
    } catch (const Error& e) {
        row.errors.push_back(e.what());
    }
    try {
        row.flow_trace = spectral_flow_trace(sys, GalerkinSpace(sys.boundary(), schedule.front()), flow_steps);
        row.spectral_flow = row.flow_trace->flow;
    } catch (const Error& e) {
        row.errors.push_back(e.what());
    }
    return row;
}

std::vector<OrbitSolution> certify_all(RunReport& rep, const SaddleResult& res, const ReducedFunctional& rf,
                                       const CertifyOptions& co) {
    std::vector<OrbitSolution> out;
    for (const auto& orb : res.orbits) {
        try {
            out.push_back(certify(orb, rf, co));
        } catch (const Error& e) {
            record(rep, "certify", e);
        }
    }
    return out;
}

}  // namespace

RunReport run_scenario(const Scenario& sc) {
    const auto t_start = Clock::now();
    RunReport rep;
    rep.scenario = sc.name;
    rep.regime = sc.regime;
    rep.pb = sc.pb;

    std::optional<HamiltonianModel> model;
    if (sc.model) model = builtin_family((*sc.model)["family"].get<std::string>(), sc.pb.n, (*sc.model)["params"]);

    // indices
    auto t0 = Clock::now();
    IndexContext ctx;
    auto add_row = [&](const LinearSystem& sys) -> const IndexRow* {
        try {
            rep.indices.push_back(index_row(sys, sc.m_schedule, sc.flow_steps));
            for (const auto& msg : rep.indices.back().errors) rep.errors.push_back({"index:" + sys.label(), "", msg, true});
            return &rep.indices.back();
        } catch (const Error& e) {
            record(rep, "index:" + sys.label(), e);
            return nullptr;
        }
    };
    if (model && model->h0)
        if (const auto* r = add_row(LinearSystem::constant(sc.pb, *model->h0, "h0"))) ctx.h0 = r->pair;
    if (model && model->h_inf)
        if (const auto* r = add_row(LinearSystem::constant(sc.pb, *model->h_inf, "h_inf"))) ctx.h_inf = r->pair;
    for (const auto& spec : sc.systems) {
        try {
            add_row(make_system(spec, sc.pb));
        } catch (const Error& e) {
            record(rep, "index:" + spec.label, e);
        }
    }
    rep.timings["indices"] = seconds_since(t0);
    if (!model) {
        rep.timings["total"] = seconds_since(t_start);
        return rep;
    }

    t0 = Clock::now();
    rep.hypotheses = check_hypotheses(*model, sc.pb, std::nullopt, ctx, static_cast<unsigned>(sc.seed));
    rep.timings["hypotheses"] = seconds_since(t0);
    if (!sc.solve) {
        rep.timings["total"] = seconds_since(t_start);
        return rep;
    }

    t0 = Clock::now();
    const int dim = sc.pb.dim();
    SaddleOptions so;
    so.seed = sc.seed;
    so.random_starts = sc.solve_spec.random_starts;
    so.continuation = sc.solve_spec.continuation;
    so.workers = sc.solve_spec.workers;
    CertifyOptions co;
    co.regime = sc.regime;
    co.index_ctx = ctx;

    try {
        auto space = std::make_shared<const GalerkinSpace>(sc.pb, sc.solve_spec.m);
        switch (sc.regime) {
            case Regime::Superquadratic: {
                const Mat h = model->h0.value_or(Mat::Zero(dim, dim));
                const auto split = linking_split(*space, h);
                std::optional<double> R_K;
                if (model->params.contains("R_K")) R_K = model->params["R_K"].get<double>();
                double K = sc.solve_spec.K0;
                for (int attempt = 0; attempt <= sc.solve_spec.max_truncation_doublings; ++attempt, K *= 2.0) {
                    const HamiltonianModel tm = truncate(*model, K, R_K);
                    if (tm.truncation->negative_annulus)
                        rep.errors.push_back({"truncation", "NegativeAnnulusValue",
                                              "H < 0 sampled on the annulus; R_K floored at 0", false});
                    const ReducedFunctional rf = assemble(space, tm, ActionKind::F);
                    rep.truncation_K = K;
                    SaddleResult res;
                    try {
                        res = find_saddle(rf, split, so);
                    } catch (const Error& e) {
                        record(rep, "solve:K=" + std::to_string(K), e);
                        continue;
                    }
                    rep.orbits = certify_all(rep, res, rf, co);
                    const bool inside = std::any_of(rep.orbits.begin(), rep.orbits.end(),
                                                    [K](const OrbitSolution& o) { return o.sup_norm < K; });
                    if (inside) break;
                }
                break;
            }
            case Regime::AsymptoticallyLinearDeg:
            case Regime::AsymptoticallyLinear: {
                const ReducedFunctional rf = assemble(space, *model, ActionKind::F);
                const auto res = find_saddle(rf, linking_split(*space, *model->h_inf), so);
                rep.orbits = certify_all(rep, res, rf, co);
                break;
            }
            case Regime::Subquadratic: {
                rep.lambda_tau = estimate_lambda_tau(*space, *model);
                const auto split = linking_split(*space, *model->h_inf);
                for (double f : sc.lambda_factors) {
                    LambdaRecord lr;
                    lr.factor = f;
                    lr.lambda = f * rep.lambda_tau->lambda_tau;
                    const ReducedFunctional rf = assemble(space, *model, ActionKind::G, lr.lambda);
                    try {
                        const auto res = find_saddle(rf, split, so);
                        auto orbits = certify_all(rep, res, rf, co);
                        lr.orbits = static_cast<int>(orbits.size());
                        for (auto& o : orbits) {
                            if (o.certificate.certified) ++lr.certified;
                            rep.orbits.push_back(std::move(o));
                        }
                        lr.outcome = lr.certified > 0 ? "certified" : "uncertified";
                    } catch (const Error& e) {
                        record(rep, "solve:lambda=" + std::to_string(lr.lambda), e);
                        lr.outcome = std::string(to_string(e.code()));
                    }
                    rep.lambda_sweep.push_back(lr);
                }
                break;
            }
        }
    } catch (const Error& e) {
        record(rep, "solve", e);
    }
    rep.timings["solve"] = seconds_since(t0);
    rep.timings["total"] = seconds_since(t_start);
    return rep;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json mat_json(const Mat& m) {
    nlohmann::json out = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) out.push_back(vec_json(m.row(r).transpose()));
    return out;
}

nlohmann::json pair_json(const MaslovIndexPair& p) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& c : p.provenance.counts)
        counts.push_back({{"m", c.m}, {"m_plus", c.m_plus}, {"m_zero", c.m_zero}, {"m_minus", c.m_minus},
                          {"d", c.d}, {"gap_violation", c.gap_violation}});
    return {{"i_P", p.i_P},
            {"nu_P", p.nu_P},
            {"stabilized", p.provenance.stabilized},
            {"m_schedule", p.provenance.m_schedule},
            {"d", p.provenance.d},
            {"counts", counts},
            {"diagnostics", p.provenance.diagnostics}};
}

nlohmann::json hypotheses_json(const HypothesisReport& h) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : h.entries) out.push_back({{"name", e.name}, {"status", to_string(e.status)}, {"evidence", e.evidence}});
    return out;
}

nlohmann::json period_json(const PeriodReport& p) {
    return {{"T_min", p.T_min},
            {"s_star", p.s_star},
            {"T_psym", p.T_psym},
            {"branch", to_string(p.branch)},
            {"k_tau", p.k_tau},
            {"shift_defect", p.shift_defect},
            {"gcd_unstable", p.gcd_unstable},
            {"tolerances",
             {{"harmonic_rel", p.tolerances.harmonic_rel},
              {"shift_rel", p.tolerances.shift_rel},
              {"branch_rel", p.tolerances.branch_rel}}}};
}

nlohmann::json orbit_json(const OrbitSolution& o, std::size_t id) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : o.certificate.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    nlohmann::json cont = nlohmann::json::array();
    for (const auto& [m, a] : o.continuation) cont.push_back({{"m", m}, {"action", a}});
    return {{"id", id},
            {"kind", o.kind == ActionKind::F ? "f" : "g"},
            {"lambda", o.lambda},
            {"m", o.space->m()},
            {"action", o.action},
            {"grad_norm", o.grad_norm},
            {"ode_residual", o.ode_residual},
            {"boundary_defect", o.boundary_defect},
            {"sup_norm", o.sup_norm},
            {"is_constant", o.is_constant},
            {"start_id", o.start_id},
            {"index_pair", o.index_pair ? pair_json(*o.index_pair) : nlohmann::json()},
            {"period_report", o.period_report ? period_json(*o.period_report) : nlohmann::json()},
            {"hypotheses", o.hypotheses ? hypotheses_json(*o.hypotheses) : nlohmann::json()},
            {"certificate", {{"certified", o.certificate.certified}, {"window", o.certificate.window}, {"checks", checks}}},
            {"continuation", cont},
            {"coeffs", vec_json(o.coeffs)},
            {"samples_file", "orbits/orbit_" + std::to_string(id) + ".csv"}};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + p.string());
}

}  // namespace

nlohmann::json to_json(const RunReport& r, bool with_timings) {
    nlohmann::json j;
    j["scenario"] = r.scenario;
    j["regime"] = to_string(r.regime);
    nlohmann::json angles = nlohmann::json::array();
    if (r.pb.angles)
        for (const auto& a : *r.pb.angles) angles.push_back(a.theta);
    j["boundary"] = {{"n", r.pb.n}, {"tau", r.pb.tau}, {"k", r.pb.k}, {"dim_ker", r.pb.fixed_dim()},
                     {"P", mat_json(r.pb.P)}, {"angles", angles}};

    nlohmann::json idx = nlohmann::json::array();
    for (const auto& row : r.indices) {
        nlohmann::json e = pair_json(row.pair);
        e["label"] = row.label;
        e["nullity_ode"] = row.nullity_ode ? nlohmann::json(*row.nullity_ode) : nlohmann::json();
        e["spectral_flow"] = row.spectral_flow ? nlohmann::json(*row.spectral_flow) : nlohmann::json();
        e["nullity_agrees"] = row.nullity_ode && *row.nullity_ode == row.pair.nu_P;
        e["flow_agrees"] = row.spectral_flow && *row.spectral_flow == row.pair.i_P;
        idx.push_back(e);
    }
    j["indices"] = idx;
    j["hypotheses"] = r.hypotheses ? hypotheses_json(*r.hypotheses) : nlohmann::json();
    j["lambda_tau"] = r.lambda_tau ? nlohmann::json{{"sigma", r.lambda_tau->sigma},
                                                    {"lambda_tau", r.lambda_tau->lambda_tau},
                                                    {"norm_A", r.lambda_tau->norm_A},
                                                    {"a0", r.lambda_tau->a0},
                                                    {"a1", r.lambda_tau->a1}}
                                   : nlohmann::json();
    nlohmann::json sweep = nlohmann::json::array();
    for (const auto& l : r.lambda_sweep)
        sweep.push_back({{"factor", l.factor}, {"lambda", l.lambda}, {"orbits", l.orbits},
                         {"certified", l.certified}, {"outcome", l.outcome}});
    j["lambda_sweep"] = sweep;
    j["truncation_K"] = r.truncation_K ? nlohmann::json(*r.truncation_K) : nlohmann::json();
    nlohmann::json orbits = nlohmann::json::array();
    for (std::size_t i = 0; i < r.orbits.size(); ++i) orbits.push_back(orbit_json(r.orbits[i], i));
    j["orbits"] = orbits;
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& e : r.errors)
        errs.push_back({{"stage", e.stage}, {"code", e.code}, {"message", e.message}, {"structural", e.structural}});
    j["errors"] = errs;
    if (with_timings) j["timings"] = r.timings;
    return j;
}

void emit(const RunReport& r, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    for (const auto& sub : {dir, dir / "orbits", dir / "plotdata"}) {
        fs::create_directories(sub, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + sub.string() + ": " + ec.message());
    }
    write_file(dir / "report.json", to_json(r).dump(2) + "\n");

    std::ostringstream idx;
    idx.precision(17);
    idx << "label,i_P,nu_P,stabilized,nullity_ode,spectral_flow\n";
    for (const auto& row : r.indices) {
        idx << row.label << "," << row.pair.i_P << "," << row.pair.nu_P << "," << row.pair.provenance.stabilized << ",";
        if (row.nullity_ode) idx << *row.nullity_ode;
        idx << ",";
        if (row.spectral_flow) idx << *row.spectral_flow;
        idx << "\n";
    }
    write_file(dir / "indices.csv", idx.str());

    std::ostringstream cont;
    cont.precision(17);
    cont << "orbit,m,action\n";
    for (std::size_t i = 0; i < r.orbits.size(); ++i) {
        const auto& o = r.orbits[i];
        for (const auto& [m, a] : o.continuation) cont << i << "," << m << "," << a << "\n";

        std::ostringstream os;
        os.precision(17);
        os << "t";
        for (int c = 0; c < r.pb.dim(); ++c) os << ",x_" << c + 1;
        os << "\n";
        for (std::size_t q = 0; q < o.t.size(); ++q) {
            os << o.t[q];
            for (int c = 0; c < r.pb.dim(); ++c) os << "," << o.samples[q][c];
            os << "\n";
        }
        write_file(dir / "orbits" / ("orbit_" + std::to_string(i) + ".csv"), os.str());
    }
    write_file(dir / "plotdata" / "continuation.csv", cont.str());

    for (const auto& row : r.indices) {
        if (!row.flow_trace) continue;
        const auto& tr = *row.flow_trace;
        std::ostringstream os;
        os.precision(17);
        os << "eigenvalue,s,value\n";
        for (Eigen::Index e = 0; e < tr.eigenvalues.cols(); ++e)
            for (std::size_t g = 0; g < tr.s.size(); ++g) os << e << "," << tr.s[g] << "," << tr.eigenvalues(g, e) << "\n";
        write_file(dir / "plotdata" / ("flow_" + row.label + ".csv"), os.str());
    }
}

}  // namespace psym
