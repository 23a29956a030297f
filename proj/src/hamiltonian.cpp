#include "psym/hamiltonian.hpp"

#include "psym/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace psym {

HamiltonianModel::HamiltonianModel(std::string name, int n, Scalar H, Gradient grad, Hessian hess)
    : name_(std::move(name)), n_(n), H_(std::move(H)), grad_(std::move(grad)), hess_(std::move(hess)) {}

// ---------------------------------------------------------------------------
// cutoff

namespace {

struct LogisticParts {
    double chi;
    double chi_one_minus_chi;
};

// chi = 1 / (1 + e^u) evaluated without overflow
LogisticParts logistic(double u) {
    const double e = std::exp(-std::abs(u));
    const double chi = u > 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
    return {chi, e / ((1.0 + e) * (1.0 + e))};
}

}  // namespace

double Cutoff::value(double y) const {
    if (y <= K) return 1.0;
    if (y >= K + 1.0) return 0.0;
    const double s = y - K;
    return logistic(1.0 / (1.0 - s) - 1.0 / s).chi;
}

double Cutoff::d1(double y) const {
    if (y <= K || y >= K + 1.0) return 0.0;
    const double s = y - K;
    const double u1 = 1.0 / ((1.0 - s) * (1.0 - s)) + 1.0 / (s * s);
    return -logistic(1.0 / (1.0 - s) - 1.0 / s).chi_one_minus_chi * u1;
}

double Cutoff::d2(double y) const {
    if (y <= K || y >= K + 1.0) return 0.0;
    const double s = y - K;
    const auto p = logistic(1.0 / (1.0 - s) - 1.0 / s);
    const double u1 = 1.0 / ((1.0 - s) * (1.0 - s)) + 1.0 / (s * s);
    const double u2 = 2.0 / std::pow(1.0 - s, 3) - 2.0 / (s * s * s);
    const double chi1 = -p.chi_one_minus_chi * u1;
    return -(chi1 * (1.0 - 2.0 * p.chi) * u1 + p.chi_one_minus_chi * u2);
}

// ---------------------------------------------------------------------------
// sampling helpers

namespace {

constexpr std::array<int, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(int base, long index) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// Halton point on the annulus K <= |z| <= K + 1; directions by Box-Muller.
Vec halton_annulus_point(int dim, long index, double K) {
    Vec g(dim);
    for (int c = 0; c < dim; c += 2) {
        const double u1 = std::max(radical_inverse(kPrimes[c % kPrimes.size()], index), 1e-300);
        const double u2 = radical_inverse(kPrimes[(c + 1) % kPrimes.size()], index);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        g[c] = rad * std::cos(2.0 * std::numbers::pi * u2);
        if (c + 1 < dim) g[c + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double radius = K + radical_inverse(kPrimes[dim % kPrimes.size()], index);
    const double norm = g.norm();
    if (norm == 0.0) g[0] = 1.0;
    return g.normalized() * radius;
}

Vec random_direction(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = nd(rng);
    if (v.norm() == 0.0) v[0] = 1.0;
    return v.normalized();
}

Mat matrix_from_json(const nlohmann::json& j, int dim, const char* field) {
    if (j.is_number()) return j.get<double>() * Mat::Identity(dim, dim);
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw Error(ErrorCode::ConfigError, std::string(field) + ": expected scalar or 2n x 2n matrix");
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
            throw Error(ErrorCode::ConfigError, std::string(field) + ": row length mismatch");
        for (int c = 0; c < dim; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

}  // namespace

double annulus_ratio_max(const HamiltonianModel& model, double K, int samples) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= samples; ++i) {
        const Vec z = halton_annulus_point(model.dim(), i, K);
        best = std::max(best, model.H(z) / std::pow(z.squaredNorm(), 2));
    }
    return best;
}

HamiltonianModel truncate(const HamiltonianModel& model, double K, std::optional<double> R_K) {
    if (!(K > 0.0)) throw Error(ErrorCode::DimensionMismatch, "truncation radius must be positive");
    TruncationInfo info;
    info.K = K;
    if (R_K) {
        info.R_K = *R_K;
    } else {
        double min_h = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 2000; ++i) min_h = std::min(min_h, model.H(halton_annulus_point(model.dim(), i, K)));
        info.negative_annulus = min_h < 0.0;
        info.R_K = std::max(0.0, 1.2 * annulus_ratio_max(model, K));
    }

    const Cutoff chi{K};
    const double RK = info.R_K;
    const HamiltonianModel base = model;

    auto H = [base, chi, RK](const Vec& z) {
        const double r2 = z.squaredNorm();
        const double r = std::sqrt(r2);
        const double c = chi.value(r);
        if (c == 1.0) return base.H(z);
        if (c == 0.0) return RK * r2 * r2;
        return c * base.H(z) + (1.0 - c) * RK * r2 * r2;
    };
    auto grad = [base, chi, RK](const Vec& z) -> Vec {
        const double r2 = z.squaredNorm();
        const double r = std::sqrt(r2);
        if (r <= chi.K) return base.grad(z);
        const Vec quartic = 4.0 * RK * r2 * z;
        if (r >= chi.K + 1.0) return quartic;
        // H_K = R_K r^4 + chi(r) F(z), F = H - R_K r^4
        const double F = base.H(z) - RK * r2 * r2;
        const Vec dF = base.grad(z) - quartic;
        return quartic + chi.d1(r) * F * (z / r) + chi.value(r) * dF;
    };
    auto hess = [base, chi, RK](const Vec& z) -> Mat {
        const auto dim = z.size();
        const double r2 = z.squaredNorm();
        const double r = std::sqrt(r2);
        if (r <= chi.K) return base.hess(z);
        const Mat I = Mat::Identity(dim, dim);
        const Mat quartic = RK * (4.0 * r2 * I + 8.0 * z * z.transpose());
        if (r >= chi.K + 1.0) return quartic;
        const Vec u = z / r;
        const double F = base.H(z) - RK * r2 * r2;
        const Vec dF = base.grad(z) - 4.0 * RK * r2 * z;
        const Mat d2F = base.hess(z) - quartic;
        const double c0 = chi.value(r), c1 = chi.d1(r), c2 = chi.d2(r);
        Mat out = quartic + c2 * F * u * u.transpose() + c1 * F * (I - u * u.transpose()) / r +
                  c1 * (u * dF.transpose() + dF * u.transpose()) + c0 * d2F;
        return symmetrize(out);
    };

    HamiltonianModel out("truncated:" + model.name(), model.n(), H, grad, hess);
    out.h0 = model.h0;
    out.h_inf.reset();
    if (model.mu) out.mu = std::min(*model.mu, 4.0);
    out.R0 = model.R0;
    out.M_bound.reset();
    out.lambda = model.lambda;
    out.truncation = info;
    out.params = model.params;
    return out;
}

GrowthFloor fit_growth_floor(const HamiltonianModel& model, double nu, double r_max, int samples,
                             unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::vector<Vec> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) pts.push_back(random_direction(model.dim(), rng) * (r_max * ud(rng)));

    GrowthFloor out;
    out.nu = nu;
    double ratio = std::numeric_limits<double>::infinity();
    for (const auto& z : pts) {
        const double r = z.norm();
        if (r >= 0.5 * r_max) ratio = std::min(ratio, model.H(z) / std::pow(r, nu));
    }
    out.a1 = 0.5 * ratio;
    double deficit = 0.0;
    for (const auto& z : pts) deficit = std::max(deficit, out.a1 * std::pow(z.norm(), nu) - model.H(z));
    out.a2 = 1.1 * deficit + 1e-9;
    return out;
}

// ---------------------------------------------------------------------------
// families

HamiltonianModel builtin_family(const std::string& name, int n, const nlohmann::json& params) {
    const int dim = 2 * n;
    const Mat I = Mat::Identity(dim, dim);
    if (name == "quartic_radial") {
        const double c = params.value("c", 1.0);
        if (!(c > 0.0)) throw Error(ErrorCode::ConfigError, "quartic_radial: c must be positive");
        const Mat h0 = params.contains("h0") ? matrix_from_json(params["h0"], dim, "h0") : Mat::Zero(dim, dim);
        HamiltonianModel m(
            name, n,
            [c, h0](const Vec& z) { return 0.25 * c * z.squaredNorm() * z.squaredNorm() + 0.5 * z.dot(h0 * z); },
            [c, h0](const Vec& z) -> Vec { return c * z.squaredNorm() * z + h0 * z; },
            [c, h0, I](const Vec& z) -> Mat {
                return c * (z.squaredNorm() * I + 2.0 * z * z.transpose()) + h0;
            });
        m.h0 = h0;
        const double hn = h0.norm();
        m.mu = hn == 0.0 ? 4.0 : 3.0;
        m.R0 = hn == 0.0 ? 1.0 : std::max(1.0, 2.0 * std::sqrt(2.0 * hn / c));
        m.params = params;
        m.params["c"] = c;
        return m;
    }
    if (name == "asymptotically_linear") {
        const double gamma = params.value("gamma", 1.0);
        Mat h_inf = Mat::Zero(dim, dim);
        if (params.contains("h_inf"))
            h_inf = matrix_from_json(params["h_inf"], dim, "h_inf");
        else if (params.contains("beta"))
            h_inf = params["beta"].get<double>() * I;
        HamiltonianModel m(
            name, n,
            [gamma, h_inf](const Vec& z) {
                return 0.5 * z.dot(h_inf * z) + gamma * (std::sqrt(1.0 + z.squaredNorm()) - 1.0);
            },
            [gamma, h_inf](const Vec& z) -> Vec {
                return h_inf * z + gamma * z / std::sqrt(1.0 + z.squaredNorm());
            },
            [gamma, h_inf, I](const Vec& z) -> Mat {
                const double q = 1.0 + z.squaredNorm();
                return h_inf + gamma * ((q * I - z * z.transpose()) / std::pow(q, 1.5));
            });
        m.h_inf = h_inf;
        m.h0 = h_inf + gamma * I;
        m.params = params;
        m.params["gamma"] = gamma;
        return m;
    }
    if (name == "subquadratic_sqrt") {
        HamiltonianModel m(
            name, n, [](const Vec& z) { return std::sqrt(1.0 + z.squaredNorm()) - 1.0; },
            [](const Vec& z) -> Vec { return z / std::sqrt(1.0 + z.squaredNorm()); },
            [I](const Vec& z) -> Mat {
                const double q = 1.0 + z.squaredNorm();
                return (q * I - z * z.transpose()) / std::pow(q, 1.5);
            });
        m.h0 = I;
        m.h_inf = Mat::Zero(dim, dim);
        m.M_bound = 1.0;
        m.params = params;
        return m;
    }
    throw Error(ErrorCode::UnknownFamily, "unknown Hamiltonian family '" + name + "'");
}

// ---------------------------------------------------------------------------
// derivative checks

DerivativeCheck check_derivatives(const HamiltonianModel& model, int points, double radius, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    DerivativeCheck out;
    const int dim = model.dim();
    for (int p = 0; p < points; ++p) {
        const Vec x = random_direction(dim, rng) * (radius * std::pow(ud(rng), 1.0 / dim));
        const double h = 1e-5 * std::max(1.0, x.norm());
        const Vec g = model.grad(x);
        const Mat Hs = model.hess(x);
        Vec g_fd(dim);
        Mat H_fd(dim, dim);
        for (int i = 0; i < dim; ++i) {
            Vec e = Vec::Zero(dim);
            e[i] = h;
            g_fd[i] = (model.H(x + e) - model.H(x - e)) / (2.0 * h);
            H_fd.col(i) = (model.grad(x + e) - model.grad(x - e)) / (2.0 * h);
        }
        out.grad_error = std::max(out.grad_error, (g_fd - g).norm() / std::max(1.0, g.norm()));
        out.hess_error = std::max(out.hess_error, (H_fd - Hs).norm() / std::max(1.0, Hs.norm()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// hypotheses

std::string to_string(HypothesisStatus s) {
    switch (s) {
        case HypothesisStatus::Holds: return "holds";
        case HypothesisStatus::Fails: return "fails";
        case HypothesisStatus::Indeterminate: return "indeterminate";
        case HypothesisStatus::SampledOnly: return "sampled_only";
    }
    return "indeterminate";
}

const HypothesisEntry* HypothesisReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

HypothesisEntry missing(const std::string& name, const std::string& what) {
    return {name, HypothesisStatus::Indeterminate, "MissingContext: " + what};
}

HypothesisEntry sampled(const std::string& name, bool ok, const std::string& evidence) {
    return {name, ok ? HypothesisStatus::SampledOnly : HypothesisStatus::Fails, evidence};
}

HypothesisEntry exact(const std::string& name, bool ok, const std::string& evidence) {
    return {name, ok ? HypothesisStatus::Holds : HypothesisStatus::Fails, evidence};
}

bool positive_semidefinite(const Mat& m, double tol = 1e-12) {
    return sorted_eigenvalues(symmetrize(m))[0] >= -tol;
}

}  // namespace

HypothesisReport check_hypotheses(const HamiltonianModel& model, const PBoundary& pb,
                                  const std::optional<OrbitSamples>& orbit, const IndexContext& ctx,
                                  unsigned seed) {
    HypothesisReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    const int dim = model.dim();
    const Mat& P = pb.P;

    auto shell = [&](double r) -> Vec { return random_direction(dim, rng) * r; };

    {  // H0
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const Vec x = shell(3.0 * ud(rng));
            worst = std::max(worst, std::abs(model.H(P * x) - model.H(x)) / std::max(1.0, std::abs(model.H(x))));
        }
        rep.entries.push_back(sampled("H0", worst <= 1e-9, "max |H(Px) - H(x)| (rel) = " + fmt(worst)));
    }

    if (model.h0) {
        const Mat& h0 = *model.h0;
        std::vector<double> ratios;
        for (double r : {1e-1, 1e-2, 1e-3}) {
            double worst = 0.0;
            for (int i = 0; i < 50; ++i) {
                const Vec x = shell(r);
                worst = std::max(worst, std::abs(model.H(x) - 0.5 * x.dot(h0 * x)) / (r * r));
            }
            ratios.push_back(worst);
        }
        const bool ok = ratios[2] <= ratios[0] + 1e-14 && ratios[2] < 1e-4;
        rep.entries.push_back(sampled("H1", ok, "|H - (h0 x, x)/2| / |x|^2 at r = 1e-1, 1e-2, 1e-3: " +
                                                    fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2])));

        double worst = 0.0;
        for (int i = 0; i < 400; ++i) {
            const Vec x = shell(5.0 * ud(rng));
            worst = std::min(worst, model.H(x) - 0.5 * x.dot(h0 * x));
        }
        const bool psd = positive_semidefinite(h0);
        const double inv = (P.transpose() * h0 * P - h0).norm();
        rep.entries.push_back(sampled("H2", worst >= -1e-12 && psd && inv <= 1e-10,
                                      "min H - (h0 x, x)/2 = " + fmt(worst) + ", h0 psd = " + (psd ? "yes" : "no") +
                                          ", |P^T h0 P - h0| = " + fmt(inv)));
    } else {
        rep.entries.push_back(missing("H1", "h0 not set"));
        rep.entries.push_back(missing("H2", "h0 not set"));
    }

    if (model.mu && model.R0) {
        const double mu = *model.mu, R0 = *model.R0;
        double slack = std::numeric_limits<double>::infinity();
        double hmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 400; ++i) {
            const Vec x = shell(R0 * (1.0 + 3.0 * ud(rng)));
            const double H = model.H(x);
            hmin = std::min(hmin, H);
            slack = std::min(slack, model.grad(x).dot(x) - mu * H);
        }
        rep.entries.push_back(sampled("H3", mu > 2.0 && hmin > 0.0 && slack >= -1e-9 * std::max(1.0, hmin),
                                      "mu = " + fmt(mu) + ", min (H'.x - mu H) on [R0, 4R0] = " + fmt(slack) +
                                          ", min H = " + fmt(hmin)));
    } else {
        rep.entries.push_back(missing("H3", "mu or R0 not set"));
    }

    {  // H4: polynomial growth of |H''|
        std::vector<double> norms;
        for (double r : {10.0, 100.0, 1000.0}) {
            double worst = 0.0;
            for (int i = 0; i < 20; ++i) worst = std::max(worst, model.hess(shell(r)).norm());
            norms.push_back(worst);
        }
        const double slope = std::log(std::max(norms[2], 1e-300) / std::max(norms[1], 1e-300)) / std::log(10.0);
        rep.entries.push_back(sampled("H4", std::isfinite(slope),
                                      "growth exponent of |H''| between r = 100 and 1000: " + fmt(slope)));
    }

    if (model.h_inf) {
        const Mat& hinf = *model.h_inf;
        std::vector<double> ratios;
        for (double r : {10.0, 100.0, 1000.0}) {
            double worst = 0.0;
            for (int i = 0; i < 40; ++i) {
                const Vec x = shell(r);
                worst = std::max(worst, (model.grad(x) - hinf * x).norm() / r);
            }
            ratios.push_back(worst);
        }
        const double inv = (P.transpose() * hinf * P - hinf).norm();
        const bool ok = ratios[2] < ratios[0] && ratios[2] < 1e-2 && positive_semidefinite(hinf) && inv <= 1e-10;
        rep.entries.push_back(sampled("H5", ok, "|H'(x) - h_inf x| / |x| at r = 10, 100, 1000: " + fmt(ratios[0]) +
                                                    ", " + fmt(ratios[1]) + ", " + fmt(ratios[2])));
        if (model.h0) {
            const Mat diff = hinf - *model.h0;
            const double min_eig = sorted_eigenvalues(symmetrize(diff))[0];
            const double comm = (hinf * *model.h0 - *model.h0 * hinf).norm();
            rep.entries.push_back(exact("H6", min_eig > 0.0 && comm <= 1e-10,
                                        "min eig(h_inf - h0) = " + fmt(min_eig) + ", |[h_inf, h0]| = " + fmt(comm)));
        } else {
            rep.entries.push_back(missing("H6", "h0 not set"));
        }
    } else {
        rep.entries.push_back(missing("H5", "h_inf not set"));
        rep.entries.push_back(missing("H6", "h_inf not set"));
    }

    {  // H7
        double gmin = std::numeric_limits<double>::infinity();
        for (double r : {1e-2, 1e-1, 1.0, 10.0, 100.0})
            for (int i = 0; i < 40; ++i) gmin = std::min(gmin, model.grad(shell(r)).norm() / r);
        rep.entries.push_back(sampled("H7", gmin > 1e-10, "min |H'(x)| / |x| on shells 1e-2..1e2: " + fmt(gmin)));
    }

    {  // H8
        double gmax = 0.0;
        for (double r : {0.1, 1.0, 10.0, 100.0, 1000.0})
            for (int i = 0; i < 40; ++i) gmax = std::max(gmax, model.grad(shell(r)).norm());
        const Vec dir = shell(1.0);
        const bool grows = model.H(1000.0 * dir) > model.H(100.0 * dir) && model.H(100.0 * dir) > model.H(10.0 * dir);
        const double M = model.M_bound.value_or(gmax);
        rep.entries.push_back(sampled("H8", gmax <= M * (1.0 + 1e-12) && grows && gmax < 1e6,
                                      "max |H'| sampled = " + fmt(gmax) + ", M = " + fmt(M) +
                                          ", H increasing along rays: " + (grows ? "yes" : "no")));
    }

    {  // H9: H(0) = 0, H > 0 and |H'| > 0 off the origin
        double hmin = std::numeric_limits<double>::infinity(), gmin = hmin;
        for (double r : {1e-3, 1e-1, 1.0, 10.0, 100.0})
            for (int i = 0; i < 40; ++i) {
                const Vec x = shell(r);
                hmin = std::min(hmin, model.H(x));
                gmin = std::min(gmin, model.grad(x).norm());
            }
        const double h_origin = model.H(Vec::Zero(dim));
        rep.entries.push_back(sampled("H9", std::abs(h_origin) <= 1e-14 && hmin > 0.0 && gmin > 0.0,
                                      "H(0) = " + fmt(h_origin) + ", min H = " + fmt(hmin) + ", min |H'| = " +
                                          fmt(gmin) + " (vector positivity of H' read as |H'| > 0)"));
    }

    if (orbit && !orbit->x.empty()) {
        double min_eig = std::numeric_limits<double>::infinity();
        Mat integral = Mat::Zero(dim, dim);
        const std::size_t N = orbit->x.size();
        for (std::size_t q = 0; q < N; ++q) {
            const Mat h = orbit->hessian_scale * model.hess(orbit->x[q]);
            min_eig = std::min(min_eig, sorted_eigenvalues(symmetrize(h))[0]);
            // trapezoid on [t_0, t_N]
            const double w = (q == 0 ? orbit->t[1] - orbit->t[0]
                              : q + 1 == N ? orbit->t[N - 1] - orbit->t[N - 2]
                                           : orbit->t[q + 1] - orbit->t[q - 1]) * 0.5;
            integral += w * h;
        }
        const double int_min = sorted_eigenvalues(symmetrize(integral))[0];
        rep.entries.push_back(exact("HX1", min_eig >= -1e-8, "min eig H''(x(t)) along orbit = " + fmt(min_eig)));
        rep.entries.push_back(exact("HX2", int_min > 1e-8, "min eig of int H''(x(t)) dt = " + fmt(int_min)));
    } else {
        rep.entries.push_back(missing("HX1", "no orbit supplied"));
        rep.entries.push_back(missing("HX2", "no orbit supplied"));
    }

    const int dk = pb.fixed_dim();
    if (ctx.h0) {
        const int s0 = ctx.h0->i_P + ctx.h0->nu_P;
        rep.entries.push_back(exact("HX3", s0 <= dk,
                                    "i_P(h0) + nu_P(h0) = " + std::to_string(s0) + ", dim ker(P - I) = " + std::to_string(dk)));
    } else {
        rep.entries.push_back(missing("HX3", "index of h0 not supplied"));
    }
    if (ctx.h0 && ctx.h_inf) {
        const int s0 = ctx.h0->i_P + ctx.h0->nu_P;
        const int si = ctx.h_inf->i_P;
        rep.entries.push_back(exact("HX4", si > s0 && s0 <= dk,
                                    "i_P(h_inf) = " + std::to_string(si) + ", i_P(h0) + nu_P(h0) = " + std::to_string(s0)));
        const int sinf = ctx.h_inf->i_P + ctx.h_inf->nu_P;
        const bool outside = sinf < ctx.h0->i_P || sinf > s0;
        rep.entries.push_back(exact("HX5", sinf <= dk + 1 && outside,
                                    "i_P(h_inf) + nu_P(h_inf) = " + std::to_string(sinf) + ", window [" +
                                        std::to_string(ctx.h0->i_P) + ", " + std::to_string(s0) + "]"));
    } else {
        rep.entries.push_back(missing("HX4", "indices of h0 and h_inf not supplied"));
        rep.entries.push_back(missing("HX5", "indices of h0 and h_inf not supplied"));
    }
    return rep;
}

}  // namespace psym
