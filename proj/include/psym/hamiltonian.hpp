#pragma once

#include "psym/index_engine.hpp"
#include "psym/symplectic.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace psym {

struct TruncationInfo {
    double K = 0.0;
    double R_K = 0.0;
    bool negative_annulus = false;  // R_K was floored at 0
};

/// Autonomous Hamiltonian H on R^{2n} with derivatives and the class data
/// used by the existence regimes. Immutable; evaluators are pure.
class HamiltonianModel {
public:
    using Scalar = std::function<double(const Vec&)>;
    using Gradient = std::function<Vec(const Vec&)>;
    using Hessian = std::function<Mat(const Vec&)>;

    HamiltonianModel(std::string name, int n, Scalar H, Gradient grad, Hessian hess);

    const std::string& name() const { return name_; }
    int n() const { return n_; }
    int dim() const { return 2 * n_; }

    double H(const Vec& x) const { return H_(x); }
    Vec grad(const Vec& x) const { return grad_(x); }
    Mat hess(const Vec& x) const { return hess_(x); }

    std::optional<Mat> h0;
    std::optional<Mat> h_inf;
    std::optional<double> mu;
    std::optional<double> R0;
    std::optional<double> M_bound;
    std::optional<double> lambda;
    std::optional<TruncationInfo> truncation;
    nlohmann::json params = nlohmann::json::object();

private:
    std::string name_;
    int n_;
    Scalar H_;
    Gradient grad_;
    Hessian hess_;
};

/// Smooth cutoff: 1 on y <= K, 0 on y >= K + 1, strictly decreasing between.
struct Cutoff {
    double K;
    double value(double y) const;
    double d1(double y) const;
    double d2(double y) const;
};

/// H_K = chi(|z|) H + (1 - chi(|z|)) R_K |z|^4. R_K defaults to 1.2 times the
/// sampled max of H / |z|^4 over the annulus K <= |z| <= K + 1.
HamiltonianModel truncate(const HamiltonianModel& model, double K,
                          std::optional<double> R_K = std::nullopt);

/// Sampled estimate of max H(z) / |z|^4 on the annulus, 10^4 Halton points.
double annulus_ratio_max(const HamiltonianModel& model, double K, int samples = 10000);

struct GrowthFloor {
    double a1 = 0.0;
    double a2 = 0.0;
    double nu = 0.0;
};

/// Fits H(z) >= a1 |z|^nu - a2 on |z| in [0, r_max] from samples.
GrowthFloor fit_growth_floor(const HamiltonianModel& model, double nu, double r_max,
                             int samples = 4000, unsigned seed = 7);

/// Built-in families: quartic_radial, asymptotically_linear, subquadratic_sqrt.
HamiltonianModel builtin_family(const std::string& name, int n, const nlohmann::json& params);

enum class HypothesisStatus { Holds, Fails, Indeterminate, SampledOnly };
std::string to_string(HypothesisStatus s);

struct HypothesisEntry {
    std::string name;
    HypothesisStatus status = HypothesisStatus::Indeterminate;
    std::string evidence;
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    const HypothesisEntry* find(const std::string& name) const;
};

struct IndexContext {
    std::optional<MaslovIndexPair> h0;
    std::optional<MaslovIndexPair> h_inf;
};

/// Orbit samples used by the per-solution checks (HX1, HX2).
struct OrbitSamples {
    std::vector<double> t;
    std::vector<Vec> x;
    double hessian_scale = 1.0;  // lambda for x' = lambda J H'(x)
};

/// Evaluates (H0)-(H9), (HX1)-(HX5) by sampling or index arithmetic.
HypothesisReport check_hypotheses(const HamiltonianModel& model, const PBoundary& pb,
                                  const std::optional<OrbitSamples>& orbit,
                                  const IndexContext& ctx, unsigned seed = 11);

/// Max relative error of grad vs central differences of H, and of hess vs
/// central differences of grad, over random points of the ball of radius r.
struct DerivativeCheck {
    double grad_error = 0.0;
    double hess_error = 0.0;
};
DerivativeCheck check_derivatives(const HamiltonianModel& model, int points, double radius,
                                  unsigned seed = 3);

}  // namespace psym
