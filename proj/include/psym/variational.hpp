#pragma once

#include "psym/hamiltonian.hpp"
#include "psym/index_engine.hpp"
#include "psym/period.hpp"
#include "psym/pspace_basis.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace psym {

enum class ActionKind {
    F,  // f = k (1/2 <Az, z> - int_0^tau H(z))
    G,  // g = k (lambda int_0^tau H(z) - 1/2 <Az, z>)
};

enum class Regime { Superquadratic, AsymptoticallyLinearDeg, AsymptoticallyLinear, Subquadratic };
std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

using SpacePtr = std::shared_ptr<const GalerkinSpace>;

/// Reduced action on W_P^m. The quadratic part is diagonal in the basis; the
/// Hamiltonian part uses the space's trapezoid nodes.
class ReducedFunctional {
public:
    ReducedFunctional(SpacePtr space, HamiltonianModel model, ActionKind kind, double lambda = 1.0);

    const GalerkinSpace& space() const { return *space_; }
    SpacePtr space_ptr() const { return space_; }
    const HamiltonianModel& model() const { return model_; }
    ActionKind kind() const { return kind_; }
    int k() const { return space_->boundary().k; }
    double lambda() const { return lambda_; }
    int dim() const { return space_->dim(); }

    double value(const Vec& a) const;
    Vec gradient(const Vec& a) const;
    Mat hessian(const Vec& a) const;
    Vec hessian_vector(const Vec& a, const Vec& v) const;

    /// k/2 sum lambda_i a_i^2
    double quadratic_part(const Vec& a) const;
    /// int_0^tau H(z(t)) dt
    double hamiltonian_integral(const Vec& a) const;

    /// Same functional on another truncation of the same boundary.
    ReducedFunctional with_space(SpacePtr space) const;

    /// Multiplier in front of J H' in the Euler-Lagrange ODE.
    double ode_scale() const { return kind_ == ActionKind::G ? lambda_ : 1.0; }

private:
    SpacePtr space_;
    HamiltonianModel model_;
    ActionKind kind_;
    double lambda_;
    Vec freq_;
};

ReducedFunctional assemble(SpacePtr space, const HamiltonianModel& model, ActionKind kind,
                           std::optional<double> lambda = std::nullopt);

/// Coordinates split by the sign of the form of A - h: X = negative + kernel,
/// Y = positive.
struct LinkingSplit {
    std::vector<int> X;
    std::vector<int> Y;
    InertiaCount counts;
};

LinkingSplit linking_split(const GalerkinSpace& space, const Mat& h);

struct SaddleOptions {
    double rho = 0.0;      // sphere radius for seeds; 0 selects automatically
    double r1 = 0.0;       // outer radius of Q_m; 0 selects automatically
    int random_starts = 6;
    std::uint64_t seed = 1;
    double grad_tol = 1e-10;
    int max_newton = 80;
    std::optional<double> alpha_min;  // default 1e-6 k tau
    std::vector<int> continuation;    // larger truncations to re-solve in
    int max_ray_directions = 16;
    double deflation_power = 2.0;
    double deflation_shift = 1.0;
    double dedupe_tol = 1e-6;
    int workers = 1;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Certificate {
    std::vector<Check> checks;
    bool certified = false;
    std::string window;
};

/// A P-solution candidate with its certificate data.
struct OrbitSolution {
    SpacePtr space;
    Vec coeffs;
    ActionKind kind = ActionKind::F;
    double lambda = 1.0;
    std::vector<double> t;
    std::vector<Vec> samples;
    double action = 0.0;
    double grad_norm = 0.0;
    double ode_residual = 0.0;
    double boundary_defect = 0.0;
    double sup_norm = 0.0;
    bool is_constant = false;
    std::optional<MaslovIndexPair> index_pair;
    std::optional<PeriodReport> period_report;
    std::optional<HypothesisReport> hypotheses;
    std::vector<std::pair<int, double>> continuation;  // (m, action)
    Certificate certificate;
    int start_id = -1;
};

/// Fills samples, residuals, sup norm and the constancy flag from coeffs.
void update_diagnostics(OrbitSolution& orbit, const HamiltonianModel& model);

/// Canonical representative of the time-shift orbit: the dominant nonconstant
/// mode has zero sin-like coefficient and positive cos-like coefficient.
Vec canonical_phase(const GalerkinSpace& space, const Vec& coeffs);

/// Phase-invariant mode energies a_cos^2 + a_sin^2 per (l, j).
Vec mode_energies(const GalerkinSpace& space, const Vec& coeffs);

struct SaddleResult {
    std::vector<OrbitSolution> orbits;
    int starts = 0;
    int converged_to_zero = 0;
    int diverged = 0;
    std::vector<std::string> diagnostics;
};

/// Multi-start saddle search: ray and linking-corner seeds, regularized Newton
/// with deflation, then continuation through opts.continuation.
/// Throws NoSaddleFound when nothing nontrivial survives the filters.
SaddleResult find_saddle(const ReducedFunctional& rf, const LinkingSplit& split,
                         const SaddleOptions& opts);

/// Gauss-Newton on the collocation residual x' - s J H'(x) at the quadrature nodes.
/// Returns the refined coefficients.
Vec refine_collocation(const ReducedFunctional& rf, const Vec& coeffs, int max_iter = 30,
                       double tol = 1e-13);

struct CertifyOptions {
    Regime regime = Regime::Superquadratic;
    IndexContext index_ctx;
    std::vector<int> index_schedule;  // empty: derived from the orbit space
    double residual_tol = 1e-5;
    double alpha_min = 0.0;
    bool check_hypotheses = true;
};

/// Refines the orbit, attaches (i_P, nu_P) of B(t) = s H''(x(t)), the index
/// window of the regime, the period report and the per-orbit hypotheses.
OrbitSolution certify(OrbitSolution orbit, const ReducedFunctional& rf, const CertifyOptions& opts);

struct LambdaTauEstimate {
    double sigma = 0.0;
    double lambda_tau = 0.0;
    double norm_A = 1.0;
    double a0 = 3.0;
    double a1 = 10.0;
    Vec minimizer;
};

/// sigma = min of int_0^{k tau} H over v + {z_- : |z_-|^2 <= a0} + {z_0 : |z_0| <= a1}
/// in the A-weighted norm |z|^2 = sum |lambda_i| a_i^2 + |z_0|^2, where
/// |A| = |A^#| = 1; lambda_tau = (k/2 |A| + 1) / sigma + 1.
LambdaTauEstimate estimate_lambda_tau(const GalerkinSpace& space, const HamiltonianModel& model,
                                      double a1 = 10.0);

}  // namespace psym
