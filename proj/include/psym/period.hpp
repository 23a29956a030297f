#pragma once

#include "psym/pspace_basis.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace psym {

/// A P-solution extended to [0, k tau] as a k tau-periodic curve.
struct ExtendedOrbit {
    double period = 0.0;  // k tau
    std::function<Vec(double)> eval;
    std::vector<double> t;  // uniform samples on [0, k tau]
    std::vector<Vec> x;
    double wrap_defect = 0.0;  // |x(k tau) - x(0)|
};

/// Extends coefficients of a Galerkin orbit: x(t + j tau) = P^j x(t).
ExtendedOrbit extend(const GalerkinSpace& space, const Vec& coeffs, int samples_per_tau = 256);

/// Wraps an arbitrary k tau-periodic curve (synthetic tests, external orbits).
ExtendedOrbit extend_function(std::function<Vec(double)> eval, double period, int samples);

enum class DichotomyBranch { KTau, KTauOverKPlusOne, Other };
std::string to_string(DichotomyBranch b);

struct PeriodicityTolerances {
    double harmonic_rel = 1e-7;
    double shift_rel = 1e-6;
    double branch_rel = 1e-6;
};

struct MinimalPeriod {
    double T_min = 0.0;
    int gcd = 0;
    std::vector<int> active_harmonics;
    bool gcd_unstable = false;
    std::optional<double> alternative_T;
};

/// T_min = k tau / gcd of the active harmonic indices; verified by shift.
MinimalPeriod minimal_period(const ExtendedOrbit& orbit, const PeriodicityTolerances& tol = {});

struct PeriodReport {
    double T_min = 0.0;
    double s_star = 0.0;
    double T_psym = 0.0;
    DichotomyBranch branch = DichotomyBranch::Other;
    double k_tau = 0.0;
    double shift_defect = 0.0;  // relative sup |x(t + s*) - P x(t)|
    bool gcd_unstable = false;
    PeriodicityTolerances tolerances;
};

/// Minimal P-symmetric period T = k s*, s* = smallest positive tau - j T_min.
PeriodReport minimal_p_symmetric_period(const ExtendedOrbit& orbit, const PBoundary& pb,
                                        const PeriodicityTolerances& tol = {});

/// Relative sup-norm of x(t + s) - P x(t) over the orbit samples.
double shift_defect(const ExtendedOrbit& orbit, const Mat& P, double s);

}  // namespace psym
