#pragma once

// Independent reference values. Nothing here calls into the library; the
// numbers come from closed forms worked out by hand for rotation twists.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Frozen values for P = R(2 pi / 3), tau = 2 pi / 3 (k = 3). Frequencies are
// lambda_j = 1 + 3 j, each a complex line (two real dimensions).
inline constexpr int kRot = 3;
inline constexpr double kTauRot = 2.0 * pi / 3.0;

// Quartic H = |z|^4 / 4: x(t) = R(lambda t) x0 with |x0|^2 = lambda, so the
// action over k tau = 2 pi is 2 pi (lambda^2 / 2 - lambda^2 / 4).
inline constexpr double kQuarticActionRho1 = pi / 2.0;  // lambda = 1
inline constexpr double kQuarticActionRho2 = 8.0 * pi;  // lambda = 4

// Periods of the two branches: T_min = 2 pi / lambda, s* = tau mod T_min.
inline constexpr double kTminRho1 = 2.0 * pi;
inline constexpr double kTpsymRho1 = 2.0 * pi;
inline constexpr double kTminRho2 = pi / 2.0;
inline constexpr double kSstarRho2 = pi / 6.0;
inline constexpr double kTpsymRho2 = pi / 2.0;

// (i_P, nu_P) of b I for P = R(theta) in dimension 2, counted directly from
// the frequencies (theta + 2 pi j) / tau: each frequency below b that is not
// already negative adds 2, each frequency equal to b adds 2 to the nullity.
inline std::pair<int, int> rotation_index(double theta, double tau, double b, int j_range = 200) {
    int below = 0, negative = 0, equal = 0;
    for (int j = -j_range; j <= j_range; ++j) {
        const double lam = (theta + 2.0 * pi * j) / tau;
        if (std::abs(lam - b) < 1e-12) ++equal;
        else if (lam < b) ++below;
        if (lam < 0.0) ++negative;
    }
    return {2 * (below - negative), 2 * equal};
}

// dim ker(exp(b tau J) - R(theta)): both are rotations of the plane.
inline int rotation_nullity(double theta, double tau, double b) {
    const double d = std::remainder(b * tau - theta, 2.0 * pi);
    return std::abs(d) < 1e-12 ? 2 : 0;
}

// Subquadratic H = sqrt(1 + |z|^2) - 1 with x' = lambda J H'(x): circles of
// angular speed omega = lambda / sqrt(1 + rho^2). On the g functional the
// critical value is k tau (lambda - omega)^2 / (2 omega).
inline double subquadratic_g(double lambda, double omega, int k, double tau) {
    return k * tau * (lambda - omega) * (lambda - omega) / (2.0 * omega);
}
inline double subquadratic_radius(double lambda, double omega) {
    return std::sqrt(lambda * lambda / (omega * omega) - 1.0);
}

// Brute-force composite Simpson integral of f on [0, tau].
template <class F>
double simpson(F&& f, double tau, int panels = 4000) {
    const double h = tau / panels;
    double s = f(0.0) + f(tau);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

}  // namespace oracle
