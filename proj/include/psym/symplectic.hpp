#pragma once

#include "psym/linalg.hpp"

#include <optional>
#include <vector>

namespace psym {

/// How to take the real logarithm of a unitary eigenvalue -1 (angle pi).
enum class PiBranch { Unset, Plus, Minus };

/// Unitary eigen-angle of an orthogonal-symplectic P with its unit
/// eigenvector in C^n.
struct UnitaryMode {
    double theta = 0.0;  // in (-pi, pi]
    CVec xi;
};

/// The boundary twist (P, tau) of x(tau) = P x(0), with its order k and the
/// fixed space ker_R(P - I).
struct PBoundary {
    int n = 0;
    Mat P;
    double tau = 0.0;
    int k = 1;
    Mat fixed_basis;                          // 2n x dim ker_R(P - I), orthonormal columns
    std::optional<std::vector<UnitaryMode>> angles;  // set when P is orthogonal-symplectic
    PiBranch pi_branch = PiBranch::Unset;

    int dim() const { return 2 * n; }
    int fixed_dim() const { return static_cast<int>(fixed_basis.cols()); }
    bool orthogonal() const { return angles.has_value(); }
};

inline constexpr double kSymplecticTol = 1e-12;
inline constexpr double kOrderTol = 1e-10;
inline constexpr double kOrderSeparation = 1e-6;
inline constexpr double kOrthogonalTol = 1e-10;

/// Checks symplecticity and finds the minimal order k <= k_max of P.
/// Populates the unitary angles when P is also orthogonal.
PBoundary validate_P(const Mat& P, double tau, int k_max = 64,
                     PiBranch branch = PiBranch::Unset);

/// Convenience: P = real form of diag(exp(i theta_l)).
PBoundary boundary_from_angles(std::span<const double> angles, double tau,
                               PiBranch branch = PiBranch::Unset);

/// Eigen-angles of the unitary U identified with P, sorted ascending, with
/// orthonormal eigenvectors.
std::vector<UnitaryMode> unitary_identification(const PBoundary& pb);

/// Real generator L with exp(L) = P built from the unitary logarithm.
Mat gamma_P_generator(const PBoundary& pb);

/// gamma_P(t) = exp((t / tau) L): symplectic path from I to P.
Mat gamma_P_path(const PBoundary& pb, double t);

/// Time derivative of gamma_P at t.
Mat gamma_P_velocity(const PBoundary& pb, double t);

/// For a finite-order symplectic P and a symplectic S such that
/// S^{-1} P S is orthogonal, returns the orthogonal representative.
/// A system y' = J B y with twist P maps to w' = J (S^T B S) w with the
/// representative as twist, through y = S w.
Mat conjugate_to_orthogonal(const Mat& P, const Mat& S);

}  // namespace psym
