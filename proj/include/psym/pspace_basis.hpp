#pragma once

#include "psym/symplectic.hpp"

#include <iosfwd>
#include <vector>

namespace psym {

enum class Phase { Cos, Sin };

/// Real eigenfunction of A = -J d/dt on the twisted loop space:
/// values(t) = exp(lambda t J) v0, with values(tau) = P values(0).
struct BasisFunction {
    double lambda = 0.0;
    int mode_index = 0;   // j in lambda = (theta_l + 2 pi j) / tau
    int angle_index = 0;  // l, 0-based into PBoundary::angles
    Phase phase = Phase::Cos;
    Vec v0;

    Vec values(double t) const;
    /// d/dt values(t) = lambda J values(t).
    Vec derivative(double t) const;
};

struct Frequency {
    double lambda;
    int angle_index;
    int mode_index;
};

/// All lambda_{l,j} = (theta_l + 2 pi j) / tau with |j| <= j_range,
/// sorted ascending.
std::vector<Frequency> eigen_frequencies(const PBoundary& pb, int j_range);

/// Uniform trapezoid rule on [0, tau): exact for the tau-periodic
/// trigonometric integrands that appear in the reduced functionals.
struct Quadrature {
    std::vector<double> nodes;
    double weight = 0.0;
    int size() const { return static_cast<int>(nodes.size()); }
};

/// Truncated space W_m^- + ker_R(P - I) + W_m^+, L2-orthonormal on [0, tau].
/// Coordinates are ordered: negative block, zero block, positive block.
class GalerkinSpace {
public:
    GalerkinSpace(PBoundary pb, int m);

    const PBoundary& boundary() const { return pb_; }
    int m() const { return m_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int n_neg() const { return m_; }
    int n_zero() const { return dim() - 2 * m_; }
    int n_pos() const { return m_; }

    const std::vector<BasisFunction>& basis() const { return basis_; }
    const BasisFunction& operator[](int i) const { return basis_[i]; }

    /// Diagonal of A in this basis.
    Vec frequencies() const;
    double max_abs_frequency() const;

    /// N_t = max(256, 16 * max|lambda| * tau / 2 pi), rounded up to even.
    const Quadrature& quadrature() const { return quad_; }

    /// 2n x dim matrix of basis values at time t.
    Mat evaluation_matrix(double t) const;
    /// Cached evaluation matrices at the quadrature nodes.
    const std::vector<Mat>& node_matrices() const { return nodes_; }

    /// Coordinate of basis function (l, j, phase) or -1.
    int find(int angle_index, int mode_index, Phase phase) const;

private:
    PBoundary pb_;
    int m_ = 0;
    std::vector<BasisFunction> basis_;
    Quadrature quad_;
    std::vector<Mat> nodes_;
};

/// Equivalent of build_space: validates m and builds the space.
GalerkinSpace build_space(const PBoundary& pb, int m);

/// sum_i coeffs_i basis_i(t).
Vec synthesize(const GalerkinSpace& space, const Vec& coeffs, double t);
Vec synthesize_derivative(const GalerkinSpace& space, const Vec& coeffs, double t);

/// Maps coefficients of `from` into `to` by matching (l, j, phase);
/// components without a counterpart are dropped.
Vec embed_coefficients(const GalerkinSpace& from, const GalerkinSpace& to, const Vec& coeffs);

/// Time shift x(t) -> x(t + s) acting on coefficients (rotation of each
/// cos/sin pair by lambda s).
Vec shift_coefficients(const GalerkinSpace& space, const Vec& coeffs, double s);

/// CSV dump: t, then every basis function's components.
void write_basis_csv(std::ostream& os, const GalerkinSpace& space, int samples);

}  // namespace psym
