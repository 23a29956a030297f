#pragma once

#include "psym/pspace_basis.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace psym {

using MatrixFunction = std::function<Mat(double)>;

/// Linear Hamiltonian system y' = J B(t) y on [0, tau] with twist P.
class LinearSystem {
public:
    /// Checks symmetry of B at samples and P^T B(tau) P = B(0).
    LinearSystem(PBoundary pb, MatrixFunction B, std::string label = {});

    static LinearSystem constant(PBoundary pb, const Mat& B, std::string label = {});

    const PBoundary& boundary() const { return pb_; }
    Mat B(double t) const { return B_(t); }
    const MatrixFunction& function() const { return B_; }
    const std::string& label() const { return label_; }

private:
    PBoundary pb_;
    MatrixFunction B_;
    std::string label_;
};

struct InertiaCount {
    int m_plus = 0;
    int m_zero = 0;
    int m_minus = 0;
    double d = 0.0;
    int m = 0;
    Vec eigenvalues;
    bool gap_violation = false;

    int total() const { return m_plus + m_zero + m_minus; }
};

struct IndexProvenance {
    std::vector<int> m_schedule;
    std::vector<InertiaCount> counts;
    double d = 0.0;
    bool stabilized = false;
    std::vector<std::string> diagnostics;
};

struct MaslovIndexPair {
    int i_P = 0;
    int nu_P = 0;
    IndexProvenance provenance;
};

/// Matrix of z -> int_0^tau (-J z' - B z, z) dt in the space's basis.
Mat form_matrix(const LinearSystem& sys, const GalerkinSpace& space);

/// Matrix of z -> int_0^tau (B z, z) dt alone.
Mat perturbation_matrix(const MatrixFunction& B, const GalerkinSpace& space);

/// Counts eigenvalues in [d, inf), (-d, d), (-inf, -d].
InertiaCount inertia(const Mat& matrix, double d);
InertiaCount inertia_of_spectrum(const Vec& sorted_eigs, double d);

/// Gap threshold placed between the near-zero cluster (|mu| < 1e-6) and the
/// rest of the spectrum, capped at 0.1.
double automatic_d(const Vec& eigenvalues);

/// Default truncation schedule {4nk, 8nk, 16nk}.
std::vector<int> default_m_schedule(const PBoundary& pb);

/// (i_P, nu_P) from the stabilized Galerkin inertia: i_P = m^- - m, nu_P = m^0.
MaslovIndexPair maslov_p_index(const LinearSystem& sys, const std::vector<int>& m_schedule,
                               std::optional<double> d = std::nullopt);

/// Fundamental solution at tau, adaptive Runge-Kutta-Fehlberg 7(8).
Mat monodromy(const LinearSystem& sys, double tol = 1e-12);
/// Fundamental solution at time t in [0, tau].
Mat fundamental_solution(const MatrixFunction& B, int n, double t, double tol = 1e-12);

/// dim ker(gamma(tau) - P).
int nullity_from_monodromy(const Mat& gamma_tau, const PBoundary& pb);

struct SpectralFlowTrace {
    int flow = 0;
    std::vector<double> s;
    Mat eigenvalues;  // rows: grid points, cols: tracked eigenvalues (sorted)
    int refinement = 1;
};

/// Net number of eigenvalues of A - sB crossing zero downward on s in [0, 1].
int spectral_flow(const LinearSystem& sys, const GalerkinSpace& space, int steps = 100);
SpectralFlowTrace spectral_flow_trace(const LinearSystem& sys, const GalerkinSpace& space,
                                      int steps = 100);

/// B~(t) = gamma_P^T J gamma_P' + gamma_P^T B gamma_P, a tau-periodic system.
MatrixFunction transformed_system(const LinearSystem& sys);

}  // namespace psym
