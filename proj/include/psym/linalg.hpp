#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace psym {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// The standard symplectic matrix J = (0, -I_n; I_n, 0) on R^{2n}.
Mat standard_J(int n);

/// Real 2n x 2n form of a complex n x n matrix under R^{2n} = C^n,
/// (p, q) <-> p + i q. J corresponds to multiplication by i.
Mat real_form(const CMat& m);

/// Inverse of real_form for matrices commuting with J.
CMat complex_form(const Mat& m);

/// Embeds a complex n-vector as a real 2n-vector (real parts first).
Vec embed(const CVec& z);

/// Planar rotation by angle a.
Mat rotation(double a);

/// Orthogonal-symplectic matrix with unitary part diag(exp(i theta_l)).
Mat from_rotation_angles(std::span<const double> angles);

double symplectic_defect(const Mat& m);
double orthogonality_defect(const Mat& m);

/// Number of singular values <= rel_tol * max(sigma_max, 1).
int rank_deficiency(const Mat& m, double rel_tol = 1e-8);

/// Orthonormal basis of the numerical kernel (same threshold as rank_deficiency).
Mat null_space(const Mat& m, double rel_tol = 1e-8);

Vec sorted_eigenvalues(const Mat& symmetric);

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace psym
