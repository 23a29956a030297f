#include "psym/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace psym {

Mat standard_J(int n) {
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return J;
}

Mat real_form(const CMat& m) {
    const auto n = m.rows();
    Mat r(2 * n, 2 * m.cols());
    r.topLeftCorner(n, m.cols()) = m.real();
    r.topRightCorner(n, m.cols()) = -m.imag();
    r.bottomLeftCorner(n, m.cols()) = m.imag();
    r.bottomRightCorner(n, m.cols()) = m.real();
    return r;
}

CMat complex_form(const Mat& m) {
    const auto n = m.rows() / 2;
    const auto c = m.cols() / 2;
    CMat z(n, c);
    z.real() = m.topLeftCorner(n, c);
    z.imag() = m.bottomLeftCorner(n, c);
    return z;
}

Vec embed(const CVec& z) {
    Vec v(2 * z.size());
    v.head(z.size()) = z.real();
    v.tail(z.size()) = z.imag();
    return v;
}

Mat rotation(double a) {
    Mat R(2, 2);
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return R;
}

Mat from_rotation_angles(std::span<const double> angles) {
    const auto n = static_cast<Eigen::Index>(angles.size());
    CMat U = CMat::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) U(l, l) = std::polar(1.0, angles[l]);
    return real_form(U);
}

double symplectic_defect(const Mat& m) {
    const Mat J = standard_J(static_cast<int>(m.rows() / 2));
    return (m.transpose() * J * m - J).norm();
}

double orthogonality_defect(const Mat& m) {
    return (m.transpose() * m - Mat::Identity(m.rows(), m.cols())).norm();
}

namespace {

double kernel_threshold(const Vec& sv, double rel_tol) {
    const double smax = sv.size() ? sv.maxCoeff() : 0.0;
    return rel_tol * std::max(smax, 1.0);
}

}  // namespace

int rank_deficiency(const Mat& m, double rel_tol) {
    Eigen::JacobiSVD<Mat> svd(m);
    const Vec& sv = svd.singularValues();
    const double thr = kernel_threshold(sv, rel_tol);
    int count = static_cast<int>(m.cols() - sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] <= thr) ++count;
    return count;
}

Mat null_space(const Mat& m, double rel_tol) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const double thr = kernel_threshold(sv, rel_tol);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        if (i >= sv.size() || sv[i] <= thr) cols.push_back(i);
    Mat basis(m.cols(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) basis.col(c) = svd.matrixV().col(cols[c]);
    return basis;
}

Vec sorted_eigenvalues(const Mat& symmetric) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetric, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace psym
