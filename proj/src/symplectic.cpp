#include "psym/symplectic.hpp"

#include "psym/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace psym {

namespace {

constexpr double kAngleSnap = 1e-12;

double normalize_angle(double theta) {
    if (theta <= -std::numbers::pi + kAngleSnap) return std::numbers::pi;
    if (std::abs(theta) < kAngleSnap) return 0.0;
    return theta;
}

// Angles used for the logarithm; angle pi needs the caller's branch.
std::vector<double> log_angles(const PBoundary& pb) {
    if (!pb.angles)
        throw Error(ErrorCode::NotOrthogonalSymplectic,
                    "gamma_P requires an orthogonal-symplectic P");
    std::vector<double> out;
    out.reserve(pb.angles->size());
    for (const auto& mode : *pb.angles) {
        if (std::abs(mode.theta - std::numbers::pi) < 1e-10) {
            switch (pb.pi_branch) {
                case PiBranch::Unset:
                    throw Error(ErrorCode::LogarithmBranchAmbiguous,
                                "unitary eigenvalue -1 needs an explicit pi_branch");
                case PiBranch::Plus: out.push_back(std::numbers::pi); break;
                case PiBranch::Minus: out.push_back(-std::numbers::pi); break;
            }
        } else {
            out.push_back(mode.theta);
        }
    }
    return out;
}

CMat eigenvector_matrix(const PBoundary& pb) {
    const auto& modes = *pb.angles;
    CMat Q(pb.n, pb.n);
    for (int l = 0; l < pb.n; ++l) Q.col(l) = modes[l].xi;
    return Q;
}

Mat path_with_weights(const PBoundary& pb, const std::vector<cplx>& diag) {
    const CMat Q = eigenvector_matrix(pb);
    CMat D = CMat::Zero(pb.n, pb.n);
    for (int l = 0; l < pb.n; ++l) D(l, l) = diag[l];
    return real_form(Q * D * Q.adjoint());
}

}  // namespace

PBoundary validate_P(const Mat& P, double tau, int k_max, PiBranch branch) {
    if (P.rows() != P.cols() || P.rows() % 2 != 0 || P.rows() == 0)
        throw Error(ErrorCode::DimensionMismatch, "P must be square with even dimension");
    if (!(tau > 0.0)) throw Error(ErrorCode::DimensionMismatch, "tau must be positive");
    if (k_max < 1) throw Error(ErrorCode::DimensionMismatch, "k_max must be >= 1");

    const double sdef = symplectic_defect(P);
    if (sdef > kSymplecticTol) {
        std::ostringstream os;
        os << "|P^T J P - J| = " << sdef;
        throw Error(ErrorCode::NotSymplectic, os.str());
    }

    const auto dim = P.rows();
    const Mat I = Mat::Identity(dim, dim);
    Mat power = I;
    int order = 0;
    for (int j = 1; j <= k_max; ++j) {
        power = power * P;
        const double defect = (power - I).norm();
        if (defect <= kOrderTol) {
            order = j;
            break;
        }
        if (defect <= kOrderSeparation) {
            std::ostringstream os;
            os << "|P^" << j << " - I| = " << defect << " is neither identity nor separated from it";
            throw Error(ErrorCode::NotFiniteOrder, os.str());
        }
    }
    if (order == 0) {
        std::ostringstream os;
        os << "no j <= " << k_max << " with P^j = I";
        throw Error(ErrorCode::NotFiniteOrder, os.str());
    }

    PBoundary pb;
    pb.n = static_cast<int>(dim / 2);
    pb.P = P;
    pb.tau = tau;
    pb.k = order;
    pb.fixed_basis = null_space(P - I);
    pb.pi_branch = branch;
    if (orthogonality_defect(P) <= kOrthogonalTol) pb.angles = unitary_identification(pb);
    return pb;
}

PBoundary boundary_from_angles(std::span<const double> angles, double tau, PiBranch branch) {
    return validate_P(from_rotation_angles(angles), tau, 64, branch);
}

std::vector<UnitaryMode> unitary_identification(const PBoundary& pb) {
    const Mat& P = pb.P;
    if (orthogonality_defect(P) > kOrthogonalTol)
        throw Error(ErrorCode::NotOrthogonalSymplectic,
                    "P is not orthogonal; supply a symplectic conjugation to an orthogonal representative");
    const Mat J = standard_J(pb.n);
    if ((P * J - J * P).norm() > kOrthogonalTol)
        throw Error(ErrorCode::NotOrthogonalSymplectic, "P does not commute with J");

    const CMat U = complex_form(P);
    Eigen::ComplexSchur<CMat> schur(U);
    const CMat& T = schur.matrixT();
    const CMat& Q = schur.matrixU();

    std::vector<UnitaryMode> modes(pb.n);
    for (int l = 0; l < pb.n; ++l) {
        modes[l].theta = normalize_angle(std::arg(T(l, l)));
        modes[l].xi = Q.col(l).normalized();
    }
    std::stable_sort(modes.begin(), modes.end(),
                     [](const UnitaryMode& a, const UnitaryMode& b) { return a.theta < b.theta; });
    return modes;
}

Mat gamma_P_generator(const PBoundary& pb) {
    const auto theta = log_angles(pb);
    std::vector<cplx> diag(theta.size());
    for (std::size_t l = 0; l < theta.size(); ++l) diag[l] = cplx(0.0, theta[l]);
    return path_with_weights(pb, diag);
}

Mat gamma_P_path(const PBoundary& pb, double t) {
    const auto theta = log_angles(pb);
    std::vector<cplx> diag(theta.size());
    for (std::size_t l = 0; l < theta.size(); ++l) diag[l] = std::polar(1.0, theta[l] * t / pb.tau);
    return path_with_weights(pb, diag);
}

Mat gamma_P_velocity(const PBoundary& pb, double t) {
    return gamma_P_generator(pb) * gamma_P_path(pb, t) / pb.tau;
}

Mat conjugate_to_orthogonal(const Mat& P, const Mat& S) {
    if (symplectic_defect(S) > 1e-10)
        throw Error(ErrorCode::NotSymplectic, "conjugating matrix must be symplectic");
    const Mat rep = S.inverse() * P * S;
    if (orthogonality_defect(rep) > 1e-8)
        throw Error(ErrorCode::NotOrthogonalSymplectic, "S^{-1} P S is not orthogonal");
    return rep;
}

}  // namespace psym
