#include "psym/index_engine.hpp"

#include "psym/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psym {

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kMaxD = 0.1;
constexpr double kInteriorZero = 1e-10;

}  // namespace

LinearSystem::LinearSystem(PBoundary pb, MatrixFunction B, std::string label)
    : pb_(std::move(pb)), B_(std::move(B)), label_(std::move(label)) {
    const int samples = 16;
    for (int s = 0; s <= samples; ++s) {
        const Mat b = B_(pb_.tau * s / samples);
        if (b.rows() != pb_.dim() || b.cols() != pb_.dim())
            throw Error(ErrorCode::DimensionMismatch, "B(t) must be 2n x 2n");
        if ((b - b.transpose()).norm() > 1e-10 * std::max(1.0, b.norm()))
            throw Error(ErrorCode::IncompatibleSystem, "B(t) is not symmetric");
    }
    const Mat b0 = B_(0.0);
    const Mat bt = B_(pb_.tau);
    const double defect = (pb_.P.transpose() * bt * pb_.P - b0).norm();
    if (defect > 1e-8 * std::max(1.0, b0.norm())) {
        std::ostringstream os;
        os << "|P^T B(tau) P - B(0)| = " << defect;
        throw Error(ErrorCode::IncompatibleSystem, os.str());
    }
}

LinearSystem LinearSystem::constant(PBoundary pb, const Mat& B, std::string label) {
    return LinearSystem(std::move(pb), [B](double) { return B; }, std::move(label));
}

Mat perturbation_matrix(const MatrixFunction& B, const GalerkinSpace& space) {
    const auto& quad = space.quadrature();
    const auto& E = space.node_matrices();
    Mat out = Mat::Zero(space.dim(), space.dim());
    for (int q = 0; q < quad.size(); ++q) out.noalias() += E[q].transpose() * B(quad.nodes[q]) * E[q];
    return symmetrize(out * quad.weight);
}

Mat form_matrix(const LinearSystem& sys, const GalerkinSpace& space) {
    Mat out = -perturbation_matrix(sys.function(), space);
    out.diagonal() += space.frequencies();
    return symmetrize(out);
}

double automatic_d(const Vec& eigenvalues) {
    double cluster_max = 0.0;
    double rest_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double a = std::abs(eigenvalues[i]);
        if (a < kClusterTol)
            cluster_max = std::max(cluster_max, a);
        else
            rest_min = std::min(rest_min, a);
    }
    if (!std::isfinite(rest_min)) return kMaxD;
    return std::min(kMaxD, 0.5 * (cluster_max + rest_min));
}

InertiaCount inertia_of_spectrum(const Vec& sorted_eigs, double d) {
    if (!(d > 0.0)) throw Error(ErrorCode::DimensionMismatch, "d must be positive");
    InertiaCount out;
    out.d = d;
    out.eigenvalues = sorted_eigs;
    for (Eigen::Index i = 0; i < sorted_eigs.size(); ++i) {
        const double mu = sorted_eigs[i];
        if (mu >= d)
            ++out.m_plus;
        else if (mu <= -d)
            ++out.m_minus;
        else
            ++out.m_zero;
        const double a = std::abs(mu);
        if (a > 0.5 * d * (1.0 + 1e-9) && a < 2.0 * d * (1.0 - 1e-9)) out.gap_violation = true;
    }
    return out;
}

InertiaCount inertia(const Mat& matrix, double d) {
    return inertia_of_spectrum(sorted_eigenvalues(symmetrize(matrix)), d);
}

std::vector<int> default_m_schedule(const PBoundary& pb) {
    const int base = 4 * pb.n * pb.k;
    return {base, 2 * base, 4 * base};
}

MaslovIndexPair maslov_p_index(const LinearSystem& sys, const std::vector<int>& m_schedule,
                               std::optional<double> d) {
    if (m_schedule.empty()) throw Error(ErrorCode::DimensionMismatch, "empty m schedule");
    for (std::size_t i = 1; i < m_schedule.size(); ++i)
        if (m_schedule[i] <= m_schedule[i - 1])
            throw Error(ErrorCode::DimensionMismatch, "m schedule must be strictly increasing");

    MaslovIndexPair out;
    out.provenance.m_schedule = m_schedule;
    bool first = true;
    bool stable = true;
    for (int m : m_schedule) {
        const GalerkinSpace space(sys.boundary(), m);
        const Vec eigs = sorted_eigenvalues(form_matrix(sys, space));
        const double dm = d ? *d : automatic_d(eigs);
        InertiaCount count = inertia_of_spectrum(eigs, dm);
        count.m = m;
        const int i_P = count.m_minus - m;
        const int nu_P = count.m_zero;
        if (count.gap_violation) {
            std::ostringstream os;
            os << "GapViolation at m = " << m << ": eigenvalue within [d/2, 2d], d = " << dm;
            out.provenance.diagnostics.push_back(os.str());
        }
        if (!first && (i_P != out.i_P || nu_P != out.nu_P)) stable = false;
        out.i_P = i_P;
        out.nu_P = nu_P;
        out.provenance.d = dm;
        out.provenance.counts.push_back(std::move(count));
        first = false;
    }
    out.provenance.stabilized = stable;
    if (!stable) out.provenance.diagnostics.push_back("NotStabilized: counts differ across the m schedule");
    return out;
}

Mat fundamental_solution(const MatrixFunction& B, int n, double t, double tol) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    const int dim = 2 * n;
    const Mat J = standard_J(n);
    State y(dim * dim, 0.0);
    for (int i = 0; i < dim; ++i) y[i * dim + i] = 1.0;
    if (t == 0.0) return Mat::Identity(dim, dim);

    auto rhs = [&](const State& s, State& ds, double time) {
        Eigen::Map<const Mat> Y(s.data(), dim, dim);
        Eigen::Map<Mat> dY(ds.data(), dim, dim);
        dY.noalias() = J * B(time) * Y;
    };
    try {
        auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
        std::size_t steps = 0;
        odeint::integrate_adaptive(stepper, rhs, y, 0.0, t, t * 1e-3, [&steps](const State&, double) {
            if (++steps > 1000000) throw Error(ErrorCode::IntegratorFailure, "step budget exhausted");
        });
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::IntegratorFailure, e.what());
    }
    Mat out = Eigen::Map<const Mat>(y.data(), dim, dim);
    if (!out.allFinite()) throw Error(ErrorCode::IntegratorFailure, "non-finite state");
    return out;
}

Mat monodromy(const LinearSystem& sys, double tol) {
    return fundamental_solution(sys.function(), sys.boundary().n, sys.boundary().tau, tol);
}

int nullity_from_monodromy(const Mat& gamma_tau, const PBoundary& pb) {
    return rank_deficiency(gamma_tau - pb.P, 1e-8);
}

SpectralFlowTrace spectral_flow_trace(const LinearSystem& sys, const GalerkinSpace& space, int steps) {
    if (steps < 50) throw Error(ErrorCode::DimensionMismatch, "spectral flow needs at least 50 steps");
    const Mat pert = perturbation_matrix(sys.function(), space);
    const Vec freq = space.frequencies();
    auto spectrum = [&](double s) {
        Mat m = -s * pert;
        m.diagonal() += freq;
        return sorted_eigenvalues(symmetrize(m));
    };

    // Prefer a grid with no interior eigenvalue at zero; a branch that stays
    // at zero on every refinement (e.g. an unperturbed kernel) is handled by
    // skipping its zero states below.
    SpectralFlowTrace trace;
    for (int refinement = 1; refinement <= 10; ++refinement) {
        const int intervals = refinement == 1 ? steps : steps * refinement + 1;
        trace = SpectralFlowTrace{};
        trace.refinement = refinement;
        trace.eigenvalues.resize(intervals + 1, space.dim());
        bool interior_zero = false;
        for (int g = 0; g <= intervals; ++g) {
            const double s = static_cast<double>(g) / intervals;
            const Vec mu = spectrum(s);
            trace.s.push_back(s);
            trace.eigenvalues.row(g) = mu.transpose();
            if (g > 0 && g < intervals)
                for (Eigen::Index i = 0; i < mu.size(); ++i)
                    if (std::abs(mu[i]) < kInteriorZero) interior_zero = true;
        }
        if (!interior_zero) break;
    }
    if (!trace.eigenvalues.allFinite())
        throw Error(ErrorCode::CrossingUnresolved, "non-finite eigenvalue along the family");

    const int last = static_cast<int>(trace.s.size()) - 1;
    const double d0 = automatic_d(trace.eigenvalues.row(0).transpose());
    const double d1 = automatic_d(trace.eigenvalues.row(last).transpose());
    // -1 negative, +1 non-negative, 0 undecided (interior point at zero)
    auto state = [&](int g, Eigen::Index i) {
        const double mu = trace.eigenvalues(g, i);
        if (g == 0) return mu <= -d0 ? -1 : 1;
        if (g == last) return mu <= -d1 ? -1 : 1;
        if (std::abs(mu) < kInteriorZero) return 0;
        return mu < 0.0 ? -1 : 1;
    };
    int flow = 0;
    for (Eigen::Index i = 0; i < trace.eigenvalues.cols(); ++i) {
        int previous = state(0, i);
        for (int g = 1; g <= last; ++g) {
            const int current = state(g, i);
            if (current == 0) continue;
            if (previous == 1 && current == -1) ++flow;
            if (previous == -1 && current == 1) --flow;
            previous = current;
        }
    }
    trace.flow = flow;
    return trace;
}

int spectral_flow(const LinearSystem& sys, const GalerkinSpace& space, int steps) {
    return spectral_flow_trace(sys, space, steps).flow;
}

MatrixFunction transformed_system(const LinearSystem& sys) {
    const PBoundary pb = sys.boundary();
    const Mat L = gamma_P_generator(pb);
    const Mat J = standard_J(pb.n);
    const MatrixFunction B = sys.function();
    return [pb, L, J, B](double t) -> Mat {
        const Mat g = gamma_P_path(pb, t);
        const Mat gdot = L * g / pb.tau;
        return symmetrize(g.transpose() * J * gdot + g.transpose() * B(t) * g);
    };
}

}  // namespace psym
