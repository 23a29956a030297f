#include "psym/variational.hpp"

#include "psym/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace psym {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Superquadratic: return "superquadratic";
        case Regime::AsymptoticallyLinearDeg: return "asymptotically_linear_deg";
        case Regime::AsymptoticallyLinear: return "asymptotically_linear";
        case Regime::Subquadratic: return "subquadratic";
    }
    return "superquadratic";
}

Regime regime_from_string(const std::string& s) {
    for (Regime r : {Regime::Superquadratic, Regime::AsymptoticallyLinearDeg, Regime::AsymptoticallyLinear,
                     Regime::Subquadratic})
        if (to_string(r) == s) return r;
    throw Error(ErrorCode::ConfigError, "regime: unknown value '" + s + "'");
}

// ---------------------------------------------------------------------------
// functional

ReducedFunctional::ReducedFunctional(SpacePtr space, HamiltonianModel model, ActionKind kind, double lambda)
    : space_(std::move(space)), model_(std::move(model)), kind_(kind), lambda_(lambda) {
    if (!space_) throw Error(ErrorCode::DimensionMismatch, "null Galerkin space");
    if (model_.n() != space_->boundary().n)
        throw Error(ErrorCode::DimensionMismatch, "model dimension differs from the boundary dimension");
    freq_ = space_->frequencies();
}

double ReducedFunctional::quadratic_part(const Vec& a) const {
    return 0.5 * k() * (freq_.array() * a.array().square()).sum();
}

double ReducedFunctional::hamiltonian_integral(const Vec& a) const {
    const auto& nodes = space_->node_matrices();
    double s = 0.0;
    for (const auto& E : nodes) s += model_.H(E * a);
    return s * space_->quadrature().weight;
}

double ReducedFunctional::value(const Vec& a) const {
    const double q = quadratic_part(a);
    const double h = k() * hamiltonian_integral(a);
    return kind_ == ActionKind::F ? q - h : lambda_ * h - q;
}

Vec ReducedFunctional::gradient(const Vec& a) const {
    const auto& nodes = space_->node_matrices();
    Vec h = Vec::Zero(dim());
    for (const auto& E : nodes) h.noalias() += E.transpose() * model_.grad(E * a);
    h *= space_->quadrature().weight;
    const Vec q = freq_.cwiseProduct(a);
    return kind_ == ActionKind::F ? Vec(k() * (q - h)) : Vec(k() * (lambda_ * h - q));
}

Mat ReducedFunctional::hessian(const Vec& a) const {
    const auto& nodes = space_->node_matrices();
    Mat h = Mat::Zero(dim(), dim());
    for (const auto& E : nodes) h.noalias() += E.transpose() * model_.hess(E * a) * E;
    h *= space_->quadrature().weight;
    const Mat q = freq_.asDiagonal();
    Mat out = kind_ == ActionKind::F ? Mat(k() * (q - h)) : Mat(k() * (lambda_ * h - q));
    return symmetrize(out);
}

Vec ReducedFunctional::hessian_vector(const Vec& a, const Vec& v) const {
    const auto& nodes = space_->node_matrices();
    Vec h = Vec::Zero(dim());
    for (const auto& E : nodes) h.noalias() += E.transpose() * (model_.hess(E * a) * (E * v));
    h *= space_->quadrature().weight;
    const Vec q = freq_.cwiseProduct(v);
    return kind_ == ActionKind::F ? Vec(k() * (q - h)) : Vec(k() * (lambda_ * h - q));
}

ReducedFunctional ReducedFunctional::with_space(SpacePtr space) const {
    return ReducedFunctional(std::move(space), model_, kind_, lambda_);
}

ReducedFunctional assemble(SpacePtr space, const HamiltonianModel& model, ActionKind kind,
                           std::optional<double> lambda) {
    if (kind == ActionKind::G && !lambda)
        throw Error(ErrorCode::MissingContext, "the g functional needs lambda");
    return ReducedFunctional(std::move(space), model, kind, lambda.value_or(1.0));
}

LinkingSplit linking_split(const GalerkinSpace& space, const Mat& h) {
    const PBoundary& pb = space.boundary();
    if (h.rows() != pb.dim() || h.cols() != pb.dim())
        throw Error(ErrorCode::DimensionMismatch, "split matrix has the wrong size");
    if ((h * pb.P - pb.P * h).norm() > 1e-8 * std::max(1.0, h.norm()))
        throw Error(ErrorCode::IncompatibleSystem, "split matrix does not commute with P");
    const Mat M = form_matrix(LinearSystem::constant(pb, h), space);
    const Vec eigs = sorted_eigenvalues(M);
    LinkingSplit out;
    out.counts = inertia_of_spectrum(eigs, automatic_d(eigs));
    out.counts.m = space.m();
    // h commutes with P, so cross terms only couple coordinates of equal
    // frequency; the diagonal sign decides the side.
    for (int i = 0; i < space.dim(); ++i) (M(i, i) >= out.counts.d ? out.Y : out.X).push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// orbit helpers

namespace {

// Coordinates come in (Cos, Sin) pairs sharing a frequency.
std::vector<std::pair<int, int>> mode_pairs(const GalerkinSpace& space) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i + 1 < space.dim(); i += 2) out.emplace_back(i, i + 1);
    return out;
}

}  // namespace

Vec mode_energies(const GalerkinSpace& space, const Vec& coeffs) {
    const auto pairs = mode_pairs(space);
    Vec q(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        q[i] = coeffs[pairs[i].first] * coeffs[pairs[i].first] + coeffs[pairs[i].second] * coeffs[pairs[i].second];
    return q;
}

Vec canonical_phase(const GalerkinSpace& space, const Vec& coeffs) {
    int best = -1;
    double best_e = 0.0;
    for (int i = 0; i + 1 < space.dim(); i += 2) {
        if (space[i].lambda == 0.0) continue;
        const double e = coeffs[i] * coeffs[i] + coeffs[i + 1] * coeffs[i + 1];
        if (e > best_e * (1.0 + 1e-9)) {
            best_e = e;
            best = i;
        }
    }
    if (best < 0 || best_e == 0.0) return coeffs;
    const double phi = std::atan2(coeffs[best + 1], coeffs[best]);
    Vec out = shift_coefficients(space, coeffs, -phi / space[best].lambda);
    out[best + 1] = 0.0;  // exact zero after the rotation
    return out;
}

void update_diagnostics(OrbitSolution& orbit, const HamiltonianModel& model) {
    const GalerkinSpace& space = *orbit.space;
    const PBoundary& pb = space.boundary();
    const int N = space.quadrature().size();
    const double s = orbit.kind == ActionKind::G ? orbit.lambda : 1.0;
    const Mat J = standard_J(pb.n);
    orbit.t.resize(N + 1);
    orbit.samples.resize(N + 1);
    orbit.ode_residual = 0.0;
    orbit.sup_norm = 0.0;
    for (int q = 0; q <= N; ++q) {
        const double t = pb.tau * q / N;
        orbit.t[q] = t;
        const Vec x = synthesize(space, orbit.coeffs, t);
        orbit.samples[q] = x;
        const Vec r = synthesize_derivative(space, orbit.coeffs, t) - s * J * model.grad(x);
        orbit.ode_residual = std::max(orbit.ode_residual, r.lpNorm<Eigen::Infinity>());
        orbit.sup_norm = std::max(orbit.sup_norm, x.norm());
    }
    orbit.boundary_defect = (orbit.samples.back() - pb.P * orbit.samples.front()).norm();
    double spread = 0.0;
    for (const auto& x : orbit.samples) spread = std::max(spread, (x - orbit.samples.front()).norm());
    orbit.is_constant = spread < 1e-7 * (1.0 + orbit.samples.front().norm());
}

// ---------------------------------------------------------------------------
// saddle search

namespace {

struct Deflation {
    std::vector<Vec> known;  // mode energies of accepted solutions
    double power = 2.0;
    double shift = 1.0;

    // gradient of log M with respect to the coefficients
    Vec grad_log(const GalerkinSpace& space, const Vec& a) const {
        Vec g = Vec::Zero(a.size());
        if (known.empty()) return g;
        const Vec q = mode_energies(space, a);
        const auto pairs = mode_pairs(space);
        for (const auto& qj : known) {
            const Vec diff = q - qj;
            const double dist = std::max(diff.norm(), 1e-300);
            const double inv = std::pow(dist, -power);
            const double m = inv + shift;
            const Vec dq = -power * inv / (dist * dist) * diff;  // d m / d q
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                g[pairs[p].first] += dq[p] * 2.0 * a[pairs[p].first] / m;
                g[pairs[p].second] += dq[p] * 2.0 * a[pairs[p].second] / m;
            }
        }
        return g;
    }

    double factor(const GalerkinSpace& space, const Vec& a) const {
        double m = 1.0;
        if (known.empty()) return m;
        const Vec q = mode_energies(space, a);
        for (const auto& qj : known) m *= std::pow(std::max((q - qj).norm(), 1e-300), -power) + shift;
        return m;
    }
};

enum class NewtonOutcome { Converged, Stalled, Diverged };

struct NewtonResult {
    Vec a;
    double grad_norm = 0.0;
    NewtonOutcome outcome = NewtonOutcome::Stalled;
    int iterations = 0;
};

// Levenberg-Marquardt on grad = 0 using the Hessian eigenbasis: the damping
// starts negligible (pure Newton) and grows whenever |M grad| fails to drop.
NewtonResult newton(const ReducedFunctional& rf, Vec a, const Deflation& defl, double tol, int max_iter) {
    NewtonResult res;
    const GalerkinSpace& space = rf.space();
    auto merit = [&](const Vec& x, const Vec& g) { return defl.factor(space, x) * g.norm(); };
    Vec g = rf.gradient(a);
    double damping = 1e-20;  // relative to the squared spectral scale
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it;
        const double gn = g.norm();
        if (!std::isfinite(gn) || a.norm() > 1e6) {
            res.outcome = NewtonOutcome::Diverged;
            res.a = a;
            res.grad_norm = gn;
            return res;
        }
        if (gn < tol) {
            res.outcome = NewtonOutcome::Converged;
            res.a = a;
            res.grad_norm = gn;
            return res;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(rf.hessian(a));
        const Vec& mu = es.eigenvalues();
        const double scale2 = std::max(mu.cwiseAbs2().maxCoeff(), 1e-28);
        const Vec proj = es.eigenvectors().transpose() * g;
        const Vec glog = defl.known.empty() ? Vec() : defl.grad_log(space, a);
        const double m0 = merit(a, g);

        bool improved = false;
        for (int attempt = 0; attempt < 24 && !improved; ++attempt) {
            const double eta2 = damping * scale2;
            Vec coef(mu.size());
            for (Eigen::Index i = 0; i < mu.size(); ++i) coef[i] = -mu[i] / (mu[i] * mu[i] + eta2) * proj[i];
            Vec delta = es.eigenvectors() * coef;
            if (!defl.known.empty()) {
                const double denom = 1.0 - glog.dot(delta);
                if (std::abs(denom) > 1e-12) delta /= denom;
            }
            const double cap = 10.0 * (1.0 + a.norm());
            if (delta.norm() > cap) delta *= cap / delta.norm();
            const Vec trial = a + delta;
            const Vec tg = rf.gradient(trial);
            const double tm = merit(trial, tg);
            if (std::isfinite(tm) && tm < (1.0 - 1e-4) * m0) {
                a = trial;
                g = tg;
                improved = true;
                damping = std::max(damping * 0.1, 1e-20);
            } else {
                damping = damping < 1e-12 ? 1e-12 : damping * 10.0;
            }
        }
        if (!improved) break;
    }
    res.a = a;
    res.grad_norm = g.norm();
    res.outcome = res.grad_norm < tol ? NewtonOutcome::Converged : NewtonOutcome::Stalled;
    return res;
}

// First r > 0 where d/dr value(r e) changes sign, refined by TOMS 748.
std::optional<double> ray_stationary_radius(const ReducedFunctional& rf, const Vec& e) {
    auto dphi = [&](double r) { return rf.gradient(r * e).dot(e); };
    double r_prev = 1e-3;
    double d_prev = dphi(r_prev);
    for (double r = r_prev * 1.25; r < 1e4; r *= 1.25) {
        const double d = dphi(r);
        if (!std::isfinite(d)) return std::nullopt;
        if ((d_prev > 0.0) != (d > 0.0) && d_prev != 0.0) {
            boost::uintmax_t iters = 200;
            auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)); };
            const auto bracket = boost::math::tools::toms748_solve(dphi, r_prev, r, d_prev, d, tol, iters);
            return 0.5 * (bracket.first + bracket.second);
        }
        r_prev = r;
        d_prev = d;
    }
    return std::nullopt;
}

struct Seed {
    Vec a;
    std::string origin;
};

std::vector<Seed> build_seeds(const ReducedFunctional& rf, const LinkingSplit& split, const SaddleOptions& opts,
                              std::vector<std::string>& diag) {
    const GalerkinSpace& space = rf.space();
    std::vector<Seed> seeds;
    std::vector<std::pair<int, double>> rays;  // (coordinate, radius)
    // Y directions first; X rays only matter when the nonlinearity bends the
    // ray profile back (asymptotically linear splits)
    std::vector<int> order = split.Y;
    order.insert(order.end(), split.X.begin(), split.X.end());
    for (int i : order) {
        if (static_cast<int>(rays.size()) >= opts.max_ray_directions) break;
        if (space[i].phase != Phase::Cos || space[i].lambda == 0.0) continue;
        Vec e = Vec::Zero(space.dim());
        e[i] = 1.0;
        const auto r = ray_stationary_radius(rf, e);
        if (!r) continue;
        rays.emplace_back(i, *r);
        Seed s{Vec::Zero(space.dim()), "ray:" + std::to_string(i)};
        s.a[i] = *r;
        seeds.push_back(std::move(s));
    }
    {
        std::ostringstream os;
        os << "ray seeds: " << rays.size() << " of " << order.size() / 2 << " mode directions";
        diag.push_back(os.str());
    }

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<std::size_t> pick(0, rays.empty() ? 0 : rays.size() - 1);
    const double rho = opts.rho > 0.0 ? opts.rho : (rays.empty() ? 1.0 : rays.front().second);
    for (int s = 0; s < opts.random_starts; ++s) {
        Vec a = Vec::Zero(space.dim());
        if (!rays.empty()) {
            const auto& r1 = rays[pick(rng)];
            const auto& r2 = rays[pick(rng)];
            a[r1.first] = r1.second * (0.7 + 0.3 * std::abs(nd(rng)));
            a[r2.first + 1] += 0.3 * r2.second * nd(rng);
        } else {
            for (int i : split.Y) a[i] = rho * nd(rng) / std::sqrt(static_cast<double>(split.Y.size()));
        }
        for (int i : split.X) a[i] = 0.05 * rho * nd(rng);
        seeds.push_back({a, "random:" + std::to_string(s)});
    }
    return seeds;
}

}  // namespace

SaddleResult find_saddle(const ReducedFunctional& rf, const LinkingSplit& split, const SaddleOptions& opts) {
    SaddleResult out;
    const GalerkinSpace& space = rf.space();
    const PBoundary& pb = space.boundary();
    const double alpha_min = opts.alpha_min.value_or(1e-6 * pb.k * pb.tau);
    auto seeds = build_seeds(rf, split, opts, out.diagnostics);
    out.starts = static_cast<int>(seeds.size());

    Deflation defl{{}, opts.deflation_power, opts.deflation_shift};
    int stalled = 0;
    const int workers = std::max(1, opts.workers);

    auto accept = [&](const NewtonResult& nr, int start_id) {
        if (nr.outcome == NewtonOutcome::Diverged) {
            ++out.diverged;
            return;
        }
        if (nr.outcome == NewtonOutcome::Stalled) {
            ++stalled;
            std::ostringstream os;
            os << "start " << start_id << " (" << seeds[start_id].origin << ") stalled at |grad| = " << nr.grad_norm
               << ", |a| = " << nr.a.norm();
            out.diagnostics.push_back(os.str());
            return;
        }
        if (nr.a.norm() < 1e-6) {
            ++out.converged_to_zero;
            return;
        }
        OrbitSolution orb;
        orb.space = rf.space_ptr();
        orb.kind = rf.kind();
        orb.lambda = rf.lambda();
        orb.coeffs = canonical_phase(space, nr.a);
        orb.grad_norm = rf.gradient(orb.coeffs).norm();
        orb.action = rf.value(orb.coeffs);
        orb.start_id = start_id;
        update_diagnostics(orb, rf.model());
        if (orb.is_constant || orb.action < alpha_min) {
            ++out.converged_to_zero;
            return;
        }
        const Vec q = mode_energies(space, orb.coeffs);
        for (const auto& known : defl.known)
            if ((q - known).norm() <= opts.dedupe_tol * (1.0 + known.norm())) return;
        defl.known.push_back(q);
        out.orbits.push_back(std::move(orb));
    };

    for (std::size_t b = 0; b < seeds.size(); b += workers) {
        const std::size_t e = std::min(seeds.size(), b + workers);
        std::vector<NewtonResult> results(e - b);
        if (workers == 1) {
            results[0] = newton(rf, seeds[b].a, defl, opts.grad_tol, opts.max_newton);
        } else {
            std::vector<std::future<NewtonResult>> fut;
            for (std::size_t i = b; i < e; ++i)
                fut.push_back(std::async(std::launch::async, [&, i] {
                    return newton(rf, seeds[i].a, defl, opts.grad_tol, opts.max_newton);
                }));
            for (std::size_t i = 0; i < fut.size(); ++i) results[i] = fut[i].get();
        }
        for (std::size_t i = b; i < e; ++i) accept(results[i - b], static_cast<int>(i));
    }

    // continuation into larger truncations
    for (auto& orb : out.orbits) {
        orb.continuation.emplace_back(space.m(), orb.action);
        ReducedFunctional cur = rf;
        for (int m : opts.continuation) {
            if (m <= orb.space->m()) continue;
            auto next_space = std::make_shared<const GalerkinSpace>(pb, m);
            ReducedFunctional next = cur.with_space(next_space);
            const Vec seed = embed_coefficients(*orb.space, *next_space, orb.coeffs);
            const NewtonResult nr = newton(next, seed, Deflation{}, opts.grad_tol, opts.max_newton);
            if (nr.outcome != NewtonOutcome::Converged) {
                out.diagnostics.push_back("continuation to m = " + std::to_string(m) + " stalled for start " +
                                          std::to_string(orb.start_id));
                break;
            }
            orb.space = next_space;
            orb.coeffs = canonical_phase(*next_space, nr.a);
            orb.grad_norm = next.gradient(orb.coeffs).norm();
            orb.action = next.value(orb.coeffs);
            orb.continuation.emplace_back(m, orb.action);
            update_diagnostics(orb, rf.model());
            cur = next;
        }
    }

    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const OrbitSolution& a, const OrbitSolution& b) { return a.action < b.action; });
    {
        std::ostringstream os;
        os << "starts " << out.starts << ", accepted " << out.orbits.size() << ", to zero/filtered "
           << out.converged_to_zero << ", diverged " << out.diverged << ", stalled " << stalled;
        out.diagnostics.push_back(os.str());
    }
    if (out.orbits.empty()) {
        if (stalled > 0 && stalled == out.starts)
            throw Error(ErrorCode::NonstationaryLimit, out.diagnostics.back());
        throw Error(ErrorCode::NoSaddleFound, out.diagnostics.back());
    }
    return out;
}

// ---------------------------------------------------------------------------
// refinement and certification

Vec refine_collocation(const ReducedFunctional& rf, const Vec& coeffs, int max_iter, double tol) {
    const GalerkinSpace& space = rf.space();
    const auto& nodes = space.node_matrices();
    const int N = static_cast<int>(nodes.size());
    const int dim2 = space.boundary().dim();
    const double s = rf.ode_scale();
    const Vec freq = space.frequencies();

    // J (E Lambda a - s H'(E a)) is the residual x' - s J H'(x); J is orthogonal
    auto residual = [&](const Vec& a) {
        Vec r(N * dim2);
        for (int q = 0; q < N; ++q)
            r.segment(q * dim2, dim2) = nodes[q] * freq.cwiseProduct(a) - s * rf.model().grad(nodes[q] * a);
        return r;
    };
    Vec a = coeffs;
    Vec r = residual(a);
    const double start = r.lpNorm<Eigen::Infinity>();
    double best = start;
    Vec best_a = a;
    for (int it = 0; it < max_iter && best > tol; ++it) {
        Mat Jac(N * dim2, space.dim());
        for (int q = 0; q < N; ++q)
            Jac.middleRows(q * dim2, dim2) =
                nodes[q] * freq.asDiagonal() - s * rf.model().hess(nodes[q] * a) * nodes[q];
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(Jac);
        cod.setThreshold(1e-12);
        const Vec delta = cod.solve(-r);
        if (!delta.allFinite()) break;
        a += delta;
        r = residual(a);
        const double now = r.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(now) || now > 1e3 * std::max(start, 1e-12))
            throw Error(ErrorCode::RefinementDiverged, "collocation residual grew to " + std::to_string(now));
        if (now < best) {
            best = now;
            best_a = a;
        } else {
            break;
        }
    }
    return best_a;
}

namespace {

std::vector<int> orbit_index_schedule(const OrbitSolution& orbit, const CertifyOptions& opts) {
    if (!opts.index_schedule.empty()) return opts.index_schedule;
    const auto base = default_m_schedule(orbit.space->boundary());
    int m = std::max(base.front(), orbit.space->m());
    m += m % 2;
    return {m, 2 * m, 4 * m};
}

void add(Certificate& c, std::string name, bool passed, std::string detail) {
    c.checks.push_back({std::move(name), passed, std::move(detail)});
}

}  // namespace

OrbitSolution certify(OrbitSolution orbit, const ReducedFunctional& rf, const CertifyOptions& opts) {
    const GalerkinSpace& space = *orbit.space;
    const PBoundary& pb = space.boundary();
    const ReducedFunctional frf = rf.space_ptr() == orbit.space ? rf : rf.with_space(orbit.space);
    const HamiltonianModel& model = frf.model();

    update_diagnostics(orbit, model);
    if (!orbit.is_constant) {
        const double before = orbit.ode_residual;
        const Vec refined = canonical_phase(space, refine_collocation(frf, orbit.coeffs));
        OrbitSolution trial = orbit;
        trial.coeffs = refined;
        update_diagnostics(trial, model);
        if (trial.ode_residual < before) orbit = std::move(trial);
    }
    orbit.action = frf.value(orbit.coeffs);
    orbit.grad_norm = frf.gradient(orbit.coeffs).norm();

    Certificate cert;
    const double alpha_min = opts.alpha_min > 0.0 ? opts.alpha_min : 1e-6 * pb.k * pb.tau;
    add(cert, "nonconstant", !orbit.is_constant, orbit.is_constant ? "orbit is constant" : "sup spread above 1e-7");
    add(cert, "ode_residual", orbit.ode_residual < opts.residual_tol,
        "sup |x' - s J H'(x)| = " + std::to_string(orbit.ode_residual));
    add(cert, "boundary", orbit.boundary_defect <= 1e-8, "|x(tau) - P x(0)| = " + std::to_string(orbit.boundary_defect));
    add(cert, "action", orbit.action >= alpha_min,
        "action " + std::to_string(orbit.action) + " vs alpha_min " + std::to_string(alpha_min));
    bool truncation_ok = true;
    if (model.truncation) {
        truncation_ok = orbit.sup_norm < model.truncation->K;
        add(cert, "truncation", truncation_ok,
            "sup |x| = " + std::to_string(orbit.sup_norm) + " vs K = " + std::to_string(model.truncation->K));
    }
    if (orbit.is_constant) {
        orbit.certificate = cert;
        return orbit;
    }

    // index of the linearization B(t) = s H''(x(t))
    const double s = frf.ode_scale();
    const GalerkinSpace space_copy = space;
    const Vec coeffs = orbit.coeffs;
    const HamiltonianModel model_copy = model;
    LinearSystem sys(pb, [space_copy, coeffs, model_copy, s](double t) -> Mat {
        return s * model_copy.hess(synthesize(space_copy, coeffs, t));
    }, "linearization");
    orbit.index_pair = maslov_p_index(sys, orbit_index_schedule(orbit, opts));
    const auto& ip = *orbit.index_pair;
    add(cert, "index_stabilized", ip.provenance.stabilized, "i_P = " + std::to_string(ip.i_P) + ", nu_P = " +
                                                                std::to_string(ip.nu_P));
    try {
        const int nul = nullity_from_monodromy(monodromy(sys), pb);
        add(cert, "nullity_cross_check", nul == ip.nu_P,
            "dim ker(gamma(tau) - P) = " + std::to_string(nul) + ", Galerkin nu_P = " + std::to_string(ip.nu_P));
    } catch (const Error& e) {
        add(cert, "nullity_cross_check", false, e.what());
    }

    const int dk = pb.fixed_dim();
    bool window_ok = false;
    std::ostringstream w;
    switch (opts.regime) {
        case Regime::Superquadratic: {
            int bound = dk + 1;
            if (opts.index_ctx.h0) bound = std::min(bound, opts.index_ctx.h0->i_P + opts.index_ctx.h0->nu_P + 1);
            window_ok = ip.i_P <= bound;
            w << "i_P(x) <= " << bound;
            break;
        }
        case Regime::AsymptoticallyLinearDeg:
            window_ok = ip.i_P <= dk + 1;
            w << "i_P(x) <= " << dk + 1;
            break;
        case Regime::AsymptoticallyLinear:
            if (opts.index_ctx.h_inf) {
                const int s_inf = opts.index_ctx.h_inf->i_P + opts.index_ctx.h_inf->nu_P;
                window_ok = s_inf - ip.nu_P <= ip.i_P && ip.i_P <= s_inf;
                w << s_inf - ip.nu_P << " <= i_P(x) <= " << s_inf;
            } else {
                w << "MissingContext: index of h_inf";
            }
            break;
        case Regime::Subquadratic:
            window_ok = ip.i_P <= dk;
            w << "i_P(x) <= " << dk;
            break;
    }
    cert.window = w.str();
    add(cert, "index_window", window_ok, cert.window + ", i_P(x) = " + std::to_string(ip.i_P));

    if (opts.check_hypotheses) {
        OrbitSamples os{orbit.t, orbit.samples, s};
        orbit.hypotheses = check_hypotheses(model, pb, os, opts.index_ctx);
        for (const char* name : {"HX1", "HX2"}) {
            const auto* e = orbit.hypotheses->find(name);
            add(cert, name, e && e->status == HypothesisStatus::Holds, e ? e->evidence : "missing");
        }
    }

    try {
        const ExtendedOrbit ext = extend(space, orbit.coeffs);
        orbit.period_report = minimal_p_symmetric_period(ext, pb);
        add(cert, "dichotomy", orbit.period_report->branch != DichotomyBranch::Other,
            "branch " + to_string(orbit.period_report->branch));
    } catch (const Error& e) {
        add(cert, "dichotomy", false, std::string(to_string(e.code())) + ": " + e.what());
    }

    cert.certified = true;
    for (const auto& c : cert.checks) {
        const bool required = c.name == "nonconstant" || c.name == "ode_residual" || c.name == "boundary" ||
                              c.name == "action" || c.name == "truncation" || c.name == "index_window";
        if (required && !c.passed) cert.certified = false;
    }
    orbit.certificate = cert;
    return orbit;
}

// ---------------------------------------------------------------------------
// lambda_tau

LambdaTauEstimate estimate_lambda_tau(const GalerkinSpace& space, const HamiltonianModel& model, double a1) {
    const PBoundary& pb = space.boundary();
    LambdaTauEstimate out;
    out.a1 = a1;
    int first_pos = -1;
    for (int i = 0; i < space.dim(); ++i)
        if (space[i].lambda > 0.0 && space[i].phase == Phase::Cos) {
            first_pos = i;
            break;
        }
    if (first_pos < 0) throw Error(ErrorCode::InsufficientModes, "no positive mode for the Omega set");

    const ReducedFunctional rf(std::make_shared<const GalerkinSpace>(space), model, ActionKind::G, 1.0);
    const Vec freq = space.frequencies();
    std::vector<int> neg, zero;
    for (int i = 0; i < space.dim(); ++i) {
        if (freq[i] < 0.0) neg.push_back(i);
        if (freq[i] == 0.0) zero.push_back(i);
    }

    Vec base = Vec::Zero(space.dim());
    base[first_pos] = 1.0 / std::sqrt(freq[first_pos]);
    // u-variables: u_i = sqrt|lambda_i| a_i on the negative block, a_i on the zero block
    const int nv = static_cast<int>(neg.size() + zero.size());
    Vec weight(nv);
    for (std::size_t i = 0; i < neg.size(); ++i) weight[i] = std::sqrt(-freq[neg[i]]);
    for (std::size_t i = 0; i < zero.size(); ++i) weight[neg.size() + i] = 1.0;
    auto coeffs_of = [&](const Vec& u) {
        Vec a = base;
        for (std::size_t i = 0; i < neg.size(); ++i) a[neg[i]] = u[i] / weight[i];
        for (std::size_t i = 0; i < zero.size(); ++i) a[zero[i]] = u[neg.size() + i];
        return a;
    };
    auto project = [&](Vec u) {
        auto clip = [](auto seg, double radius) {
            const double nn = seg.norm();
            if (nn > radius) seg *= radius / nn;
        };
        clip(u.head(neg.size()), std::sqrt(out.a0));
        clip(u.tail(zero.size()), a1);
        return u;
    };
    const double k = pb.k;
    auto phi = [&](const Vec& u) { return k * rf.hamiltonian_integral(coeffs_of(u)); };
    auto dphi = [&](const Vec& u) {
        // gradient of k int H, i.e. the G-gradient at lambda = 1 without the quadratic part
        const Vec a = coeffs_of(u);
        const Vec g = rf.gradient(a) + k * freq.cwiseProduct(a);
        Vec gu(nv);
        for (int i = 0; i < nv; ++i) gu[i] = g[i < static_cast<int>(neg.size()) ? neg[i] : zero[i - neg.size()]] / weight[i];
        return gu;
    };

    Vec u = Vec::Zero(nv);
    double f = phi(u);
    double step = 1.0;
    for (int it = 0; it < 2000 && nv > 0; ++it) {
        const Vec g = dphi(u);
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            const Vec trial = project(u - step * g);
            const double ft = phi(trial);
            if (ft <= f - 1e-4 * (u - trial).squaredNorm() / step) {
                moved = (u - trial).norm() > 1e-13;
                u = trial;
                f = ft;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    out.sigma = f;
    out.minimizer = coeffs_of(u);
    if (!(out.sigma > 0.0)) throw Error(ErrorCode::SigmaNonpositive, "sigma = " + std::to_string(out.sigma));
    out.lambda_tau = (0.5 * k * out.norm_A + 1.0) / out.sigma + 1.0;
    return out;
}

}  // namespace psym
