#include "psym/period.hpp"

#include "psym/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace psym {

namespace {

std::mutex fftw_planner_mutex;  // FFTW planning is not thread-safe

double sup_norm(const std::vector<Vec>& xs) {
    double s = 0.0;
    for (const auto& x : xs) s = std::max(s, x.norm());
    return s;
}

// Amplitude of harmonic h (in units of 2 pi / period) summed over components.
std::vector<double> harmonic_amplitudes(const ExtendedOrbit& orbit) {
    const int N = static_cast<int>(orbit.x.size());
    const int dim = static_cast<int>(orbit.x.front().size());
    const int H = N / 2 + 1;
    std::vector<double> amp2(H, 0.0);
    std::vector<double> in(N);
    std::vector<fftw_complex> out(H);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        plan = fftw_plan_dft_r2c_1d(N, in.data(), out.data(), FFTW_ESTIMATE);
    }
    for (int c = 0; c < dim; ++c) {
        for (int q = 0; q < N; ++q) in[q] = orbit.x[q][c];
        fftw_execute(plan);
        for (int h = 0; h < H; ++h) amp2[h] += out[h][0] * out[h][0] + out[h][1] * out[h][1];
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    for (auto& a : amp2) a = std::sqrt(a) / N;
    return amp2;
}

int gcd_of(const std::vector<int>& hs) {
    int g = 0;
    for (int h : hs) g = std::gcd(g, h);
    return g;
}

std::vector<int> active_set(const std::vector<double>& amp, double rel) {
    double peak = 0.0;
    for (std::size_t h = 1; h < amp.size(); ++h) peak = std::max(peak, amp[h]);
    std::vector<int> out;
    for (std::size_t h = 1; h < amp.size(); ++h)
        if (amp[h] > rel * peak) out.push_back(static_cast<int>(h));
    return out;
}

double period_defect(const ExtendedOrbit& orbit, double s) {
    const double scale = std::max(sup_norm(orbit.x), 1e-300);
    double worst = 0.0;
    for (std::size_t q = 0; q < orbit.t.size(); ++q)
        worst = std::max(worst, (orbit.eval(orbit.t[q] + s) - orbit.x[q]).norm());
    return worst / scale;
}

}  // namespace

std::string to_string(DichotomyBranch b) {
    switch (b) {
        case DichotomyBranch::KTau: return "k_tau";
        case DichotomyBranch::KTauOverKPlusOne: return "k_tau_over_k_plus_1";
        case DichotomyBranch::Other: return "other";
    }
    return "other";
}

ExtendedOrbit extend_function(std::function<Vec(double)> eval, double period, int samples) {
    if (!(period > 0.0) || samples < 4) throw Error(ErrorCode::DimensionMismatch, "bad extension grid");
    ExtendedOrbit out;
    out.period = period;
    out.eval = std::move(eval);
    out.t.resize(samples);
    out.x.resize(samples);
    for (int q = 0; q < samples; ++q) {
        out.t[q] = period * q / samples;
        out.x[q] = out.eval(out.t[q]);
    }
    out.wrap_defect = (out.eval(period) - out.x.front()).norm();
    return out;
}

ExtendedOrbit extend(const GalerkinSpace& space, const Vec& coeffs, int samples_per_tau) {
    const PBoundary& pb = space.boundary();
    const double tau = pb.tau;
    const int k = pb.k;
    std::vector<Mat> powers(k + 1, Mat::Identity(pb.dim(), pb.dim()));
    for (int j = 1; j <= k; ++j) powers[j] = pb.P * powers[j - 1];

    // x(t + j tau) = P^j x(t); the basis itself is only used on [0, tau]
    auto eval = [space_copy = space, coeffs, powers, tau, k](double t) -> Vec {
        const double period = k * tau;
        double r = std::fmod(t, period);
        if (r < 0.0) r += period;
        int j = static_cast<int>(std::floor(r / tau));
        j = std::clamp(j, 0, k - 1);
        const double s = r - j * tau;
        return powers[j] * synthesize(space_copy, coeffs, s);
    };
    return extend_function(eval, k * tau, k * samples_per_tau);
}

MinimalPeriod minimal_period(const ExtendedOrbit& orbit, const PeriodicityTolerances& tol) {
    if (orbit.x.empty()) throw Error(ErrorCode::ConstantOrbit, "empty orbit");
    const auto amp = harmonic_amplitudes(orbit);
    double peak = 0.0;
    for (std::size_t h = 1; h < amp.size(); ++h) peak = std::max(peak, amp[h]);
    if (peak <= 1e-12 * (1.0 + amp[0])) throw Error(ErrorCode::ConstantOrbit, "orbit has no active harmonics");

    MinimalPeriod out;
    out.active_harmonics = active_set(amp, tol.harmonic_rel);
    out.gcd = gcd_of(out.active_harmonics);
    out.T_min = orbit.period / out.gcd;

    // sensitivity of the active set to the threshold
    for (double factor : {10.0, 0.1}) {
        const int g = gcd_of(active_set(amp, tol.harmonic_rel * factor));
        if (g != out.gcd) {
            out.gcd_unstable = true;
            out.alternative_T = orbit.period / g;
            break;
        }
    }

    const double defect = period_defect(orbit, out.T_min);
    if (defect >= tol.shift_rel) {
        if (out.alternative_T && period_defect(orbit, *out.alternative_T) < tol.shift_rel) {
            std::swap(out.T_min, *out.alternative_T);
            out.gcd = static_cast<int>(std::lround(orbit.period / out.T_min));
        } else {
            throw Error(ErrorCode::ShiftTestFailed,
                        "period shift test failed at T_min = " + std::to_string(out.T_min) +
                            " (defect " + std::to_string(defect) + ")");
        }
    }
    return out;
}

double shift_defect(const ExtendedOrbit& orbit, const Mat& P, double s) {
    const double scale = std::max(sup_norm(orbit.x), 1e-300);
    double worst = 0.0;
    for (std::size_t q = 0; q < orbit.t.size(); ++q)
        worst = std::max(worst, (orbit.eval(orbit.t[q] + s) - P * orbit.x[q]).norm());
    return worst / scale;
}

PeriodReport minimal_p_symmetric_period(const ExtendedOrbit& orbit, const PBoundary& pb,
                                        const PeriodicityTolerances& tol) {
    const MinimalPeriod mp = minimal_period(orbit, tol);
    PeriodReport rep;
    rep.tolerances = tol;
    rep.T_min = mp.T_min;
    rep.gcd_unstable = mp.gcd_unstable;
    rep.k_tau = pb.k * pb.tau;

    double s = std::fmod(pb.tau, mp.T_min);
    if (s < tol.branch_rel * mp.T_min || s > mp.T_min * (1.0 - tol.branch_rel)) s = mp.T_min;
    rep.s_star = s;
    rep.shift_defect = shift_defect(orbit, pb.P, s);
    if (rep.shift_defect >= tol.shift_rel)
        throw Error(ErrorCode::ShiftTestFailed, "x(t + s*) != P x(t): defect " + std::to_string(rep.shift_defect));
    rep.T_psym = pb.k * s;

    const double kt = rep.k_tau;
    if (std::abs(rep.T_psym - kt) <= tol.branch_rel * kt)
        rep.branch = DichotomyBranch::KTau;
    else if (std::abs(rep.T_psym - kt / (pb.k + 1)) <= tol.branch_rel * kt)
        rep.branch = DichotomyBranch::KTauOverKPlusOne;
    else
        rep.branch = DichotomyBranch::Other;
    return rep;
}

}  // namespace psym
