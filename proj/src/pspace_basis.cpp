#include "psym/pspace_basis.hpp"

#include "psym/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

namespace psym {

namespace {

constexpr int kMaxModes = 1 << 20;

bool is_zero_angle(double theta) { return theta == 0.0; }

}  // namespace

Vec BasisFunction::values(double t) const {
    const int n = static_cast<int>(v0.size() / 2);
    if (lambda == 0.0) return v0;
    const double c = std::cos(lambda * t);
    const double s = std::sin(lambda * t);
    // exp(lambda t J) v0 = cos v0 + sin J v0, with J (p, q) = (-q, p)
    Vec out(v0.size());
    out.head(n) = c * v0.head(n) - s * v0.tail(n);
    out.tail(n) = c * v0.tail(n) + s * v0.head(n);
    return out;
}

Vec BasisFunction::derivative(double t) const {
    const int n = static_cast<int>(v0.size() / 2);
    if (lambda == 0.0) return Vec::Zero(v0.size());
    const Vec x = values(t);
    Vec out(v0.size());
    out.head(n) = -lambda * x.tail(n);
    out.tail(n) = lambda * x.head(n);
    return out;
}

std::vector<Frequency> eigen_frequencies(const PBoundary& pb, int j_range) {
    if (!pb.angles)
        throw Error(ErrorCode::NotOrthogonalSymplectic, "frequencies need the unitary angles of P");
    std::vector<Frequency> out;
    for (int l = 0; l < pb.n; ++l) {
        const double theta = (*pb.angles)[l].theta;
        for (int j = -j_range; j <= j_range; ++j)
            out.push_back({(theta + 2.0 * std::numbers::pi * j) / pb.tau, l, j});
    }
    std::sort(out.begin(), out.end(), [](const Frequency& a, const Frequency& b) {
        return std::tie(a.lambda, a.angle_index, a.mode_index) <
               std::tie(b.lambda, b.angle_index, b.mode_index);
    });
    return out;
}

GalerkinSpace::GalerkinSpace(PBoundary pb, int m) : pb_(std::move(pb)), m_(m) {
    if (!pb_.angles)
        throw Error(ErrorCode::NotOrthogonalSymplectic,
                    "Galerkin spaces are built for orthogonal-symplectic P only");
    if (m < 1) throw Error(ErrorCode::EvenMRequired, "m must be positive");
    if (m % 2 != 0) {
        std::ostringstream os;
        os << "m = " << m << " would split a complex mode; m counts real dimensions";
        throw Error(ErrorCode::EvenMRequired, os.str());
    }
    if (m > kMaxModes) throw Error(ErrorCode::InsufficientModes, "m too large");

    const int j_range = m / 2 + 2;
    const auto freqs = eigen_frequencies(pb_, j_range);
    std::vector<Frequency> neg, pos;
    for (const auto& f : freqs) {
        if (f.lambda < 0.0) neg.push_back(f);
        if (f.lambda > 0.0) pos.push_back(f);
    }
    auto by_magnitude = [](const Frequency& a, const Frequency& b) {
        return std::make_tuple(std::abs(a.lambda), a.angle_index) <
               std::make_tuple(std::abs(b.lambda), b.angle_index);
    };
    std::sort(neg.begin(), neg.end(), by_magnitude);
    std::sort(pos.begin(), pos.end(), by_magnitude);
    const std::size_t complex_modes = static_cast<std::size_t>(m / 2);
    if (neg.size() < complex_modes || pos.size() < complex_modes)
        throw Error(ErrorCode::InsufficientModes, "frequency enumeration exhausted");

    const double scale = 1.0 / std::sqrt(pb_.tau);
    const Mat J = standard_J(pb_.n);
    auto push_mode = [&](double lambda, int l, int j) {
        const Vec v = embed((*pb_.angles)[l].xi) * scale;
        basis_.push_back({lambda, j, l, Phase::Cos, v});
        basis_.push_back({lambda, j, l, Phase::Sin, J * v});
    };
    for (std::size_t i = 0; i < complex_modes; ++i) push_mode(neg[i].lambda, neg[i].angle_index, neg[i].mode_index);
    for (int l = 0; l < pb_.n; ++l)
        if (is_zero_angle((*pb_.angles)[l].theta)) push_mode(0.0, l, 0);
    for (std::size_t i = 0; i < complex_modes; ++i) push_mode(pos[i].lambda, pos[i].angle_index, pos[i].mode_index);

    const double max_freq = max_abs_frequency();
    int nodes = std::max(256, static_cast<int>(std::ceil(16.0 * max_freq * pb_.tau / (2.0 * std::numbers::pi))));
    nodes += nodes % 2;
    quad_.weight = pb_.tau / nodes;
    quad_.nodes.resize(nodes);
    nodes_.reserve(nodes);
    for (int q = 0; q < nodes; ++q) {
        quad_.nodes[q] = q * quad_.weight;
        nodes_.push_back(evaluation_matrix(quad_.nodes[q]));
    }
}

Vec GalerkinSpace::frequencies() const {
    Vec f(dim());
    for (int i = 0; i < dim(); ++i) f[i] = basis_[i].lambda;
    return f;
}

double GalerkinSpace::max_abs_frequency() const {
    double out = 0.0;
    for (const auto& b : basis_) out = std::max(out, std::abs(b.lambda));
    return out;
}

Mat GalerkinSpace::evaluation_matrix(double t) const {
    Mat E(pb_.dim(), dim());
    for (int i = 0; i < dim(); ++i) E.col(i) = basis_[i].values(t);
    return E;
}

int GalerkinSpace::find(int angle_index, int mode_index, Phase phase) const {
    for (int i = 0; i < dim(); ++i) {
        const auto& b = basis_[i];
        if (b.angle_index == angle_index && b.mode_index == mode_index && b.phase == phase) return i;
    }
    return -1;
}

GalerkinSpace build_space(const PBoundary& pb, int m) { return GalerkinSpace(pb, m); }

Vec synthesize(const GalerkinSpace& space, const Vec& coeffs, double t) {
    if (coeffs.size() != space.dim())
        throw Error(ErrorCode::DimensionMismatch, "coefficient vector length differs from dim");
    Vec x = Vec::Zero(space.boundary().dim());
    for (int i = 0; i < space.dim(); ++i)
        if (coeffs[i] != 0.0) x += coeffs[i] * space[i].values(t);
    return x;
}

Vec synthesize_derivative(const GalerkinSpace& space, const Vec& coeffs, double t) {
    if (coeffs.size() != space.dim())
        throw Error(ErrorCode::DimensionMismatch, "coefficient vector length differs from dim");
    Vec x = Vec::Zero(space.boundary().dim());
    for (int i = 0; i < space.dim(); ++i)
        if (coeffs[i] != 0.0) x += coeffs[i] * space[i].derivative(t);
    return x;
}

Vec embed_coefficients(const GalerkinSpace& from, const GalerkinSpace& to, const Vec& coeffs) {
    if (coeffs.size() != from.dim())
        throw Error(ErrorCode::DimensionMismatch, "coefficient vector length differs from dim");
    Vec out = Vec::Zero(to.dim());
    for (int i = 0; i < from.dim(); ++i) {
        const auto& b = from[i];
        const int target = to.find(b.angle_index, b.mode_index, b.phase);
        if (target >= 0) out[target] = coeffs[i];
    }
    return out;
}

Vec shift_coefficients(const GalerkinSpace& space, const Vec& coeffs, double s) {
    Vec out = coeffs;
    // basis entries come in (Cos, Sin) pairs of the same mode
    for (int i = 0; i + 1 < space.dim(); i += 2) {
        const double lambda = space[i].lambda;
        const double c = std::cos(lambda * s), sn = std::sin(lambda * s);
        out[i] = coeffs[i] * c - coeffs[i + 1] * sn;
        out[i + 1] = coeffs[i] * sn + coeffs[i + 1] * c;
    }
    return out;
}

void write_basis_csv(std::ostream& os, const GalerkinSpace& space, int samples) {
    const int comps = space.boundary().dim();
    os << "t";
    for (int i = 0; i < space.dim(); ++i)
        for (int c = 0; c < comps; ++c) os << ",e" << i << "_" << c + 1;
    os << "\n";
    os.precision(17);
    for (int s = 0; s <= samples; ++s) {
        const double t = space.boundary().tau * s / samples;
        os << t;
        for (int i = 0; i < space.dim(); ++i) {
            const Vec v = space[i].values(t);
            for (int c = 0; c < comps; ++c) os << "," << v[c];
        }
        os << "\n";
    }
}

}  // namespace psym
