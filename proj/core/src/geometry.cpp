#include "blk/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace blk {

std::string to_string(DomainKind k) {
    return k == DomainKind::rectangle ? "rectangle" : "half_strip";
}

DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "rectangle") return DomainKind::rectangle;
    if (s == "half_strip") return DomainKind::half_strip;
    throw invalid_parameter_error("unknown domain kind: " + s);
}

SineBasis::SineBasis(double B, int n_modes, int ny_col) : n_(n_modes), ny_(ny_col), B_(B) {
    lambda_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        const double k = static_cast<double>(j + 1) * M_PI / B_;
        lambda_[j] = k * k;
    }
    nyr_ = 2 * ny_ + 1;  // refined grid for sup / quartic quadrature
    y_.resize(ny_);
    yr_.resize(nyr_);
    for (int m = 0; m < ny_; ++m) y_[m] = B_ * static_cast<double>(m + 1) / (ny_ + 1);
    for (int m = 0; m < nyr_; ++m) yr_[m] = B_ * static_cast<double>(m + 1) / (nyr_ + 1);
    w_.resize(static_cast<std::size_t>(n_) * ny_);
    wr_.resize(static_cast<std::size_t>(n_) * nyr_);
    for (int j = 0; j < n_; ++j) {
        for (int m = 0; m < ny_; ++m) w_[static_cast<std::size_t>(j) * ny_ + m] = omega(j, y_[m]);
        for (int m = 0; m < nyr_; ++m)
            wr_[static_cast<std::size_t>(j) * nyr_ + m] = omega(j, yr_[m]);
    }
}

bool ModalState::finite() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](double v) { return std::isfinite(v); });
}

Geometry build_domain(DomainKind kind, double L, double B, int nx, int n_modes, double weight_k) {
    if (!(L > 0.0) || !(B > 0.0))
        throw invalid_geometry_error("domain dimensions must be positive (L=" +
                                     std::to_string(L) + ", B=" + std::to_string(B) + ")");
    if (nx < 16) throw invalid_geometry_error("nx must be at least 16");
    if (n_modes < 1) throw invalid_geometry_error("n_modes must be at least 1");
    if (kind == DomainKind::rectangle && weight_k != 0.0)
        throw invalid_parameter_error("weight_k must be 0 on rectangles");
    if (kind == DomainKind::half_strip && (weight_k < 0.0 || weight_k > 0.25))
        throw invalid_parameter_error("weight_k must lie in [0, 1/4] on the half strip");

    Geometry g;
    g.domain = Domain{kind, L, B, weight_k};
    g.grid.nx = nx;
    g.grid.h = L / static_cast<double>(nx + 1);
    g.grid.n_modes = n_modes;
    g.grid.ny_col = 2 * n_modes;  // 3/2-rule for the quadratic nonlinearity
    g.basis = SineBasis(B, n_modes, g.grid.ny_col);
    return g;
}

PhysicalField inverse_sine_transform(const ModalState& s, const SineBasis& basis) {
    if (s.n_modes != basis.n_modes()) throw dimension_error("inverse transform: mode mismatch");
    PhysicalField f(s.nx, basis.ny());
    for (int m = 0; m < f.ny; ++m) {
        double* row = &f.values[static_cast<std::size_t>(m) * f.nx];
        for (int j = 0; j < s.n_modes; ++j) {
            const double w = basis.w_at(j, m);
            const double* gj = s.coeffs.data() + static_cast<std::size_t>(j) * s.nx;
            for (int i = 0; i < s.nx; ++i) row[i] += w * gj[i];
        }
    }
    return f;
}

ModalState forward_sine_transform(const PhysicalField& f, const SineBasis& basis, double t) {
    if (f.ny != basis.ny()) throw dimension_error("forward transform: collocation mismatch");
    ModalState s(basis.n_modes(), f.nx);
    s.t = t;
    const double qw = basis.quad_weight();
    for (int j = 0; j < s.n_modes; ++j) {
        double* gj = s.coeffs.data() + static_cast<std::size_t>(j) * s.nx;
        for (int m = 0; m < f.ny; ++m) {
            const double w = qw * basis.w_at(j, m);
            const double* row = &f.values[static_cast<std::size_t>(m) * f.nx];
            for (int i = 0; i < f.nx; ++i) gj[i] += w * row[i];
        }
    }
    return s;
}

namespace {
// int_0^pi cos(m s) sin(j s) ds
double cos_sin_integral(int m, int j) {
    m = std::abs(m);
    if (m == j) return 0.0;
    const int par = (j + m) % 2;
    if (par == 0) return 0.0;
    return 2.0 * static_cast<double>(j) / static_cast<double>(j * j - m * m);
}
}  // namespace

double TripleProductTensor::closed_form(double B, int k1, int l1, int j1) {
    // a = (2/B)^{3/2} (B/pi) * 1/2 [ I(k-l, j) - I(k+l, j) ]
    const double scale = std::pow(2.0 / B, 1.5) * (B / M_PI) * 0.5;
    return scale * (cos_sin_integral(k1 - l1, j1) - cos_sin_integral(k1 + l1, j1));
}

TripleProductTensor::TripleProductTensor(double B, int n_modes) : n_(n_modes) {
    if (n_modes < 1) throw invalid_parameter_error("triple products need n_modes >= 1");
    a_.resize(static_cast<std::size_t>(n_) * n_ * n_);
    for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l)
            for (int j = 0; j < n_; ++j)
                a_[(static_cast<std::size_t>(k) * n_ + l) * n_ + j] =
                    closed_form(B, k + 1, l + 1, j + 1);
}

}  // namespace blk
