#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "blk/errors.hpp"

namespace blk {

enum class DomainKind { rectangle, half_strip };

std::string to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);

/// Rectangle (0,L)x(0,B), or a right half-strip truncated at x = L.
/// weight_k is the exponent of the e^{kx} weight used on half-strips.
struct Domain {
    DomainKind kind = DomainKind::rectangle;
    double L = 0.0;  // x-extent (truncation length for half strips)
    double B = 0.0;  // y-extent
    double weight_k = 0.0;
};

/// Uniform interior x-grid and the y-mode configuration.
/// Interior nodes are x_i = (i+1) h, i = 0..nx-1, with h (nx+1) = L.
struct Grid {
    int nx = 0;
    double h = 0.0;
    int n_modes = 0;
    int ny_col = 0;  // collocation count, 2*n_modes by default (3/2-rule dealiasing)

    double x(int i) const { return h * static_cast<double>(i + 1); }
};

/// Orthonormal sine eigenbasis on (0,B):
///   omega_j(y) = sqrt(2/B) sin(j pi y / B),  -omega_j'' = lambda_j omega_j,
///   lambda_j = (j pi / B)^2.
/// Holds the basis sampled on the primary collocation grid and on a 2x
/// refined grid (used for sup- and L4-type functionals).
class SineBasis {
  public:
    SineBasis() = default;
    SineBasis(double B, int n_modes, int ny_col);

    int n_modes() const { return n_; }
    double length() const { return B_; }
    const std::vector<double>& lambdas() const { return lambda_; }
    double lambda(int j) const { return lambda_[j]; }  // j is 0-based (mode j+1)

    double omega(int j, double y) const {
        return std::sqrt(2.0 / B_) * std::sin(static_cast<double>(j + 1) * M_PI * y / B_);
    }
    /// Analytic second derivative: omega_j'' = -lambda_j omega_j.
    double omega_d2(int j, double y) const { return -lambda_[j] * omega(j, y); }

    int ny() const { return ny_; }
    double y(int m) const { return y_[m]; }
    double w_at(int j, int m) const { return w_[static_cast<std::size_t>(j) * ny_ + m]; }
    /// Quadrature weight of the collocation rule, B/(ny+1).
    double quad_weight() const { return B_ / static_cast<double>(ny_ + 1); }

    int ny_ref() const { return nyr_; }
    double y_ref(int m) const { return yr_[m]; }
    double w_ref_at(int j, int m) const { return wr_[static_cast<std::size_t>(j) * nyr_ + m]; }
    double quad_weight_ref() const { return B_ / static_cast<double>(nyr_ + 1); }

  private:
    int n_ = 0, ny_ = 0, nyr_ = 0;
    double B_ = 0.0;
    std::vector<double> lambda_;
    std::vector<double> y_, yr_;
    std::vector<double> w_, wr_;  // omega_j at collocation nodes, row-major [j][m]
};

struct Geometry {
    Domain domain;
    Grid grid;
    SineBasis basis;
};

/// Galerkin coefficients g_j(x_i) of u = sum_j omega_j(y) g_j(x,t),
/// stored row-major [mode][x-node], interior x-nodes only.
struct ModalState {
    int n_modes = 0;
    int nx = 0;
    double t = 0.0;
    std::vector<double> coeffs;

    ModalState() = default;
    ModalState(int n_modes_, int nx_)
        : n_modes(n_modes_), nx(nx_), coeffs(static_cast<std::size_t>(n_modes_) * nx_, 0.0) {}

    std::span<double> mode(int j) {
        return {coeffs.data() + static_cast<std::size_t>(j) * nx, static_cast<std::size_t>(nx)};
    }
    std::span<const double> mode(int j) const {
        return {coeffs.data() + static_cast<std::size_t>(j) * nx, static_cast<std::size_t>(nx)};
    }
    double& at(int j, int i) { return coeffs[static_cast<std::size_t>(j) * nx + i]; }
    double at(int j, int i) const { return coeffs[static_cast<std::size_t>(j) * nx + i]; }

    bool finite() const;
};

/// u(x_i, y_m) on the collocation grid, row-major [y][x].
struct PhysicalField {
    int nx = 0;
    int ny = 0;
    std::vector<double> values;

    PhysicalField() = default;
    PhysicalField(int nx_, int ny_)
        : nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * ny_, 0.0) {}

    double& at(int m, int i) { return values[static_cast<std::size_t>(m) * nx + i]; }
    double at(int m, int i) const { return values[static_cast<std::size_t>(m) * nx + i]; }
};

/// Validates parameters and assembles Domain + Grid + SineBasis.
Geometry build_domain(DomainKind kind, double L, double B, int nx, int n_modes, double weight_k);

/// u(x_i, y_m) = sum_j omega_j(y_m) g_j(x_i) on the primary collocation grid.
PhysicalField inverse_sine_transform(const ModalState& s, const SineBasis& basis);

/// Collocation quadrature of (u, omega_j) in y; exact for band-limited u.
ModalState forward_sine_transform(const PhysicalField& f, const SineBasis& basis, double t = 0.0);

/// Triple products a_{klj} = int_0^B omega_k omega_l omega_j dy (closed form).
/// Symmetric in all indices; zero whenever k+l+j is even.
class TripleProductTensor {
  public:
    TripleProductTensor() = default;
    TripleProductTensor(double B, int n_modes);

    int n_modes() const { return n_; }
    /// 0-based indices (mode k+1, l+1, j+1).
    double operator()(int k, int l, int j) const {
        return a_[(static_cast<std::size_t>(k) * n_ + l) * n_ + j];
    }

    /// Closed-form value for 1-based mode indices; any B.
    static double closed_form(double B, int k1, int l1, int j1);

  private:
    int n_ = 0;
    std::vector<double> a_;
};

}  // namespace blk
