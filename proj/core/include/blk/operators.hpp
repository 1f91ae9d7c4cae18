#pragma once

#include <span>
#include <vector>

#include "blk/banded.hpp"
#include "blk/geometry.hpp"

namespace blk {

/// One boundary-closure row of a derivative stencil: weights over a
/// contiguous run of interior nodes, exact on the polynomial space
/// selected by the boundary conditions at the adjacent wall.
struct ClosureRow {
    int row = 0;
    int first_col = 0;
    std::vector<double> weights;
};

/// Banded finite-difference derivative in x over the interior nodes.
/// Interior rows carry the order-2 centered stencil; rows whose stencil
/// would leave the grid are closed one-sidedly using the wall conditions
/// (u = u_x = 0 at x=0; u = u_x = u_xx = 0 at x=L), which eliminates the
/// ghost values those conditions determine.
struct BandedOperator {
    int order = 0;
    BandedMatrix bands;
    std::vector<ClosureRow> bc_closure;

    void apply(std::span<const double> x, std::span<double> y) const { bands.apply(x, y); }
    std::vector<double> apply(std::span<const double> x) const { return bands.apply(x); }
};

BandedOperator build_derivative(int order, const Grid& grid, DomainKind bc_spec);

/// One-sided estimate of the order-th x-derivative at a wall where u
/// vanishes (only the Dirichlet condition is assumed): weights over the q
/// nearest interior values, exact on {x^1,...,x^q}, in units of h^-order.
/// For the right wall apply to mirrored values and flip the sign for odd
/// orders.
std::vector<double> wall_derivative_weights(int order, int q);

/// All five derivative operators for one grid + boundary spec.
struct DerivativeSet {
    BandedOperator d1, d2, d3, d4, d5;

    static DerivativeSet build(const Grid& grid, DomainKind bc_spec);
    const BandedOperator& get(int order) const;
};

/// Per-mode linear evolution operator of the sine-Galerkin reduction,
///   L_j = (D4 - 2 lambda_j D2 + lambda_j^2 I) + gamma (D2 - lambda_j I)
///         + (D3 - lambda_j D1) - D5,
/// plus a cached banded LU of (I + theta dt L_j) for the implicit solve.
class ModeOperator {
  public:
    ModeOperator() = default;
    ModeOperator(int j, double lambda, double gamma, BandedMatrix matrix)
        : j_(j), lambda_(lambda), gamma_(gamma), matrix_(std::move(matrix)) {}

    int mode() const { return j_; }
    double lambda() const { return lambda_; }
    double gamma() const { return gamma_; }
    const BandedMatrix& matrix() const { return matrix_; }

    /// Factor (I + theta dt L); reused across steps for fixed (theta, dt).
    void factor(double theta, double dt);
    bool factored_for(double theta, double dt) const {
        return lu_.factored() && theta == theta_ && dt == dt_;
    }
    double theta() const { return theta_; }
    double dt() const { return dt_; }
    const BandedLU& lu() const { return lu_; }

  private:
    int j_ = 0;
    double lambda_ = 0.0, gamma_ = 0.0;
    BandedMatrix matrix_;
    double theta_ = -1.0, dt_ = -1.0;
    BandedLU lu_;
};

ModeOperator build_mode_operator(int j, double lambda, double gamma, const Grid& grid,
                                 const DerivativeSet& derivs);

struct SolveInfo {
    double residual_rel = 0.0;
    bool warned = false;  // residual above 1e-8 * |rhs|
};

/// Solve (I + theta dt L_j) g = rhs using the cached factorization.
SolveInfo solve_implicit(const ModeOperator& op, std::span<const double> rhs,
                         std::span<double> out);

}  // namespace blk
