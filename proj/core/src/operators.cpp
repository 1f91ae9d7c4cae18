#include "blk/operators.hpp"

#include <array>
#include <cmath>

namespace blk {

namespace {

struct Stencil {
    int half_width;
    std::vector<double> w;  // offsets -half_width..half_width, divided by h^order later
};

Stencil centered_stencil(int order) {
    switch (order) {
        case 1: return {1, {-0.5, 0.0, 0.5}};
        case 2: return {1, {1.0, -2.0, 1.0}};
        case 3: return {2, {-0.5, 1.0, 0.0, -1.0, 0.5}};
        case 4: return {2, {1.0, -4.0, 6.0, -4.0, 1.0}};
        case 5: return {3, {-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5}};
        default: throw invalid_parameter_error("derivative order must be in 1..5");
    }
}

/// Dense solve of a small Vandermonde-type system in extended precision.
std::vector<double> solve_small(std::vector<long double> a, std::vector<long double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i * n + k]) > std::fabs(a[p * n + k])) p = i;
        if (a[p * n + k] == 0.0L) throw solver_error("closure stencil system is singular");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const long double f = a[i * n + k] / a[k * n + k];
            for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        long double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * static_cast<long double>(x[j]);
        x[i] = static_cast<double>(s / a[i * n + i]);
    }
    return x;
}

long double deriv_monomial(int power, int order, long double xi) {
    if (power < order) return 0.0L;
    long double f = 1.0L;
    for (int k = 0; k < order; ++k) f *= static_cast<long double>(power - k);
    return f * std::pow(xi, static_cast<long double>(power - order));
}

/// Left closure at interior row i (x = (i+1) h): weights over nodes
/// x_1..x_q, exact on {x^2,...,x^{q+1}} (the polynomials with
/// f(0) = f'(0) = 0), in units of h^{-order}.
std::vector<double> left_closure(int order, int row, int q) {
    std::vector<long double> a(static_cast<std::size_t>(q) * q), b(q);
    for (int r = 0; r < q; ++r) {
        const int power = r + 2;
        for (int m = 0; m < q; ++m)
            a[r * q + m] = std::pow(static_cast<long double>(m + 1), power);
        b[r] = deriv_monomial(power, order, static_cast<long double>(row + 1));
    }
    return solve_small(std::move(a), std::move(b));
}

/// Right closure at interior row i, in the mirrored variable
/// eta = (L - x)/h: weights over the last q nodes (eta = q..1), exact on
/// {eta^3,...,eta^{q+2}} (f = f' = f'' = 0 at the wall). Weight m
/// multiplies the node at interior index nx-q+m; eta of that node is q-m.
std::vector<double> right_closure(int order, int row_from_end, int q) {
    std::vector<long double> a(static_cast<std::size_t>(q) * q), b(q);
    const long double sign = (order % 2 == 0) ? 1.0L : -1.0L;  // d/dx = -d/deta
    for (int r = 0; r < q; ++r) {
        const int power = r + 3;
        for (int m = 0; m < q; ++m)
            a[r * q + m] = std::pow(static_cast<long double>(q - m), power);
        b[r] = sign * deriv_monomial(power, order, static_cast<long double>(row_from_end + 1));
    }
    return solve_small(std::move(a), std::move(b));
}

}  // namespace

std::vector<double> wall_derivative_weights(int order, int q) {
    if (order < 1 || order > 5 || q < order + 1)
        throw invalid_parameter_error("wall_derivative_weights: need q >= order + 1");
    std::vector<long double> a(static_cast<std::size_t>(q) * q), b(q);
    for (int r = 0; r < q; ++r) {
        const int power = r + 1;
        for (int m = 0; m < q; ++m)
            a[static_cast<std::size_t>(r) * q + m] = std::pow(static_cast<long double>(m + 1), power);
        long double fact = 1.0L;
        for (int k = 2; k <= order; ++k) fact *= k;
        b[r] = (power == order) ? fact : 0.0L;
    }
    return solve_small(std::move(a), std::move(b));
}

BandedOperator build_derivative(int order, const Grid& grid, DomainKind /*bc_spec*/) {
    // Both domain kinds carry the same discrete closure set: two wall
    // conditions at x=0, three at x=L (artificial on truncated strips).
    const Stencil st = centered_stencil(order);
    const int nx = grid.nx;
    const int w = st.half_width;
    // closure stencil widths: order+1 points keeps the closure one order
    // more accurate than formally required
    const int q_left = (order == 3) ? 4 : (order == 4) ? 5 : (order == 5) ? 6 : 0;
    const int q_right = q_left;

    const int reach = std::max(w, std::max(q_left - 1, q_right - 1));
    if (nx < 2 * reach + 2) throw invalid_geometry_error("nx too small for the widest stencil");

    const double scale = 1.0 / std::pow(grid.h, order);
    const int kl = (order == 5) ? 5 : (order == 4) ? 4 : (order == 3) ? 3 : 1;
    BandedOperator op;
    op.order = order;
    op.bands = BandedMatrix(nx, kl, kl);

    const int n_left = std::max(0, w - 1);   // rows 0..w-2 reference a ghost on the left
    const int n_right = std::max(0, w - 1);  // mirrored on the right

    for (int i = 0; i < nx; ++i) {
        if (i < n_left || i >= nx - n_right) continue;
        // centered row; boundary values u(0) = u(L) = 0 drop out
        for (int s = -w; s <= w; ++s) {
            const int col = i + s;
            if (col < 0 || col >= nx) continue;
            op.bands.add(i, col, st.w[s + w] * scale);
        }
    }

    for (int i = 0; i < n_left; ++i) {
        ClosureRow cr;
        cr.row = i;
        cr.first_col = 0;
        cr.weights = left_closure(order, i, q_left);
        for (double& v : cr.weights) v *= scale;
        for (int m = 0; m < q_left; ++m) op.bands.set(i, m, cr.weights[m]);
        op.bc_closure.push_back(std::move(cr));
    }
    for (int r = 0; r < n_right; ++r) {
        const int i = nx - 1 - r;
        ClosureRow cr;
        cr.row = i;
        cr.first_col = nx - q_right;
        cr.weights = right_closure(order, r, q_right);
        for (double& v : cr.weights) v *= scale;
        for (int m = 0; m < q_right; ++m) op.bands.set(i, nx - q_right + m, cr.weights[m]);
        op.bc_closure.push_back(std::move(cr));
    }
    return op;
}

DerivativeSet DerivativeSet::build(const Grid& grid, DomainKind bc_spec) {
    DerivativeSet s;
    s.d1 = build_derivative(1, grid, bc_spec);
    s.d2 = build_derivative(2, grid, bc_spec);
    s.d3 = build_derivative(3, grid, bc_spec);
    s.d4 = build_derivative(4, grid, bc_spec);
    s.d5 = build_derivative(5, grid, bc_spec);
    return s;
}

const BandedOperator& DerivativeSet::get(int order) const {
    switch (order) {
        case 1: return d1;
        case 2: return d2;
        case 3: return d3;
        case 4: return d4;
        case 5: return d5;
        default: throw invalid_parameter_error("derivative order must be in 1..5");
    }
}

ModeOperator build_mode_operator(int j, double lambda, double gamma, const Grid& grid,
                                 const DerivativeSet& derivs) {
    BandedMatrix m(grid.nx, 5, 5);
    m.axpy(1.0, derivs.d4.bands);
    m.axpy(-2.0 * lambda + gamma, derivs.d2.bands);
    m.axpy(1.0, derivs.d3.bands);
    m.axpy(-lambda, derivs.d1.bands);
    m.axpy(-1.0, derivs.d5.bands);
    m.add_identity(lambda * lambda - gamma * lambda);
    return ModeOperator(j, lambda, gamma, std::move(m));
}

void ModeOperator::factor(double theta, double dt) {
    BandedMatrix sys(matrix_.size(), matrix_.lower(), matrix_.upper());
    sys.axpy(theta * dt, matrix_);
    sys.add_identity(1.0);
    theta_ = theta;
    dt_ = dt;
    lu_.factor(sys);
}

SolveInfo solve_implicit(const ModeOperator& op, std::span<const double> rhs,
                         std::span<double> out) {
    if (!op.lu().factored()) throw solver_error("solve_implicit: operator not factored");
    for (double v : rhs)
        if (!std::isfinite(v)) throw solver_error("solve_implicit: non-finite right-hand side");
    std::copy(rhs.begin(), rhs.end(), out.begin());
    op.lu().solve(out);

    std::vector<double> lx(out.size());
    op.matrix().apply(out, lx);
    double rnorm = 0.0, bnorm = 0.0;
    const double c = op.theta() * op.dt();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = out[i] + c * lx[i] - rhs[i];
        rnorm += r * r;
        bnorm += rhs[i] * rhs[i];
    }
    SolveInfo info;
    info.residual_rel = (bnorm > 0.0) ? std::sqrt(rnorm / bnorm) : std::sqrt(rnorm);
    info.warned = info.residual_rel > 1e-8;
    return info;
}

}  // namespace blk
