#include "blk/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blk {

double WeightedValue::as_double() const {
    if (log_offset == 0.0) return value;
    return value * std::exp(log_offset);
}

namespace {

// e^{kx} at interior nodes, shifted by exp(-log_offset) when k L is too large.
struct WeightVec {
    std::vector<double> w;
    double log_offset = 0.0;
};

WeightVec exp_weights(double k, const Grid& grid) {
    WeightVec wv;
    wv.w.resize(grid.nx);
    const double kl = k * grid.h * (grid.nx + 1);
    if (kl > 700.0) wv.log_offset = kl;
    for (int i = 0; i < grid.nx; ++i) wv.w[i] = std::exp(k * grid.x(i) - wv.log_offset);
    return wv;
}

// One-sided wall values of g'', g'''', g''''' from the Dirichlet condition
// alone; integrands like |Delta u|^2 do not vanish at the walls, so the
// trapezoid rule needs them.
struct WallValues {
    double d2_left = 0.0, d2_right = 0.0;
    double d4_left = 0.0, d4_right = 0.0;
    double d5_left = 0.0, d5_right = 0.0;
};

WallValues wall_values(std::span<const double> g, double h, bool with_d5 = false) {
    static const std::vector<double> w2 = wall_derivative_weights(2, 3);
    static const std::vector<double> w4 = wall_derivative_weights(4, 5);
    static const std::vector<double> w5 = wall_derivative_weights(5, 6);
    const int n = static_cast<int>(g.size());
    WallValues wv;
    const double ih2 = 1.0 / (h * h);
    const double ih4 = ih2 * ih2;
    for (std::size_t m = 0; m < w2.size(); ++m) {
        wv.d2_left += w2[m] * g[m];
        wv.d2_right += w2[m] * g[n - 1 - static_cast<int>(m)];
    }
    for (std::size_t m = 0; m < w4.size(); ++m) {
        wv.d4_left += w4[m] * g[m];
        wv.d4_right += w4[m] * g[n - 1 - static_cast<int>(m)];
    }
    wv.d2_left *= ih2;
    wv.d2_right *= ih2;
    wv.d4_left *= ih4;
    wv.d4_right *= ih4;
    if (with_d5) {
        for (std::size_t m = 0; m < w5.size(); ++m) {
            wv.d5_left += w5[m] * g[m];
            wv.d5_right -= w5[m] * g[n - 1 - static_cast<int>(m)];  // odd order flips
        }
        wv.d5_left *= ih4 / h;
        wv.d5_right *= ih4 / h;
    }
    return wv;
}

}  // namespace

WeightedValue weighted_inner(double k, const ModalState& f, const ModalState& g,
                             const Grid& grid) {
    if (f.n_modes != g.n_modes || f.nx != g.nx || f.nx != grid.nx)
        throw dimension_error("weighted_inner: shape mismatch");
    const WeightVec wv = exp_weights(k, grid);
    double s = 0.0;
    for (int j = 0; j < f.n_modes; ++j) {
        auto fj = f.mode(j);
        auto gj = g.mode(j);
        for (int i = 0; i < f.nx; ++i) s += wv.w[i] * fj[i] * gj[i];
    }
    return {grid.h * s, wv.log_offset};
}

WeightedValue weighted_quad_full(double k, std::span<const double> full_values, double h) {
    const int n = static_cast<int>(full_values.size());
    if (n < 2) throw dimension_error("weighted_quad_full: need at least two nodes");
    const double kl = k * h * (n - 1);
    const double off = kl > 700.0 ? kl : 0.0;
    double s = 0.5 * (std::exp(-off) * full_values[0] +
                      std::exp(kl - off) * full_values[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += std::exp(k * h * i - off) * full_values[i];
    return {h * s, off};
}

DiagnosticsRecord compute_record(const ModalState& state, const ModalState* prev,
                                 const Geometry& geom, const DerivativeSet& derivs) {
    const Grid& grid = geom.grid;
    const SineBasis& basis = geom.basis;
    if (state.nx != grid.nx || state.n_modes != grid.n_modes)
        throw dimension_error("compute_record: state does not match grid");
    if (!state.finite()) throw invalid_data_error("compute_record: non-finite state");

    DiagnosticsRecord r;
    r.t = state.t;
    const double h = grid.h;
    const double k = geom.domain.weight_k;
    const WeightVec wv = (k > 0.0) ? exp_weights(k, grid) : WeightVec{};

    std::vector<double> d1(grid.nx), d2(grid.nx), d4(grid.nx);
    for (int j = 0; j < state.n_modes; ++j) {
        auto gj = state.mode(j);
        const double lam = basis.lambda(j);
        derivs.d1.apply(gj, d1);
        derivs.d2.apply(gj, d2);
        derivs.d4.apply(gj, d4);

        double g2 = 0.0, gx2 = 0.0, lap2 = 0.0, bil2 = 0.0;
        double wg2 = 0.0, wgx2 = 0.0;
        for (int i = 0; i < grid.nx; ++i) {
            const double g = gj[i];
            const double lap = d2[i] - lam * g;
            const double bil = d4[i] - 2.0 * lam * d2[i] + lam * lam * g;
            g2 += g * g;
            gx2 += d1[i] * d1[i];
            lap2 += lap * lap;
            bil2 += bil * bil;
            if (k > 0.0) {
                wg2 += wv.w[i] * g * g;
                wgx2 += wv.w[i] * d1[i] * d1[i];
            }
        }
        // wall contributions: u and u_x vanish there, but u_xx does not,
        // so |Delta u|^2 and |Delta^2 u|^2 carry trapezoid end terms
        const WallValues wv2 = wall_values(gj, h);
        const double lap_l = wv2.d2_left, lap_r = wv2.d2_right;
        const double bil_l = wv2.d4_left - 2.0 * lam * wv2.d2_left;
        const double bil_r = wv2.d4_right - 2.0 * lam * wv2.d2_right;

        r.l2_sq += h * g2;
        r.grad_sq += h * (gx2 + lam * g2);
        r.lap_sq += h * (lap2 + 0.5 * (lap_l * lap_l + lap_r * lap_r));
        r.bilap_sq += h * (bil2 + 0.5 * (bil_l * bil_l + bil_r * bil_r));
        r.uy_sq += h * lam * g2;
        r.uyy_sq += h * lam * lam * g2;
        if (k > 0.0) {
            r.weighted += h * wg2;
            r.weighted_x += h * wgx2;
            r.weighted_y += h * lam * wg2;
        }
        // one-sided second difference at x=0 built on u(0) = u_x(0) = 0
        const double uxx0 = (8.0 * gj[0] - gj[1]) / (2.0 * h * h);
        r.trace_uxx0 += uxx0 * uxx0;
    }
    if (k <= 0.0) {
        r.weighted = r.l2_sq;
        r.weighted_x = r.grad_sq - r.uy_sq;
        r.weighted_y = r.uy_sq;
    } else if (wv.log_offset != 0.0) {
        // overflow guard tripped: surface the true (infinite) magnitudes
        const double f = std::exp(wv.log_offset);
        r.weighted *= f;
        r.weighted_x *= f;
        r.weighted_y *= f;
    }

    // sup and L4 on the refined y-grid (exact quadrature for the quartic)
    const int nyr = basis.ny_ref();
    const int tail_start = std::max(0, grid.nx - std::max(1, grid.nx / 20));
    double sup2 = 0.0, q4 = 0.0, tail_max = 0.0;
    std::vector<double> row(grid.nx);
    for (int m = 0; m < nyr; ++m) {
        std::fill(row.begin(), row.end(), 0.0);
        for (int j = 0; j < state.n_modes; ++j) {
            const double w = basis.w_ref_at(j, m);
            auto gj = state.mode(j);
            for (int i = 0; i < grid.nx; ++i) row[i] += w * gj[i];
        }
        for (int i = 0; i < grid.nx; ++i) {
            const double v2 = row[i] * row[i];
            sup2 = std::max(sup2, v2);
            q4 += v2 * v2;
            if (i >= tail_start) tail_max = std::max(tail_max, std::fabs(row[i]));
        }
    }
    r.sup_sq = sup2;
    r.l4_4 = h * basis.quad_weight_ref() * q4;
    r.tail_rel = (sup2 > 0.0) ? tail_max / std::sqrt(sup2) : 0.0;

    if (prev != nullptr && prev->t != state.t) {
        const double idt = 1.0 / (state.t - prev->t);
        double s = 0.0;
        for (std::size_t i = 0; i < state.coeffs.size(); ++i) {
            const double d = (state.coeffs[i] - prev->coeffs[i]) * idt;
            s += d * d;
        }
        r.ut_sq = h * s;
        r.has_ut = true;
    } else {
        r.ut_sq = std::numeric_limits<double>::quiet_NaN();
        r.has_ut = false;
    }
    return r;
}

JwParts j_w(const ModalState& u0, const Geometry& geom, const DerivativeSet& derivs,
            bool weighted) {
    const Grid& grid = geom.grid;
    const SineBasis& basis = geom.basis;
    if (!u0.finite()) throw invalid_data_error("j_w: non-finite initial data");
    const double h = grid.h;
    const double k = weighted ? geom.domain.weight_k : 0.0;
    const WeightVec wv = exp_weights(k, grid);

    JwParts parts;
    const double wall_l = std::exp(-wv.log_offset);
    const double wall_r = std::exp(k * h * (grid.nx + 1) - wv.log_offset);
    std::vector<double> d2(grid.nx), d4(grid.nx), d5(grid.nx), d1(grid.nx);
    for (int j = 0; j < u0.n_modes; ++j) {
        auto gj = u0.mode(j);
        const double lam = basis.lambda(j);
        derivs.d2.apply(gj, d2);
        derivs.d4.apply(gj, d4);
        derivs.d5.apply(gj, d5);
        double s = 0.0;
        for (int i = 0; i < grid.nx; ++i) {
            const double lap = d2[i] - lam * gj[i];
            const double bil = d4[i] - 2.0 * lam * d2[i] + lam * lam * gj[i];
            s += wv.w[i] * (bil * bil + lap * lap + d5[i] * d5[i]);
        }
        const WallValues wl = wall_values(gj, h, true);
        const double bil_l = wl.d4_left - 2.0 * lam * wl.d2_left;
        const double bil_r = wl.d4_right - 2.0 * lam * wl.d2_right;
        s += 0.5 * wall_l * (bil_l * bil_l + wl.d2_left * wl.d2_left + wl.d5_left * wl.d5_left);
        s += 0.5 * wall_r * (bil_r * bil_r + wl.d2_right * wl.d2_right + wl.d5_right * wl.d5_right);
        parts.quadratic += h * s;
    }

    // u0^2 u0x^2 via reconstruction on the refined y-grid
    ModalState ux(u0.n_modes, u0.nx);
    for (int j = 0; j < u0.n_modes; ++j) {
        auto gj = u0.mode(j);
        derivs.d1.apply(gj, d1);
        std::copy(d1.begin(), d1.end(), ux.mode(j).begin());
    }
    const int nyr = basis.ny_ref();
    std::vector<double> row_u(grid.nx), row_ux(grid.nx);
    double q = 0.0;
    for (int m = 0; m < nyr; ++m) {
        std::fill(row_u.begin(), row_u.end(), 0.0);
        std::fill(row_ux.begin(), row_ux.end(), 0.0);
        for (int j = 0; j < u0.n_modes; ++j) {
            const double w = basis.w_ref_at(j, m);
            auto gj = u0.mode(j);
            auto xj = ux.mode(j);
            for (int i = 0; i < grid.nx; ++i) {
                row_u[i] += w * gj[i];
                row_ux[i] += w * xj[i];
            }
        }
        for (int i = 0; i < grid.nx; ++i)
            q += wv.w[i] * row_u[i] * row_u[i] * row_ux[i] * row_ux[i];
    }
    parts.quartic = h * basis.quad_weight_ref() * q;

    if (wv.log_offset != 0.0) {
        const double f = std::exp(wv.log_offset);
        parts.quadratic *= f;
        parts.quartic *= f;
    }
    if (!std::isfinite(parts.quadratic) || !std::isfinite(parts.quartic))
        throw invalid_data_error("j_w: functional is not finite");
    return parts;
}

}  // namespace blk
