// Microbenchmarks for the solver hot path: banded solves, sine
// transforms, the pseudo-spectral nonlinearity, full IMEX steps, and
// diagnostics records.

#include <benchmark/benchmark.h>

#include <cmath>

#include "blk/dynamics.hpp"
#include "blk/functionals.hpp"
#include "blk/geometry.hpp"
#include "blk/operators.hpp"

using namespace blk;

namespace {

Geometry make_geom(int nx, int n_modes) {
    return build_domain(DomainKind::rectangle, M_PI, M_PI, nx, n_modes, 0.0);
}

ModalState smooth_state(const Geometry& g) {
    ModalState s(g.grid.n_modes, g.grid.nx);
    const Poly phi = Poly::clamped(2, 3, g.domain.L);
    for (int j = 0; j < g.grid.n_modes; ++j)
        for (int i = 0; i < g.grid.nx; ++i)
            s.at(j, i) = phi(g.grid.x(i)) / (1.0 + j * j);
    return s;
}

void bm_banded_solve(benchmark::State& state) {
    const int nx = static_cast<int>(state.range(0));
    const Geometry g = make_geom(nx, 4);
    const DerivativeSet ds = DerivativeSet::build(g.grid, g.domain.kind);
    ModeOperator op = build_mode_operator(1, 1.0, 1.0, g.grid, ds);
    op.factor(0.5, 1e-4);
    std::vector<double> rhs(nx), out(nx);
    for (int i = 0; i < nx; ++i) rhs[i] = std::sin(3.0 * g.grid.x(i));
    for (auto _ : state) {
        solve_implicit(op, rhs, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(bm_banded_solve)->Arg(128)->Arg(256)->Arg(512);

void bm_banded_factor(benchmark::State& state) {
    const int nx = static_cast<int>(state.range(0));
    const Geometry g = make_geom(nx, 4);
    const DerivativeSet ds = DerivativeSet::build(g.grid, g.domain.kind);
    ModeOperator op = build_mode_operator(1, 1.0, 1.0, g.grid, ds);
    for (auto _ : state) {
        op.factor(0.5, 1e-4);
        benchmark::DoNotOptimize(&op);
    }
}
BENCHMARK(bm_banded_factor)->Arg(128)->Arg(256)->Arg(512);

void bm_transforms(benchmark::State& state) {
    const Geometry g = make_geom(256, static_cast<int>(state.range(0)));
    const ModalState s = smooth_state(g);
    for (auto _ : state) {
        const PhysicalField f = inverse_sine_transform(s, g.basis);
        const ModalState back = forward_sine_transform(f, g.basis);
        benchmark::DoNotOptimize(back.coeffs.data());
    }
}
BENCHMARK(bm_transforms)->Arg(8)->Arg(16);

void bm_nonlinear(benchmark::State& state) {
    const Geometry g = make_geom(256, static_cast<int>(state.range(0)));
    const DerivativeSet ds = DerivativeSet::build(g.grid, g.domain.kind);
    const NonlinearEvaluator nl(g, ds, true);
    const ModalState s = smooth_state(g);
    ModalState out(g.grid.n_modes, g.grid.nx);
    for (auto _ : state) {
        nl.eval(s, out);
        benchmark::DoNotOptimize(out.coeffs.data());
    }
}
BENCHMARK(bm_nonlinear)->Arg(8)->Arg(16);

void bm_imex_step(benchmark::State& state) {
    const Geometry g = make_geom(static_cast<int>(state.range(0)), 8);
    const DerivativeSet ds = DerivativeSet::build(g.grid, g.domain.kind);
    SolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 1.0;
    Stepper st(g, PhysicalParams{1.0}, cfg, ds);
    st.set_state(smooth_state(g));
    for (auto _ : state) {
        st.step();
        benchmark::DoNotOptimize(st.state().coeffs.data());
    }
}
BENCHMARK(bm_imex_step)->Arg(128)->Arg(256)->Arg(512);

void bm_compute_record(benchmark::State& state) {
    const Geometry g = make_geom(256, static_cast<int>(state.range(0)));
    const DerivativeSet ds = DerivativeSet::build(g.grid, g.domain.kind);
    const ModalState s = smooth_state(g);
    for (auto _ : state) {
        const DiagnosticsRecord r = compute_record(s, nullptr, g, ds);
        benchmark::DoNotOptimize(&r);
    }
}
BENCHMARK(bm_compute_record)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
