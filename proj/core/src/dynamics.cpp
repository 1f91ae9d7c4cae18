#include "blk/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace blk {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw invalid_parameter_error("dt must be positive");
    if (!(t_end > 0.0)) throw invalid_parameter_error("t_end must be positive");
    if (theta < 0.5 || theta > 1.0)
        throw invalid_parameter_error("theta must lie in [1/2, 1]");
    if (diag_every < 1) throw invalid_parameter_error("diag_every must be >= 1");
    if (!(blowup_factor > 1.0)) throw invalid_parameter_error("blowup_factor must exceed 1");
}

std::string to_string(ProfileKind p) {
    return p == ProfileKind::rect_poly ? "rect_poly" : "strip_exp";
}

ProfileKind profile_from_string(const std::string& s) {
    if (s == "rect_poly") return ProfileKind::rect_poly;
    if (s == "strip_exp") return ProfileKind::strip_exp;
    throw invalid_parameter_error("unknown initial profile: " + s);
}

InitialData make_initial(const InitialSpec& spec, const Geometry& geom,
                         const DerivativeSet& derivs) {
    const Grid& grid = geom.grid;
    const double L = geom.domain.L;
    const double B = geom.domain.B;
    InitialData data;
    data.spec = spec;
    data.u0 = ModalState(grid.n_modes, grid.nx);

    const double mode_scale = std::sqrt(B / 2.0);  // sin(j pi y/B) = sqrt(B/2) omega_j
    double peak = 0.0, tail = 0.0;
    const int tail_start = grid.nx - std::max(1, grid.nx / 20);

    for (const InitialTerm& term : spec.terms) {
        if (term.mode_j < 1 || term.mode_j > grid.n_modes)
            throw invalid_parameter_error("initial mode index outside 1..n_modes");
        auto gj = data.u0.mode(term.mode_j - 1);
        if (spec.profile == ProfileKind::rect_poly) {
            const Poly phi = Poly::clamped(2, 3, L);
            for (int i = 0; i < grid.nx; ++i)
                gj[i] += term.amplitude * mode_scale * phi(grid.x(i));
            // compatibility is structural: x^2 and (L-x)^3 supply
            // u(0)=u_x(0)=0 and u(L)=u_x(L)=u_xx(L)=0
        } else {
            if (geom.domain.kind != DomainKind::half_strip)
                throw invalid_parameter_error("strip_exp data requires a half-strip domain");
            if (!(term.sigma > 0.0))
                throw invalid_parameter_error("strip_exp data needs sigma > 0");
            for (int i = 0; i < grid.nx; ++i) {
                const double x = grid.x(i);
                gj[i] += term.amplitude * mode_scale * x * x * std::exp(-term.sigma * x);
            }
        }
    }

    for (int j = 0; j < grid.n_modes; ++j) {
        auto gj = data.u0.mode(j);
        for (int i = 0; i < grid.nx; ++i) {
            peak = std::max(peak, std::fabs(gj[i]));
            if (i >= tail_start) tail = std::max(tail, std::fabs(gj[i]));
        }
    }
    data.tail_rel = peak > 0.0 ? tail / peak : 0.0;
    data.compat_ok = true;
    if (geom.domain.kind == DomainKind::half_strip && data.tail_rel > 1e-8)
        data.compat_ok = false;  // data does not decay below the truncation floor

    data.jw = j_w(data.u0, geom, derivs, false);
    data.jw_weighted = geom.domain.weight_k > 0.0 ? j_w(data.u0, geom, derivs, true) : data.jw;
    if (geom.domain.weight_k > 0.0) {
        data.weighted_data =
            weighted_inner(geom.domain.weight_k, data.u0, data.u0, grid).as_double();
        const double a = (M_PI * M_PI) / (B * B);
        data.smallness_threshold = 9.0 / (8.0 * geom.domain.weight_k) * a * a;
        data.condition_ok = data.weighted_data < data.smallness_threshold;
    } else {
        data.weighted_data = weighted_inner(0.0, data.u0, data.u0, grid).as_double();
    }
    return data;
}

NonlinearEvaluator::NonlinearEvaluator(const Geometry& geom, const DerivativeSet& derivs,
                                       bool dealias)
    : derivs_(&derivs), n_(geom.grid.n_modes), nx_(geom.grid.nx) {
    // The integrand (u u_x) omega_j is a sine polynomial of degree 3N, so
    // the dealiased product grid carries 3N nodes with exact sine-integral
    // quadrature weights; the projection then reproduces the a_{lkj}
    // contraction to roundoff. dealias=off falls back to the aliased
    // same-grid rule.
    ny_ = dealias ? 3 * geom.grid.n_modes : geom.grid.n_modes;
    const double B = geom.domain.B;
    const int P = ny_ + 1;
    w_.resize(static_cast<std::size_t>(n_) * ny_);
    for (int j = 0; j < n_; ++j)
        for (int m = 0; m < ny_; ++m) {
            const double y = B * static_cast<double>(m + 1) / P;
            w_[static_cast<std::size_t>(j) * ny_ + m] =
                std::sqrt(2.0 / B) * std::sin((j + 1) * M_PI * y / B);
        }
    qw_.assign(ny_, 0.0);
    if (dealias) {
        // w~_q = (2/P) sum_p int(sin_p) sin(p pi q / P)
        for (int m = 0; m < ny_; ++m)
            for (int p = 1; p <= ny_; p += 2)
                qw_[m] += (2.0 / P) * (2.0 * B / (p * M_PI)) *
                          std::sin(p * M_PI * static_cast<double>(m + 1) / P);
    } else {
        std::fill(qw_.begin(), qw_.end(), B / static_cast<double>(P));
    }
}

void NonlinearEvaluator::eval(const ModalState& g, ModalState& out) const {
    std::vector<double> dx(static_cast<std::size_t>(n_) * nx_);
    for (int j = 0; j < n_; ++j)
        derivs_->d1.apply(g.mode(j),
                          std::span<double>(dx.data() + static_cast<std::size_t>(j) * nx_, nx_));

    std::fill(out.coeffs.begin(), out.coeffs.end(), 0.0);
    std::vector<double> u(nx_), ux(nx_);
    for (int m = 0; m < ny_; ++m) {
        std::fill(u.begin(), u.end(), 0.0);
        std::fill(ux.begin(), ux.end(), 0.0);
        for (int j = 0; j < n_; ++j) {
            const double w = w_[static_cast<std::size_t>(j) * ny_ + m];
            const double* gj = g.coeffs.data() + static_cast<std::size_t>(j) * nx_;
            const double* dj = dx.data() + static_cast<std::size_t>(j) * nx_;
            for (int i = 0; i < nx_; ++i) {
                u[i] += w * gj[i];
                ux[i] += w * dj[i];
            }
        }
        for (int i = 0; i < nx_; ++i) u[i] *= ux[i];  // u u_x at this y-line
        for (int j = 0; j < n_; ++j) {
            const double w = qw_[m] * w_[static_cast<std::size_t>(j) * ny_ + m];
            double* oj = out.coeffs.data() + static_cast<std::size_t>(j) * nx_;
            for (int i = 0; i < nx_; ++i) oj[i] += w * u[i];
        }
    }
}

ModalState nonlinear_term(const ModalState& g, const Geometry& geom,
                          const DerivativeSet& derivs, bool dealias) {
    NonlinearEvaluator ev(geom, derivs, dealias);
    ModalState out(g.n_modes, g.nx);
    out.t = g.t;
    ev.eval(g, out);
    return out;
}

ModalState nonlinear_term_tensor(const ModalState& g, const TripleProductTensor& a,
                                 const DerivativeSet& derivs) {
    const int n = g.n_modes, nx = g.nx;
    ModalState out(n, nx);
    out.t = g.t;
    std::vector<double> dx(static_cast<std::size_t>(n) * nx);
    for (int k = 0; k < n; ++k)
        derivs.d1.apply(g.mode(k),
                        std::span<double>(dx.data() + static_cast<std::size_t>(k) * nx, nx));
    for (int j = 0; j < n; ++j) {
        auto oj = out.mode(j);
        for (int l = 0; l < n; ++l) {
            auto gl = g.mode(l);
            for (int k = 0; k < n; ++k) {
                const double c = a(l, k, j);
                if (c == 0.0) continue;
                const double* dk = dx.data() + static_cast<std::size_t>(k) * nx;
                for (int i = 0; i < nx; ++i) oj[i] += c * gl[i] * dk[i];
            }
        }
    }
    return out;
}

Stepper::Stepper(const Geometry& geom, const PhysicalParams& params, const SolverConfig& cfg,
                 const DerivativeSet& derivs, ModalForcing forcing)
    : geom_(&geom), derivs_(&derivs), cfg_(cfg), forcing_(std::move(forcing)) {
    cfg_.validate();
    if (cfg_.nonlinear) nl_ = NonlinearEvaluator(geom, derivs, cfg_.dealias);
    const int n = geom.grid.n_modes;
    ops_.reserve(n);
    for (int j = 0; j < n; ++j) {
        ops_.push_back(
            build_mode_operator(j + 1, geom.basis.lambda(j), params.gamma, geom.grid, derivs));
        ops_.back().factor(cfg_.theta, cfg_.dt);
    }
    if (cfg_.startup_be_steps > 0 && cfg_.theta != 1.0) {
        ops_be_.reserve(n);
        for (int j = 0; j < n; ++j) {
            ops_be_.push_back(build_mode_operator(j + 1, geom.basis.lambda(j), params.gamma,
                                                  geom.grid, derivs));
            ops_be_.back().factor(1.0, cfg_.dt);
        }
    }
    g_ = ModalState(n, geom.grid.nx);
    n_prev_ = n_cur_ = f_a_ = f_b_ = rhs_ = g_;
}

void Stepper::set_state(const ModalState& s) {
    if (s.n_modes != g_.n_modes || s.nx != g_.nx)
        throw dimension_error("Stepper::set_state shape mismatch");
    g_ = s;
    t0_ = s.t;
    have_history_ = false;
    steps_taken_ = 0;
    l2_0_ = l2();
}

double Stepper::l2() const {
    double s = 0.0;
    for (double v : g_.coeffs) s += v * v;
    return geom_->grid.h * s;
}

RunStatus Stepper::step() {
    const int n = g_.n_modes, nx = g_.nx;
    const double dt = cfg_.dt;
    const bool damped = steps_taken_ < cfg_.startup_be_steps && !ops_be_.empty();
    const double theta = damped ? 1.0 : cfg_.theta;
    const std::vector<ModeOperator>& ops = damped ? ops_be_ : ops_;

    if (cfg_.nonlinear) nl_.eval(g_, n_cur_);
    if (forcing_) {
        forcing_(g_.t, f_a_);
        forcing_(g_.t + dt, f_b_);
    }

    const ModalState saved = g_;
    std::vector<double> lg(nx), out(nx);
    for (int j = 0; j < n; ++j) {
        auto gj = g_.mode(j);
        ops[j].matrix().apply(gj, lg);
        auto r = rhs_.mode(j);
        for (int i = 0; i < nx; ++i) {
            double nl = 0.0;
            if (cfg_.nonlinear) {
                const double nc = n_cur_.at(j, i);
                nl = have_history_ ? (1.0 + theta) * nc - theta * n_prev_.at(j, i) : nc;
            }
            double fc = 0.0;
            if (forcing_) fc = (1.0 - theta) * f_a_.at(j, i) + theta * f_b_.at(j, i);
            r[i] = gj[i] - dt * (1.0 - theta) * lg[i] - dt * nl + dt * fc;
        }
        const SolveInfo info = solve_implicit(ops[j], r, out);
        if (info.warned) ++warnings_;
        std::copy(out.begin(), out.end(), gj.begin());
    }
    ++steps_taken_;
    g_.t = t0_ + static_cast<double>(steps_taken_) * dt;  // no accumulation drift
    std::swap(n_prev_.coeffs, n_cur_.coeffs);
    have_history_ = true;

    if (!g_.finite()) {
        g_ = saved;  // report the last valid state
        return RunStatus::blowup;
    }
    if (l2_0_ > 0.0 && l2() > cfg_.blowup_factor * l2_0_) return RunStatus::blowup;
    return RunStatus::ok;
}

RunResult run_simulation(const InitialData& init, const PhysicalParams& params,
                         const SolverConfig& cfg, const Geometry& geom,
                         const DerivativeSet& derivs, ModalForcing forcing) {
    cfg.validate();
    Stepper stepper(geom, params, cfg, derivs, std::move(forcing));
    stepper.set_state(init.u0);

    RunResult res;
    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    ModalState prev_diag;
    bool have_prev = false;

    auto record = [&](const ModalState& s) {
        DiagnosticsRecord r = compute_record(s, have_prev ? &prev_diag : nullptr, geom, derivs);
        res.max_tail_rel = std::max(res.max_tail_rel, r.tail_rel);
        res.series.records.push_back(r);
        prev_diag = s;
        have_prev = true;
    };

    record(stepper.state());
    if (cfg.snapshot_every > 0) res.snapshots.push_back(stepper.state());

    for (long step = 1; step <= n_steps; ++step) {
        const RunStatus st = stepper.step();
        res.steps = static_cast<int>(step);
        if (st == RunStatus::blowup) {
            res.status = RunStatus::blowup;
            res.blowup_t = stepper.t();
            break;
        }
        if (step % cfg.diag_every == 0 || step == n_steps) record(stepper.state());
        if (cfg.snapshot_every > 0 && (step % cfg.snapshot_every == 0 || step == n_steps))
            res.snapshots.push_back(stepper.state());
    }
    res.final_state = stepper.state();
    res.final_field = inverse_sine_transform(res.final_state, geom.basis);
    res.solver_warnings = stepper.solver_warnings();
    return res;
}

ManufacturedSolution::ManufacturedSolution(const Geometry& geom, double gamma, double amplitude)
    : geom_(&geom), amp_(amplitude) {
    if (geom.domain.kind != DomainKind::rectangle)
        throw invalid_parameter_error("manufactured solution is defined on rectangles");
    const Grid& grid = geom.grid;
    const double L = geom.domain.L, B = geom.domain.B;
    const double lam1 = geom.basis.lambda(0);
    const double ms = std::sqrt(B / 2.0);

    const Poly phi = Poly::clamped(2, 3, L);
    const Poly p1 = phi.derivative();
    const Poly p2 = p1.derivative();
    const Poly p3 = p2.derivative();
    const Poly p4 = p3.derivative();
    const Poly p5 = p4.derivative();
    // d/dt + L_1 applied to e^{-t} phi:
    const Poly lin = -1.0 * phi + (p4 - 2.0 * lam1 * p2 + lam1 * lam1 * phi) +
                     gamma * (p2 - lam1 * phi) + (p3 - lam1 * p1) - p5;
    const Poly quad = phi * p1;

    lin_.resize(grid.nx);
    quad_.resize(grid.nx);
    exact_.resize(grid.nx);
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        lin_[i] = amp_ * ms * lin(x);
        quad_[i] = amp_ * amp_ * quad(x);
        exact_[i] = amp_ * ms * phi(x);
    }
    // projection of sin^2(pi y/B) onto omega_j: sqrt(2/B) (B/pi) I_j,
    // I_j = -4 / (j (j^2-4)) for odd j, 0 for even j
    cj_.assign(grid.n_modes, 0.0);
    for (int j1 = 1; j1 <= grid.n_modes; ++j1) {
        if (j1 % 2 == 0) continue;
        const double I = -4.0 / (static_cast<double>(j1) * (j1 * j1 - 4.0));
        cj_[j1 - 1] = std::sqrt(2.0 / B) * (B / M_PI) * I;
    }
}

ModalForcing ManufacturedSolution::forcing() const {
    return [this](double t, ModalState& f) {
        const double e1 = std::exp(-t), e2 = std::exp(-2.0 * t);
        std::fill(f.coeffs.begin(), f.coeffs.end(), 0.0);
        auto f0 = f.mode(0);
        for (int i = 0; i < f.nx; ++i) f0[i] = e1 * lin_[i];
        for (int j = 0; j < f.n_modes; ++j) {
            if (cj_[j] == 0.0) continue;
            auto fj = f.mode(j);
            for (int i = 0; i < f.nx; ++i) fj[i] += e2 * cj_[j] * quad_[i];
        }
    };
}

ModalState ManufacturedSolution::exact_state(double t) const {
    ModalState s(geom_->grid.n_modes, geom_->grid.nx);
    s.t = t;
    const double e1 = std::exp(-t);
    auto g1 = s.mode(0);
    for (int i = 0; i < s.nx; ++i) g1[i] = e1 * exact_[i];
    return s;
}

InitialData ManufacturedSolution::initial_data(const DerivativeSet& derivs) const {
    InitialSpec spec;
    spec.profile = ProfileKind::rect_poly;
    spec.terms = {InitialTerm{1, amp_, 1.0}};
    return make_initial(spec, *geom_, derivs);
}

double ManufacturedSolution::error_l2(const ModalState& s) const {
    const ModalState ex = exact_state(s.t);
    double e = 0.0;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const double d = s.coeffs[i] - ex.coeffs[i];
        e += d * d;
    }
    return std::sqrt(geom_->grid.h * e);
}

}  // namespace blk
