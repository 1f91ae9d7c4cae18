#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "blk/functionals.hpp"
#include "blk/geometry.hpp"
#include "blk/operators.hpp"
#include "blk/poly.hpp"

namespace blk {

struct PhysicalParams {
    double gamma = 0.0;  // coefficient of Delta u; sign selects the regime
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double theta = 0.5;  // implicit weight, 1/2 (trapezoidal) .. 1 (backward Euler)
    int diag_every = 10;
    bool dealias = true;
    bool nonlinear = true;
    double blowup_factor = 1e6;
    int snapshot_every = 0;    // 0 disables state snapshots
    int startup_be_steps = 4;  // damped (theta=1) opening steps; a fixed
                               // count keeps the global order at 2

    void validate() const;
};

enum class ProfileKind { rect_poly, strip_exp };

std::string to_string(ProfileKind p);
ProfileKind profile_from_string(const std::string& s);

/// One separable term A * X(x) * sin(j pi y / B); profiles may be sums.
struct InitialTerm {
    int mode_j = 1;
    double amplitude = 1.0;
    double sigma = 1.0;  // strip_exp only
};

struct InitialSpec {
    ProfileKind profile = ProfileKind::rect_poly;
    std::vector<InitialTerm> terms{InitialTerm{}};
};

struct InitialData {
    InitialSpec spec;
    ModalState u0;
    JwParts jw;           // unweighted J_w parts
    JwParts jw_weighted;  // e^{kx}-weighted variant (equals jw when k = 0)
    double weighted_data = 0.0;  // (e^{kx}, u0^2)
    double smallness_threshold = std::numeric_limits<double>::infinity();
    bool condition_ok = true;  // weighted_data < threshold (half-strip decay condition)
    bool compat_ok = true;
    double tail_rel = 0.0;  // data magnitude near the truncation wall / peak
};

/// rect_poly: A x^2 (L-x)^3 sin(j pi y/B);  strip_exp: A x^2 e^{-sigma x} sin(j pi y/B).
InitialData make_initial(const InitialSpec& spec, const Geometry& geom,
                         const DerivativeSet& derivs);

/// Galerkin projection of u u_x, evaluated pseudo-spectrally on the
/// collocation grid. With dealiasing on (the 3/2-rule grid of the basis)
/// this reproduces the exact triple-product contraction.
class NonlinearEvaluator {
  public:
    NonlinearEvaluator() = default;
    NonlinearEvaluator(const Geometry& geom, const DerivativeSet& derivs, bool dealias);

    void eval(const ModalState& g, ModalState& out) const;

  private:
    const DerivativeSet* derivs_ = nullptr;
    int n_ = 0, nx_ = 0, ny_ = 0;
    std::vector<double> qw_;  // quadrature weights of the product rule
    std::vector<double> w_;   // omega_j at product nodes, [j][m]
};

ModalState nonlinear_term(const ModalState& g, const Geometry& geom,
                          const DerivativeSet& derivs, bool dealias = true);

/// Direct tensor contraction sum_{l,k} a_{lkj} g_l g_{k,x}; the reference
/// path the pseudo-spectral evaluation is tested against.
ModalState nonlinear_term_tensor(const ModalState& g, const TripleProductTensor& a,
                                 const DerivativeSet& derivs);

/// Modal forcing callback: fill f with F_j(x_i, t).
using ModalForcing = std::function<void(double t, ModalState& f)>;

enum class RunStatus { ok, blowup };

struct RunResult {
    DiagnosticsSeries series;
    ModalState final_state;
    PhysicalField final_field;
    RunStatus status = RunStatus::ok;
    double blowup_t = 0.0;
    int steps = 0;
    int solver_warnings = 0;
    double max_tail_rel = 0.0;
    std::vector<ModalState> snapshots;  // filled when cfg.snapshot_every > 0
};

/// IMEX stepper: theta-weighted implicit solve of the per-mode linear
/// operators, Adams-Bashforth extrapolation of the nonlinearity
/// (explicit Euler on the first step).
class Stepper {
  public:
    Stepper(const Geometry& geom, const PhysicalParams& params, const SolverConfig& cfg,
            const DerivativeSet& derivs, ModalForcing forcing = {});

    void set_state(const ModalState& s);
    const ModalState& state() const { return g_; }
    double t() const { return g_.t; }

    /// One IMEX step; returns blowup when the state leaves the finite /
    /// bounded regime (the state then remains the last valid one).
    RunStatus step();

    int solver_warnings() const { return warnings_; }
    const std::vector<ModeOperator>& mode_operators() const { return ops_; }

  private:
    const Geometry* geom_;
    const DerivativeSet* derivs_;
    SolverConfig cfg_;
    ModalForcing forcing_;
    NonlinearEvaluator nl_;
    std::vector<ModeOperator> ops_, ops_be_;
    ModalState g_, n_prev_, n_cur_, f_a_, f_b_, rhs_;
    bool have_history_ = false;
    long steps_taken_ = 0;
    double t0_ = 0.0;
    double l2_0_ = 0.0;
    int warnings_ = 0;

    double l2() const;
};

RunResult run_simulation(const InitialData& init, const PhysicalParams& params,
                         const SolverConfig& cfg, const Geometry& geom,
                         const DerivativeSet& derivs, ModalForcing forcing = {});

/// Manufactured-solution harness on rectangles:
///   u*(x,y,t) = amp e^{-t} x^2 (L-x)^3 sin(pi y / B),
/// with the forcing chosen so u* solves the N-mode Galerkin system exactly
/// (the quadratic term's y-projection is applied mode by mode).
class ManufacturedSolution {
  public:
    ManufacturedSolution() = default;
    ManufacturedSolution(const Geometry& geom, double gamma, double amplitude = 1.0);

    ModalForcing forcing() const;
    ModalState exact_state(double t) const;
    InitialData initial_data(const DerivativeSet& derivs) const;
    double error_l2(const ModalState& s) const;
    double amplitude() const { return amp_; }

  private:
    const Geometry* geom_ = nullptr;
    double amp_ = 1.0;
    std::vector<double> lin_;     // A_1(x_i): linear + mode-1 share
    std::vector<double> quad_;    // phi phi' at nodes
    std::vector<double> cj_;      // per-mode projection of sin^2(pi y/B)
    std::vector<double> exact_;   // sqrt(B/2) amp phi(x_i)
};

}  // namespace blk
