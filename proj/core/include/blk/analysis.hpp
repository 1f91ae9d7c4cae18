#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "blk/dynamics.hpp"
#include "blk/functionals.hpp"
#include "blk/geometry.hpp"
#include "blk/poly.hpp"

namespace blk {

/// Deterministic uniform stream (splitmix64), stable across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

  private:
    std::uint64_t s_;
};

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    double constant = 0.0;
    double tol = 1e-8;
    bool pass = false;
};

inline InequalityReport make_report(std::string name, double lhs, double rhs, double constant,
                                    double tol = 1e-8) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.constant = constant;
    r.tol = tol;
    r.pass = r.margin >= -tol;
    return r;
}

/// 1-D profile norms with analytic derivatives: ||D^i v||^2 for i = 0..5
/// plus endpoint values (for compatibility preconditions).
struct ProfileNorms {
    double L = 0.0;
    std::array<double, 6> norm_sq{};
    double end0 = 0.0, endL = 0.0;
};

/// v = sum_m b_m sin(m pi x / L)
struct SineProfile {
    double L = 0.0;
    std::vector<double> b;
    ProfileNorms norms() const;
};

struct PolyProfile {
    double L = 0.0;
    Poly p;
    ProfileNorms norms() const;
};

/// Exact x-profile integrals feeding the separable-field functionals.
struct XIntegrals {
    double i00 = 0, i11 = 0, i22 = 0, i44 = 0;  // int (X^(a))^2
    double i20 = 0, i42 = 0, i40 = 0;           // int X'' X, X'''' X'', X'''' X
    double i4th = 0;                             // int X^4
    double max_abs = 0;
};

XIntegrals x_integrals(const Poly& X, double L);
XIntegrals x_integrals(const SineProfile& X);

/// Separable trial field X(x) * sum_j c_j sin(j pi y / B). Random fields
/// draw X from span{x^2(L-x)^3, x^3(L-x)^3, x^2(L-x)^4}, which satisfies
/// the full boundary-condition set; sine x-profiles serve the sharp
/// (first-eigenfunction) cases. All functionals use analytic derivatives.
class TrialField {
  public:
    TrialField(double L, double B, const Poly& x_profile, std::vector<double> y_coeffs);
    TrialField(double L, double B, const SineProfile& x_profile, std::vector<double> y_coeffs);
    TrialField(double L, double B, const XIntegrals& xi, std::vector<double> y_coeffs);

    double l2_sq() const { return l2_; }
    double grad_sq() const { return grad_; }
    double lap_sq() const { return lap_; }
    double bilap_sq() const { return bilap_; }
    double l4_4() const { return l4_; }
    double sup_sq() const { return sup_; }
    double L() const { return L_; }
    double B() const { return B_; }

  private:
    double L_, B_;
    double l2_ = 0, grad_ = 0, lap_ = 0, bilap_ = 0, l4_ = 0, sup_ = 0;
};

/// sin(pi x / L) sin(pi y / B), the equality case of the spectral-gap chain.
TrialField make_sharp_field(double L, double B);

TrialField make_trial_field(double L, double B, int max_y_modes, Rng& rng);
SineProfile make_sine_profile(double L, int max_modes, Rng& rng);
PolyProfile make_poly_profile(double L, Rng& rng);

/// pi^2/L^2 |v|^2 <= |v_x|^2 for v vanishing at 0 and L.
InequalityReport check_steklov(const ProfileNorms& v);

/// The four spectral-gap inequalities with a = pi^2/L^2 + pi^2/B^2.
std::vector<InequalityReport> check_spectral_gaps(const TrialField& f);

/// sup_D f^2 <= C_s |Delta f|^2, C_s = 1 + 1/a + 1/a^2.
InequalityReport check_sup_bound(const TrialField& f);

/// |u|_{L4}^2 <= 2 |u| |grad u|.
InequalityReport check_ladyzhenskaya(const TrialField& f);

struct NirenbergConstants {
    double A1 = 1.0;
    double A2 = 1.0;
};

/// Frozen interpolation constants (calibration corpus documented in
/// analysis.cpp). Supported (i,m): (1,2), (3,5), (4,5).
NirenbergConstants nirenberg_constants(int i, int m);

/// ||D^i u|| <= A1 ||D^m u||^{i/m} ||u||^{1-i/m} + A2 ||u||.
InequalityReport check_nirenberg(const ProfileNorms& u, int i, int m,
                                 const NirenbergConstants& c);

/// Re-runs the calibration that produced the frozen constants.
double fit_nirenberg_a1(int i, int m, double L, int samples, std::uint64_t seed, double A2);

/// Spectral-gap chain evaluated on a sampled diagnostics record.
std::vector<InequalityReport> check_record_chain(const DiagnosticsRecord& r, double a);

struct ResidualSeries {
    std::vector<double> t;
    std::vector<double> r;
    double max_abs = 0.0;
    double max_rel = 0.0;  // vs max_t 2 |Delta u|^2
};

/// r(t) = d/dt |u|^2 - 2 gamma |grad u|^2 + 2 |Delta u|^2 + trace,
/// centered differences over the sampled series. Samples before t_start
/// are skipped: across the initial fast-transient layer the difference
/// quotient measures the sampling kernel rather than the identity (the
/// decay fitter excludes the same transient).
ResidualSeries energy_identity_residual(const DiagnosticsSeries& s, double gamma,
                                        double t_start = 0.0);

/// Least-squares slope of -log E(t) on [t0, t1]; nonpositive samples skipped.
double fit_decay(const std::vector<double>& t, const std::vector<double>& energy, double t0,
                 double t1);

/// The four decay regimes the presets reproduce (rectangle with
/// destabilizing / nonpositive gamma; weighted half-strip with small
/// positive / nonpositive gamma).
enum class DecayCase { thm61, thm62, thm63, thm64 };

std::string to_string(DecayCase id);

struct DecayParams {
    double L = 0.0, B = 0.0;
    double gamma = 0.0;
    double weight_k = 0.0;
};

struct DecayReport {
    DecayCase case_id = DecayCase::thm61;
    double a = 0.0, b = 0.0, theta = 0.0;
    double chi_theory = 0.0;
    double chi_theory_alt = 0.0;  // second formula at the gamma = 0 boundary
    double chi_fitted = 0.0;
    double pointwise_ok = 0.0;  // fraction of samples inside the envelope
    bool fitted_ok = false;     // chi_fitted >= 0.9 chi_theory (chi is a lower bound)
    bool pass = false;
    bool condition_ok = true;   // theorem hypotheses hold
    double smallness_lhs = 0.0, smallness_threshold = 0.0;  // half-strip data condition
    double window_t0 = 0.0, window_t1 = 0.0;
    double tol = 0.05;
    std::string note;
};

/// chi from the theorem formula alone (no simulation input).
double chi_theory(DecayCase id, const DecayParams& p);

DecayReport verify_theorem(DecayCase id, const DiagnosticsSeries& series,
                           const DecayParams& params, double tol = 0.05);

struct MonitorReport {
    bool precondition_ok = false;  // alpha - k_c f(0)^n > 0
    bool pass = false;             // f(t) < f(0) for all sampled t > 0
    double worst_ratio = 0.0;
};

/// Comparison-function monitor for f' + (alpha - k_c f^n) f <= 0.
MonitorReport comparison_monitor(const std::vector<double>& t, const std::vector<double>& f,
                                 double alpha, double k_c, int n);

struct StabilityReport {
    bool conclusive = false;
    bool envelope_ok = false;
    double c_hat = 0.0;
    double max_ratio = 0.0;            // sup_t |z(t)| / |z(0)|
    double max_env_violation = 0.0;    // sup_t z^2(t) / envelope(t)
    std::vector<double> t, z_sq, envelope;
};

/// Frozen Gronwall constant for the perturbation envelope (calibrated once;
/// see analysis.cpp).
double stability_c_hat();

/// Two runs from u0 and u0 + delta v; asserts the Gronwall envelope
/// z^2(t) <= z^2(0) exp(c_hat int_0^t sum_i [1 + |Delta u_i|^2] ds).
StabilityReport stability_experiment(const InitialData& base, double delta, int perturb_mode,
                                     const PhysicalParams& params, const SolverConfig& cfg,
                                     const Geometry& geom, const DerivativeSet& derivs,
                                     double c_hat = stability_c_hat());

}  // namespace blk
