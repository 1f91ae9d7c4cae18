#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blk/geometry.hpp"
#include "blk/operators.hpp"

namespace blk {

/// One sample of every monitored functional.
/// ut_sq is a difference quotient against the previous sample; when no
/// previous state exists it is left NaN and flagged, never zero-filled.
struct DiagnosticsRecord {
    double t = 0.0;
    double l2_sq = 0.0;        // |u|^2
    double grad_sq = 0.0;      // |grad u|^2
    double lap_sq = 0.0;       // |Delta u|^2
    double bilap_sq = 0.0;     // |Delta^2 u|^2
    double trace_uxx0 = 0.0;   // int_0^B u_xx(0,y)^2 dy
    double sup_sq = 0.0;       // sup_D u^2
    double uy_sq = 0.0;        // |u_y|^2
    double uyy_sq = 0.0;       // |u_yy|^2
    double ut_sq = 0.0;        // |u_t|^2 (sampled difference quotient)
    double l4_4 = 0.0;         // |u|_{L4}^4
    double weighted = 0.0;     // (e^{kx}, u^2)
    double weighted_x = 0.0;   // (e^{kx}, u_x^2)
    double weighted_y = 0.0;   // (e^{kx}, u_y^2)
    bool has_ut = false;

    // not serialized: max |u| over the last 5% of x-nodes relative to
    // sup |u|, the half-strip truncation-quality diagnostic
    double tail_rel = 0.0;
};

struct DiagnosticsSeries {
    std::vector<DiagnosticsRecord> records;

    std::size_t size() const { return records.size(); }
    const DiagnosticsRecord& operator[](std::size_t i) const { return records[i]; }
    std::vector<double> column(double DiagnosticsRecord::*field) const {
        std::vector<double> v(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) v[i] = records[i].*field;
        return v;
    }
    std::vector<double> times() const { return column(&DiagnosticsRecord::t); }
};

/// Value with a multiplicative log-offset: true value = value * exp(log_offset).
/// log_offset is nonzero only when the e^{kx} weight would overflow.
struct WeightedValue {
    double value = 0.0;
    double log_offset = 0.0;
    double as_double() const;
};

/// (e^{kx}, f g) over the domain for modal states f, g (exact in y).
WeightedValue weighted_inner(double k, const ModalState& f, const ModalState& g,
                             const Grid& grid);

/// Trapezoid of e^{kx} v(x) over [0, L] given values on the full grid
/// (nx+2 points including both walls). Used where wall values are nonzero.
WeightedValue weighted_quad_full(double k, std::span<const double> full_values, double h);

DiagnosticsRecord compute_record(const ModalState& state, const ModalState* prev,
                                 const Geometry& geom, const DerivativeSet& derivs);

/// The initial-data functional: quadratic part |Delta^2 u0|^2 + |Delta u0|^2
/// + |D^5_x u0|^2 and quartic part u0^2 u0x^2, optionally e^{kx}-weighted.
struct JwParts {
    double quadratic = 0.0;
    double quartic = 0.0;
    double total() const { return quadratic + quartic; }
};

JwParts j_w(const ModalState& u0, const Geometry& geom, const DerivativeSet& derivs,
            bool weighted);

}  // namespace blk
