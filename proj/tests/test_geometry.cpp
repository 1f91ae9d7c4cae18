#include <doctest.h>

#include <cmath>

#include "blk/analysis.hpp"
#include "blk/geometry.hpp"
#include "oracles.hpp"

using namespace blk;

TEST_CASE("build_domain validates and fills lambdas") {
    const Geometry g = build_domain(DomainKind::rectangle, M_PI, M_PI, 128, 16, 0.0);
    for (int j = 0; j < 16; ++j)
        CHECK(g.basis.lambda(j) == doctest::Approx((j + 1.0) * (j + 1.0)).epsilon(1e-14));
    CHECK(g.grid.h * (g.grid.nx + 1) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(g.grid.ny_col >= (3 * g.grid.n_modes + 1) / 2);

    const Geometry hs = build_domain(DomainKind::half_strip, 40.0, M_PI / 2.0, 512, 16, 0.25);
    CHECK(hs.basis.lambda(0) == doctest::Approx(4.0));

    CHECK_THROWS_AS(build_domain(DomainKind::rectangle, -1.0, M_PI, 128, 8, 0.0),
                    invalid_geometry_error);
    CHECK_THROWS_AS(build_domain(DomainKind::half_strip, 40.0, M_PI, 128, 8, 0.3),
                    invalid_parameter_error);
    CHECK_THROWS_AS(build_domain(DomainKind::rectangle, M_PI, M_PI, 128, 8, 0.1),
                    invalid_parameter_error);

    // lambdas strictly increasing
    for (int j = 1; j < 16; ++j) CHECK(g.basis.lambda(j) > g.basis.lambda(j - 1));
}

TEST_CASE("sine basis discrete orthonormality and analytic eigen-relation") {
    const Geometry g = build_domain(DomainKind::rectangle, M_PI, 1.7, 64, 10, 0.0);
    const SineBasis& basis = g.basis;
    for (int j = 0; j < 10; ++j) {
        for (int l = 0; l < 10; ++l) {
            double s = 0.0;
            for (int m = 0; m < basis.ny(); ++m) s += basis.w_at(j, m) * basis.w_at(l, m);
            s *= basis.quad_weight();
            CHECK(s == doctest::Approx(j == l ? 1.0 : 0.0).epsilon(1e-12));
        }
        for (int m = 0; m < basis.ny(); ++m) {
            CHECK(basis.omega_d2(j, basis.y(m)) ==
                  doctest::Approx(-basis.lambda(j) * basis.w_at(j, m)).epsilon(1e-10));
        }
    }
}

TEST_CASE("triple products: closed form vs quadrature oracle") {
    const double B = M_PI;
    // a_111 = (2/pi)^{3/2} * 4/3  (the integral of sin^3 over (0,pi) is 4/3)
    const double expected_111 = std::pow(2.0 / M_PI, 1.5) * (4.0 / 3.0);
    CHECK(TripleProductTensor::closed_form(B, 1, 1, 1) ==
          doctest::Approx(expected_111).epsilon(1e-13));
    CHECK(TripleProductTensor::closed_form(B, 1, 1, 2) == 0.0);

    const double B2 = 1.9;
    const TripleProductTensor a(B2, 6);
    auto omega = [B2](int j1, double y) {
        return std::sqrt(2.0 / B2) * std::sin(j1 * M_PI * y / B2);
    };
    for (int k = 1; k <= 6; ++k)
        for (int l = 1; l <= 6; ++l)
            for (int j = 1; j <= 6; ++j) {
                const double q = oracle::adaptive_simpson(
                    [&](double y) { return omega(k, y) * omega(l, y) * omega(j, y); }, 0.0, B2);
                CHECK(a(k - 1, l - 1, j - 1) == doctest::Approx(q).epsilon(1e-12));
                CHECK(a(k - 1, l - 1, j - 1) == a(l - 1, k - 1, j - 1));
                CHECK(a(k - 1, l - 1, j - 1) ==
                      doctest::Approx(a(j - 1, l - 1, k - 1)).epsilon(1e-13));
                if ((k + l + j) % 2 == 0) CHECK(std::fabs(a(k - 1, l - 1, j - 1)) < 1e-14);
            }
}

TEST_CASE("sine transforms: round trip, selectivity, Parseval") {
    const Geometry g = build_domain(DomainKind::rectangle, 2.0, 1.3, 48, 8, 0.0);
    Rng rng(42);

    // u = omega_3(y) phi(x): forward transform isolates mode 3
    PhysicalField f(g.grid.nx, g.basis.ny());
    for (int m = 0; m < f.ny; ++m)
        for (int i = 0; i < f.nx; ++i)
            f.at(m, i) = g.basis.w_at(2, m) * std::sin(g.grid.x(i));
    const ModalState s = forward_sine_transform(f, g.basis);
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < g.grid.nx; ++i) {
            const double want = (j == 2) ? std::sin(g.grid.x(i)) : 0.0;
            CHECK(s.at(j, i) == doctest::Approx(want).epsilon(1e-12));
        }

    // zero field stays zero
    const ModalState z = forward_sine_transform(PhysicalField(g.grid.nx, g.basis.ny()), g.basis);
    for (double v : z.coeffs) CHECK(v == 0.0);

    // random band-limited round trip + Parseval
    ModalState r(8, g.grid.nx);
    for (double& v : r.coeffs) v = rng.uniform(-1.0, 1.0);
    const PhysicalField pf = inverse_sine_transform(r, g.basis);
    const ModalState back = forward_sine_transform(pf, g.basis);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < r.coeffs.size(); ++q) {
        num += (back.coeffs[q] - r.coeffs[q]) * (back.coeffs[q] - r.coeffs[q]);
        den += r.coeffs[q] * r.coeffs[q];
    }
    CHECK(std::sqrt(num / den) < 1e-12);

    double modal = 0.0;
    for (double v : r.coeffs) modal += v * v;
    modal *= g.grid.h;
    double phys = 0.0;
    for (double v : pf.values) phys += v * v;
    phys *= g.grid.h * g.basis.quad_weight();
    CHECK(modal == doctest::Approx(phys).epsilon(1e-10));

    // shape mismatch is rejected
    CHECK_THROWS_AS(forward_sine_transform(PhysicalField(g.grid.nx, 3), g.basis),
                    dimension_error);
}
