#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "blk/banded.hpp"
#include "blk/poly.hpp"

using blk::BandedLU;
using blk::BandedMatrix;
using blk::Poly;

TEST_CASE("poly basics") {
    const Poly p = Poly::clamped(2, 3, 2.0);  // x^2 (2-x)^3
    CHECK(p.degree() == 5);
    CHECK(p(0.0) == doctest::Approx(0.0));
    CHECK(p(2.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p(1.0) == doctest::Approx(1.0));  // 1 * 1^3

    const Poly d = p.derivative();
    CHECK(d(0.0) == doctest::Approx(0.0));
    // d/dx[x^2 (2-x)^3] = 2x(2-x)^3 - 3x^2(2-x)^2
    CHECK(d(1.0) == doctest::Approx(2.0 - 3.0));

    // int_0^2 x^2 dx = 8/3
    CHECK(Poly::monomial(2).integral(2.0) == doctest::Approx(8.0 / 3.0));
    CHECK(p.derivative(5)(0.7) == doctest::Approx(-120.0));
}

namespace {

BandedMatrix random_banded(int n, int kl, int ku, unsigned seed) {
    BandedMatrix a(n, kl, ku);
    unsigned s = seed;
    auto next = [&s]() {
        s = 1664525u * s + 1013904223u;
        return static_cast<double>(s >> 8) / static_cast<double>(1u << 24) - 0.5;
    };
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
            a.set(i, j, next() + (i == j ? 4.0 : 0.0));
    return a;
}

}  // namespace

TEST_CASE("banded apply matches dense") {
    const BandedMatrix a = random_banded(30, 3, 2, 7u);
    std::vector<double> x(30);
    for (int i = 0; i < 30; ++i) x[i] = std::sin(i + 1.0);
    const std::vector<double> y = a.apply(x);
    const std::vector<double> d = a.to_dense();
    for (int i = 0; i < 30; ++i) {
        double s = 0.0;
        for (int j = 0; j < 30; ++j) s += d[static_cast<std::size_t>(i) * 30 + j] * x[j];
        CHECK(y[i] == doctest::Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("banded LU solves against dense oracle") {
    const int n = 60;
    const BandedMatrix a = random_banded(n, 5, 5, 3u);
    Eigen::MatrixXd ad(n, n);
    const std::vector<double> dense = a.to_dense();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ad(i, j) = dense[static_cast<std::size_t>(i) * n + j];

    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = std::cos(0.3 * i);
    const Eigen::VectorXd xd = ad.partialPivLu().solve(b);

    BandedLU lu(a);
    std::vector<double> x(b.data(), b.data() + n);
    lu.solve(std::span<double>(x));
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xd(i)).epsilon(1e-10));
}

TEST_CASE("banded LU zero rhs and singular detection") {
    const BandedMatrix a = random_banded(20, 2, 2, 5u);
    BandedLU lu(a);
    std::vector<double> z(20, 0.0);
    lu.solve(std::span<double>(z));
    for (double v : z) CHECK(v == 0.0);

    BandedMatrix s(8, 1, 1);  // an all-zero column makes the matrix singular
    for (int i = 0; i < 8; ++i)
        for (int j = std::max(0, i - 1); j <= std::min(7, i + 1); ++j)
            s.set(i, j, j == 3 ? 0.0 : 1.0 + i + j);
    CHECK_THROWS_AS(BandedLU{s}, blk::solver_error);
}
