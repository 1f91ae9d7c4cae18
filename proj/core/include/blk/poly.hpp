#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace blk {

/// Dense polynomial in monomial coefficients, p(x) = sum c[k] x^k.
/// Small degrees only; used for compatible x-profiles, manufactured
/// solutions, and exact integral oracles.
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly{}; }
    static Poly monomial(int k, double a = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
        c.back() = a;
        return Poly(std::move(c));
    }

    /// x^a (L - x)^b expanded in monomials.
    static Poly clamped(int a, int b, double L) {
        Poly p = monomial(0);
        for (int i = 0; i < b; ++i) p = p * Poly({L, -1.0});
        return monomial(a) * p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<double>& coeffs() const { return c_; }

    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * x + c_[k];
        return v;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly{};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Poly(std::move(d));
    }

    Poly derivative(int n) const {
        Poly p = *this;
        for (int i = 0; i < n; ++i) p = p.derivative();
        return p;
    }

    /// Exact integral over [0, L].
    double integral(double L) const {
        double v = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) v = (v + c_[k] / static_cast<double>(k + 1)) * L;
        return v;
    }

    Poly operator+(const Poly& o) const {
        std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
        for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
        return Poly(std::move(r));
    }

    Poly operator-(const Poly& o) const { return *this + (o * -1.0); }

    Poly operator*(const Poly& o) const {
        if (c_.empty() || o.c_.empty()) return Poly{};
        std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(r));
    }

    Poly operator*(double a) const {
        std::vector<double> r = c_;
        for (double& v : r) v *= a;
        return Poly(std::move(r));
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
    std::vector<double> c_;
};

inline Poly operator*(double a, const Poly& p) { return p * a; }

}  // namespace blk
