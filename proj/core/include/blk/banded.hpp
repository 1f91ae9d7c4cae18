#pragma once

#include <span>
#include <vector>

#include "blk/errors.hpp"

namespace blk {

/// General banded matrix, LAPACK-style column storage.
/// Entry (i,j) is stored when -ku <= i-j <= kl.
class BandedMatrix {
  public:
    BandedMatrix() = default;
    BandedMatrix(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), data_(static_cast<std::size_t>(n) * (kl + ku + 1), 0.0) {}

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const {
        const int d = i - j;
        return i >= 0 && i < n_ && j >= 0 && j < n_ && d <= kl_ && d >= -ku_;
    }

    double operator()(int i, int j) const { return in_band(i, j) ? data_[idx(i, j)] : 0.0; }

    void set(int i, int j, double v) {
        if (!in_band(i, j)) throw dimension_error("BandedMatrix::set outside band");
        data_[idx(i, j)] = v;
    }

    void add(int i, int j, double v) {
        if (!in_band(i, j)) throw dimension_error("BandedMatrix::add outside band");
        data_[idx(i, j)] += v;
    }

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const {
        if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
            throw dimension_error("BandedMatrix::apply size mismatch");
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            const int j0 = std::max(0, i - kl_);
            const int j1 = std::min(n_ - 1, i + ku_);
            for (int j = j0; j <= j1; ++j) s += data_[idx(i, j)] * x[j];
            y[i] = s;
        }
    }

    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> y(x.size());
        apply(x, y);
        return y;
    }

    /// A += c * B (bands of B must fit inside bands of A).
    void axpy(double c, const BandedMatrix& b) {
        if (b.n_ != n_) throw dimension_error("BandedMatrix::axpy size mismatch");
        for (int j = 0; j < n_; ++j) {
            const int i0 = std::max(0, j - b.ku_);
            const int i1 = std::min(n_ - 1, j + b.kl_);
            for (int i = i0; i <= i1; ++i) {
                const double v = b.data_[b.idx(i, j)];
                if (v != 0.0) add(i, j, c * v);
            }
        }
    }

    void add_identity(double c) {
        for (int i = 0; i < n_; ++i) add(i, i, c);
    }

    std::vector<double> to_dense() const {
        std::vector<double> d(static_cast<std::size_t>(n_) * n_, 0.0);
        for (int j = 0; j < n_; ++j)
            for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
                d[static_cast<std::size_t>(i) * n_ + j] = data_[idx(i, j)];
        return d;
    }

  private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * (kl_ + ku_ + 1) + static_cast<std::size_t>(i - j + ku_);
    }

    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> data_;
};

/// LU factorization of a banded matrix with partial pivoting
/// (unblocked dgbtrf-style; fill widens the upper band by kl).
class BandedLU {
  public:
    BandedLU() = default;
    explicit BandedLU(const BandedMatrix& a) { factor(a); }

    void factor(const BandedMatrix& a);

    /// Solve A x = b in place.
    void solve(std::span<double> b) const;

    std::vector<double> solve(std::span<const double> b) const {
        std::vector<double> x(b.begin(), b.end());
        solve(std::span<double>(x));
        return x;
    }

    bool factored() const { return n_ > 0; }

  private:
    std::size_t idx(int i, int j) const {
        // row offset kl_+ku_ at the diagonal; ldab = 2*kl_+ku_+1
        return static_cast<std::size_t>(j) * (2 * kl_ + ku_ + 1) +
               static_cast<std::size_t>(i - j + kl_ + ku_);
    }

    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> ab_;
    std::vector<int> piv_;
};

}  // namespace blk
