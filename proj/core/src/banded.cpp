#include "blk/banded.hpp"

#include <cmath>

namespace blk {

void BandedLU::factor(const BandedMatrix& a) {
    n_ = a.size();
    kl_ = a.lower();
    ku_ = a.upper();
    const int ldab = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(n_) * ldab, 0.0);
    piv_.assign(n_, 0);

    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
            ab_[idx(i, j)] = a(i, j);

    const int kv = kl_ + ku_;  // width of U's band after fill
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        // pivot search in column j, rows j..j+km
        int p = 0;
        double amax = std::fabs(ab_[idx(j, j)]);
        for (int q = 1; q <= km; ++q) {
            const double v = std::fabs(ab_[idx(j + q, j)]);
            if (v > amax) {
                amax = v;
                p = q;
            }
        }
        piv_[j] = j + p;
        if (amax == 0.0 || !std::isfinite(amax))
            throw solver_error("banded LU: singular factorization (zero pivot at row " +
                               std::to_string(j) + "); reduce dt or check operator assembly");
        if (p != 0) {
            const int jmax = std::min(n_ - 1, j + kv);
            for (int jj = j; jj <= jmax; ++jj) std::swap(ab_[idx(j, jj)], ab_[idx(j + p, jj)]);
        }
        const double piv = ab_[idx(j, j)];
        for (int i = j + 1; i <= j + km; ++i) ab_[idx(i, j)] /= piv;
        const int jmax = std::min(n_ - 1, j + kv);
        for (int jj = j + 1; jj <= jmax; ++jj) {
            const double f = ab_[idx(j, jj)];
            if (f != 0.0)
                for (int i = j + 1; i <= j + km; ++i) ab_[idx(i, jj)] -= ab_[idx(i, j)] * f;
        }
    }
}

void BandedLU::solve(std::span<double> b) const {
    if (!factored()) throw solver_error("banded LU: solve before factor");
    if (static_cast<int>(b.size()) != n_) throw dimension_error("banded LU: rhs size mismatch");
    const int kv = kl_ + ku_;
    // L y = P b
    for (int j = 0; j < n_; ++j) {
        if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
        const int km = std::min(kl_, n_ - 1 - j);
        for (int i = j + 1; i <= j + km; ++i) b[i] -= ab_[idx(i, j)] * b[j];
    }
    // U x = y
    for (int j = n_ - 1; j >= 0; --j) {
        b[j] /= ab_[idx(j, j)];
        const int i0 = std::max(0, j - kv);
        for (int i = i0; i < j; ++i) b[i] -= ab_[idx(i, j)] * b[j];
    }
}

}  // namespace blk
