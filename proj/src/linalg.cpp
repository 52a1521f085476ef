#include "fracsub/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracsub {

namespace {

constexpr double kPivotFloor = 1.0e-280;

[[noreturn]] void throw_singular(std::size_t row) {
    throw SingularPivotError(
        row, "singular pivot encountered at row " + std::to_string(row));
}

} // namespace

std::vector<double> solve_tridiagonal(TridiagonalSystem s) {
    const std::size_t n = s.size();
    if (n == 0) return {};
    if (s.rhs.size() != n || s.sub.size() + 1 != n || s.super.size() + 1 != n) {
        throw std::invalid_argument("solve_tridiagonal: inconsistent lengths");
    }
    // Forward elimination on (diag, rhs); super is left untouched.
    if (std::abs(s.diag[0]) < kPivotFloor) throw_singular(0);
    for (std::size_t i = 1; i < n; ++i) {
        const double m = s.sub[i - 1] / s.diag[i - 1];
        s.diag[i] -= m * s.super[i - 1];
        s.rhs[i] -= m * s.rhs[i - 1];
        if (std::abs(s.diag[i]) < kPivotFloor) throw_singular(i);
    }
    std::vector<double> x(n);
    x[n - 1] = s.rhs[n - 1] / s.diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = (s.rhs[i] - s.super[i] * x[i + 1]) / s.diag[i];
    }
    return x;
}

BandedSystem::BandedSystem(std::size_t n, std::size_t half_bandwidth)
    : rhs(n, 0.0), n_(n), p_(half_bandwidth), stride_(3 * half_bandwidth + 1),
      storage_(stride_ * n, 0.0) {
    if (n == 0) {
        throw std::invalid_argument("BandedSystem: empty system");
    }
}

double& BandedSystem::at(std::size_t row, std::size_t col) {
    if (row >= n_ || col >= n_ || !in_band(row, col)) {
        throw std::out_of_range("BandedSystem::at outside band");
    }
    return storage_[col * stride_ + (row + 2 * p_ - col)];
}

double BandedSystem::at(std::size_t row, std::size_t col) const {
    return const_cast<BandedSystem*>(this)->at(row, col);
}

std::vector<double> solve_banded(BandedSystem s) {
    const std::size_t n = s.n_;
    const std::size_t p = s.p_;
    const std::size_t stride = s.stride_;
    auto& a = s.storage_;
    // Entry (i, j) lives at a[j*stride + i - j + 2p]; rows [0, p) of each
    // column hold pivoting fill.
    auto idx = [&](std::size_t i, std::size_t j) {
        return j * stride + (i + 2 * p - j);
    };

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t imax = std::min(k + p, n - 1);
        // Partial pivot within the column.
        std::size_t piv = k;
        double best = std::abs(a[idx(k, k)]);
        for (std::size_t i = k + 1; i <= imax; ++i) {
            const double v = std::abs(a[idx(i, k)]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < kPivotFloor) throw_singular(k);
        const std::size_t jmax = std::min(k + p + (piv - k), n - 1);
        if (piv != k) {
            for (std::size_t j = k; j <= jmax; ++j) {
                std::swap(a[idx(k, j)], a[idx(piv, j)]);
            }
            std::swap(s.rhs[k], s.rhs[piv]);
        }
        const double pivot = a[idx(k, k)];
        for (std::size_t i = k + 1; i <= imax; ++i) {
            a[idx(i, k)] /= pivot;
        }
        const double rk = s.rhs[k];
        const double* mult = &a[k * stride]; // multiplier (i,k) at i + 2p - k
        for (std::size_t j = k + 1; j <= jmax; ++j) {
            double* col = &a[j * stride]; // entry (i,j) at i + 2p - j
            const double akj = col[k + 2 * p - j];
            if (akj == 0.0) continue;
            for (std::size_t i = k + 1; i <= imax; ++i) {
                col[i + 2 * p - j] -= mult[i + 2 * p - k] * akj;
            }
        }
        for (std::size_t i = k + 1; i <= imax; ++i) {
            s.rhs[i] -= mult[i + 2 * p - k] * rk;
        }
    }

    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = s.rhs[i];
        const std::size_t jmax = std::min(i + 2 * p, n - 1);
        for (std::size_t j = i + 1; j <= jmax; ++j) {
            acc -= a[idx(i, j)] * x[j];
        }
        x[i] = acc / a[idx(i, i)];
    }
    return x;
}

} // namespace fracsub
