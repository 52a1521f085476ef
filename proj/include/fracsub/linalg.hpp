#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsub {

/// Raised when elimination meets a pivot too small to divide by.
class SingularPivotError : public std::runtime_error {
public:
    SingularPivotError(std::size_t row_index, const std::string& what)
        : std::runtime_error(what), row(row_index) {}

    std::size_t row;
};

/// sub/super have n-1 entries, diag and rhs have n.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    std::size_t size() const { return diag.size(); }
};

/// Thomas algorithm (no pivoting; the schemes assemble diagonally dominant
/// rows for the step sizes of interest).
std::vector<double> solve_tridiagonal(TridiagonalSystem s);

/// Square band matrix with equal lower/upper half-bandwidth, stored
/// column-major in the LAPACK band layout with room for pivoting fill.
class BandedSystem {
public:
    BandedSystem(std::size_t n, std::size_t half_bandwidth);

    std::size_t size() const { return n_; }
    std::size_t half_bandwidth() const { return p_; }

    bool in_band(std::size_t row, std::size_t col) const {
        return (row < col ? col - row : row - col) <= p_;
    }

    /// Entry A(row, col); (row, col) must lie within the band.
    double& at(std::size_t row, std::size_t col);
    double at(std::size_t row, std::size_t col) const;

    std::vector<double> rhs;

private:
    friend std::vector<double> solve_banded(BandedSystem s);

    std::size_t n_;
    std::size_t p_;
    std::size_t stride_;            // 3p+1 storage rows per column
    std::vector<double> storage_;   // column-major, fill rows on top
};

/// Banded LU with partial pivoting; row interchanges stay within the band
/// profile. Residual accuracy is that of a backward-stable direct solve.
std::vector<double> solve_banded(BandedSystem s);

} // namespace fracsub
