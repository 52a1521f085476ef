#pragma once

#include "fracsub/fractional.hpp"

#include <cstddef>
#include <functional>
#include <ostream>
#include <vector>

namespace fracsub {

using SpaceFn = std::function<double(double x)>;
using SpaceTimeFn = std::function<double(double x, double t)>;
using TimeFn = std::function<double(double t)>;

/// Endpoint condition c_deriv * u_x + c_value * u = data(t). A vanishing
/// c_deriv degrades to the Dirichlet row u = data(t)/c_value.
struct RobinBC {
    double c_deriv = 0.0;
    double c_value = 1.0;
    TimeFn data;

    bool is_dirichlet() const { return c_deriv == 0.0; }
};

/// One-dimensional problem
///   rho1(x) D^{nu1} u - rho2(x,t) D^{nu2} u - a(x,t) u_xx + d(x,t) u_x
///     - (K * b u_xx) = f(x,t)   on (0, length) x (0, final_time),
/// with initial datum u0 and Robin data at both endpoints.
struct Problem1D {
    double nu1 = 0.5;
    double nu2 = 0.25;
    SpaceFn rho1;
    SpaceTimeFn rho2;
    SpaceTimeFn a;
    SpaceTimeFn d;
    SpaceTimeFn b;
    KernelDescriptor kernel = KernelDescriptor::zero();
    SpaceTimeFn f;
    SpaceFn u0;
    RobinBC left;
    RobinBC right;
    double length = 1.0;
    double final_time = 1.0;
};

/// Uniform space-time lattice x_k = k h, sigma_j = j sigma.
struct Grid1D {
    std::size_t K = 2;
    std::size_t J = 1;
    double L = 1.0;
    double T = 1.0;

    double h() const { return L / static_cast<double>(K); }
    double sigma() const { return T / static_cast<double>(J); }
    double x(std::size_t k) const { return static_cast<double>(k) * h(); }
    double time(std::size_t j) const {
        return static_cast<double>(j) * sigma();
    }
};

/// Dense space-time table of computed values u^j_k; the fractional sums and
/// the memory term need the whole past, so nothing is discarded.
class SolutionHistory {
public:
    SolutionHistory(std::size_t K, std::size_t J)
        : K_(K), J_(J), data_((K + 1) * (J + 1), 0.0) {}

    std::size_t nodes() const { return K_ + 1; }
    std::size_t levels() const { return J_ + 1; }

    double& at(std::size_t j, std::size_t k) { return data_[j * (K_ + 1) + k]; }
    double at(std::size_t j, std::size_t k) const {
        return data_[j * (K_ + 1) + k];
    }

    const double* level(std::size_t j) const { return &data_[j * (K_ + 1)]; }
    double* level(std::size_t j) { return &data_[j * (K_ + 1)]; }

private:
    std::size_t K_;
    std::size_t J_;
    std::vector<double> data_;
};

/// CSV: header row of x-nodes, then one row of values per time level,
/// 17 significant digits.
void write_history_csv(std::ostream& os, const SolutionHistory& hist,
                       const Grid1D& grid);

} // namespace fracsub
