#pragma once

#include "fracsub/fractional.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace fracsub {

using SpaceFn2 = std::function<double(double x, double y)>;
using SpaceTimeFn2 = std::function<double(double x, double y, double t)>;

/// Boundary closure of the rectangle. The standard combination pins u = 0 on
/// the x-edges and imposes homogeneous Neumann data on the y-edges through
/// fictitious nodes; the all-Dirichlet variant pins u = 0 on every edge.
enum class BoundaryMode2D {
    dirichlet_x_neumann_y,
    all_dirichlet,
};

/// Two-dimensional problem
///   rho1 D^{nu1} u - rho2 D^{nu2} u - a1 u_xx - a2 u_yy + d1 u_x + d2 u_y
///     - (K * [b1 u_xx + b2 u_yy]) = f   on (0,Lx) x (0,Ly) x (0,T).
struct Problem2D {
    double nu1 = 0.5;
    double nu2 = 0.25;
    SpaceFn2 rho1;
    SpaceTimeFn2 rho2;
    SpaceTimeFn2 a1;
    SpaceTimeFn2 a2;
    SpaceTimeFn2 d1;
    SpaceTimeFn2 d2;
    SpaceTimeFn2 b1;
    SpaceTimeFn2 b2;
    KernelDescriptor kernel = KernelDescriptor::zero();
    SpaceTimeFn2 f;
    SpaceFn2 u0;
    BoundaryMode2D bc = BoundaryMode2D::dirichlet_x_neumann_y;
    double Lx = 1.0;
    double Ly = 1.0;
    double final_time = 1.0;
};

struct Grid2D {
    std::size_t Kx = 2;
    std::size_t Ky = 2;
    std::size_t J = 1;
    double Lx = 1.0;
    double Ly = 1.0;
    double T = 1.0;

    double hx() const { return Lx / static_cast<double>(Kx); }
    double hy() const { return Ly / static_cast<double>(Ky); }
    double sigma() const { return T / static_cast<double>(J); }
    double x(std::size_t k) const { return static_cast<double>(k) * hx(); }
    double y(std::size_t l) const { return static_cast<double>(l) * hy(); }
    double time(std::size_t j) const {
        return static_cast<double>(j) * sigma();
    }
};

/// Full lattice of values u^j_{l,k} (edges included).
class SolutionHistory2D {
public:
    SolutionHistory2D(std::size_t Kx, std::size_t Ky, std::size_t J)
        : Kx_(Kx), Ky_(Ky),
          data_((Kx + 1) * (Ky + 1) * (J + 1), 0.0) {}

    std::size_t nodes_per_level() const { return (Kx_ + 1) * (Ky_ + 1); }

    double& at(std::size_t j, std::size_t l, std::size_t k) {
        return data_[(j * (Ky_ + 1) + l) * (Kx_ + 1) + k];
    }
    double at(std::size_t j, std::size_t l, std::size_t k) const {
        return data_[(j * (Ky_ + 1) + l) * (Kx_ + 1) + k];
    }
    const double* level(std::size_t j) const {
        return &data_[j * nodes_per_level()];
    }
    double* level(std::size_t j) {
        return &data_[j * nodes_per_level()];
    }

private:
    std::size_t Kx_;
    std::size_t Ky_;
    std::vector<double> data_;
};

} // namespace fracsub
