#pragma once

#include "fracsub/linalg.hpp"
#include "fracsub/problem2d.hpp"

namespace fracsub {

/// Implicit banded system for level j+1 of the 2D scheme. Unknowns are the
/// non-Dirichlet nodes in row-major order (x fastest), so the half-bandwidth
/// equals the number of retained x-nodes; the five-point coupling mirrors
/// the 1D stencil in each direction, with the trapezoid endpoint of the
/// memory sum treated implicitly and homogeneous-Neumann y-edges closed by
/// fictitious-node elimination.
BandedSystem assemble_level_2d(const Problem2D& p, const Grid2D& g,
                               const SolutionHistory2D& hist, std::size_t j);

/// Full march; with richardson enabled, combines with the half-step march
/// level-by-level at first order.
SolutionHistory2D solve_2d(const Problem2D& p, const Grid2D& g,
                           bool richardson);

} // namespace fracsub
