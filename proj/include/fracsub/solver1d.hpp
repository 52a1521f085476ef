#pragma once

#include "fracsub/linalg.hpp"
#include "fracsub/problem.hpp"

#include <string>
#include <vector>

namespace fracsub {

/// Outcome of one compatibility check between initial and boundary data.
struct CompatibilityDiagnostic {
    std::string condition;
    double x = 0.0;
    double magnitude = 0.0;
};

/// Checks the t = 0 compatibility of boundary and initial data: Dirichlet
/// ends need data(0)/c_value = u0 at the endpoint, Robin ends need
/// c_deriv u0' + c_value u0 = data(0). Returns the violations (absolute
/// residual above 1e-7) without aborting; derivatives of u0 are taken by
/// one-sided fourth-order differences.
std::vector<CompatibilityDiagnostic> validate_compatibility(
    const Problem1D& p);

/// Implicit system for the unknown level j+1 given history levels 0..j.
/// Interior row k:
///   [rho1 sigma^{-nu1} - rho2^{j+1} sigma^{-nu2} + 2A_k] u^{j+1}_k
///   + (-A_k - D_k) u^{j+1}_{k-1} + (-A_k + D_k) u^{j+1}_{k+1} = rhs_k,
/// with A_k = a^{j+1}_k/h^2 + b^{j+1}_k K_{j,j}/(2h^2) (the trapezoid
/// endpoint of the memory sum is implicit) and D_k = d^{j+1}_k/(2h).
/// The rhs carries the fractional-history sums, the memory sum through
/// level j, and f at sigma_{j+1}. Robin endpoints are closed by eliminating
/// the fictitious nodes u_{-1}, u_{K+1} through the boundary conditions at
/// sigma_{j+1}.
TridiagonalSystem assemble_level(const Problem1D& p, const Grid1D& g,
                                 const SolutionHistory& hist, std::size_t j);

/// Solves the level j+1 system and writes it into the history.
void step(const Problem1D& p, const Grid1D& g, SolutionHistory& hist,
          std::size_t j);

/// Full march over j = 0..J-1. With richardson enabled the march is also
/// run at half the time step and the coinciding levels are combined with
/// first-order Richardson extrapolation.
SolutionHistory solve(const Problem1D& p, const Grid1D& g, bool richardson);

} // namespace fracsub
