#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracsub {

/// Grunwald-Letnikov weights rho_m = (-1)^m C(nu, m) for a fractional order
/// nu in (0, 1], generated by the stable recurrence
/// rho_0 = 1, rho_m = rho_{m-1} * (1 - (nu+1)/m).
struct GLWeightTable {
    double nu = 0.0;
    std::vector<double> weights;

    std::size_t horizon() const { return weights.size() - 1; }
};

GLWeightTable gl_weights(double nu, std::size_t horizon);

/// Values u^0..u^J of the solution at one spatial node; u^0 is the initial
/// value entering the Caputo differences.
struct NodeHistory {
    std::vector<double> values;

    double u0() const { return values.front(); }
    std::size_t top_level() const { return values.size() - 1; }
};

/// Discrete Caputo derivative at the latest level of the history:
/// sigma^{-nu} * sum_{m=0}^{j+1} (u^{j+1-m} - u^0) rho_m.
double discrete_caputo(const NodeHistory& h, const GLWeightTable& w,
                       double sigma);

/// Richardson combination (2^order * fine - coarse) / (2^order - 1) of two
/// approximations computed with steps sigma and sigma/2.
double richardson_combine(double coarse, double fine, int order);

/// Time-convolution kernel with closed-form interval integrals for the
/// power-law and omega classes; anything else integrates adaptively.
class KernelDescriptor {
public:
    static KernelDescriptor zero();
    /// c * t^{-p} with p < 1 (p >= 1 is not integrable at 0).
    static KernelDescriptor power_law(double c, double p);
    /// omega_theta(t) = t^{theta-1}/Gamma(theta), theta > 0.
    static KernelDescriptor omega(double theta);
    /// Arbitrary kernel, integrable on the intervals it will be asked about.
    static KernelDescriptor custom(std::function<double(double)> f);

    bool is_zero() const { return kind_ == Kind::zero; }

    /// Pointwise value K(t), t > 0.
    double value(double t) const;

    /// Integral of K over [t0, t1], 0 <= t0 <= t1.
    double integral(double t0, double t1) const;

private:
    enum class Kind { zero, power_law, omega, custom };

    KernelDescriptor(Kind k, double c, double p,
                     std::function<double(double)> f)
        : kind_(k), c_(c), p_(p), fn_(std::move(f)) {}

    Kind kind_;
    double c_ = 0.0; // power-law scale
    double p_ = 0.0; // power-law exponent / omega theta
    std::function<double(double)> fn_;
};

/// Trapezoid-rule kernel weights for time level j:
/// K_{m,j} = integral of K(sigma_{j+1} - s) over s in [sigma_m, sigma_{m+1}],
/// m = 0..j.
struct MemoryQuadrature {
    double sigma = 0.0;
    std::size_t level = 0;
    std::vector<double> weights; // K_{m,j}, m = 0..j
};

MemoryQuadrature kernel_quadrature(const KernelDescriptor& kernel,
                                   double sigma, std::size_t j);

/// Discrete memory term at level j:
/// sum_{m=0}^{j} (b^m v^m + b^{m+1} v^{m+1}) * K_{m,j} / 2,
/// where v^m is the centered second difference divided by h^2. Histories
/// must cover levels 0..j+1.
double memory_term(std::span<const double> dxx_history,
                   std::span<const double> b_history,
                   const MemoryQuadrature& q);

} // namespace fracsub
