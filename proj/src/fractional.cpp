#include "fracsub/fractional.hpp"

#include "fracsub/quadrature.hpp"
#include "fracsub/special_functions.hpp"

#include <cmath>

namespace fracsub {

GLWeightTable gl_weights(double nu, std::size_t horizon) {
    if (!(nu > 0.0) || nu > 1.0) {
        throw std::domain_error("gl_weights: order must lie in (0, 1]");
    }
    GLWeightTable table;
    table.nu = nu;
    table.weights.resize(horizon + 1);
    table.weights[0] = 1.0;
    for (std::size_t m = 1; m <= horizon; ++m) {
        table.weights[m] =
            table.weights[m - 1] * (1.0 - (nu + 1.0) / static_cast<double>(m));
    }
    return table;
}

double discrete_caputo(const NodeHistory& h, const GLWeightTable& w,
                       double sigma) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("discrete_caputo: sigma must be positive");
    }
    const std::size_t top = h.top_level();
    if (w.weights.size() < top + 1) {
        throw std::invalid_argument(
            "discrete_caputo: weight table shorter than history");
    }
    const double u0 = h.u0();
    double sum = 0.0;
    for (std::size_t m = 0; m <= top; ++m) {
        sum += (h.values[top - m] - u0) * w.weights[m];
    }
    return sum * std::pow(sigma, -w.nu);
}

double richardson_combine(double coarse, double fine, int order) {
    if (order < 1) {
        throw std::domain_error("richardson_combine: order must be >= 1");
    }
    const double factor = std::ldexp(1.0, order); // 2^order
    return (factor * fine - coarse) / (factor - 1.0);
}

KernelDescriptor KernelDescriptor::zero() {
    return KernelDescriptor(Kind::zero, 0.0, 0.0, nullptr);
}

KernelDescriptor KernelDescriptor::power_law(double c, double p) {
    if (p >= 1.0) {
        throw std::domain_error(
            "KernelDescriptor: power-law exponent p must satisfy p < 1");
    }
    return KernelDescriptor(Kind::power_law, c, p, nullptr);
}

KernelDescriptor KernelDescriptor::omega(double theta) {
    if (!(theta > 0.0)) {
        throw std::domain_error("KernelDescriptor: omega theta must be > 0");
    }
    return KernelDescriptor(Kind::omega, 0.0, theta, nullptr);
}

KernelDescriptor KernelDescriptor::custom(std::function<double(double)> f) {
    if (!f) {
        throw std::invalid_argument("KernelDescriptor: null callable");
    }
    return KernelDescriptor(Kind::custom, 0.0, 0.0, std::move(f));
}

double KernelDescriptor::value(double t) const {
    switch (kind_) {
    case Kind::zero:
        return 0.0;
    case Kind::power_law:
        return c_ * std::pow(t, -p_);
    case Kind::omega:
        return fracsub::omega(p_, t);
    case Kind::custom:
        return fn_(t);
    }
    return 0.0;
}

double KernelDescriptor::integral(double t0, double t1) const {
    switch (kind_) {
    case Kind::zero:
        return 0.0;
    case Kind::power_law: {
        // antiderivative c * t^{1-p} / (1-p)
        const double q = 1.0 - p_;
        return c_ / q * (std::pow(t1, q) - std::pow(t0, q));
    }
    case Kind::omega: {
        // antiderivative omega_{theta+1}(t) = t^theta / Gamma(theta+1)
        const double g = fracsub::Gamma(p_ + 1.0);
        return (std::pow(t1, p_) - std::pow(t0, p_)) / g;
    }
    case Kind::custom:
        if (t1 <= t0) return 0.0;
        return integrate(fn_, t0, t1, 1.0e-12);
    }
    return 0.0;
}

MemoryQuadrature kernel_quadrature(const KernelDescriptor& kernel,
                                   double sigma, std::size_t j) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("kernel_quadrature: sigma must be positive");
    }
    MemoryQuadrature q;
    q.sigma = sigma;
    q.level = j;
    q.weights.resize(j + 1);
    if (kernel.is_zero()) return q;
    // K_{m,j} = int_{sigma_m}^{sigma_{m+1}} K(sigma_{j+1} - s) ds
    //         = int_{(j-m) sigma}^{(j+1-m) sigma} K(tau) dtau.
    for (std::size_t m = 0; m <= j; ++m) {
        const double lo = static_cast<double>(j - m) * sigma;
        const double hi = static_cast<double>(j + 1 - m) * sigma;
        q.weights[m] = kernel.integral(lo, hi);
    }
    return q;
}

double memory_term(std::span<const double> dxx_history,
                   std::span<const double> b_history,
                   const MemoryQuadrature& q) {
    const std::size_t j = q.level;
    if (dxx_history.size() < j + 2 || b_history.size() < j + 2) {
        throw std::invalid_argument(
            "memory_term: histories must cover levels 0..j+1");
    }
    double sum = 0.0;
    for (std::size_t m = 0; m <= j; ++m) {
        sum += (b_history[m] * dxx_history[m] +
                b_history[m + 1] * dxx_history[m + 1]) *
               q.weights[m] * 0.5;
    }
    return sum;
}

} // namespace fracsub
