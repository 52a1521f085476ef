#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace fracsub {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Tanh-sinh (double-exponential) quadrature on (a, b).
///
/// Nodes cluster doubly-exponentially at the endpoints, so integrable
/// endpoint singularities (t^{-p}, p < 1) need no special casing. Node
/// coordinates are formed from the distance to the nearer endpoint, which
/// stays accurate down to denormal range when that endpoint is 0; place
/// singularities at an endpoint with coordinate 0 (substitute first if
/// needed). Nodes that land exactly on an endpoint, or make the integrand
/// non-finite, are dropped — their weights are below the series cutoff.
template <typename F>
QuadratureResult tanh_sinh(F&& f, double a, double b, double abs_tol,
                           int max_level = 12) {
    constexpr double t_max = 6.8;
    const double width = b - a;
    const double half = 0.5 * width;

    auto eval = [&](double t) -> double {
        const double s = 0.5 * M_PI * std::sinh(t);
        // Fraction of the interval to the endpoint t points at; stays
        // accurate down to denormals.
        const double d = 1.0 / (1.0 + std::exp(2.0 * std::abs(s)));
        if (d == 0.0) return 0.0;
        const double w = 2.0 * M_PI * std::cosh(t) * d * (1.0 - d) * half;
        const double x = t >= 0.0 ? b - width * d : a + width * d;
        if (x <= a || x >= b) {
            // width*d rounded off against a nonzero endpoint coordinate;
            // keep the node only if the integrand is finite there.
            const double v = f(t >= 0.0 ? b : a);
            return std::isfinite(v) ? w * v : 0.0;
        }
        const double v = f(x);
        return std::isfinite(v) ? w * v : 0.0;
    };

    double h = 1.0;
    double sum = eval(0.0);
    for (double t = h; t <= t_max; t += h) {
        sum += eval(t) + eval(-t);
    }
    double integral = h * sum;

    QuadratureResult res;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= t_max; t += 2.0 * h) {
            add += eval(t) + eval(-t);
        }
        sum += add;
        const double next = h * sum;
        const double err = std::abs(next - integral);
        integral = next;
        if (level >= 3 && err <= abs_tol) {
            res.value = integral;
            res.error_estimate = err;
            res.converged = true;
            return res;
        }
        res.error_estimate = err;
    }
    res.value = integral;
    return res;
}

/// As tanh_sinh, but failure to reach the tolerance is an error.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol) {
    auto r = tanh_sinh(f, a, b, abs_tol);
    if (!r.converged) {
        throw std::runtime_error("quadrature did not converge to tolerance");
    }
    return r.value;
}

} // namespace fracsub
