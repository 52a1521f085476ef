#include "fracsub/special_functions.hpp"

#include "fracsub/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace fracsub {

namespace {

// Lanczos approximation, g = 7, 9 terms (Godfrey's coefficients).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kSqrtTwoPi = 2.5066282746310002;
constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Lanczos series A(x); valid for x >= 0.5.
double lanczos_sum(double x) {
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) {
        a += kLanczos[i] / (x - 1.0 + i);
    }
    return a;
}

double gamma_positive(double x) {
    // x >= 0.5
    const double t = x + kLanczosG - 0.5;
    return kSqrtTwoPi * std::pow(t, x - 0.5) * std::exp(-t) * lanczos_sum(x);
}

} // namespace

double sinpi(double x) {
    const double r = x - 2.0 * std::round(0.5 * x); // r in [-1, 1], x = r mod 2
    return std::sin(M_PI * r);
}

double Gamma(double x) {
    if (std::isnan(x)) return x;
    if (is_nonpositive_integer(x)) {
        throw GammaPoleError("gamma: pole at nonpositive integer argument");
    }
    if (x >= 0.5) {
        if (x > 171.624) return std::numeric_limits<double>::infinity();
        return gamma_positive(x);
    }
    // Reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1-x)).
    return M_PI / (sinpi(x) * gamma_positive(1.0 - x));
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive");
    }
    if (x < 0.5) {
        // log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
        return std::log(M_PI / sinpi(x)) - log_gamma(1.0 - x);
    }
    const double t = x + kLanczosG - 0.5;
    return (x - 0.5) * std::log(t) - t + kLogSqrtTwoPi +
           std::log(lanczos_sum(x));
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x >= 0.5) {
        if (x > 171.624) return 0.0;
        return 1.0 / gamma_positive(x);
    }
    return sinpi(x) * gamma_positive(1.0 - x) / M_PI;
}

double omega(double theta, double t) {
    if (!(theta > 0.0)) {
        throw std::domain_error("omega: theta must be positive");
    }
    if (!(t > 0.0)) {
        throw std::domain_error("omega: t must be positive");
    }
    return std::pow(t, theta - 1.0) / Gamma(theta);
}

namespace {

// Largest magnitude an intermediate series term may reach while the
// compensated long-double sum still certifies ~1e-12 absolute error.
constexpr double kSeriesTermCap = 1.0e4;
constexpr int kSeriesMaxTerms = 20000;

// Predicted log of the largest series term |z|^k / Gamma(alpha k + beta).
double log_max_series_term(double alpha, double beta, double abs_z) {
    if (abs_z <= 1.0) {
        // Terms are bounded by 1/min Gamma on [beta, inf).
        return 0.5;
    }
    const double logz = std::log(abs_z);
    double best = -log_gamma(beta);
    // The maximizer satisfies alpha*psi(alpha k + beta) = log|z|; a coarse
    // scan is cheap and avoids an inverse-digamma.
    for (int k = 1; k <= kSeriesMaxTerms; k *= 2) {
        best = std::max(best, k * logz - log_gamma(alpha * k + beta));
    }
    for (int k = 3; k <= kSeriesMaxTerms; k += 2 * std::max(1, k / 8)) {
        best = std::max(best, k * logz - log_gamma(alpha * k + beta));
    }
    return best;
}

// Power series with terms generated in long double (running power and
// 80-bit Gamma keep each term accurate to ~1 ulp, which the alternating
// sums need) and Neumaier-compensated accumulation.
double ml_series(double alpha, double beta, double z) {
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double zk = 1.0L; // z^k
    int small_streak = 0;
    for (int k = 0; k < kSeriesMaxTerms; ++k) {
        const double x = alpha * k + beta;
        long double term;
        if (x <= 1754.0 && std::isfinite((double)zk)) {
            term = zk / ::tgammal(x);
        } else {
            const double lt = k * std::log(std::abs(z)) - log_gamma(x);
            double mag = lt < -745.0 ? 0.0 : std::exp(lt);
            if (z < 0.0 && k % 2 == 1) mag = -mag;
            term = (long double)mag;
        }
        const long double s = sum + term;
        if (std::fabs((double)sum) >= std::fabs((double)term)) {
            comp += (sum - s) + term;
        } else {
            comp += (term - s) + sum;
        }
        sum = s;
        if (!std::isfinite((double)sum)) {
            throw std::overflow_error("mittag_leffler: series overflow");
        }
        zk *= (long double)z;
        const double tol = 1.0e-17 * (1.0 + std::abs((double)sum));
        if (std::abs((double)term) < tol && k > 0) {
            if (++small_streak >= 5) return (double)(sum + comp);
        } else {
            small_streak = 0;
        }
    }
    throw MLNonConvergence("mittag_leffler: series did not converge");
}

// Real-line integral representation for z < 0, 0 < alpha < 1, beta <= 1.
// After the substitution r = v^alpha the integrand is
//   (1/pi) v^{alpha-beta} e^{-v} [r sin(pi(1-beta)) - z sin(pi(1-beta+alpha))]
//        / (r^2 - 2 r z cos(pi alpha) + z^2),   r = v^alpha,
// integrated over v in (0, inf); e^{-v} makes truncation easy and the
// v^{alpha-beta} endpoint singularity is integrable (beta <= 1).
double ml_negative_integral(double alpha, double beta, double z) {
    const double s1 = sinpi(1.0 - beta);
    const double s2 = sinpi(1.0 - beta + alpha);
    const double c = std::cos(M_PI * alpha);
    auto integrand = [&](double v) {
        const double r = std::pow(v, alpha);
        const double num = r * s1 - z * s2;
        const double den = r * r - 2.0 * r * z * c + z * z;
        return std::pow(v, alpha - beta) * std::exp(-v) * num / (M_PI * den);
    };
    auto q = tanh_sinh(integrand, 0.0, 50.0, 1.0e-13);
    if (!q.converged) {
        throw MLNonConvergence("mittag_leffler: integral representation "
                               "did not converge");
    }
    return q.value;
}

double ml_dispatch(double alpha, double beta, double z) {
    if (z == 0.0) return rgamma(beta);
    if (z > 0.0 || alpha > 0.95) {
        return ml_series(alpha, beta, z);
    }
    // z < 0: the series is preferred while its intermediate terms stay small
    // enough for the compensated sum to absorb the cancellation.
    if (log_max_series_term(alpha, beta, -z) <= std::log(kSeriesTermCap)) {
        return ml_series(alpha, beta, z);
    }
    if (beta > 1.0) {
        // Reduce beta below 1 so the integral representation applies.
        return (ml_dispatch(alpha, beta - alpha, z) - rgamma(beta - alpha)) / z;
    }
    return ml_negative_integral(alpha, beta, z);
}

} // namespace

double mittag_leffler(const MLParams& p, double z) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw std::domain_error("mittag_leffler: alpha and beta must be "
                                "positive");
    }
    if (!std::isfinite(z)) {
        throw std::domain_error("mittag_leffler: z must be finite");
    }
    return ml_dispatch(p.alpha, p.beta, z);
}

double mittag_leffler(double alpha, double z) {
    return mittag_leffler(MLParams{alpha, 1.0}, z);
}

} // namespace fracsub
