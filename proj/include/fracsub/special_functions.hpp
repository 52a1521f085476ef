#pragma once

#include <stdexcept>

namespace fracsub {

/// Thrown when Gamma is evaluated at a nonpositive integer.
class GammaPoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when the Mittag-Leffler evaluation cannot certify its tolerance.
class MLNonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Euler Gamma function on the reals, poles excluded.
double Gamma(double x);

/// log Gamma for x > 0.
double log_gamma(double x);

/// Reciprocal Gamma, entire: returns 0 at the poles of Gamma.
double rgamma(double x);

/// sin(pi*x) with exact argument reduction around integers.
double sinpi(double x);

/// Riemann-Liouville weight w_theta(t) = t^{theta-1}/Gamma(theta),
/// theta > 0, t > 0.
double omega(double theta, double t);

struct MLParams {
    double alpha; // > 0
    double beta;  // > 0
};

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.
///
/// Power series with compensated summation wherever the intermediate terms
/// stay small enough to certify ~1e-12 absolute accuracy; for negative z
/// with large intermediate terms, falls back to the real-line integral
/// representation (valid for 0 < alpha < 1), with the beta-reduction
/// recurrence E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a))/z applied first
/// when b > 1.
double mittag_leffler(const MLParams& p, double z);

/// One-parameter form E_alpha(z) = E_{alpha,1}(z).
double mittag_leffler(double alpha, double z);

} // namespace fracsub
