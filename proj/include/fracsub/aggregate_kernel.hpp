#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

namespace fracsub {

/// Parameters of the aggregated memory kernel
/// N(t) = rho1 * omega_{1-nu1}(t) - rho2 * omega_{1-nu2}(t),
/// with orders 0 < nu2 < nu1 <= 1 and rho1 > 0.
struct KernelSpec {
    double rho1;
    double rho2;
    double nu1;
    double nu2;
};

/// N(t) for t > 0. At nu1 = 1 the first term is a Dirac mass (the
/// derivative becomes local) and only the rho2 term is returned for t > 0.
double kernel_n(const KernelSpec& spec, double t);

/// True when the nu1 = 1 convention applies: the omega_0 factor is a Dirac
/// mass and kernel_n reports only the distributed part.
bool derivative_term_is_local(const KernelSpec& spec);

/// Unique zero t* of N when rho2 > 0 and nu1 < 1:
/// t* = [rho1 Gamma(1-nu2) / (rho2 Gamma(1-nu1))]^{1/(nu1-nu2)};
/// N > 0 on (0, t*) and N < 0 on (t*, inf). Absent for rho2 <= 0, where the
/// kernel never changes sign.
std::optional<double> sign_change_time(const KernelSpec& spec);

struct KernelProfileRow {
    double t;
    double n;
    bool sign_change; // row injected at t* rather than sampled
};

/// Uniform samples of N on (0, T]: t_i = i*T/samples, i = 1..samples, with
/// the sign-change time inserted as an annotated row when it lies in (0, T].
std::vector<KernelProfileRow> kernel_profile(const KernelSpec& spec, double T,
                                             std::size_t samples);

/// CSV columns t,N,note with 17 significant digits; note is "sign_change"
/// on the injected t* row and empty otherwise.
void write_profile_csv(std::ostream& os,
                       const std::vector<KernelProfileRow>& rows);

} // namespace fracsub
