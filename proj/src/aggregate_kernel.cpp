#include "fracsub/aggregate_kernel.hpp"

#include "fracsub/numfmt.hpp"
#include "fracsub/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracsub {

namespace {

void validate(const KernelSpec& spec) {
    if (!(spec.rho1 > 0.0)) {
        throw std::domain_error("KernelSpec: rho1 must be positive");
    }
    if (!(spec.nu2 > 0.0) || !(spec.nu2 < spec.nu1) || spec.nu1 > 1.0) {
        throw std::domain_error("KernelSpec: need 0 < nu2 < nu1 <= 1");
    }
}

} // namespace

bool derivative_term_is_local(const KernelSpec& spec) {
    return spec.nu1 == 1.0;
}

double kernel_n(const KernelSpec& spec, double t) {
    validate(spec);
    if (!(t > 0.0)) {
        throw std::domain_error("kernel_n: t must be positive");
    }
    const double second =
        spec.rho2 == 0.0 ? 0.0 : spec.rho2 * omega(1.0 - spec.nu2, t);
    if (derivative_term_is_local(spec)) {
        return -second;
    }
    return spec.rho1 * omega(1.0 - spec.nu1, t) - second;
}

std::optional<double> sign_change_time(const KernelSpec& spec) {
    validate(spec);
    if (spec.rho2 <= 0.0) return std::nullopt;
    if (derivative_term_is_local(spec)) {
        throw std::domain_error(
            "sign_change_time: undefined at nu1 = 1 (local derivative term)");
    }
    const double ratio = spec.rho1 * Gamma(1.0 - spec.nu2) /
                         (spec.rho2 * Gamma(1.0 - spec.nu1));
    return std::pow(ratio, 1.0 / (spec.nu1 - spec.nu2));
}

std::vector<KernelProfileRow> kernel_profile(const KernelSpec& spec, double T,
                                             std::size_t samples) {
    validate(spec);
    if (!(T > 0.0)) {
        throw std::domain_error("kernel_profile: T must be positive");
    }
    if (samples < 2) {
        throw std::domain_error("kernel_profile: need at least 2 samples");
    }
    std::vector<KernelProfileRow> rows;
    rows.reserve(samples + 1);
    for (std::size_t i = 1; i <= samples; ++i) {
        const double t = T * static_cast<double>(i) /
                         static_cast<double>(samples);
        rows.push_back({t, kernel_n(spec, t), false});
    }
    if (!derivative_term_is_local(spec)) {
        if (auto t_star = sign_change_time(spec);
            t_star && *t_star > 0.0 && *t_star <= T) {
            KernelProfileRow mark{*t_star, kernel_n(spec, *t_star), true};
            auto pos = std::lower_bound(
                rows.begin(), rows.end(), mark.t,
                [](const KernelProfileRow& r, double t) { return r.t < t; });
            rows.insert(pos, mark);
        }
    }
    return rows;
}

void write_profile_csv(std::ostream& os,
                       const std::vector<KernelProfileRow>& rows) {
    os << "t,N,note\n";
    for (const auto& r : rows) {
        os << format_g17(r.t) << ',' << format_g17(r.n) << ','
           << (r.sign_change ? "sign_change" : "") << '\n';
    }
}

} // namespace fracsub
