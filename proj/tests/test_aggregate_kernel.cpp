#include "fracsub/aggregate_kernel.hpp"

#include "fracsub/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace fracsub;

namespace {

constexpr double kExpMinusEulerGamma = 0.5614594835668851;

// Bisection root of kernel_n with a geometrically expanded bracket.
double bisect_sign_change(const KernelSpec& spec) {
    double lo = 1e-8;
    while (kernel_n(spec, lo) <= 0.0) lo *= 0.5;
    double hi = std::max(1.0, 2.0 * lo);
    while (kernel_n(spec, hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kernel_n(spec, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("kernel_n values") {
    SUBCASE("single positive term when rho2 = 0") {
        KernelSpec spec{2.0, 0.0, 0.8, 0.4};
        for (double t : {0.01, 0.5, 3.0, 100.0}) {
            CHECK(kernel_n(spec, t) ==
                  doctest::Approx(2.0 * omega(0.2, t)).epsilon(1e-14));
            CHECK(kernel_n(spec, t) > 0.0);
        }
    }
    SUBCASE("nu1 = 1 keeps only the distributed term") {
        KernelSpec spec{1.0, 3.0, 1.0, 0.5};
        CHECK(derivative_term_is_local(spec));
        for (double t : {0.2, 1.0, 4.0}) {
            CHECK(kernel_n(spec, t) ==
                  doctest::Approx(-3.0 * omega(0.5, t)).epsilon(1e-14));
        }
    }
    SUBCASE("figure-family spec is negative at t = 0.7") {
        KernelSpec spec{1.0, 1.0, 0.9, 0.45};
        CHECK(kernel_n(spec, 0.7) < 0.0);
    }
    CHECK_THROWS_AS(kernel_n(KernelSpec{1.0, 1.0, 0.9, 0.45}, 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(kernel_n(KernelSpec{1.0, 1.0, 0.4, 0.9}, 1.0),
                    std::domain_error);
}

TEST_CASE("sign change time") {
    SUBCASE("absent for rho2 <= 0") {
        CHECK(!sign_change_time(KernelSpec{1.0, 0.0, 0.9, 0.45}));
        CHECK(!sign_change_time(KernelSpec{1.0, -2.0, 0.9, 0.45}));
    }
    SUBCASE("equal weights stay below exp(-euler_gamma)") {
        for (int i = 1; i < 20; ++i) {
            for (int k = 1; k < i; ++k) {
                KernelSpec spec{1.0, 1.0, 0.05 * i, 0.05 * k};
                auto t = sign_change_time(spec);
                REQUIRE(t);
                CHECK(*t <= kExpMinusEulerGamma + 1e-12);
            }
        }
    }
    SUBCASE("matches bisection for a fixed spec") {
        KernelSpec spec{1.0, 2.0, 0.8, 0.4};
        auto t = sign_change_time(spec);
        REQUIRE(t);
        CHECK(std::abs(*t - bisect_sign_change(spec)) <= 1e-10);
    }
}

TEST_CASE("sign of N agrees with the closed-form zero") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> rho(0.1, 4.0);
    std::uniform_real_distribution<double> unit(0.2, 0.95);
    for (int i = 0; i < 10000; ++i) {
        const double nu1 = unit(rng);
        const double nu2 = nu1 * std::uniform_real_distribution<double>(
                                     0.15, 0.85)(rng);
        KernelSpec spec{rho(rng), rho(rng), nu1, nu2};
        auto t_star = sign_change_time(spec);
        REQUIRE(t_star);
        const double t =
            *t_star * std::uniform_real_distribution<double>(0.3, 3.0)(rng);
        const double n = kernel_n(spec, t);
        if (t < *t_star * (1.0 - 1e-12)) {
            CHECK(n > 0.0);
        } else if (t > *t_star * (1.0 + 1e-12)) {
            CHECK(n < 0.0);
        }
    }
}

TEST_CASE("closed form zero matches bisection on random specs") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> rho(0.2, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double nu1 =
            std::uniform_real_distribution<double>(0.15, 0.95)(rng);
        const double nu2 = nu1 * std::uniform_real_distribution<double>(
                                     0.2, 0.9)(rng);
        KernelSpec spec{rho(rng), rho(rng), nu1, nu2};
        auto t_star = sign_change_time(spec);
        REQUIRE(t_star);
        CHECK(std::abs(*t_star - bisect_sign_change(spec)) <=
              1e-10 * std::max(1.0, *t_star));
    }
}

TEST_CASE("kernel profile sampling") {
    SUBCASE("two samples land at T/2 and T") {
        KernelSpec spec{1.0, 0.0, 0.7, 0.3};
        auto rows = kernel_profile(spec, 2.0, 2);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].t == doctest::Approx(1.0));
        CHECK(rows[1].t == doctest::Approx(2.0));
        for (const auto& r : rows) CHECK(r.n > 0.0);
    }
    SUBCASE("sign-changing spec annotates t*") {
        KernelSpec spec{1.0, 1.0, 0.9, 0.45};
        auto rows = kernel_profile(spec, 0.7, 8);
        REQUIRE(rows.size() == 9);
        CHECK(rows.back().n < 0.0);
        int marks = 0;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            CHECK(rows[i].t <= rows[i + 1].t);
        }
        for (const auto& r : rows) {
            if (r.sign_change) {
                ++marks;
                CHECK(std::abs(r.n) <= 1e-12);
            }
        }
        CHECK(marks == 1);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(kernel_profile(KernelSpec{1, 0, 0.7, 0.3}, 1.0, 1),
                        std::domain_error);
        CHECK_THROWS_AS(kernel_profile(KernelSpec{1, 0, 0.7, 0.3}, 0.0, 4),
                        std::domain_error);
    }
}

TEST_CASE("profile csv") {
    KernelSpec spec{1.0, 1.0, 0.9, 0.45};
    auto rows = kernel_profile(spec, 0.7, 4);
    std::ostringstream os;
    write_profile_csv(os, rows);
    const std::string text = os.str();
    CHECK(text.rfind("t,N,note\n", 0) == 0);
    CHECK(text.find("sign_change") != std::string::npos);
}
