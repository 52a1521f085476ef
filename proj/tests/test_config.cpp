#include "fracsub/config.hpp"

#include "fracsub/solver1d.hpp"
#include "fracsub/special_functions.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracsub;

namespace {

// The ex2 benchmark written as a config file.
const char* kEx2Config = R"cfg(
# multi-term subdiffusion benchmark, memory kernel omega_{1-nu1}
[problem]
dimension = 1
nu1 = 0.55
nu2 = "nu1/2"
T = 1.0
rho1 = "1+x"
rho2 = "t*sin(2*pi*x)"
a = "1"
b = "1"
kernel_type = omega
kernel_theta = "1-nu1"
u0 = "cos(pi*x)"
left_c1 = 1
left_c2 = 0
right_c1 = 1
right_c2 = 0
f = "cos(pi*x)*((1+x)*gamma(1+nu1) + pi^2*(1+t^nu1) + pi^2*t*(1+gamma(1+nu1)) + (1+x+pi^2)*t^(1-nu1)/gamma(2-nu1) + pi^2*t^(2-nu1)/gamma(3-nu1) - (t^(2-nu2)/gamma(2-nu2) + gamma(1+nu1)*t^(1+nu1-nu2)/gamma(1+nu1-nu2))*sin(2*pi*x))"

[grid]
K = 200
J = 40

[solver]
richardson = on
name = "ex2-from-config"
)cfg";

} // namespace

TEST_CASE("parse the ex2 benchmark config") {
    auto cfg = parse_config_text(kEx2Config);
    CHECK(cfg.dimension == 1);
    CHECK(cfg.nu1 == doctest::Approx(0.55));
    CHECK(cfg.nu2 == doctest::Approx(0.275));
    CHECK(cfg.K == 200);
    CHECK(cfg.J == 40);
    CHECK(cfg.richardson);
    CHECK(cfg.name == "ex2-from-config");
    CHECK(cfg.problem1d.rho1(0.5) == doctest::Approx(1.5));
    CHECK(cfg.problem1d.a(0.3, 0.7) == doctest::Approx(1.0));
    CHECK(cfg.problem1d.u0(0.0) == doctest::Approx(1.0));
    CHECK(cfg.problem1d.kernel.value(0.25) ==
          doctest::Approx(std::pow(0.25, -0.55) /
                          fracsub::Gamma(1.0 - 0.55)));

    // the configured problem solves and tracks the exact solution
    Grid1D g{cfg.K, cfg.J, 1.0, 1.0};
    auto hist = solve(cfg.problem1d, g, cfg.richardson);
    double err = 0.0;
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            const double exact = (1.0 + g.time(j) + std::pow(g.time(j), 0.55)) *
                                 std::cos(M_PI * g.x(k));
            err = std::max(err, std::abs(hist.at(j, k) - exact));
        }
    }
    CHECK(err < 5e-3);
}

TEST_CASE("config validation errors name the offending key") {
    auto expect_error = [](const std::string& text, const char* needle) {
        try {
            parse_config_text(text);
            FAIL_CHECK("expected ConfigError for: " << needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("[problem]\nnu1 = 0.5\nrho1 = \"1+\"\na = \"1\"\n"
                 "u0 = \"x\"\nleft_c2 = 1\nright_c2 = 1\n",
                 "problem.rho1");
    expect_error("[problem]\nnu1 = 0.5\nrho1 = \"1\"\na = \"1+y\"\n"
                 "u0 = \"x\"\nleft_c2 = 1\nright_c2 = 1\n",
                 "problem.a");
    expect_error("[problem]\nnu1 = 1.5\nrho1 = \"1\"\na = \"1\"\nu0 = \"x\"\n",
                 "nu1");
    expect_error("[problem]\nnu1 = 0.5\nrho1 = \"1\"\na = \"1\"\n"
                 "u0 = \"x\"\nleft_c1 = 0\nleft_c2 = 0\nright_c2 = 1\n",
                 "left_c2");
    expect_error("[problem]\nnu1 = 0.5\nrho1 = \"1\"\na = \"1\"\n"
                 "u0 = \"x\"\nleft_c2 = 1\nright_c2 = 1\nwhat = 1\n",
                 "unknown key");
    expect_error("[problem]\nnu1 = 0.5\nnu1 = 0.6\n", "duplicate");
    expect_error("nu1 = 0.5\n", "section");
}

TEST_CASE("two-dimensional config") {
    const char* text = R"cfg(
[problem]
dimension = 2
nu1 = 0.5
T = 0.25
rho1 = "1+x^2+y^2"
a1 = "1"
a2 = "1"
u0 = "sin(pi*x)*cos(pi*y)"
bc_mode = dxny
[grid]
Kx = 12
Ky = 10
J = 4
)cfg";
    auto cfg = parse_config_text(text);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.Kx == 12);
    CHECK(cfg.Ky == 10);
    CHECK(cfg.problem2d.rho1(0.5, 0.5) == doctest::Approx(1.5));
    CHECK(cfg.problem2d.u0(0.5, 0.0) == doctest::Approx(1.0));
    CHECK(cfg.problem2d.bc == BoundaryMode2D::dirichlet_x_neumann_y);
}

TEST_CASE("config hash is stable and content sensitive") {
    auto a = parse_config_text(kEx2Config);
    auto b = parse_config_text(kEx2Config);
    CHECK(a.config_hash == b.config_hash);
    std::string changed = kEx2Config;
    changed.replace(changed.find("0.55"), 4, "0.60");
    auto c = parse_config_text(changed);
    CHECK(a.config_hash != c.config_hash);
}
