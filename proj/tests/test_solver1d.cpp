#include "fracsub/solver1d.hpp"

#include "fracsub/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fracsub;

namespace {

Problem1D heat_limit_problem() {
    // nu1 = 1, rho2 = 0, no kernel: classical implicit heat equation.
    Problem1D p;
    p.nu1 = 1.0;
    p.nu2 = 0.5;
    p.rho1 = [](double) { return 1.0; };
    p.rho2 = [](double, double) { return 0.0; };
    p.a = [](double, double) { return 1.0; };
    p.d = [](double, double) { return 0.0; };
    p.b = [](double, double) { return 0.0; };
    p.kernel = KernelDescriptor::zero();
    p.f = [](double, double) { return 0.0; };
    p.u0 = [](double x) { return std::sin(M_PI * x); };
    p.left = {0.0, 1.0, [](double) { return 0.0; }};
    p.right = {0.0, 1.0, [](double) { return 0.0; }};
    p.length = 1.0;
    p.final_time = 0.1;
    return p;
}

// Independent backward-Euler loop with its own elimination, for the
// classical-limit cross-check.
std::vector<std::vector<double>> backward_euler_heat(std::size_t K,
                                                     std::size_t J,
                                                     double T) {
    const double h = 1.0 / K;
    const double sigma = T / J;
    std::vector<std::vector<double>> u(J + 1, std::vector<double>(K + 1));
    for (std::size_t k = 0; k <= K; ++k) u[0][k] = std::sin(M_PI * k * h);
    const std::size_t n = K - 1;
    for (std::size_t j = 0; j < J; ++j) {
        std::vector<double> diag(n, 1.0 / sigma + 2.0 / (h * h));
        std::vector<double> off(n, -1.0 / (h * h));
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = u[j][i + 1] / sigma;
        for (std::size_t i = 1; i < n; ++i) {
            const double m = off[i - 1] / diag[i - 1];
            diag[i] -= m * off[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        std::vector<double> x(n);
        x[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
        }
        u[j + 1][0] = 0.0;
        u[j + 1][K] = 0.0;
        for (std::size_t i = 0; i < n; ++i) u[j + 1][i + 1] = x[i];
    }
    return u;
}

// A fully featured problem exercising memory, drift and Robin ends.
Problem1D featured_problem() {
    Problem1D p;
    p.nu1 = 0.8;
    p.nu2 = 0.4;
    p.rho1 = [](double x) { return 1.0 + x * x; };
    p.rho2 = [](double x, double t) { return 0.4 * (x - 0.3) + 0.2 * t; };
    p.a = [](double x, double t) { return 1.0 + 0.5 * x + 0.25 * t; };
    p.d = [](double x, double t) { return 0.3 * x - 0.2 * t; };
    p.b = [](double x, double t) { return 0.5 + x + t; };
    p.kernel = KernelDescriptor::power_law(1.0, 1.0 / 3.0);
    p.f = [](double x, double t) { return std::cos(3.0 * x) + t; };
    p.u0 = [](double x) { return std::cos(M_PI * x) + x; };
    // u0' = -pi sin(pi x) + 1; left: u0'(0) = 1; right Robin with c4 != 0.
    p.left = {1.0, 0.0, [](double) { return 1.0; }};
    p.right = {1.0, -2.0,
               [](double t) { return 1.0 - 2.0 * 0.0 + 0.1 * t; }};
    p.length = 1.0;
    p.final_time = 0.5;
    return p;
}

// Literal transcription of the displayed scheme at one node: evaluates the
// residual of the level-(j+1) equation for a trial new level w, reading
// nothing from the solver internals.
double literal_residual(const Problem1D& p, const Grid1D& g,
                        const SolutionHistory& hist,
                        const std::vector<double>& w, std::size_t j,
                        std::size_t k) {
    const double h = g.h();
    const double sigma = g.sigma();
    const double t1 = g.time(j + 1);
    auto glw = [](double nu, std::size_t m) {
        double v = 1.0;
        for (std::size_t i = 1; i <= m; ++i) {
            v *= (static_cast<double>(i) - 1.0 - nu) / static_cast<double>(i);
        }
        return v;
    };
    auto value = [&](std::size_t level, std::size_t node) {
        return level == j + 1 ? w[node] : hist.at(level, node);
    };
    // Fictitious neighbours from the boundary conditions at each level.
    auto value_ext = [&](std::size_t level, long node) -> double {
        const double t = g.time(level);
        if (node >= 0 && node <= static_cast<long>(g.K)) {
            return value(level, static_cast<std::size_t>(node));
        }
        if (node == -1) {
            return value(level, 1) -
                   (2.0 * h / p.left.c_deriv) *
                       (p.left.data(t) - p.left.c_value * value(level, 0));
        }
        return value(level, g.K - 1) +
               (2.0 * h / p.right.c_deriv) *
                   (p.right.data(t) - p.right.c_value * value(level, g.K));
    };
    auto dxx = [&](std::size_t level, std::size_t node) {
        const long n = static_cast<long>(node);
        return (value_ext(level, n - 1) - 2.0 * value_ext(level, n) +
                value_ext(level, n + 1)) /
               (h * h);
    };
    const double x = g.x(k);
    const double u0 = p.u0(x);
    double frac1 = 0.0, frac2 = 0.0;
    for (std::size_t m = 0; m <= j + 1; ++m) {
        frac1 += (value(j + 1 - m, k) - u0) * glw(p.nu1, m);
        frac2 += (value(j + 1 - m, k) - u0) * glw(p.nu2, m);
    }
    double lhs = p.rho1(x) * std::pow(sigma, -p.nu1) * frac1 -
                 p.rho2(x, t1) * std::pow(sigma, -p.nu2) * frac2 -
                 p.a(x, t1) * dxx(j + 1, k) +
                 p.d(x, t1) *
                     (value_ext(j + 1, static_cast<long>(k) + 1) -
                      value_ext(j + 1, static_cast<long>(k) - 1)) /
                     (2.0 * h);
    double mem = 0.0;
    for (std::size_t m = 0; m <= j; ++m) {
        const double kmj =
            p.kernel.integral((j - m) * sigma, (j + 1 - m) * sigma);
        mem += (p.b(x, g.time(m)) * dxx(m, k) +
                p.b(x, g.time(m + 1)) * dxx(m + 1, k)) *
               kmj / 2.0;
    }
    return lhs - mem - p.f(x, t1);
}

} // namespace

TEST_CASE("zero data gives the zero solution") {
    Problem1D p = heat_limit_problem();
    p.u0 = [](double) { return 0.0; };
    p.nu1 = 0.7;
    p.nu2 = 0.35;
    Grid1D g{20, 10, p.length, p.final_time};
    auto hist = solve(p, g, false);
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            CHECK(hist.at(j, k) == 0.0);
        }
    }
}

TEST_CASE("backward-euler stencil appears in the degenerate limit") {
    Problem1D p = heat_limit_problem();
    Grid1D g{10, 10, p.length, p.final_time};
    SolutionHistory hist(g.K, g.J);
    for (std::size_t k = 0; k <= g.K; ++k) hist.at(0, k) = p.u0(g.x(k));
    auto s = assemble_level(p, g, hist, 0);
    const double sigma = g.sigma();
    const double h = g.h();
    for (std::size_t k = 1; k < g.K; ++k) {
        CHECK(s.diag[k] ==
              doctest::Approx(1.0 / sigma + 2.0 / (h * h)).epsilon(1e-13));
        CHECK(s.sub[k - 1] == doctest::Approx(-1.0 / (h * h)).epsilon(1e-13));
        CHECK(s.super[k] == doctest::Approx(-1.0 / (h * h)).epsilon(1e-13));
        CHECK(s.rhs[k] ==
              doctest::Approx(hist.at(0, k) / sigma).epsilon(1e-13));
    }
}

TEST_CASE("classical limit matches an independent backward-euler code") {
    Problem1D p = heat_limit_problem();
    Grid1D g{10, 10, p.length, p.final_time};
    auto mine = solve(p, g, false);
    auto ref = backward_euler_heat(g.K, g.J, p.final_time);
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            CHECK(std::abs(mine.at(j, k) - ref[j][k]) <= 1e-12);
        }
    }
}

TEST_CASE("heat limit decays monotonically in the max norm") {
    Problem1D p = heat_limit_problem();
    Grid1D g{40, 20, p.length, p.final_time};
    auto hist = solve(p, g, false);
    double prev = 1.0;
    for (std::size_t j = 1; j <= g.J; ++j) {
        double m = 0.0;
        for (std::size_t k = 0; k <= g.K; ++k) {
            m = std::max(m, std::abs(hist.at(j, k)));
        }
        CHECK(m <= prev + 1e-14);
        prev = m;
    }
}

TEST_CASE("assembled system matches a literal transcription of the scheme") {
    Problem1D p = featured_problem();
    Grid1D g{12, 8, p.length, p.final_time};
    // Seed history levels 0..j with a smooth function; the scheme equation
    // must hold row-by-row for arbitrary trial values of the new level.
    const std::size_t j = 5;
    SolutionHistory hist(g.K, g.J);
    for (std::size_t lv = 0; lv <= j; ++lv) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            const double x = g.x(k);
            const double t = g.time(lv);
            hist.at(lv, k) =
                lv == 0 ? p.u0(x)
                        : std::sin(M_PI * x) * std::exp(-t) + 0.3 * x * t;
        }
    }
    auto s = assemble_level(p, g, hist, j);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> w(g.K + 1);
        for (auto& v : w) v = dist(rng);
        for (std::size_t k = 0; k <= g.K; ++k) {
            double row = s.diag[k] * w[k] - s.rhs[k];
            if (k > 0) row += s.sub[k - 1] * w[k - 1];
            if (k < g.K) row += s.super[k] * w[k + 1];
            const double lit = literal_residual(p, g, hist, w, j, k);
            CHECK(std::abs(row - lit) <= 1e-8 * std::max(1.0, std::abs(lit)));
        }
    }
}

TEST_CASE("x-independent data gives identical interior rows") {
    Problem1D p;
    p.nu1 = 0.6;
    p.nu2 = 0.3;
    p.rho1 = [](double) { return 2.0; };
    p.rho2 = [](double, double t) { return 0.5 * t + 0.1; };
    p.a = [](double, double t) { return 1.0 + t; };
    p.d = [](double, double t) { return 0.2 - t; };
    p.b = [](double, double t) { return 1.0 + 2.0 * t; };
    p.kernel = KernelDescriptor::omega(0.4);
    p.f = [](double, double t) { return 1.0 - t; };
    p.u0 = [](double) { return 0.7; };
    p.left = {1.0, 0.0, [](double) { return 0.0; }};
    p.right = {1.0, 0.0, [](double) { return 0.0; }};
    p.length = 1.0;
    p.final_time = 0.5;
    Grid1D g{16, 8, p.length, p.final_time};
    auto hist = solve(p, g, false);
    for (std::size_t j = 0; j < 4; ++j) {
        auto s = assemble_level(p, g, hist, j);
        for (std::size_t k = 2; k < g.K - 1; ++k) {
            CHECK(s.diag[k] == doctest::Approx(s.diag[1]).epsilon(1e-14));
            CHECK(s.sub[k - 1] == doctest::Approx(s.sub[0]).epsilon(1e-14));
            CHECK(s.super[k] == doctest::Approx(s.super[1]).epsilon(1e-14));
            CHECK(s.rhs[k] == doctest::Approx(s.rhs[1]).epsilon(1e-13));
        }
    }
}

TEST_CASE("first level of the omega-kernel benchmark matches the "
          "literal transcription") {
    // the ex2-style setup: Neumann ends, omega kernel, j = 0
    Problem1D p;
    p.nu1 = 0.45;
    p.nu2 = 0.225;
    p.rho1 = [](double x) { return 1.0 + x; };
    p.rho2 = [](double x, double t) { return t * std::sin(2.0 * M_PI * x); };
    p.a = [](double, double) { return 1.0; };
    p.d = [](double, double) { return 0.0; };
    p.b = [](double, double) { return 1.0; };
    p.kernel = KernelDescriptor::omega(1.0 - 0.45);
    p.f = [](double x, double t) { return std::cos(M_PI * x) * (1.0 + t); };
    p.u0 = [](double x) { return std::cos(M_PI * x); };
    p.left = {1.0, 0.0, [](double) { return 0.0; }};
    p.right = {1.0, 0.0, [](double) { return 0.0; }};
    p.length = 1.0;
    p.final_time = 1.0;
    Grid1D g{16, 8, p.length, p.final_time};
    SolutionHistory hist(g.K, g.J);
    for (std::size_t k = 0; k <= g.K; ++k) hist.at(0, k) = p.u0(g.x(k));
    auto s = assemble_level(p, g, hist, 0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> w(g.K + 1);
    for (auto& v : w) v = dist(rng);
    for (std::size_t k = 0; k <= g.K; ++k) {
        double row = s.diag[k] * w[k] - s.rhs[k];
        if (k > 0) row += s.sub[k - 1] * w[k - 1];
        if (k < g.K) row += s.super[k] * w[k + 1];
        const double lit = literal_residual(p, g, hist, w, 0, k);
        CHECK(std::abs(row - lit) <= 1e-9 * std::max(1.0, std::abs(lit)));
    }
}

TEST_CASE("step equals a dense solve of the assembled system") {
    Problem1D p = featured_problem();
    Grid1D g{10, 6, p.length, p.final_time};
    SolutionHistory hist(g.K, g.J);
    for (std::size_t k = 0; k <= g.K; ++k) hist.at(0, k) = p.u0(g.x(k));
    auto s = assemble_level(p, g, hist, 0);
    // dense elimination
    const std::size_t n = g.K + 1;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = s.diag[i];
        if (i > 0) m[i][i - 1] = s.sub[i - 1];
        if (i < n - 1) m[i][i + 1] = s.super[i];
    }
    std::vector<double> rhs = s.rhs;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> ref(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= m[i][c] * ref[c];
        ref[i] = acc / m[i][i];
    }
    step(p, g, hist, 0);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(hist.at(1, k) - ref[k]) <= 1e-12);
    }
}

TEST_CASE("exact on constants") {
    Problem1D p = featured_problem();
    const double c = 1.7;
    p.u0 = [=](double) { return c; };
    p.f = [](double, double) { return 0.0; };
    p.left = {1.0, 0.5, [=](double) { return 0.5 * c; }};
    p.right = {1.0, -2.0, [=](double) { return -2.0 * c; }};
    Grid1D g{16, 12, p.length, p.final_time};
    auto hist = solve(p, g, false);
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            CHECK(std::abs(hist.at(j, k) - c) <= 1e-11);
        }
    }
}

TEST_CASE("grid symmetry is preserved") {
    // Data even about x = 1/2 with symmetric Neumann ends.
    Problem1D p;
    p.nu1 = 0.6;
    p.nu2 = 0.3;
    p.rho1 = [](double x) { return 1.0 + x * (1.0 - x); };
    p.rho2 = [](double x, double t) { return 0.5 * x * (1.0 - x) + 0.1 * t; };
    p.a = [](double x, double t) {
        return 1.0 + std::cos(2.0 * M_PI * x) + 0.2 * t;
    };
    p.d = [](double, double) { return 0.0; };
    p.b = [](double x, double) { return 1.0 + x * (1.0 - x); };
    p.kernel = KernelDescriptor::omega(0.5);
    p.f = [](double x, double t) { return std::sin(M_PI * x) + t; };
    p.u0 = [](double x) { return std::cos(2.0 * M_PI * x); };
    p.left = {1.0, 0.0, [](double) { return 0.0; }};
    p.right = {1.0, 0.0, [](double) { return 0.0; }};
    p.length = 1.0;
    p.final_time = 0.4;
    Grid1D g{64, 16, p.length, p.final_time};
    auto hist = solve(p, g, false);
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            CHECK(std::abs(hist.at(j, k) - hist.at(j, g.K - k)) <= 1e-11);
        }
    }
}

TEST_CASE("solution is linear in the data") {
    Problem1D base = featured_problem();
    base.u0 = [](double) { return 0.0; };
    base.left = {1.0, 0.0, [](double) { return 0.0; }};
    base.right = {1.0, -2.0, [](double) { return 0.0; }};
    auto with_f = [&](SpaceTimeFn f) {
        Problem1D p = base;
        p.f = std::move(f);
        return p;
    };
    Grid1D g{16, 10, base.length, base.final_time};
    auto f1 = [](double x, double t) { return std::sin(2.0 * x) + t; };
    auto f2 = [](double x, double t) { return std::cos(x) * (1.0 - t); };
    auto h1 = solve(with_f(f1), g, false);
    auto h2 = solve(with_f(f2), g, false);
    auto h12 = solve(with_f([&](double x, double t) {
                         return f1(x, t) + f2(x, t);
                     }),
                     g, false);
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            CHECK(std::abs(h12.at(j, k) - h1.at(j, k) - h2.at(j, k)) <=
                  1e-10);
        }
    }
}

TEST_CASE("compatibility diagnostics") {
    SUBCASE("neumann ends of cos(pi x) are compatible") {
        Problem1D p = heat_limit_problem();
        p.u0 = [](double x) { return std::cos(M_PI * x); };
        p.left = {1.0, 0.0, [](double) { return 0.0; }};
        p.right = {1.0, 0.0, [](double) { return 0.0; }};
        CHECK(validate_compatibility(p).empty());
    }
    SUBCASE("robin end with mittag-leffler data is compatible") {
        // u0 = 2x - x^2, u0'(0) - 2 u0(0) = 2 = data(0).
        Problem1D p = heat_limit_problem();
        p.u0 = [](double x) { return 2.0 * x - x * x; };
        p.left = {1.0, -2.0,
                  [](double t) {
                      return 2.0 * mittag_leffler(0.5, std::pow(t, 0.5));
                  }};
        p.right = {1.0, 0.0, [](double) { return 0.0; }};
        CHECK(validate_compatibility(p).empty());
    }
    SUBCASE("perturbing the data reports its magnitude") {
        Problem1D p = heat_limit_problem();
        p.u0 = [](double x) { return std::cos(M_PI * x); };
        p.left = {1.0, 0.0, [](double) { return 0.1; }};
        p.right = {1.0, 0.0, [](double) { return 0.0; }};
        auto diags = validate_compatibility(p);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].magnitude == doctest::Approx(0.1).epsilon(1e-6));
        CHECK(diags[0].x == 0.0);
    }
    SUBCASE("dirichlet mismatch is reported") {
        Problem1D p = heat_limit_problem();
        p.u0 = [](double x) { return std::sin(M_PI * x) + 0.25; };
        auto diags = validate_compatibility(p);
        REQUIRE(diags.size() == 2);
        CHECK(diags[0].magnitude == doctest::Approx(0.25).epsilon(1e-9));
    }
}

TEST_CASE("richardson combines the coarse and half-step marches") {
    Problem1D p = featured_problem();
    Grid1D g{16, 8, p.length, p.final_time};
    auto plain = solve(p, g, false);
    auto extrap = solve(p, g, true);
    Grid1D gf{16, 16, p.length, p.final_time};
    auto fine = solve(p, gf, false);
    double diff = 0.0;
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            const double expected =
                richardson_combine(plain.at(j, k), fine.at(2 * j, k), 1);
            CHECK(extrap.at(j, k) ==
                  doctest::Approx(expected).epsilon(1e-13));
            diff = std::max(diff,
                            std::abs(plain.at(j, k) - extrap.at(j, k)));
        }
    }
    CHECK(diff > 0.0); // extrapolation changes the answer
    // J = 1 solves reduce to a single step call.
    Grid1D g1{16, 1, p.length, p.final_time};
    auto one = solve(p, g1, false);
    SolutionHistory manual(g1.K, g1.J);
    for (std::size_t k = 0; k <= g1.K; ++k) manual.at(0, k) = p.u0(g1.x(k));
    step(p, g1, manual, 0);
    for (std::size_t k = 0; k <= g1.K; ++k) {
        CHECK(one.at(1, k) == doctest::Approx(manual.at(1, k)).epsilon(1e-14));
    }
}
