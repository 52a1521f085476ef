#include "fracsub/manufactured.hpp"

#include "fracsub/solver1d.hpp"
#include "fracsub/solver2d.hpp"
#include "fracsub/special_functions.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fracsub {

namespace {

constexpr double kPi = M_PI;

// The ex3 closures need E_{nu1}(t^{nu1}) and E_{nu1,1-nu2}(t^{nu1}) at every
// lattice point of a level; the argument only changes between levels, so a
// one-entry memo shared by the case's closures removes almost all of the
// series evaluations. Guarded so concurrently running solves of one case
// stay correct.
struct MLMemo {
    std::mutex mutex;
    double t = -1.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

std::pair<double, double> ml_pair(const std::shared_ptr<MLMemo>& memo,
                                  double nu1, double nu2, double t) {
    std::scoped_lock lock(memo->mutex);
    if (memo->t != t) {
        const double z = std::pow(t, nu1);
        memo->e1 = mittag_leffler(nu1, z);
        memo->e2 = t > 0.0
            ? mittag_leffler(MLParams{nu1, 1.0 - nu2}, z)
            : 0.0;
        memo->t = t;
    }
    return {memo->e1, memo->e2};
}

void require_order(double nu1) {
    if (!(nu1 > 0.0) || nu1 > 1.0) {
        throw std::domain_error("example case: nu1 must lie in (0, 1]");
    }
}

// Shared pieces of the ex1 family (everything except rho2 and T).
void fill_ex1_frame(ExampleCase& c, SpaceTimeFn rho2) {
    const double nu1 = c.nu1;
    const double nu2 = c.nu2;
    Problem1D& p = c.problem1d;
    p.nu1 = nu1;
    p.nu2 = nu2;
    p.kernel = KernelDescriptor::power_law(1.0, 1.0 / 3.0);
    p.a = [](double x, double t) { return std::cos(kPi * x / 4.0) + t; };
    p.d = [](double x, double t) { return x + t; };
    p.b = [](double x, double t) {
        return std::cbrt(t) + std::sin(kPi * x);
    };
    p.rho1 = [](double x) { return 1.0 + x * x; };
    p.rho2 = rho2;
    p.u0 = [](double x) { return std::cos(kPi * x); };
    p.left = {1.0, 0.0, [](double) { return 0.0; }};
    p.right = {1.0, 0.0, [](double) { return 0.0; }};
    p.length = 1.0;
    const double g_ratio = Gamma(1.0 + nu1 - nu2);
    p.f = [rho2, nu1, nu2, g_ratio](double x, double t) {
        const double bracket =
            std::cos(kPi * x / 4.0) + t +
            1.5 * std::pow(t, 2.0 / 3.0) * std::sin(kPi * x) +
            t * kPi / (3.0 * std::sin(kPi / 3.0));
        return kPi * kPi * bracket * std::cos(kPi * x) -
               (x + t) * kPi * std::sin(kPi * x) -
               rho2(x, t) * std::pow(t, nu1 - nu2) / g_ratio +
               1.0 + x * x;
    };
    const double g1 = Gamma(1.0 + nu1);
    c.exact1d = [nu1, g1](double x, double t) {
        return std::cos(kPi * x) + std::pow(t, nu1) / g1;
    };
    c.two_dimensional = false;
}

ExampleCase build_ex1i(double nu1, double nu2) {
    ExampleCase c;
    c.id = ExampleId::ex1i;
    c.name = "ex1i";
    c.nu1 = nu1;
    c.nu2 = nu2;
    c.final_time = 0.1;
    fill_ex1_frame(c, [](double x, double t) {
        return 1.0 + (t + 1.0) * (x + 0.01);
    });
    c.problem1d.final_time = c.final_time;
    return c;
}

ExampleCase build_ex1ii(double nu1, double nu2) {
    ExampleCase c;
    c.id = ExampleId::ex1ii;
    c.name = "ex1ii";
    c.nu1 = nu1;
    c.nu2 = nu2;
    c.final_time = 0.1;
    fill_ex1_frame(c, [](double x, double) {
        const double s = x - 0.5;
        return s * s * s;
    });
    c.problem1d.final_time = c.final_time;
    return c;
}

ExampleCase build_ex2(double nu1, double nu2) {
    ExampleCase c;
    c.id = ExampleId::ex2;
    c.name = "ex2";
    c.nu1 = nu1;
    c.nu2 = nu2;
    c.final_time = 1.0;
    c.two_dimensional = false;

    Problem1D& p = c.problem1d;
    p.nu1 = nu1;
    p.nu2 = nu2;
    p.a = [](double, double) { return 1.0; };
    p.d = [](double, double) { return 0.0; };
    p.b = [](double, double) { return 1.0; };
    p.rho1 = [](double x) { return 1.0 + x; };
    p.rho2 = [](double x, double t) { return t * std::sin(2.0 * kPi * x); };
    p.kernel = KernelDescriptor::omega(1.0 - nu1);
    p.u0 = [](double x) { return std::cos(kPi * x); };
    p.left = {1.0, 0.0, [](double) { return 0.0; }};
    p.right = {1.0, 0.0, [](double) { return 0.0; }};
    p.length = 1.0;
    p.final_time = 1.0;
    const double g1 = Gamma(1.0 + nu1);
    const double g2m1 = Gamma(2.0 - nu1);
    const double g3m1 = Gamma(3.0 - nu1);
    const double g2m2 = Gamma(2.0 - nu2);
    const double g1d = Gamma(1.0 + nu1 - nu2);
    p.f = [=](double x, double t) {
        const double pi2 = kPi * kPi;
        const double bracket =
            (1.0 + x) * g1 + pi2 * (1.0 + std::pow(t, nu1)) +
            pi2 * t * (1.0 + g1) +
            (1.0 + x + pi2) * std::pow(t, 1.0 - nu1) / g2m1 +
            pi2 * std::pow(t, 2.0 - nu1) / g3m1 -
            (std::pow(t, 2.0 - nu2) / g2m2 +
             g1 * std::pow(t, 1.0 + nu1 - nu2) / g1d) *
                std::sin(2.0 * kPi * x);
        return std::cos(kPi * x) * bracket;
    };
    c.exact1d = [nu1](double x, double t) {
        return (1.0 + t + std::pow(t, nu1)) * std::cos(kPi * x);
    };
    return c;
}

ExampleCase build_ex3(double nu1, double nu2) {
    ExampleCase c;
    c.id = ExampleId::ex3;
    c.name = "ex3";
    c.nu1 = nu1;
    c.nu2 = nu2;
    c.final_time = 1.0;
    c.two_dimensional = false;

    Problem1D& p = c.problem1d;
    p.nu1 = nu1;
    p.nu2 = nu2;
    p.a = [](double x, double t) { return (x + 1.0) * (t + 1.0); };
    p.d = [](double x, double t) { return x * std::sin(t); };
    p.b = [](double, double) { return 0.0; };
    p.rho1 = [](double x) { return 2.0 + std::sin(2.0 * kPi * x); };
    p.rho2 = [](double x, double t) { return t * std::cos(2.0 * kPi * x); };
    p.kernel = KernelDescriptor::zero();
    p.u0 = [](double x) { return 2.0 * x - x * x; };
    auto memo = std::make_shared<MLMemo>();
    p.left = {1.0, -2.0,
              [memo, nu1, nu2](double t) {
                  return 2.0 * ml_pair(memo, nu1, nu2, t).first;
              }};
    p.right = {1.0, 0.0, [](double) { return 0.0; }};
    p.length = 1.0;
    p.final_time = 1.0;
    const double rg = rgamma(1.0 - nu2);
    p.f = [memo, nu1, nu2, rg](double x, double t) {
        const auto [ml, ml2] = ml_pair(memo, nu1, nu2, t);
        const double shape = 2.0 * x - x * x;
        double val = ml * (shape * (2.0 + std::sin(2.0 * kPi * x)) +
                           2.0 * (x + 1.0) * (t + 1.0) +
                           x * (2.0 - 2.0 * x) * std::sin(t));
        if (t > 0.0) {
            val -= std::pow(t, 1.0 - nu2) * std::cos(2.0 * kPi * x) * shape *
                   (ml2 - rg);
        }
        return val;
    };
    c.exact1d = [memo, nu1, nu2](double x, double t) {
        return (2.0 * x - x * x) * ml_pair(memo, nu1, nu2, t).first;
    };
    return c;
}

ExampleCase build_ex4(double nu1, double nu2) {
    ExampleCase c;
    c.id = ExampleId::ex4;
    c.name = "ex4";
    c.nu1 = nu1;
    c.nu2 = nu2;
    c.final_time = 1.0;
    c.two_dimensional = true;

    Problem2D& p = c.problem2d;
    p.nu1 = nu1;
    p.nu2 = nu2;
    p.a1 = [](double x, double y, double t) {
        return std::cos(kPi * x / 4.0) * std::cos(kPi * y / 4.0) + t;
    };
    p.a2 = [](double x, double y, double t) {
        return 2.0 * std::cos(kPi * x / 4.0) * std::cos(kPi * y / 4.0) +
               2.0 * t;
    };
    p.b1 = [](double x, double y, double) { return x + y + 1.0; };
    p.b2 = [](double x, double y, double) { return 3.0 - x - y; };
    p.d1 = [](double x, double y, double t) { return x + y + t; };
    p.d2 = [](double x, double y, double t) { return x + y - t; };
    p.kernel = KernelDescriptor::omega(1.0 - nu1);
    p.rho1 = [](double x, double y) { return 1.0 + x * x + y * y; };
    p.rho2 = [](double x, double y, double t) {
        return 1.0 + (t + 1.0) * (x + y + 0.01);
    };
    p.u0 = [](double x, double y) {
        return std::sin(kPi * x) * std::cos(kPi * y);
    };
    p.bc = BoundaryMode2D::dirichlet_x_neumann_y;
    p.Lx = p.Ly = 1.0;
    p.final_time = 1.0;
    const double g1 = Gamma(1.0 + nu1);
    const double g2m1 = Gamma(2.0 - nu1);
    const double g3m1 = Gamma(3.0 - nu1);
    const double g2m2 = Gamma(2.0 - nu2);
    const double g1d = Gamma(1.0 + nu1 - nu2);
    p.f = [=](double x, double y, double t) {
        const double pi2 = kPi * kPi;
        const double gt = 1.0 + t + std::pow(t, nu1);
        const double rho2v = 1.0 + (t + 1.0) * (x + y + 0.01);
        const double axy = std::cos(kPi * x / 4.0) * std::cos(kPi * y / 4.0);
        const double brace =
            (1.0 + x * x + y * y) *
                (g1 + std::pow(t, 1.0 - nu1) / g2m1) -
            rho2v * (std::pow(t, 1.0 - nu2) / g2m2 +
                     std::pow(t, nu1 - nu2) * g1 / g1d) +
            3.0 * pi2 * gt * (t + axy) +
            4.0 * pi2 * (t * g1 + std::pow(t, 1.0 - nu1) / g2m1 +
                         std::pow(t, 2.0 - nu1) / g3m1);
        return brace * std::sin(kPi * x) * std::cos(kPi * y) +
               kPi * gt * ((x + y) * std::cos(kPi * (x + y)) +
                           t * std::cos(kPi * (x - y)));
    };
    c.exact2d = [nu1](double x, double y, double t) {
        return (1.0 + t + std::pow(t, nu1)) * std::sin(kPi * x) *
               std::cos(kPi * y);
    };
    return c;
}

} // namespace

std::optional<ExampleId> parse_example_id(const std::string& name) {
    if (name == "ex1i") return ExampleId::ex1i;
    if (name == "ex1ii") return ExampleId::ex1ii;
    if (name == "ex1ext") return ExampleId::ex1ext;
    if (name == "ex2") return ExampleId::ex2;
    if (name == "ex3") return ExampleId::ex3;
    if (name == "ex4") return ExampleId::ex4;
    return std::nullopt;
}

std::string example_name(ExampleId id) {
    switch (id) {
    case ExampleId::ex1i: return "ex1i";
    case ExampleId::ex1ii: return "ex1ii";
    case ExampleId::ex1ext: return "ex1ext";
    case ExampleId::ex2: return "ex2";
    case ExampleId::ex3: return "ex3";
    case ExampleId::ex4: return "ex4";
    }
    return "?";
}

ExampleCase make_case(ExampleId id, double nu1) {
    return make_case(id, nu1,
                     id == ExampleId::ex1ii ? Nu2Rule::third : Nu2Rule::half);
}

ExampleCase make_case(ExampleId id, double nu1, Nu2Rule rule) {
    require_order(nu1);
    const double nu2 = rule == Nu2Rule::half ? nu1 / 2.0 : nu1 / 3.0;
    switch (id) {
    case ExampleId::ex1i: return build_ex1i(nu1, nu2);
    case ExampleId::ex1ii: return build_ex1ii(nu1, nu2);
    case ExampleId::ex1ext:
        if (rule == Nu2Rule::third) {
            throw std::domain_error(
                "ex1ext is defined with the nu2 = nu1/2 rule only");
        }
        return make_ext_case(nu1, 0.5, 0.1);
    case ExampleId::ex2: return build_ex2(nu1, nu2);
    case ExampleId::ex3: return build_ex3(nu1, nu2);
    case ExampleId::ex4: return build_ex4(nu1, nu2);
    }
    throw std::invalid_argument("unknown example id");
}

ExampleCase make_ext_case(double nu1, double rho2, double T) {
    require_order(nu1);
    if (!(T > 0.0)) {
        throw std::domain_error("make_ext_case: T must be positive");
    }
    ExampleCase c;
    c.id = ExampleId::ex1ext;
    c.name = "ex1ext";
    c.nu1 = nu1;
    c.nu2 = nu1 / 2.0;
    c.final_time = T;
    c.rho2_const = rho2;
    fill_ex1_frame(c, [rho2](double, double) { return rho2; });
    c.problem1d.final_time = T;
    return c;
}

ErrorReport run_case(const ExampleCase& c, std::size_t K, std::size_t J,
                     bool richardson) {
    ErrorReport report;
    report.K = K;
    report.J = J;
    report.richardson = richardson;
    const auto start = std::chrono::steady_clock::now();
    if (!c.two_dimensional) {
        Grid1D g{K, J, c.problem1d.length, c.problem1d.final_time};
        auto hist = solve(c.problem1d, g, richardson);
        report.per_level.resize(J + 1, 0.0);
        for (std::size_t j = 0; j <= J; ++j) {
            double level_max = 0.0;
            for (std::size_t k = 0; k <= K; ++k) {
                const double err =
                    std::abs(hist.at(j, k) - c.exact1d(g.x(k), g.time(j)));
                level_max = std::max(level_max, err);
            }
            report.per_level[j] = level_max;
            report.gimel = std::max(report.gimel, level_max);
        }
    } else {
        Grid2D g{K, K, J, c.problem2d.Lx, c.problem2d.Ly,
                 c.problem2d.final_time};
        auto hist = solve_2d(c.problem2d, g, richardson);
        report.per_level.resize(J + 1, 0.0);
        for (std::size_t j = 0; j <= J; ++j) {
            double level_max = 0.0;
            for (std::size_t l = 0; l <= K; ++l) {
                for (std::size_t k = 0; k <= K; ++k) {
                    const double err = std::abs(
                        hist.at(j, l, k) -
                        c.exact2d(g.x(k), g.y(l), g.time(j)));
                    level_max = std::max(level_max, err);
                }
            }
            report.per_level[j] = level_max;
            report.gimel = std::max(report.gimel, level_max);
        }
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

std::vector<ConvergenceRow> convergence_study(const ExampleCase& c,
                                              std::size_t K, std::size_t J,
                                              std::size_t refinements,
                                              RefinementAxis axis,
                                              bool richardson) {
    if (refinements < 2) {
        throw std::domain_error("convergence_study: need >= 2 grids");
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < refinements; ++i) {
        auto rep = run_case(c, K, J, richardson);
        ConvergenceRow row{K, J, rep.gimel, 0.0};
        if (!rows.empty()) {
            row.order = std::log2(rows.back().gimel / rep.gimel);
        }
        rows.push_back(row);
        if (axis == RefinementAxis::time) {
            J *= 2;
        } else {
            K *= 2;
        }
    }
    return rows;
}

} // namespace fracsub
