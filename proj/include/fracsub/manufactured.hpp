#pragma once

#include "fracsub/problem.hpp"
#include "fracsub/problem2d.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracsub {

/// Benchmark catalog identifiers. ex1i/ex1ii differ in the rho2 coefficient
/// and the nu2 rule (nu1/2 vs nu1/3); ex1ext runs the ex1 setup with a
/// constant rho2 and selectable final time; ex4 is two-dimensional.
enum class ExampleId { ex1i, ex1ii, ex1ext, ex2, ex3, ex4 };

std::optional<ExampleId> parse_example_id(const std::string& name);
std::string example_name(ExampleId id);

/// A catalog entry with everything needed to run and score one solve: the
/// assembled problem, the closed-form solution, and grid defaults.
struct ExampleCase {
    ExampleId id;
    std::string name;
    double nu1;
    double nu2;
    bool two_dimensional;
    double final_time;
    std::optional<double> rho2_const; // ex1ext only
    Problem1D problem1d;              // valid when !two_dimensional
    Problem2D problem2d;              // valid when two_dimensional
    std::function<double(double x, double t)> exact1d;
    std::function<double(double x, double y, double t)> exact2d;

    double exact(double x, double t) const { return exact1d(x, t); }
    double exact(double x, double y, double t) const {
        return exact2d(x, y, t);
    }
    double forcing(double x, double t) const { return problem1d.f(x, t); }
    double forcing(double x, double y, double t) const {
        return problem2d.f(x, y, t);
    }
};

enum class Nu2Rule { half, third };

/// Standard table case: nu2 follows the per-example rule (nu1/3 for ex1ii,
/// nu1/2 otherwise) unless a rule is given explicitly.
ExampleCase make_case(ExampleId id, double nu1);
ExampleCase make_case(ExampleId id, double nu1, Nu2Rule rule);

/// ex1 setup with constant rho2 and nu2 = nu1/2 at a chosen final time.
ExampleCase make_ext_case(double nu1, double rho2, double T);

/// Max-norm error over every space-time lattice point plus per-level error
/// profile and wall time.
struct ErrorReport {
    double gimel = 0.0;
    std::vector<double> per_level;
    std::size_t K = 0;  // Kx = Ky for 2D cases
    std::size_t J = 0;
    bool richardson = true;
    double seconds = 0.0;
};

/// Solve the case on a K x J grid (K used for both axes in 2D) and compare
/// against the closed-form solution on every lattice point.
ErrorReport run_case(const ExampleCase& c, std::size_t K, std::size_t J,
                     bool richardson);

enum class RefinementAxis { time, space };

struct ConvergenceRow {
    std::size_t K = 0;
    std::size_t J = 0;
    double gimel = 0.0;
    double order = 0.0; // log2(gimel_prev / gimel), 0 for the first row
};

/// Halve the chosen axis step `refinements` times (>= 2 grids total) and
/// report the empirical orders.
std::vector<ConvergenceRow> convergence_study(const ExampleCase& c,
                                              std::size_t K, std::size_t J,
                                              std::size_t refinements,
                                              RefinementAxis axis,
                                              bool richardson);

} // namespace fracsub
