#include "fracsub/solver1d.hpp"

#include "fracsub/numfmt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsub {

namespace {

constexpr double kCompatTol = 1.0e-7;

void validate_problem(const Problem1D& p) {
    if (!(p.nu2 > 0.0) || !(p.nu2 < p.nu1) || p.nu1 > 1.0) {
        throw std::domain_error("Problem1D: need 0 < nu2 < nu1 <= 1");
    }
    if (!(p.length > 0.0) || !(p.final_time > 0.0)) {
        throw std::domain_error("Problem1D: need positive length and time");
    }
    auto check_bc = [](const RobinBC& bc, const char* side) {
        if (bc.c_deriv == 0.0 && bc.c_value == 0.0) {
            throw std::domain_error(std::string("Problem1D: ") + side +
                                    " boundary has all-zero coefficients");
        }
    };
    check_bc(p.left, "left");
    check_bc(p.right, "right");
}

void validate_grid(const Problem1D& p, const Grid1D& g) {
    if (g.K < 2 || g.J < 1) {
        throw std::domain_error("Grid1D: need K >= 2 and J >= 1");
    }
    if (g.L != p.length || g.T != p.final_time) {
        throw std::invalid_argument("Grid1D does not match the problem domain");
    }
}

[[noreturn]] void coefficient_failure(const char* name, double x, double t) {
    throw std::domain_error(std::string("coefficient ") + name +
                            " invalid at (x, t) = (" + format_g17(x) + ", " +
                            format_g17(t) + ")");
}

// One-sided fourth-order derivative from the nodes x .. x+4h.
double one_sided_derivative(const SpaceFn& f, double x, double h) {
    return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2.0 * h) +
            16.0 * f(x + 3.0 * h) - 3.0 * f(x + 4.0 * h)) /
           (12.0 * h);
}

// Incremental state of the implicit march; owns every per-level cache the
// fractional sums and the memory term need.
class Marcher {
public:
    Marcher(const Problem1D& p, const Grid1D& g)
        : p_(p), g_(g), h_(g.h()), sigma_(g.sigma()),
          gl1_(gl_weights(p.nu1, g.J)),
          gl2_(gl_weights(p.nu2, g.J)),
          pow_nu1_(std::pow(sigma_, -p.nu1)),
          pow_nu2_(std::pow(sigma_, -p.nu2)),
          has_memory_(!p.kernel.is_zero()),
          hist_(g.K, g.J),
          u0_(g.K + 1), rho1_(g.K + 1) {
        const std::size_t n = g_.K + 1;
        if (has_memory_) {
            b_.assign((g_.J + 1) * n, 0.0);
            vxx_.assign((g_.J + 1) * n, 0.0);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double x = g_.x(k);
            u0_[k] = p_.u0(x);
            rho1_[k] = p_.rho1(x);
            if (!(rho1_[k] > 0.0)) coefficient_failure("rho1", x, 0.0);
        }
        set_level(0, u0_);
    }

    const SolutionHistory& history() const { return hist_; }
    SolutionHistory take_history() { return std::move(hist_); }
    std::size_t top_level() const { return top_; }

    // Install values for level j (u0 row is installed by the constructor)
    // and cache the quantities the memory term will read back.
    void set_level(std::size_t j, const std::vector<double>& values) {
        const std::size_t n = g_.K + 1;
        if (values.size() != n) {
            throw std::invalid_argument("level values have wrong length");
        }
        for (std::size_t k = 0; k < n; ++k) hist_.at(j, k) = values[k];
        if (has_memory_) cache_level(j);
        top_ = j;
    }

    TridiagonalSystem assemble(std::size_t j) const {
        if (j > top_ || j >= g_.J) {
            throw std::invalid_argument("assemble: history does not cover "
                                        "levels 0..j or j is out of range");
        }
        const std::size_t K = g_.K;
        const double t_next = g_.time(j + 1);
        const double h2 = h_ * h_;

        TridiagonalSystem s;
        s.sub.assign(K, 0.0);
        s.super.assign(K, 0.0);
        s.diag.assign(K + 1, 0.0);
        s.rhs.assign(K + 1, 0.0);

        // Fractional-history sums over m >= 1.
        std::vector<double> hist1(K + 1, 0.0), hist2(K + 1, 0.0);
        for (std::size_t m = 1; m <= j + 1; ++m) {
            const double w1 = gl1_.weights[m];
            const double w2 = gl2_.weights[m];
            const double* lv = hist_.level(j + 1 - m);
            for (std::size_t k = 0; k <= K; ++k) {
                const double du = lv[k] - u0_[k];
                hist1[k] += w1 * du;
                hist2[k] += w2 * du;
            }
        }

        // Memory sum through level j: sum_m c_m b^m v^m with
        // c_0 = K_{0,j}/2, c_m = (K_{m-1,j} + K_{m,j})/2.
        std::vector<double> mem(K + 1, 0.0);
        double k_diag = 0.0; // K_{j,j}
        if (has_memory_) {
            const MemoryQuadrature q = kernel_quadrature(p_.kernel, sigma_, j);
            k_diag = q.weights[j];
            for (std::size_t m = 0; m <= j; ++m) {
                const double c = 0.5 * (q.weights[m] +
                                        (m > 0 ? q.weights[m - 1] : 0.0));
                const double* bm = &b_[m * (K + 1)];
                const double* vm = &vxx_[m * (K + 1)];
                for (std::size_t k = 0; k <= K; ++k) {
                    mem[k] += c * bm[k] * vm[k];
                }
            }
        }

        auto row_coeffs = [&](std::size_t k, double& base, double& A,
                              double& D) {
            const double x = g_.x(k);
            const double a = p_.a(x, t_next);
            if (!(a > 0.0)) coefficient_failure("a", x, t_next);
            const double bv = has_memory_ ? p_.b(x, t_next) : 0.0;
            base = rho1_[k] * pow_nu1_ - p_.rho2(x, t_next) * pow_nu2_;
            A = a / h2 + bv * k_diag / (2.0 * h2);
            D = p_.d(x, t_next) / (2.0 * h_);
        };
        auto rhs_common = [&](std::size_t k, double base) {
            return p_.f(g_.x(k), t_next) + mem[k] + base * u0_[k] -
                   rho1_[k] * pow_nu1_ * hist1[k] +
                   p_.rho2(g_.x(k), t_next) * pow_nu2_ * hist2[k];
        };

        for (std::size_t k = 1; k < K; ++k) {
            double base, A, D;
            row_coeffs(k, base, A, D);
            s.sub[k - 1] = -A - D;
            s.diag[k] = base + 2.0 * A;
            s.super[k] = -A + D;
            s.rhs[k] = rhs_common(k, base);
        }

        // Left endpoint.
        if (p_.left.is_dirichlet()) {
            s.diag[0] = 1.0;
            s.super[0] = 0.0;
            s.rhs[0] = p_.left.data(t_next) / p_.left.c_value;
        } else {
            double base, A, D;
            row_coeffs(0, base, A, D);
            const double c1 = p_.left.c_deriv;
            const double c2 = p_.left.c_value;
            const double phi = p_.left.data(t_next);
            s.diag[0] = base + 2.0 * A + (-A - D) * (2.0 * h_ * c2 / c1);
            s.super[0] = -2.0 * A;
            s.rhs[0] = rhs_common(0, base) - (A + D) * (2.0 * h_ / c1) * phi;
        }

        // Right endpoint.
        if (p_.right.is_dirichlet()) {
            s.diag[K] = 1.0;
            s.sub[K - 1] = 0.0;
            s.rhs[K] = p_.right.data(t_next) / p_.right.c_value;
        } else {
            double base, A, D;
            row_coeffs(K, base, A, D);
            const double c3 = p_.right.c_deriv;
            const double c4 = p_.right.c_value;
            const double phi = p_.right.data(t_next);
            s.diag[K] = base + 2.0 * A + (A - D) * (2.0 * h_ * c4 / c3);
            s.sub[K - 1] = -2.0 * A;
            s.rhs[K] = rhs_common(K, base) + (A - D) * (2.0 * h_ / c3) * phi;
        }
        return s;
    }

    void advance() {
        const std::size_t j = top_;
        auto values = solve_tridiagonal(assemble(j));
        set_level(j + 1, values);
    }

private:
    // Second differences divided by h^2 at level j; the endpoint values use
    // the fictitious nodes reconstructed from the boundary conditions at
    // sigma_j (only needed for Robin ends, where the scheme row exists).
    void cache_level(std::size_t j) {
        const std::size_t K = g_.K;
        const double t = g_.time(j);
        const double h2 = h_ * h_;
        double* bj = &b_[j * (K + 1)];
        double* vj = &vxx_[j * (K + 1)];
        const double* u = hist_.level(j);
        for (std::size_t k = 0; k <= K; ++k) bj[k] = p_.b(g_.x(k), t);
        for (std::size_t k = 1; k < K; ++k) {
            vj[k] = (u[k - 1] - 2.0 * u[k] + u[k + 1]) / h2;
        }
        if (!p_.left.is_dirichlet()) {
            const double c1 = p_.left.c_deriv;
            const double c2 = p_.left.c_value;
            const double ghost =
                u[1] - (2.0 * h_ / c1) * (p_.left.data(t) - c2 * u[0]);
            vj[0] = (ghost - 2.0 * u[0] + u[1]) / h2;
        }
        if (!p_.right.is_dirichlet()) {
            const double c3 = p_.right.c_deriv;
            const double c4 = p_.right.c_value;
            const double ghost =
                u[K - 1] + (2.0 * h_ / c3) * (p_.right.data(t) - c4 * u[K]);
            vj[K] = (u[K - 1] - 2.0 * u[K] + ghost) / h2;
        }
    }

    const Problem1D& p_;
    const Grid1D& g_;
    double h_;
    double sigma_;
    GLWeightTable gl1_;
    GLWeightTable gl2_;
    double pow_nu1_;
    double pow_nu2_;
    bool has_memory_;
    SolutionHistory hist_;
    std::vector<double> u0_;
    std::vector<double> rho1_;
    std::vector<double> b_;   // (J+1) x (K+1) when the kernel is active
    std::vector<double> vxx_; // second differences / h^2, same shape
    std::size_t top_ = 0;
};

Marcher primed_marcher(const Problem1D& p, const Grid1D& g,
                       const SolutionHistory& hist, std::size_t j) {
    validate_problem(p);
    validate_grid(p, g);
    if (hist.nodes() != g.K + 1 || hist.levels() != g.J + 1) {
        throw std::invalid_argument("history shape does not match the grid");
    }
    Marcher m(p, g);
    std::vector<double> row(g.K + 1);
    for (std::size_t lv = 1; lv <= j; ++lv) {
        for (std::size_t k = 0; k <= g.K; ++k) row[k] = hist.at(lv, k);
        m.set_level(lv, row);
    }
    return m;
}

} // namespace

std::vector<CompatibilityDiagnostic> validate_compatibility(
    const Problem1D& p) {
    validate_problem(p);
    std::vector<CompatibilityDiagnostic> out;
    const double dh = 1.0e-4 * p.length;
    auto check = [&](const RobinBC& bc, double x, bool left) {
        double residual;
        std::string what;
        if (bc.is_dirichlet()) {
            residual = bc.data(0.0) / bc.c_value - p.u0(x);
            what = "dirichlet data(0) != u0 at endpoint";
        } else {
            const double du = left
                ? one_sided_derivative(p.u0, x, dh)
                : -one_sided_derivative([&](double s) { return p.u0(2.0 * x - s); },
                                        x, dh);
            residual = bc.c_deriv * du + bc.c_value * p.u0(x) - bc.data(0.0);
            what = "robin operator on u0 != data(0) at endpoint";
        }
        if (std::abs(residual) > kCompatTol) {
            out.push_back({what, x, std::abs(residual)});
        }
    };
    check(p.left, 0.0, true);
    check(p.right, p.length, false);
    return out;
}

TridiagonalSystem assemble_level(const Problem1D& p, const Grid1D& g,
                                 const SolutionHistory& hist, std::size_t j) {
    return primed_marcher(p, g, hist, j).assemble(j);
}

void step(const Problem1D& p, const Grid1D& g, SolutionHistory& hist,
          std::size_t j) {
    auto m = primed_marcher(p, g, hist, j);
    m.advance();
    for (std::size_t k = 0; k <= g.K; ++k) {
        hist.at(j + 1, k) = m.history().at(j + 1, k);
    }
}

SolutionHistory solve(const Problem1D& p, const Grid1D& g, bool richardson) {
    validate_problem(p);
    validate_grid(p, g);
    Marcher coarse(p, g);
    for (std::size_t j = 0; j < g.J; ++j) coarse.advance();
    if (!richardson) return coarse.take_history();

    Grid1D fine_grid{g.K, 2 * g.J, g.L, g.T};
    Marcher fine(p, fine_grid);
    for (std::size_t j = 0; j < fine_grid.J; ++j) fine.advance();

    SolutionHistory combined = coarse.take_history();
    const SolutionHistory& fh = fine.history();
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t k = 0; k <= g.K; ++k) {
            combined.at(j, k) =
                richardson_combine(combined.at(j, k), fh.at(2 * j, k), 1);
        }
    }
    return combined;
}

void write_history_csv(std::ostream& os, const SolutionHistory& hist,
                       const Grid1D& grid) {
    for (std::size_t k = 0; k < hist.nodes(); ++k) {
        os << (k ? "," : "") << format_g17(grid.x(k));
    }
    os << '\n';
    for (std::size_t j = 0; j < hist.levels(); ++j) {
        for (std::size_t k = 0; k < hist.nodes(); ++k) {
            os << (k ? "," : "") << format_g17(hist.at(j, k));
        }
        os << '\n';
    }
}

} // namespace fracsub
