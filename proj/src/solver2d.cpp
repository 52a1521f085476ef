#include "fracsub/solver2d.hpp"

#include "fracsub/numfmt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsub {

namespace {

void validate_problem(const Problem2D& p) {
    if (!(p.nu2 > 0.0) || !(p.nu2 < p.nu1) || p.nu1 > 1.0) {
        throw std::domain_error("Problem2D: need 0 < nu2 < nu1 <= 1");
    }
    if (!(p.Lx > 0.0) || !(p.Ly > 0.0) || !(p.final_time > 0.0)) {
        throw std::domain_error("Problem2D: need positive domain and time");
    }
}

void validate_grid(const Problem2D& p, const Grid2D& g) {
    if (g.Kx < 2 || g.Ky < 2 || g.J < 1) {
        throw std::domain_error("Grid2D: need Kx, Ky >= 2 and J >= 1");
    }
    if (g.Lx != p.Lx || g.Ly != p.Ly || g.T != p.final_time) {
        throw std::invalid_argument("Grid2D does not match the problem domain");
    }
}

[[noreturn]] void coefficient_failure(const char* name, double x, double y,
                                      double t) {
    throw std::domain_error(std::string("coefficient ") + name +
                            " invalid at (x, y, t) = (" + format_g17(x) +
                            ", " + format_g17(y) + ", " + format_g17(t) +
                            ")");
}

class Marcher2D {
public:
    Marcher2D(const Problem2D& p, const Grid2D& g)
        : p_(p), g_(g), hx_(g.hx()), hy_(g.hy()), sigma_(g.sigma()),
          gl1_(gl_weights(p.nu1, g.J)), gl2_(gl_weights(p.nu2, g.J)),
          pow_nu1_(std::pow(sigma_, -p.nu1)),
          pow_nu2_(std::pow(sigma_, -p.nu2)),
          has_memory_(!p.kernel.is_zero()),
          neumann_y_(p.bc == BoundaryMode2D::dirichlet_x_neumann_y),
          nodes_((g.Kx + 1) * (g.Ky + 1)),
          hist_(g.Kx, g.Ky, g.J),
          u0_(nodes_), rho1_(nodes_) {
        if (has_memory_) {
            b1_.assign((g_.J + 1) * nodes_, 0.0);
            b2_.assign((g_.J + 1) * nodes_, 0.0);
            v1_.assign((g_.J + 1) * nodes_, 0.0);
            v2_.assign((g_.J + 1) * nodes_, 0.0);
        }
        for (std::size_t l = 0; l <= g_.Ky; ++l) {
            for (std::size_t k = 0; k <= g_.Kx; ++k) {
                const double x = g_.x(k), y = g_.y(l);
                u0_[node(l, k)] = p_.u0(x, y);
                rho1_[node(l, k)] = p_.rho1(x, y);
                if (!(rho1_[node(l, k)] > 0.0)) {
                    coefficient_failure("rho1", x, y, 0.0);
                }
            }
        }
        install_level(0, u0_.data());
    }

    const SolutionHistory2D& history() const { return hist_; }
    SolutionHistory2D take_history() { return std::move(hist_); }
    std::size_t top_level() const { return top_; }

    std::size_t node(std::size_t l, std::size_t k) const {
        return l * (g_.Kx + 1) + k;
    }

    // Unknown index of a retained node, or npos for pinned Dirichlet nodes.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t unknown(std::size_t l, std::size_t k) const {
        if (k == 0 || k == g_.Kx) return npos;
        if (!neumann_y_ && (l == 0 || l == g_.Ky)) return npos;
        const std::size_t row = neumann_y_ ? l : l - 1;
        return row * (g_.Kx - 1) + (k - 1);
    }
    std::size_t unknown_count() const {
        const std::size_t rows = neumann_y_ ? g_.Ky + 1 : g_.Ky - 1;
        return rows * (g_.Kx - 1);
    }

    void install_level(std::size_t j, const double* values) {
        double* lv = hist_.level(j);
        for (std::size_t i = 0; i < nodes_; ++i) lv[i] = values[i];
        if (has_memory_) cache_level(j);
        top_ = j;
    }

    BandedSystem assemble(std::size_t j) const {
        if (j > top_ || j >= g_.J) {
            throw std::invalid_argument("assemble_level_2d: history does not "
                                        "cover levels 0..j or j out of range");
        }
        const double t1 = g_.time(j + 1);
        const double hx2 = hx_ * hx_, hy2 = hy_ * hy_;

        // Fractional-history sums over m >= 1 at every node.
        std::vector<double> hist1(nodes_, 0.0), hist2(nodes_, 0.0);
        for (std::size_t m = 1; m <= j + 1; ++m) {
            const double w1 = gl1_.weights[m];
            const double w2 = gl2_.weights[m];
            const double* lv = hist_.level(j + 1 - m);
            for (std::size_t i = 0; i < nodes_; ++i) {
                const double du = lv[i] - u0_[i];
                hist1[i] += w1 * du;
                hist2[i] += w2 * du;
            }
        }

        std::vector<double> mem(nodes_, 0.0);
        double k_diag = 0.0;
        if (has_memory_) {
            const MemoryQuadrature q = kernel_quadrature(p_.kernel, sigma_, j);
            k_diag = q.weights[j];
            for (std::size_t m = 0; m <= j; ++m) {
                const double c = 0.5 * (q.weights[m] +
                                        (m > 0 ? q.weights[m - 1] : 0.0));
                const double* b1m = &b1_[m * nodes_];
                const double* b2m = &b2_[m * nodes_];
                const double* v1m = &v1_[m * nodes_];
                const double* v2m = &v2_[m * nodes_];
                for (std::size_t i = 0; i < nodes_; ++i) {
                    mem[i] += c * (b1m[i] * v1m[i] + b2m[i] * v2m[i]);
                }
            }
        }

        BandedSystem s(unknown_count(), g_.Kx - 1);
        const std::size_t l_lo = neumann_y_ ? 0 : 1;
        const std::size_t l_hi = neumann_y_ ? g_.Ky : g_.Ky - 1;
        for (std::size_t l = l_lo; l <= l_hi; ++l) {
            const double y = g_.y(l);
            for (std::size_t k = 1; k < g_.Kx; ++k) {
                const double x = g_.x(k);
                const std::size_t row = unknown(l, k);
                const std::size_t i = node(l, k);
                const double a1 = p_.a1(x, y, t1);
                const double a2 = p_.a2(x, y, t1);
                if (!(a1 > 0.0)) coefficient_failure("a1", x, y, t1);
                if (!(a2 > 0.0)) coefficient_failure("a2", x, y, t1);
                const double bv1 = has_memory_ ? p_.b1(x, y, t1) : 0.0;
                const double bv2 = has_memory_ ? p_.b2(x, y, t1) : 0.0;
                const double base = rho1_[i] * pow_nu1_ -
                                    p_.rho2(x, y, t1) * pow_nu2_;
                const double A1 = a1 / hx2 + bv1 * k_diag / (2.0 * hx2);
                const double A2 = a2 / hy2 + bv2 * k_diag / (2.0 * hy2);
                const double D1 = p_.d1(x, y, t1) / (2.0 * hx_);
                const double D2 = p_.d2(x, y, t1) / (2.0 * hy_);

                s.at(row, row) = base + 2.0 * A1 + 2.0 * A2;
                if (k > 1) s.at(row, unknown(l, k - 1)) = -A1 - D1;
                if (k + 1 < g_.Kx) s.at(row, unknown(l, k + 1)) = -A1 + D1;
                if (neumann_y_) {
                    if (l == 0) {
                        s.at(row, unknown(1, k)) = -2.0 * A2;
                    } else if (l == g_.Ky) {
                        s.at(row, unknown(g_.Ky - 1, k)) = -2.0 * A2;
                    } else {
                        s.at(row, unknown(l - 1, k)) = -A2 - D2;
                        s.at(row, unknown(l + 1, k)) = -A2 + D2;
                    }
                } else {
                    if (l > 1) s.at(row, unknown(l - 1, k)) = -A2 - D2;
                    if (l + 1 < g_.Ky) s.at(row, unknown(l + 1, k)) = -A2 + D2;
                }
                s.rhs[row] = p_.f(x, y, t1) + mem[i] + base * u0_[i] -
                             rho1_[i] * pow_nu1_ * hist1[i] +
                             p_.rho2(x, y, t1) * pow_nu2_ * hist2[i];
            }
        }
        return s;
    }

    void advance() {
        const std::size_t j = top_;
        auto x = solve_banded(assemble(j));
        std::vector<double> lv(nodes_, 0.0);
        const std::size_t l_lo = neumann_y_ ? 0 : 1;
        const std::size_t l_hi = neumann_y_ ? g_.Ky : g_.Ky - 1;
        for (std::size_t l = l_lo; l <= l_hi; ++l) {
            for (std::size_t k = 1; k < g_.Kx; ++k) {
                lv[node(l, k)] = x[unknown(l, k)];
            }
        }
        install_level(j + 1, lv.data());
    }

private:
    void cache_level(std::size_t j) {
        const double t = g_.time(j);
        const double hx2 = hx_ * hx_, hy2 = hy_ * hy_;
        double* b1j = &b1_[j * nodes_];
        double* b2j = &b2_[j * nodes_];
        double* v1j = &v1_[j * nodes_];
        double* v2j = &v2_[j * nodes_];
        const double* u = hist_.level(j);
        for (std::size_t l = 0; l <= g_.Ky; ++l) {
            for (std::size_t k = 0; k <= g_.Kx; ++k) {
                const std::size_t i = node(l, k);
                b1j[i] = p_.b1(g_.x(k), g_.y(l), t);
                b2j[i] = p_.b2(g_.x(k), g_.y(l), t);
                if (k >= 1 && k < g_.Kx) {
                    v1j[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / hx2;
                }
                const std::size_t stride = g_.Kx + 1;
                if (l >= 1 && l < g_.Ky) {
                    v2j[i] = (u[i - stride] - 2.0 * u[i] + u[i + stride]) / hy2;
                } else if (neumann_y_) {
                    // fictitious mirror across the homogeneous Neumann edge
                    const std::size_t inner =
                        l == 0 ? i + stride : i - stride;
                    v2j[i] = 2.0 * (u[inner] - u[i]) / hy2;
                }
            }
        }
    }

    const Problem2D& p_;
    const Grid2D& g_;
    double hx_, hy_, sigma_;
    GLWeightTable gl1_, gl2_;
    double pow_nu1_, pow_nu2_;
    bool has_memory_;
    bool neumann_y_;
    std::size_t nodes_;
    SolutionHistory2D hist_;
    std::vector<double> u0_, rho1_;
    std::vector<double> b1_, b2_, v1_, v2_;
    std::size_t top_ = 0;
};

Marcher2D primed_marcher(const Problem2D& p, const Grid2D& g,
                         const SolutionHistory2D& hist, std::size_t j) {
    validate_problem(p);
    validate_grid(p, g);
    Marcher2D m(p, g);
    for (std::size_t lv = 1; lv <= j; ++lv) {
        m.install_level(lv, hist.level(lv));
    }
    return m;
}

} // namespace

BandedSystem assemble_level_2d(const Problem2D& p, const Grid2D& g,
                               const SolutionHistory2D& hist, std::size_t j) {
    return primed_marcher(p, g, hist, j).assemble(j);
}

SolutionHistory2D solve_2d(const Problem2D& p, const Grid2D& g,
                           bool richardson) {
    validate_problem(p);
    validate_grid(p, g);
    Marcher2D coarse(p, g);
    for (std::size_t j = 0; j < g.J; ++j) coarse.advance();
    if (!richardson) return coarse.take_history();

    Grid2D fine_grid{g.Kx, g.Ky, 2 * g.J, g.Lx, g.Ly, g.T};
    Marcher2D fine(p, fine_grid);
    for (std::size_t j = 0; j < fine_grid.J; ++j) fine.advance();

    SolutionHistory2D combined = coarse.take_history();
    const SolutionHistory2D& fh = fine.history();
    for (std::size_t j = 0; j <= g.J; ++j) {
        for (std::size_t l = 0; l <= g.Ky; ++l) {
            for (std::size_t k = 0; k <= g.Kx; ++k) {
                combined.at(j, l, k) = richardson_combine(
                    combined.at(j, l, k), fh.at(2 * j, l, k), 1);
            }
        }
    }
    return combined;
}

} // namespace fracsub
