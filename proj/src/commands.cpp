#include "fracsub/commands.hpp"

#include "fracsub/aggregate_kernel.hpp"
#include "fracsub/config.hpp"
#include "fracsub/expr.hpp"
#include "fracsub/manufactured.hpp"
#include "fracsub/numfmt.hpp"
#include "fracsub/solver1d.hpp"
#include "fracsub/solver2d.hpp"

#include <json.hpp>

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fracsub {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "fracsub 1.0.0";

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

std::ofstream open_out(const std::string& path) {
    fs::path p(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream f(p);
    if (!f) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    return f;
}

void write_manifest(const std::string& path, json manifest) {
    manifest["version"] = kVersion;
    auto f = open_out(path);
    f << manifest.dump(2) << '\n';
}

// Builds the standard nu1 row set of a table example.
std::vector<double> default_rows(ExampleId id) {
    std::vector<double> rows;
    if (id == ExampleId::ex2) {
        for (int i = 0; i < 9; ++i) rows.push_back(0.15 + 0.1 * i);
    } else if (id == ExampleId::ex1ext) {
        for (int i = 6; i <= 9; ++i) rows.push_back(0.1 * i);
    } else {
        for (int i = 1; i <= 9; ++i) rows.push_back(0.1 * i);
    }
    return rows;
}

ExampleCase build_case(ExampleId id, double nu1,
                       const std::string& nu2_rule) {
    if (nu2_rule.empty()) return make_case(id, nu1);
    if (nu2_rule == "half") return make_case(id, nu1, Nu2Rule::half);
    if (nu2_rule == "third") return make_case(id, nu1, Nu2Rule::third);
    throw ConfigError("--nu2-rule must be half or third");
}

ExampleId require_example(const std::string& name) {
    auto id = parse_example_id(name);
    if (!id) {
        throw ConfigError("unknown example '" + name +
                          "' (expected ex1i|ex1ii|ex1ext|ex2|ex3|ex4)");
    }
    return *id;
}

struct GridChoice {
    std::size_t K;
    std::size_t J;
};

GridChoice grid_for(ExampleId id, std::optional<std::size_t> K,
                    std::optional<std::size_t> J) {
    const bool two_d = id == ExampleId::ex4;
    return {K.value_or(two_d ? 100 : 1000), J.value_or(100)};
}

// Runs `rows.size()` independent solves across up to `jobs` threads,
// preserving row order in the result.
template <typename Work>
void run_rows(std::size_t count, std::size_t jobs, Work&& work) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min(jobs, count);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                work(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const expr::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

void write_level_grid_csv(const std::string& path,
                          const SolutionHistory2D& hist, const Grid2D& g,
                          std::size_t j) {
    auto f = open_out(path);
    for (std::size_t l = 0; l <= g.Ky; ++l) {
        for (std::size_t k = 0; k <= g.Kx; ++k) {
            f << (k ? "," : "") << format_g17(hist.at(j, l, k));
        }
        f << '\n';
    }
}

void solve_from_config(const RunConfig& cfg, const SolveOptions& opt,
                       std::ostream& out) {
    Timer timer;
    json manifest;
    manifest["command"] = "solve";
    manifest["name"] = cfg.name;
    manifest["config_hash"] = cfg.config_hash;
    manifest["parameters"] = cfg.summary;
    manifest["richardson"] = opt.richardson.value_or(cfg.richardson);
    const bool richardson = opt.richardson.value_or(cfg.richardson);

    if (cfg.dimension == 1) {
        const std::size_t K = opt.K.value_or(cfg.K);
        const std::size_t J = opt.J.value_or(cfg.J);
        Grid1D g{K, J, cfg.problem1d.length, cfg.problem1d.final_time};
        for (const auto& d : validate_compatibility(cfg.problem1d)) {
            out << "compatibility: " << d.condition << " at x="
                << format_g17(d.x) << " magnitude=" << format_g17(d.magnitude)
                << '\n';
        }
        auto hist = solve(cfg.problem1d, g, richardson);
        const std::string csv = resolve_out_path(opt.out + ".csv");
        {
            auto f = open_out(csv);
            write_history_csv(f, hist, g);
        }
        manifest["grid"] = {{"K", K}, {"J", J}};
        manifest["outputs"] = {csv};
        manifest["seconds"] = timer.seconds();
        write_manifest(resolve_out_path(opt.out + ".manifest.json"),
                       manifest);
        out << "wrote " << csv << '\n';
    } else {
        const std::size_t Kx = opt.Kx.value_or(opt.K.value_or(cfg.Kx));
        const std::size_t Ky = opt.Ky.value_or(opt.K.value_or(cfg.Ky));
        const std::size_t J = opt.J.value_or(cfg.J);
        Grid2D g{Kx, Ky, J, cfg.problem2d.Lx, cfg.problem2d.Ly,
                 cfg.problem2d.final_time};
        auto hist = solve_2d(cfg.problem2d, g, richardson);
        const std::string dir = resolve_out_path(opt.out);
        fs::create_directories(dir);
        json levels = json::array();
        for (std::size_t j = 0; j <= J; ++j) {
            char name[32];
            std::snprintf(name, sizeof(name), "level_%04zu.csv", j);
            const std::string path = dir + "/" + name;
            write_level_grid_csv(path, hist, g, j);
            levels.push_back({{"level", j},
                              {"time", g.time(j)},
                              {"file", std::string(name)}});
        }
        manifest["grid"] = {{"Kx", Kx}, {"Ky", Ky}, {"J", J}};
        manifest["levels"] = levels;
        manifest["outputs"] = {dir};
        manifest["seconds"] = timer.seconds();
        write_manifest(dir + "/manifest.json", manifest);
        out << "wrote " << dir << '\n';
    }
}

void solve_example(const SolveOptions& opt, std::ostream& out) {
    const ExampleId id = require_example(opt.example);
    ExampleCase c = id == ExampleId::ex1ext
        ? make_ext_case(opt.nu1, opt.ext_rho2.value_or(0.5),
                        opt.ext_T.value_or(0.1))
        : build_case(id, opt.nu1, opt.nu2_rule);
    const bool richardson = opt.richardson.value_or(true);
    const auto grid = grid_for(id, opt.Kx ? opt.Kx : opt.K, opt.J);

    Timer timer;
    json manifest;
    manifest["command"] = "solve";
    manifest["name"] = c.name;
    manifest["parameters"] = {{"example", c.name},
                              {"nu1", c.nu1},
                              {"nu2", c.nu2}};
    if (c.rho2_const) manifest["parameters"]["rho2"] = *c.rho2_const;
    manifest["richardson"] = richardson;
    manifest["config_hash"] =
        fnv1a(c.name + "/" + format_g17(c.nu1) + "/" +
              std::to_string(grid.K) + "/" + std::to_string(grid.J) + "/" +
              (richardson ? "r1" : "r0"));

    if (opt.dry_run) {
        out << "example=" << c.name << " nu1=" << format_g17(c.nu1)
            << " nu2=" << format_g17(c.nu2) << " T="
            << format_g17(c.final_time) << " K=" << grid.K
            << " J=" << grid.J << " richardson="
            << (richardson ? "on" : "off") << '\n';
        return;
    }

    json outputs = json::array();
    double gimel = 0.0;
    if (!c.two_dimensional) {
        Grid1D g{grid.K, grid.J, c.problem1d.length, c.final_time};
        auto hist = solve(c.problem1d, g, richardson);
        for (std::size_t j = 0; j <= g.J; ++j) {
            for (std::size_t k = 0; k <= g.K; ++k) {
                gimel = std::max(gimel, std::abs(hist.at(j, k) -
                                                 c.exact(g.x(k), g.time(j))));
            }
        }
        const std::string csv = resolve_out_path(opt.out + ".csv");
        auto f = open_out(csv);
        write_history_csv(f, hist, g);
        outputs.push_back(csv);
    } else {
        Grid2D g{grid.K, grid.K, grid.J, 1.0, 1.0, c.final_time};
        auto hist = solve_2d(c.problem2d, g, richardson);
        for (std::size_t j = 0; j <= g.J; ++j) {
            for (std::size_t l = 0; l <= g.Ky; ++l) {
                for (std::size_t k = 0; k <= g.Kx; ++k) {
                    gimel = std::max(
                        gimel, std::abs(hist.at(j, l, k) -
                                        c.exact(g.x(k), g.y(l), g.time(j))));
                }
            }
        }
        const std::string dir = resolve_out_path(opt.out);
        fs::create_directories(dir);
        for (std::size_t j = 0; j <= g.J; ++j) {
            char name[32];
            std::snprintf(name, sizeof(name), "level_%04zu.csv", j);
            write_level_grid_csv(dir + "/" + name, hist, g, j);
        }
        outputs.push_back(dir);
    }
    manifest["grid"] = {{"K", grid.K}, {"J", grid.J}};
    manifest["gimel"] = gimel;
    manifest["outputs"] = outputs;
    manifest["seconds"] = timer.seconds();
    write_manifest(resolve_out_path(opt.out + ".manifest.json"), manifest);
    out << "gimel = " << format_g17(gimel) << '\n';
}

} // namespace

std::string resolve_out_path(const std::string& path) {
    if (!path.empty() && path.front() == '/') return path;
    const char* root = std::getenv("FRACSUB_OUT_DIR");
    if (root == nullptr || *root == '\0') return path;
    return std::string(root) + "/" + path;
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        if (opt.config_path.empty() == opt.example.empty()) {
            throw ConfigError(
                "exactly one of --config and --example is required");
        }
        if (!opt.config_path.empty()) {
            solve_from_config(load_config(opt.config_path), opt, out);
        } else {
            solve_example(opt, out);
        }
    });
}

int cmd_table(const TableOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const ExampleId id = require_example(opt.example);
        std::vector<double> rows =
            opt.nu1_list.empty() ? default_rows(id) : opt.nu1_list;
        const auto grid = grid_for(id, opt.K, opt.J);
        const bool richardson = opt.richardson.value_or(true);
        const std::string out_path = resolve_out_path(
            opt.out.empty() ? opt.example + "_table.csv" : opt.out);

        Timer timer;
        std::ostringstream csv;
        if (id == ExampleId::ex1ext) {
            if (opt.nu2_rule == "third") {
                throw ConfigError(
                    "ex1ext is defined with the nu2 = nu1/2 rule only");
            }
            // four error columns: (rho2, T) in {0.5, 2.2} x {0.1, 0.7}
            const double rhos[] = {0.5, 0.5, 2.2, 2.2};
            const double tees[] = {0.1, 0.7, 0.1, 0.7};
            std::vector<std::array<ErrorReport, 4>> reports(rows.size());
            run_rows(rows.size() * 4, opt.jobs, [&](std::size_t i) {
                const std::size_t row = i / 4, col = i % 4;
                auto c = make_ext_case(rows[row], rhos[col], tees[col]);
                reports[row][col] =
                    run_case(c, grid.K, grid.J, richardson);
            });
            csv << "nu1,nu2,gimel_rho0.5_T0.1,gimel_rho0.5_T0.7,"
                   "gimel_rho2.2_T0.1,gimel_rho2.2_T0.7,K,J,richardson,"
                   "seconds\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                double secs = 0.0;
                csv << format_g17(rows[i]) << ','
                    << format_g17(rows[i] / 2.0);
                for (int col = 0; col < 4; ++col) {
                    csv << ',' << format_g17(reports[i][col].gimel);
                    secs += reports[i][col].seconds;
                }
                csv << ',' << grid.K << ',' << grid.J << ','
                    << (richardson ? "on" : "off") << ','
                    << format_g17(secs) << '\n';
            }
        } else {
            std::vector<ErrorReport> reports(rows.size());
            std::vector<double> nu2s(rows.size());
            run_rows(rows.size(), opt.jobs, [&](std::size_t i) {
                auto c = build_case(id, rows[i], opt.nu2_rule);
                nu2s[i] = c.nu2;
                reports[i] = run_case(c, grid.K, grid.J, richardson);
            });
            csv << "nu1,nu2,gimel,K,J,richardson,seconds\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                csv << format_g17(rows[i]) << ',' << format_g17(nu2s[i])
                    << ',' << format_g17(reports[i].gimel) << ',' << grid.K
                    << ',' << grid.J << ',' << (richardson ? "on" : "off")
                    << ',' << format_g17(reports[i].seconds) << '\n';
            }
        }
        {
            auto f = open_out(out_path);
            f << csv.str();
        }
        out << csv.str();

        json manifest;
        manifest["command"] = "table";
        manifest["example"] = opt.example;
        manifest["nu1_rows"] = rows;
        manifest["grid"] = {{"K", grid.K}, {"J", grid.J}};
        manifest["richardson"] = richardson;
        manifest["jobs"] = opt.jobs;
        manifest["outputs"] = {out_path};
        manifest["seconds"] = timer.seconds();
        manifest["config_hash"] = fnv1a(csv.str());
        write_manifest(out_path + ".manifest.json", manifest);
    });
}

int cmd_sweep(const TableOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.nu1_list.empty()) {
        err << "config error: sweep requires an explicit --nu1 list\n";
        return kExitConfig;
    }
    TableOptions named = opt;
    if (named.out.empty()) named.out = opt.example + "_sweep.csv";
    return cmd_table(named, out, err);
}

int cmd_convergence(const ConvergenceOptions& opt, std::ostream& out,
                    std::ostream& err) {
    return guarded(err, [&]() {
        const ExampleId id = require_example(opt.example);
        if (opt.levels < 2) {
            throw ConfigError("convergence needs --levels >= 2");
        }
        RefinementAxis axis;
        if (opt.axis == "time") {
            axis = RefinementAxis::time;
        } else if (opt.axis == "space") {
            axis = RefinementAxis::space;
        } else {
            throw ConfigError("--axis must be time or space");
        }
        auto c = build_case(id, opt.nu1, opt.nu2_rule);
        const bool richardson = opt.richardson.value_or(true);
        const std::size_t K =
            opt.K.value_or(axis == RefinementAxis::space ? 8 : 400);
        const std::size_t J =
            opt.J.value_or(axis == RefinementAxis::time ? 8 : 300);
        auto rows = convergence_study(c, K, J, opt.levels, axis, richardson);

        std::ostringstream csv;
        csv << "axis,K,J,gimel,order\n";
        for (const auto& r : rows) {
            csv << opt.axis << ',' << r.K << ',' << r.J << ','
                << format_g17(r.gimel) << ',' << format_g17(r.order) << '\n';
        }
        const std::string out_path = resolve_out_path(
            opt.out.empty() ? opt.example + "_convergence.csv" : opt.out);
        {
            auto f = open_out(out_path);
            f << csv.str();
        }
        out << csv.str();

        json manifest;
        manifest["command"] = "convergence";
        manifest["example"] = opt.example;
        manifest["nu1"] = opt.nu1;
        manifest["axis"] = opt.axis;
        manifest["levels"] = opt.levels;
        manifest["base_grid"] = {{"K", K}, {"J", J}};
        manifest["richardson"] = richardson;
        manifest["outputs"] = {out_path};
        manifest["config_hash"] = fnv1a(csv.str());
        write_manifest(out_path + ".manifest.json", manifest);
    });
}

int cmd_kernel_sign(const KernelSignOptions& opt, std::ostream& out,
                    std::ostream& err) {
    return guarded(err, [&]() {
        if (opt.samples < 2) {
            throw ConfigError("kernel-sign needs --samples >= 2");
        }
        KernelSpec spec{opt.rho1, opt.rho2, opt.nu1, opt.nu2};
        auto rows = kernel_profile(spec, opt.T, opt.samples);
        const std::string out_path = resolve_out_path(opt.out);
        {
            auto f = open_out(out_path);
            write_profile_csv(f, rows);
        }
        json manifest;
        manifest["command"] = "kernel-sign";
        manifest["spec"] = {{"rho1", opt.rho1},
                            {"rho2", opt.rho2},
                            {"nu1", opt.nu1},
                            {"nu2", opt.nu2},
                            {"T", opt.T},
                            {"samples", opt.samples}};
        manifest["outputs"] = {out_path};
        if (!derivative_term_is_local(spec)) {
            if (auto t_star = sign_change_time(spec)) {
                manifest["t_star"] = *t_star;
                if (*t_star <= opt.T) {
                    out << "sign change at t* = " << format_g17(*t_star)
                        << '\n';
                } else {
                    out << "t* = " << format_g17(*t_star)
                        << " beyond the profile window\n";
                }
            } else {
                out << "kernel does not change sign\n";
            }
        }
        manifest["config_hash"] =
            fnv1a(format_g17(opt.rho1) + "," + format_g17(opt.rho2) + "," +
                  format_g17(opt.nu1) + "," + format_g17(opt.nu2) + "," +
                  format_g17(opt.T) + "," + std::to_string(opt.samples));
        write_manifest(out_path + ".manifest.json", manifest);
        out << "wrote " << out_path << '\n';
    });
}

} // namespace fracsub
