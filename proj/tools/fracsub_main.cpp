#include "fracsub/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

// CLI11 reports parse problems with its own exit codes; remap onto the
// stable contract (2 = usage/config error).
int run(int argc, char** argv) {
    CLI::App app{"Finite-difference solver for multi-term time-fractional "
                 "subdiffusion equations with memory terms"};
    app.require_subcommand(1);

    fracsub::SolveOptions solve_opt;
    std::string richardson_flag;
    auto add_richardson = [&](CLI::App* cmd) {
        cmd->add_option("--richardson", richardson_flag,
                        "extrapolation: on|off (default on)")
            ->check(CLI::IsMember({"on", "off"}));
    };
    auto richardson_value = [&]() -> std::optional<bool> {
        if (richardson_flag.empty()) return std::nullopt;
        return richardson_flag == "on";
    };

    auto* solve = app.add_subcommand(
        "solve", "Solve one problem from a config file or the catalog");
    solve->add_option("--config", solve_opt.config_path,
                      "problem config file");
    solve->add_option("--example", solve_opt.example,
                      "catalog case: ex1i|ex1ii|ex1ext|ex2|ex3|ex4");
    solve->add_option("--nu1", solve_opt.nu1, "fractional order nu1");
    solve->add_option("--nu2-rule", solve_opt.nu2_rule,
                      "half|third (default: the case's own rule)")
        ->check(CLI::IsMember({"half", "third"}));
    double ext_rho2 = 0.0, ext_T = 0.0;
    auto* rho2_opt = solve->add_option("--rho2", ext_rho2,
                                       "constant rho2 (ex1ext)");
    auto* t_opt = solve->add_option("--T", ext_T, "final time (ex1ext)");
    std::size_t k_val = 0, kx_val = 0, ky_val = 0, j_val = 0;
    auto* k_opt = solve->add_option("--K", k_val, "spatial intervals");
    auto* kx_opt = solve->add_option("--Kx", kx_val, "x intervals (2D)");
    auto* ky_opt = solve->add_option("--Ky", ky_val, "y intervals (2D)");
    auto* j_opt = solve->add_option("--J", j_val, "time levels");
    add_richardson(solve);
    solve->add_option("--out", solve_opt.out, "output name (default "
                      "'solution')");
    solve->add_flag("--dry-run", solve_opt.dry_run,
                    "validate and print parameters without solving");

    fracsub::TableOptions table_opt;
    std::vector<double> nu1_list;
    auto* table = app.add_subcommand(
        "table", "Reproduce an example's error table");
    table->add_option("example", table_opt.example, "catalog case")
        ->required();
    table->add_option("--nu1", nu1_list, "nu1 rows (default: printed rows)");
    table->add_option("--nu2-rule", table_opt.nu2_rule,
                      "half|third (default: the case's own rule)")
        ->check(CLI::IsMember({"half", "third"}));
    std::size_t tk = 0, tj = 0;
    auto* tk_opt = table->add_option("--K", tk, "spatial intervals");
    auto* tj_opt = table->add_option("--J", tj, "time levels");
    add_richardson(table);
    table->add_option("--jobs", table_opt.jobs, "parallel solves");
    table->add_option("--out", table_opt.out, "output CSV path");

    fracsub::TableOptions sweep_opt;
    std::vector<double> sweep_nu1;
    auto* sweep = app.add_subcommand(
        "sweep", "Run solves for an explicit nu1 list");
    sweep->add_option("example", sweep_opt.example, "catalog case")
        ->required();
    sweep->add_option("--nu1", sweep_nu1, "nu1 values")->required();
    sweep->add_option("--nu2-rule", sweep_opt.nu2_rule,
                      "half|third (default: the case's own rule)")
        ->check(CLI::IsMember({"half", "third"}));
    std::size_t sk = 0, sj = 0;
    auto* sk_opt = sweep->add_option("--K", sk, "spatial intervals");
    auto* sj_opt = sweep->add_option("--J", sj, "time levels");
    add_richardson(sweep);
    sweep->add_option("--jobs", sweep_opt.jobs, "parallel solves");
    sweep->add_option("--out", sweep_opt.out, "output CSV path");

    fracsub::ConvergenceOptions conv_opt;
    auto* conv = app.add_subcommand(
        "convergence", "Grid refinement study for one example");
    conv->add_option("example", conv_opt.example, "catalog case")->required();
    conv->add_option("--nu1", conv_opt.nu1, "fractional order nu1");
    conv->add_option("--nu2-rule", conv_opt.nu2_rule,
                      "half|third (default: the case's own rule)")
        ->check(CLI::IsMember({"half", "third"}));
    conv->add_option("--axis", conv_opt.axis, "time|space")
        ->check(CLI::IsMember({"time", "space"}));
    conv->add_option("--levels", conv_opt.levels, "number of grids (>= 2)");
    std::size_t ck = 0, cj = 0;
    auto* ck_opt = conv->add_option("--K", ck, "base spatial intervals");
    auto* cj_opt = conv->add_option("--J", cj, "base time levels");
    add_richardson(conv);
    conv->add_option("--out", conv_opt.out, "output CSV path");

    fracsub::KernelSignOptions kern_opt;
    auto* kern = app.add_subcommand(
        "kernel-sign", "Profile the aggregated kernel and report its zero");
    kern->add_option("--rho1", kern_opt.rho1, "weight of the nu1 term");
    kern->add_option("--rho2", kern_opt.rho2, "weight of the nu2 term");
    kern->add_option("--nu1", kern_opt.nu1, "order nu1");
    kern->add_option("--nu2", kern_opt.nu2, "order nu2");
    kern->add_option("--T", kern_opt.T, "profile window");
    kern->add_option("--samples", kern_opt.samples, "sample count (>= 2)");
    kern->add_option("--out", kern_opt.out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        app.exit(e);
        return fracsub::kExitConfig;
    }

    if (solve->parsed()) {
        if (*rho2_opt) solve_opt.ext_rho2 = ext_rho2;
        if (*t_opt) solve_opt.ext_T = ext_T;
        if (*k_opt) solve_opt.K = k_val;
        if (*kx_opt) solve_opt.Kx = kx_val;
        if (*ky_opt) solve_opt.Ky = ky_val;
        if (*j_opt) solve_opt.J = j_val;
        solve_opt.richardson = richardson_value();
        return fracsub::cmd_solve(solve_opt, std::cout, std::cerr);
    }
    if (table->parsed()) {
        table_opt.nu1_list = nu1_list;
        if (*tk_opt) table_opt.K = tk;
        if (*tj_opt) table_opt.J = tj;
        table_opt.richardson = richardson_value();
        return fracsub::cmd_table(table_opt, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
        sweep_opt.nu1_list = sweep_nu1;
        if (*sk_opt) sweep_opt.K = sk;
        if (*sj_opt) sweep_opt.J = sj;
        sweep_opt.richardson = richardson_value();
        return fracsub::cmd_sweep(sweep_opt, std::cout, std::cerr);
    }
    if (conv->parsed()) {
        if (*ck_opt) conv_opt.K = ck;
        if (*cj_opt) conv_opt.J = cj;
        conv_opt.richardson = richardson_value();
        return fracsub::cmd_convergence(conv_opt, std::cout, std::cerr);
    }
    if (kern->parsed()) {
        return fracsub::cmd_kernel_sign(kern_opt, std::cout, std::cerr);
    }
    return fracsub::kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    return run(argc, argv);
}
