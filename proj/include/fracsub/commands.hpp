#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fracsub {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct SolveOptions {
    std::string config_path;          // mutually exclusive with example
    std::string example;              // catalog name (ex1i, ..., ex4)
    double nu1 = 0.5;                 // example mode
    std::optional<double> ext_rho2;   // ex1ext
    std::optional<double> ext_T;      // ex1ext
    std::string nu2_rule;             // "", "half" or "third"
    std::optional<std::size_t> K;
    std::optional<std::size_t> Kx;
    std::optional<std::size_t> Ky;
    std::optional<std::size_t> J;
    std::optional<bool> richardson;
    std::string out = "solution";
    bool dry_run = false;
};

struct TableOptions {
    std::string example;
    std::vector<double> nu1_list;     // empty: the example's standard rows
    std::string nu2_rule;             // "", "half" or "third"
    std::optional<std::size_t> K;
    std::optional<std::size_t> J;
    std::optional<bool> richardson;
    std::size_t jobs = 1;
    std::string out;                  // default <example>_table.csv
};

struct ConvergenceOptions {
    std::string example;
    double nu1 = 0.5;
    std::string nu2_rule;             // "", "half" or "third"
    std::string axis = "time";        // time|space
    std::size_t levels = 3;
    std::optional<std::size_t> K;
    std::optional<std::size_t> J;
    std::optional<bool> richardson;
    std::string out;                  // default <example>_convergence.csv
};

struct KernelSignOptions {
    double rho1 = 1.0;
    double rho2 = 1.0;
    double nu1 = 0.9;
    double nu2 = 0.45;
    double T = 1.0;
    std::size_t samples = 200;
    std::string out = "kernel_profile.csv";
};

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_table(const TableOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const TableOptions& opt, std::ostream& out, std::ostream& err);
int cmd_convergence(const ConvergenceOptions& opt, std::ostream& out,
                    std::ostream& err);
int cmd_kernel_sign(const KernelSignOptions& opt, std::ostream& out,
                    std::ostream& err);

/// Output path resolution: relative paths land under $FRACSUB_OUT_DIR when
/// that is set, the working directory otherwise.
std::string resolve_out_path(const std::string& path);

} // namespace fracsub
