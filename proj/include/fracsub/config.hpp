#pragma once

#include "fracsub/problem.hpp"
#include "fracsub/problem2d.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fracsub {

/// Configuration failure; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parsed and validated run configuration. Coefficient closures evaluate
/// the config's expression strings with x/y/t bound per call and nu1/nu2
/// bound from the problem section.
struct RunConfig {
    int dimension = 1;
    double nu1 = 0.5;
    double nu2 = 0.25;
    std::size_t K = 1000;
    std::size_t Kx = 100;
    std::size_t Ky = 100;
    std::size_t J = 100;
    bool richardson = true;
    std::string name = "run";
    Problem1D problem1d;
    Problem2D problem2d;
    std::uint64_t config_hash = 0;
    std::string summary; // human-readable assembled parameter listing
};

/// Parse a config from text (section [problem]/[grid]/[solver], key = value
/// lines, '#' comments, expression values in double quotes).
RunConfig parse_config_text(const std::string& text);

RunConfig load_config(const std::string& path);

/// FNV-1a hash used for run manifests.
std::uint64_t fnv1a(const std::string& data);

} // namespace fracsub
