#include "fracsub/config.hpp"

#include "fracsub/expr.hpp"
#include "fracsub/numfmt.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fracsub {

namespace {

struct RawConfig {
    std::map<std::string, std::string> values; // "section.key" -> value
    std::set<std::string> consumed;
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty() || section.empty()) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": key outside a [section] or empty key");
        }
        const std::string path = section + "." + key;
        if (!raw.values.emplace(path, value).second) {
            throw ConfigError("duplicate key '" + path + "'");
        }
    }
    return raw;
}

class ConfigReader {
public:
    explicit ConfigReader(RawConfig raw) : raw_(std::move(raw)) {}

    bool has(const std::string& key) const {
        return raw_.values.count(key) != 0;
    }

    std::string text(const std::string& key) {
        auto it = raw_.values.find(key);
        if (it == raw_.values.end()) {
            throw ConfigError("missing required key '" + key + "'");
        }
        raw_.consumed.insert(key);
        return it->second;
    }

    std::string text_or(const std::string& key, const std::string& fallback) {
        return has(key) ? text(key) : fallback;
    }

    // Numbers may be constant expressions (e.g. "1/3", "nu1/2").
    double number(const std::string& key, const expr::Bindings& b) {
        const std::string raw = text(key);
        try {
            return expr::eval(expr::parse(raw), b);
        } catch (const std::exception& e) {
            throw ConfigError("key '" + key + "': " + e.what());
        }
    }

    double number_or(const std::string& key, const expr::Bindings& b,
                     double fallback) {
        return has(key) ? number(key, b) : fallback;
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const std::string raw = text(key);
        std::size_t v = 0;
        for (char c : raw) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw ConfigError("key '" + key +
                                  "': expected a nonnegative integer");
            }
            v = v * 10 + static_cast<std::size_t>(c - '0');
        }
        if (raw.empty()) {
            throw ConfigError("key '" + key + "': empty integer");
        }
        return v;
    }

    bool flag_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = text(key);
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        throw ConfigError("key '" + key + "': expected on|off");
    }

    expr::Node expression(const std::string& key, bool allow_y) {
        const std::string raw = text(key);
        expr::Node ast;
        try {
            ast = expr::parse(raw);
        } catch (const expr::ParseError& e) {
            throw ConfigError("key '" + key + "': " + e.what());
        }
        if (!allow_y && expr::references(ast, expr::VarId::y)) {
            throw ConfigError("key '" + key +
                              "': variable y is not available in a "
                              "1-dimensional problem");
        }
        return expr::fold_constants(ast);
    }

    void reject_unknown() const {
        for (const auto& [key, value] : raw_.values) {
            if (!raw_.consumed.count(key)) {
                throw ConfigError("unknown key '" + key + "'");
            }
        }
    }

private:
    RawConfig raw_;
};

SpaceTimeFn closure_xt(const expr::Node& ast, double nu1, double nu2) {
    return [ast, nu1, nu2](double x, double t) {
        expr::Bindings b;
        b.x = x;
        b.t = t;
        b.nu1 = nu1;
        b.nu2 = nu2;
        return expr::eval(ast, b);
    };
}

SpaceFn closure_x(const expr::Node& ast, double nu1, double nu2) {
    return [ast, nu1, nu2](double x) {
        expr::Bindings b;
        b.x = x;
        b.nu1 = nu1;
        b.nu2 = nu2;
        return expr::eval(ast, b);
    };
}

TimeFn closure_t(const expr::Node& ast, double nu1, double nu2) {
    return [ast, nu1, nu2](double t) {
        expr::Bindings b;
        b.t = t;
        b.nu1 = nu1;
        b.nu2 = nu2;
        return expr::eval(ast, b);
    };
}

SpaceTimeFn2 closure_xyt(const expr::Node& ast, double nu1, double nu2) {
    return [ast, nu1, nu2](double x, double y, double t) {
        expr::Bindings b;
        b.x = x;
        b.y = y;
        b.t = t;
        b.nu1 = nu1;
        b.nu2 = nu2;
        return expr::eval(ast, b);
    };
}

SpaceFn2 closure_xy(const expr::Node& ast, double nu1, double nu2) {
    return [ast, nu1, nu2](double x, double y) {
        expr::Bindings b;
        b.x = x;
        b.y = y;
        b.nu1 = nu1;
        b.nu2 = nu2;
        return expr::eval(ast, b);
    };
}

KernelDescriptor read_kernel(ConfigReader& r, const expr::Bindings& nub) {
    const std::string type = r.text_or("problem.kernel_type", "zero");
    if (type == "zero") return KernelDescriptor::zero();
    if (type == "power") {
        const double c = r.number_or("problem.kernel_c", nub, 1.0);
        const double p = r.number("problem.kernel_p", nub);
        try {
            return KernelDescriptor::power_law(c, p);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("key 'problem.kernel_p': ") +
                              e.what());
        }
    }
    if (type == "omega") {
        const double theta = r.number("problem.kernel_theta", nub);
        try {
            return KernelDescriptor::omega(theta);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("key 'problem.kernel_theta': ") +
                              e.what());
        }
    }
    throw ConfigError("key 'problem.kernel_type': expected zero|power|omega");
}

RobinBC read_bc(ConfigReader& r, const std::string& side,
                const expr::Bindings& nub, double nu1, double nu2) {
    RobinBC bc;
    bc.c_deriv = r.number_or("problem." + side + "_c1", nub, 0.0);
    bc.c_value = r.number_or("problem." + side + "_c2", nub,
                             bc.c_deriv == 0.0 ? 1.0 : 0.0);
    if (bc.c_deriv == 0.0 && bc.c_value == 0.0) {
        throw ConfigError("key 'problem." + side +
                          "_c2': boundary coefficients must not both vanish");
    }
    auto ast = r.has("problem." + side + "_phi")
                   ? r.expression("problem." + side + "_phi", false)
                   : expr::parse("0");
    if (expr::references(ast, expr::VarId::x)) {
        throw ConfigError("key 'problem." + side +
                          "_phi': boundary data may depend on t only");
    }
    bc.data = closure_t(ast, nu1, nu2);
    return bc;
}

} // namespace

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig parse_config_text(const std::string& text) {
    ConfigReader r(tokenize(text));
    RunConfig cfg;
    cfg.config_hash = fnv1a(text);

    cfg.dimension = static_cast<int>(r.count("problem.dimension", 1));
    if (cfg.dimension != 1 && cfg.dimension != 2) {
        throw ConfigError("key 'problem.dimension': must be 1 or 2");
    }
    cfg.nu1 = r.number("problem.nu1", {});
    {
        expr::Bindings b;
        b.nu1 = cfg.nu1;
        cfg.nu2 = r.number_or("problem.nu2", b, cfg.nu1 / 2.0);
    }
    if (!(cfg.nu2 > 0.0) || !(cfg.nu2 < cfg.nu1) || cfg.nu1 > 1.0) {
        throw ConfigError("keys 'problem.nu1'/'problem.nu2': need "
                          "0 < nu2 < nu1 <= 1");
    }
    expr::Bindings nub;
    nub.nu1 = cfg.nu1;
    nub.nu2 = cfg.nu2;

    const double T = r.number_or("problem.T", nub, 1.0);
    std::ostringstream summary;
    summary << "dimension=" << cfg.dimension << " nu1=" << format_g17(cfg.nu1)
            << " nu2=" << format_g17(cfg.nu2) << " T=" << format_g17(T);

    if (cfg.dimension == 1) {
        Problem1D& p = cfg.problem1d;
        p.nu1 = cfg.nu1;
        p.nu2 = cfg.nu2;
        p.final_time = T;
        p.length = r.number_or("problem.length", nub, 1.0);
        p.rho1 = closure_x(r.expression("problem.rho1", false), cfg.nu1,
                           cfg.nu2);
        auto zero = expr::parse("0");
        p.rho2 = closure_xt(r.has("problem.rho2")
                                ? r.expression("problem.rho2", false)
                                : zero,
                            cfg.nu1, cfg.nu2);
        p.a = closure_xt(r.expression("problem.a", false), cfg.nu1, cfg.nu2);
        p.d = closure_xt(r.has("problem.d") ? r.expression("problem.d", false)
                                            : zero,
                         cfg.nu1, cfg.nu2);
        p.b = closure_xt(r.has("problem.b") ? r.expression("problem.b", false)
                                            : zero,
                         cfg.nu1, cfg.nu2);
        p.f = closure_xt(r.has("problem.f") ? r.expression("problem.f", false)
                                            : zero,
                         cfg.nu1, cfg.nu2);
        p.u0 = closure_x(r.expression("problem.u0", false), cfg.nu1, cfg.nu2);
        p.kernel = read_kernel(r, nub);
        p.left = read_bc(r, "left", nub, cfg.nu1, cfg.nu2);
        p.right = read_bc(r, "right", nub, cfg.nu1, cfg.nu2);
        cfg.K = r.count("grid.K", 1000);
        cfg.J = r.count("grid.J", 100);
        summary << " length=" << format_g17(p.length) << " K=" << cfg.K
                << " J=" << cfg.J;
    } else {
        Problem2D& p = cfg.problem2d;
        p.nu1 = cfg.nu1;
        p.nu2 = cfg.nu2;
        p.final_time = T;
        p.Lx = r.number_or("problem.Lx", nub, 1.0);
        p.Ly = r.number_or("problem.Ly", nub, 1.0);
        auto zero = expr::parse("0");
        auto xyt = [&](const std::string& key) {
            return closure_xyt(r.has(key) ? r.expression(key, true) : zero,
                               cfg.nu1, cfg.nu2);
        };
        p.rho1 = closure_xy(r.expression("problem.rho1", true), cfg.nu1,
                            cfg.nu2);
        p.rho2 = xyt("problem.rho2");
        p.a1 = closure_xyt(r.expression("problem.a1", true), cfg.nu1,
                           cfg.nu2);
        p.a2 = closure_xyt(r.expression("problem.a2", true), cfg.nu1,
                           cfg.nu2);
        p.d1 = xyt("problem.d1");
        p.d2 = xyt("problem.d2");
        p.b1 = xyt("problem.b1");
        p.b2 = xyt("problem.b2");
        p.f = xyt("problem.f");
        p.u0 = closure_xy(r.expression("problem.u0", true), cfg.nu1, cfg.nu2);
        p.kernel = read_kernel(r, nub);
        const std::string mode = r.text_or("problem.bc_mode", "dxny");
        if (mode == "dxny") {
            p.bc = BoundaryMode2D::dirichlet_x_neumann_y;
        } else if (mode == "dirichlet") {
            p.bc = BoundaryMode2D::all_dirichlet;
        } else {
            throw ConfigError(
                "key 'problem.bc_mode': expected dxny|dirichlet");
        }
        cfg.Kx = r.count("grid.Kx", 100);
        cfg.Ky = r.count("grid.Ky", 100);
        cfg.J = r.count("grid.J", 100);
        summary << " Lx=" << format_g17(p.Lx) << " Ly=" << format_g17(p.Ly)
                << " Kx=" << cfg.Kx << " Ky=" << cfg.Ky << " J=" << cfg.J;
    }
    cfg.richardson = r.flag_or("solver.richardson", true);
    cfg.name = r.text_or("solver.name", "run");
    summary << " richardson=" << (cfg.richardson ? "on" : "off");
    cfg.summary = summary.str();
    r.reject_unknown();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

} // namespace fracsub
