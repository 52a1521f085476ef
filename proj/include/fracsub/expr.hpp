#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsub::expr {

/// Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t at, const std::string& message)
        : std::runtime_error(message + " (at offset " + std::to_string(at) +
                             ")"),
          offset(at) {}

    std::size_t offset;
};

/// Evaluation failure (unbound variable; domain errors propagate from the
/// special functions themselves).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VarId { x, y, t, nu1, nu2 };
enum class BinOp { add, sub, mul, div, pow };
enum class Func { sin, cos, exp, ln, abs, sqrt, gamma, omega, ml1, ml2 };

struct Node {
    enum class Kind { number, variable, negate, binary, call } kind;
    double number = 0.0;
    VarId var = VarId::x;
    BinOp op = BinOp::add;
    Func fn = Func::sin;
    std::vector<Node> children;
};

/// Variable bindings for evaluation; unset variables are eval errors.
struct Bindings {
    std::optional<double> x;
    std::optional<double> y;
    std::optional<double> t;
    std::optional<double> nu1;
    std::optional<double> nu2;
};

/// Recursive-descent parse with precedence ^ (right-assoc) > unary minus
/// > * / > + -. Implicit multiplication is a syntax error: write
/// "(t+1)*(x+0.01)".
Node parse(const std::string& src);

double eval(const Node& ast, const Bindings& b);

/// Fully parenthesized rendering; parse(print(n)) evaluates identically.
std::string print(const Node& ast);

/// Collapse every variable-free subtree whose value is finite and
/// domain-valid; other subtrees are left for eval to report.
Node fold_constants(const Node& ast);

/// True if the expression references the given variable.
bool references(const Node& ast, VarId v);

} // namespace fracsub::expr
