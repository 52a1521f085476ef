#include "fracsub/expr.hpp"

#include "fracsub/numfmt.hpp"
#include "fracsub/special_functions.hpp"

#include <cctype>
#include <cmath>
#include <map>

namespace fracsub::expr {

namespace {

struct FuncInfo {
    Func fn;
    std::size_t arity;
};

const std::map<std::string, FuncInfo, std::less<>>& function_table() {
    static const std::map<std::string, FuncInfo, std::less<>> table = {
        {"sin", {Func::sin, 1}},   {"cos", {Func::cos, 1}},
        {"exp", {Func::exp, 1}},   {"ln", {Func::ln, 1}},
        {"abs", {Func::abs, 1}},   {"sqrt", {Func::sqrt, 1}},
        {"gamma", {Func::gamma, 1}}, {"omega", {Func::omega, 2}},
        {"ml1", {Func::ml1, 2}},   {"ml2", {Func::ml2, 3}},
    };
    return table;
}

std::optional<VarId> variable_id(const std::string& name) {
    if (name == "x") return VarId::x;
    if (name == "y") return VarId::y;
    if (name == "t") return VarId::t;
    if (name == "nu1") return VarId::nu1;
    if (name == "nu2") return VarId::nu2;
    return std::nullopt;
}

const char* variable_name(VarId v) {
    switch (v) {
    case VarId::x: return "x";
    case VarId::y: return "y";
    case VarId::t: return "t";
    case VarId::nu1: return "nu1";
    case VarId::nu2: return "nu2";
    }
    return "?";
}

const char* function_name(Func f) {
    switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::abs: return "abs";
    case Func::sqrt: return "sqrt";
    case Func::gamma: return "gamma";
    case Func::omega: return "omega";
    case Func::ml1: return "ml1";
    case Func::ml2: return "ml2";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    Node run() {
        Node root = expression();
        skip_space();
        if (pos_ != src_.size()) {
            throw ParseError(pos_, "unexpected trailing input; expected an "
                                   "operator or end of expression");
        }
        return root;
    }

private:
    void skip_space() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    char peek() {
        skip_space();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node expression() {
        Node lhs = term();
        while (true) {
            const char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            Node node;
            node.kind = Node::Kind::binary;
            node.op = c == '+' ? BinOp::add : BinOp::sub;
            node.children.push_back(std::move(lhs));
            node.children.push_back(term());
            lhs = std::move(node);
        }
    }

    Node term() {
        Node lhs = unary();
        while (true) {
            const char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            Node node;
            node.kind = Node::Kind::binary;
            node.op = c == '*' ? BinOp::mul : BinOp::div;
            node.children.push_back(std::move(lhs));
            node.children.push_back(unary());
            lhs = std::move(node);
        }
    }

    Node unary() {
        if (consume('-')) {
            Node node;
            node.kind = Node::Kind::negate;
            node.children.push_back(unary());
            return node;
        }
        return power();
    }

    Node power() {
        Node base = primary();
        if (consume('^')) {
            Node node;
            node.kind = Node::Kind::binary;
            node.op = BinOp::pow;
            node.children.push_back(std::move(base));
            node.children.push_back(unary()); // right-assoc, allows 2^-3
            return node;
        }
        return base;
    }

    Node primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Node inner = expression();
            if (!consume(')')) {
                throw ParseError(pos_, "expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        throw ParseError(pos_, "expected a number, identifier, '-' or '('");
    }

    Node number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                ++pos_;
            } else if ((c == 'e' || c == 'E') && pos_ + 1 < src_.size() &&
                       (std::isdigit(static_cast<unsigned char>(
                            src_[pos_ + 1])) ||
                        ((src_[pos_ + 1] == '+' || src_[pos_ + 1] == '-') &&
                         pos_ + 2 < src_.size() &&
                         std::isdigit(static_cast<unsigned char>(
                             src_[pos_ + 2]))))) {
                pos_ += 2; // exponent marker and sign or first digit
            } else {
                break;
            }
        }
        Node node;
        node.kind = Node::Kind::number;
        if (!parse_double(src_.substr(start, pos_ - start), node.number)) {
            throw ParseError(start, "malformed number literal");
        }
        return node;
    }

    Node identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "pi") {
            Node node;
            node.kind = Node::Kind::number;
            node.number = M_PI;
            return node;
        }
        if (peek() == '(') {
            auto it = function_table().find(name);
            if (it == function_table().end()) {
                throw ParseError(start, "unknown function '" + name + "'");
            }
            ++pos_; // '('
            Node node;
            node.kind = Node::Kind::call;
            node.fn = it->second.fn;
            if (peek() != ')') {
                node.children.push_back(expression());
                while (consume(',')) {
                    node.children.push_back(expression());
                }
            }
            if (!consume(')')) {
                throw ParseError(pos_, "expected ')' closing the call");
            }
            if (node.children.size() != it->second.arity) {
                throw ParseError(
                    start, "'" + name + "' expects " +
                               std::to_string(it->second.arity) +
                               " argument(s), got " +
                               std::to_string(node.children.size()));
            }
            return node;
        }
        if (auto v = variable_id(name)) {
            Node node;
            node.kind = Node::Kind::variable;
            node.var = *v;
            return node;
        }
        throw ParseError(start, "unknown identifier '" + name + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

double apply_call(Func fn, const std::vector<double>& a) {
    switch (fn) {
    case Func::sin: return std::sin(a[0]);
    case Func::cos: return std::cos(a[0]);
    case Func::exp: return std::exp(a[0]);
    case Func::ln:
        if (!(a[0] > 0.0)) {
            throw EvalError("ln: argument must be positive");
        }
        return std::log(a[0]);
    case Func::abs: return std::abs(a[0]);
    case Func::sqrt:
        if (a[0] < 0.0) {
            throw EvalError("sqrt: argument must be nonnegative");
        }
        return std::sqrt(a[0]);
    case Func::gamma: return Gamma(a[0]);
    case Func::omega: return omega(a[0], a[1]);
    case Func::ml1: return mittag_leffler(a[0], a[1]);
    case Func::ml2: return mittag_leffler(MLParams{a[0], a[1]}, a[2]);
    }
    throw EvalError("unknown function");
}

} // namespace

Node parse(const std::string& src) {
    return Parser(src).run();
}

double eval(const Node& ast, const Bindings& b) {
    switch (ast.kind) {
    case Node::Kind::number:
        return ast.number;
    case Node::Kind::variable: {
        const std::optional<double>* slot = nullptr;
        switch (ast.var) {
        case VarId::x: slot = &b.x; break;
        case VarId::y: slot = &b.y; break;
        case VarId::t: slot = &b.t; break;
        case VarId::nu1: slot = &b.nu1; break;
        case VarId::nu2: slot = &b.nu2; break;
        }
        if (!slot->has_value()) {
            throw EvalError(std::string("unbound variable '") +
                            variable_name(ast.var) + "'");
        }
        return **slot;
    }
    case Node::Kind::negate:
        return -eval(ast.children[0], b);
    case Node::Kind::binary: {
        const double lhs = eval(ast.children[0], b);
        const double rhs = eval(ast.children[1], b);
        switch (ast.op) {
        case BinOp::add: return lhs + rhs;
        case BinOp::sub: return lhs - rhs;
        case BinOp::mul: return lhs * rhs;
        case BinOp::div: return lhs / rhs;
        case BinOp::pow: return std::pow(lhs, rhs);
        }
        throw EvalError("unknown operator");
    }
    case Node::Kind::call: {
        std::vector<double> args;
        args.reserve(ast.children.size());
        for (const auto& child : ast.children) {
            args.push_back(eval(child, b));
        }
        return apply_call(ast.fn, args);
    }
    }
    throw EvalError("malformed expression tree");
}

std::string print(const Node& ast) {
    switch (ast.kind) {
    case Node::Kind::number:
        return format_g17(ast.number);
    case Node::Kind::variable:
        return variable_name(ast.var);
    case Node::Kind::negate:
        return "(-" + print(ast.children[0]) + ")";
    case Node::Kind::binary: {
        const char* op = ast.op == BinOp::add   ? "+"
                         : ast.op == BinOp::sub ? "-"
                         : ast.op == BinOp::mul ? "*"
                         : ast.op == BinOp::div ? "/"
                                                : "^";
        return "(" + print(ast.children[0]) + op + print(ast.children[1]) +
               ")";
    }
    case Node::Kind::call: {
        std::string out = function_name(ast.fn);
        out += '(';
        for (std::size_t i = 0; i < ast.children.size(); ++i) {
            if (i) out += ',';
            out += print(ast.children[i]);
        }
        out += ')';
        return out;
    }
    }
    return "?";
}

Node fold_constants(const Node& ast) {
    Node out = ast;
    for (auto& child : out.children) {
        child = fold_constants(child);
    }
    if (out.kind == Node::Kind::number || out.kind == Node::Kind::variable) {
        return out;
    }
    for (const auto& child : out.children) {
        if (child.kind != Node::Kind::number) return out;
    }
    try {
        const double value = eval(out, Bindings{});
        if (!std::isfinite(value)) return out;
        Node folded;
        folded.kind = Node::Kind::number;
        folded.number = value;
        return folded;
    } catch (const std::exception&) {
        return out; // leave domain errors for eval to report in context
    }
}

bool references(const Node& ast, VarId v) {
    if (ast.kind == Node::Kind::variable) return ast.var == v;
    for (const auto& child : ast.children) {
        if (references(child, v)) return true;
    }
    return false;
}

} // namespace fracsub::expr
