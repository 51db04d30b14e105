#include "specgrad/symbol.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <type_traits>

#include "specgrad/error.hpp"

namespace specgrad {

using expr::BinaryOp;
using expr::complex;
using expr::Node;
using expr::NodePtr;

namespace {

using Fn = complex (*)(complex);

// The only place new functions need to be added.
const std::map<std::string, Fn, std::less<>>& function_registry() {
    static const std::map<std::string, Fn, std::less<>> registry{
        {"exp", [](complex z) { return std::exp(z); }},
        {"cos", [](complex z) { return std::cos(z); }},
        {"sin", [](complex z) { return std::sin(z); }},
        {"tan", [](complex z) { return std::tan(z); }},
        {"sqrt", [](complex z) { return std::sqrt(z); }},
        {"log",
         [](complex z) {
             if (z == complex{}) throw DomainError("log of zero");
             return std::log(z);
         }},
        {"abs", [](complex z) { return complex{std::abs(z), 0.0}; }},
    };
    return registry;
}

const std::map<std::string, complex, std::less<>>& constants() {
    static const std::map<std::string, complex, std::less<>> table{
        {"pi", {std::numbers::pi, 0.0}},
        {"e", {std::numbers::e, 0.0}},
        {"i", {0.0, 1.0}},
    };
    return table;
}

NodePtr make(auto&& payload) { return std::make_shared<const Node>(Node{std::forward<decltype(payload)>(payload)}); }

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>& allowed) : text_(text), allowed_(allowed) {}

    NodePtr parse_all() {
        skip_space();
        if (pos_ >= text_.size()) fail("empty expression", "expression");
        auto root = parse_expr();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'", "operator or end of input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::string expected) const {
        throw ParseError(what, pos_, std::move(expected));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make(expr::Binary{BinaryOp::Add, lhs, parse_term()});
            } else if (accept('-')) {
                lhs = make(expr::Binary{BinaryOp::Sub, lhs, parse_term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(expr::Binary{BinaryOp::Mul, lhs, parse_unary()});
            } else if (accept('/')) {
                lhs = make(expr::Binary{BinaryOp::Div, lhs, parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make(expr::Negate{parse_unary()});
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_exponent() {
        if (accept('-')) return make(expr::Negate{parse_exponent()});
        if (accept('+')) return parse_exponent();
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        if (accept('^')) return make(expr::Binary{BinaryOp::Pow, base, parse_exponent()});
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input", "number, name or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_expr();
            if (!accept(')')) fail("unbalanced parenthesis", "')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        fail("unexpected '" + std::string(1, c) + "'", "number, name or '('");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
        if (ec == std::errc::result_out_of_range) fail("numeric literal out of range", "finite number");
        if (ec != std::errc{}) fail("malformed number", "digits");
        pos_ = start + static_cast<std::size_t>(ptr - first);
        return make(expr::Literal{{value, 0.0}});
    }

    NodePtr parse_name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(text_.substr(start, pos_ - start));
        const auto& fns = function_registry();
        if (fns.contains(name)) {
            if (!accept('(')) fail("function '" + name + "' requires parentheses", "'('");
            auto arg = parse_expr();
            if (!accept(')')) fail("unbalanced parenthesis in call to '" + name + "'", "')'");
            return make(expr::Call{name, arg});
        }
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            pos_ = start;
            fail("unknown function '" + name + "'", "one of exp, cos, sin, tan, sqrt, log, abs");
        }
        if (allowed_.contains(name)) return make(expr::Variable{name});
        if (constants().contains(name)) return make(expr::Constant{name});
        pos_ = start;
        std::string hint;
        for (const auto& v : allowed_) hint += (hint.empty() ? "" : ", ") + v;
        fail("unknown variable '" + name + "'", hint.empty() ? "a constant (pi, e, i)" : "one of " + hint);
    }

    std::string_view text_;
    const std::set<std::string>& allowed_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation

complex checked(complex v) {
    if (std::isnan(v.real()) || std::isnan(v.imag())) throw DomainError("evaluation produced NaN");
    if (std::isinf(v.real()) || std::isinf(v.imag()) || std::abs(v) > kOverflowCutoff) {
        throw OverflowError("magnitude exceeds overflow cutoff 1e300");
    }
    return v;
}

complex integer_power(complex base, long long n) {
    if (n == 0) return {1.0, 0.0};
    if (n < 0) {
        if (base == complex{}) throw DomainError("zero raised to a negative power");
        return checked(complex{1.0, 0.0} / integer_power(base, -n));
    }
    complex result{1.0, 0.0};
    complex factor = base;
    for (;;) {
        if (n & 1) result = checked(result * factor);
        n >>= 1;
        if (n == 0) break;
        factor = checked(factor * factor);
    }
    return result;
}

complex power(complex base, complex exponent) {
    if (exponent.imag() == 0.0 && std::abs(exponent.real()) <= 4096.0 &&
        std::trunc(exponent.real()) == exponent.real()) {
        return integer_power(base, static_cast<long long>(exponent.real()));
    }
    if (base == complex{}) {
        if (exponent.real() > 0.0) return {};
        throw DomainError("zero raised to a non-positive power");
    }
    return checked(std::pow(base, exponent));
}

template <typename Lookup>
complex evaluate(const Node& node, const Lookup& lookup) {
    return std::visit(
        [&](const auto& n) -> complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Literal>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, expr::Constant>) {
                return constants().find(n.name)->second;
            } else if constexpr (std::is_same_v<T, expr::Variable>) {
                return checked(lookup(n.name));
            } else if constexpr (std::is_same_v<T, expr::Negate>) {
                return -evaluate(*n.operand, lookup);
            } else if constexpr (std::is_same_v<T, expr::Binary>) {
                const complex a = evaluate(*n.lhs, lookup);
                const complex b = evaluate(*n.rhs, lookup);
                switch (n.op) {
                    case BinaryOp::Add: return checked(a + b);
                    case BinaryOp::Sub: return checked(a - b);
                    case BinaryOp::Mul: return checked(a * b);
                    case BinaryOp::Div:
                        if (b == complex{}) throw DomainError("division by zero");
                        return checked(a / b);
                    case BinaryOp::Pow: return power(a, b);
                }
                throw DomainError("unknown operator");
            } else {
                const auto& fns = function_registry();
                return checked(fns.find(n.function)->second(evaluate(*n.argument, lookup)));
            }
        },
        node.data);
}

// ---------------------------------------------------------------------------
// Unparsing

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, ptr};
}

char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
        case BinaryOp::Pow: return '^';
    }
    return '?';
}

void unparse_into(const Node& node, std::string& out, bool top) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Literal>) {
                const bool plain = n.value.imag() == 0.0 && !std::signbit(n.value.real());
                if (plain) {
                    out += format_real(n.value.real());
                } else {
                    out += "(" + format_real(n.value.real()) + "+" + format_real(n.value.imag()) + "*i)";
                }
            } else if constexpr (std::is_same_v<T, expr::Constant> || std::is_same_v<T, expr::Variable>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, expr::Negate>) {
                if (!top) out += '(';
                out += '-';
                unparse_into(*n.operand, out, false);
                if (!top) out += ')';
            } else if constexpr (std::is_same_v<T, expr::Binary>) {
                if (!top) out += '(';
                unparse_into(*n.lhs, out, false);
                out += ' ';
                out += op_char(n.op);
                out += ' ';
                unparse_into(*n.rhs, out, false);
                if (!top) out += ')';
            } else {
                out += n.function;
                out += '(';
                unparse_into(*n.argument, out, true);
                out += ')';
            }
        },
        node.data);
}

void collect_vars(const Node& node, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Variable>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, expr::Negate>) {
                collect_vars(*n.operand, out);
            } else if constexpr (std::is_same_v<T, expr::Binary>) {
                collect_vars(*n.lhs, out);
                collect_vars(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, expr::Call>) {
                collect_vars(*n.argument, out);
            }
        },
        node.data);
}

}  // namespace

bool expr::structurally_equal(const Node& a, const Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.data);
            if constexpr (std::is_same_v<T, Literal>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, Constant> || std::is_same_v<T, Variable>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return structurally_equal(*x.operand, *y.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
            } else {
                return x.function == y.function && structurally_equal(*x.argument, *y.argument);
            }
        },
        a.data);
}

SymbolExpr::SymbolExpr(expr::NodePtr root, std::set<std::string> allowed_vars)
    : root_(std::move(root)), allowed_(std::move(allowed_vars)) {
    if (!root_) throw UsageError("empty expression tree");
}

std::set<std::string> SymbolExpr::variables() const {
    std::set<std::string> out;
    collect_vars(*root_, out);
    return out;
}

std::set<std::string> coordinate_vars(int dims) {
    static const char* names[] = {"x", "y", "z"};
    std::set<std::string> out;
    for (int d = 0; d < dims && d < 3; ++d) out.insert(names[d]);
    return out;
}

SymbolExpr parse(std::string_view text, const std::set<std::string>& allowed_vars) {
    for (const auto& v : allowed_vars) {
        if (constants().contains(v) || function_registry().contains(v)) {
            throw UsageError("variable name '" + v + "' collides with a constant or function");
        }
    }
    Parser parser(text, allowed_vars);
    return SymbolExpr(parser.parse_all(), allowed_vars);
}

std::string unparse(const SymbolExpr& e) {
    std::string out;
    unparse_into(e.root(), out, true);
    return out;
}

std::complex<double> eval(const SymbolExpr& e, const Bindings& bindings) {
    return evaluate(e.root(), [&](const std::string& name) -> complex {
        auto it = bindings.find(name);
        if (it == bindings.end()) throw UsageError("no binding for variable '" + name + "'");
        return it->second;
    });
}

std::complex<double> eval(const SymbolExpr& e, std::string_view var, std::complex<double> value) {
    return evaluate(e.root(), [&](const std::string& name) -> complex {
        if (name != var) throw UsageError("no binding for variable '" + name + "'");
        return value;
    });
}

double eval_real_constant(std::string_view text) {
    const auto e = parse(text, {});
    const complex v = eval(e, Bindings{});
    if (v.imag() != 0.0) throw UsageError("expected a real value, got complex '" + std::string(text) + "'");
    return v.real();
}

SingularityReport probe_singularities(const SymbolExpr& e, std::span<const std::complex<double>> args) {
    if (args.empty()) throw UsageError("probe_singularities needs at least one sample argument");
    SingularityReport report;
    for (const auto& z : args) {
        ProbePoint point{z, ProbeOutcome::Finite, {}};
        try {
            point.value = eval(e, "z", z);
            report.max_finite_magnitude = std::max(report.max_finite_magnitude, std::abs(point.value));
        } catch (const OverflowError&) {
            point.outcome = ProbeOutcome::Overflow;
        } catch (const DomainError&) {
            point.outcome = ProbeOutcome::DomainError;
        }
        report.points.push_back(point);
    }
    return report;
}

std::vector<std::string> function_names() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : function_registry()) out.push_back(name);
    return out;
}

}  // namespace specgrad
