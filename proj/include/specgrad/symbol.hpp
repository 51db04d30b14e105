#pragma once

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace specgrad {

/// Expressions of operator symbols f(z) and of coordinate fields c(x, y, z).
///
/// Grammar, lowest to highest precedence:
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | '+' unary | power
///     power   := primary ('^' exponent)?          right associative
///     exponent:= '-' exponent | '+' exponent | power
///     primary := number | constant | variable | function '(' expr ')' | '(' expr ')'
///
/// Constants are `pi`, `e` and `i`. Functions come from a fixed registry
/// (exp, cos, sin, tan, sqrt, log, abs); sqrt and log use principal branches.
namespace expr {

using complex = std::complex<double>;

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
    complex value;
};
struct Constant {
    std::string name;
};
struct Variable {
    std::string name;
};
struct Negate {
    NodePtr operand;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Call {
    std::string function;
    NodePtr argument;
};

struct Node {
    std::variant<Literal, Constant, Variable, Negate, Binary, Call> data;
};

bool structurally_equal(const Node& a, const Node& b);

}  // namespace expr

/// Immutable parsed expression. Copies share the tree.
class SymbolExpr {
public:
    explicit SymbolExpr(expr::NodePtr root, std::set<std::string> allowed_vars = {});

    [[nodiscard]] const expr::Node& root() const noexcept { return *root_; }
    [[nodiscard]] const expr::NodePtr& root_ptr() const noexcept { return root_; }
    [[nodiscard]] const std::set<std::string>& allowed_vars() const noexcept { return allowed_; }

    /// Variables actually referenced by the expression.
    [[nodiscard]] std::set<std::string> variables() const;

    friend bool operator==(const SymbolExpr& a, const SymbolExpr& b) {
        return expr::structurally_equal(*a.root_, *b.root_);
    }

private:
    expr::NodePtr root_;
    std::set<std::string> allowed_;
};

/// Variable set for operator symbols.
inline const std::set<std::string>& symbol_vars() {
    static const std::set<std::string> vars{"z"};
    return vars;
}

/// Coordinate variables valid on a grid of the given dimension.
std::set<std::string> coordinate_vars(int dims);

SymbolExpr parse(std::string_view text, const std::set<std::string>& allowed_vars);

/// Canonical text form. parse(unparse(e)) is structurally equal to e.
std::string unparse(const SymbolExpr& e);

using Bindings = std::map<std::string, std::complex<double>, std::less<>>;

/// Magnitude above which any intermediate value is treated as overflow.
inline constexpr double kOverflowCutoff = 1e300;

/// Evaluates with standard complex arithmetic.
/// Throws DomainError on poles or invalid arguments, OverflowError past kOverflowCutoff.
std::complex<double> eval(const SymbolExpr& e, const Bindings& bindings);

/// Fast path for single-variable expressions.
std::complex<double> eval(const SymbolExpr& e, std::string_view var, std::complex<double> value);

/// Evaluates a closed expression (no variables) that must be real, e.g. "2*pi/64".
double eval_real_constant(std::string_view text);

enum class ProbeOutcome { Finite, Overflow, DomainError };

struct ProbePoint {
    std::complex<double> argument;
    ProbeOutcome outcome;
    std::complex<double> value;  // meaningful only for Finite
};

struct SingularityReport {
    std::vector<ProbePoint> points;
    double max_finite_magnitude = 0.0;
};

/// Evaluates `e` at each argument for its single variable `z`, recording failures.
SingularityReport probe_singularities(const SymbolExpr& e, std::span<const std::complex<double>> args);

/// Names accepted as function calls.
std::vector<std::string> function_names();

}  // namespace specgrad
