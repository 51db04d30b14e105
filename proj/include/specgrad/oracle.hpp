#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specgrad/grid.hpp"
#include "specgrad/operator.hpp"
#include "specgrad/symbol.hpp"

namespace specgrad {

/// Direct O(N^2) discretization of the 1D kernel representation: no FFT involved.
///
///     out(x_j) = sum_j' c(x_j') (h / L) sum_m exp(i k_m (x_j - x_j')) f(i k_m beta)
///
/// The Nyquist term follows the same sign-averaging rule as build_multiplier.
Field brute_force_apply(const SymbolExpr& symbol, complex beta, const Field& field);

/// Largest grid accepted by brute_force_apply.
inline constexpr std::size_t kBruteForceLimit = 512;

/// The operation a case exercises, with its parameters.
struct OracleOperation {
    std::string name;  ///< key into the implementation table
    std::string symbol;
    std::vector<complex> beta;
    OperatorKind kind = OperatorKind::DotGradient;
    double alpha = 0.0;
};

/// One ground-truth comparison.
struct OracleCase {
    std::string name;
    Grid grid;
    std::string field_expr;                           ///< input field over x, y, z
    std::function<Field(const Grid&)> field_source;   ///< overrides field_expr when set
    OracleOperation operation;
    std::string expected_expr;                        ///< closed form over x, y, z
    std::function<Field(const Field& input)> reference;  ///< overrides expected_expr when set
    double tolerance = 0.0;
    std::string derivation;
    /// Compare after subtracting each field's mean (constant-offset conventions).
    bool align_mean = false;
    /// Fraction of each axis, centered, over which errors count. Tabulated kernels that do
    /// not decay wrap differently from the periodic multiplier near the domain ends.
    double interior = 1.0;
};

using Implementation = std::function<Field(const OracleOperation&, const Field&)>;
using ImplementationTable = std::map<std::string, Implementation>;

/// Fast-path implementations keyed by OracleOperation::name:
/// apply, kernel-convolve, heat-realspace, shift, inverse-derivative, sgn-kernel,
/// shifted-derivative, fresnel-quadrature, brute-force.
ImplementationTable default_implementations();

/// Shipped closed-form cases.
std::vector<OracleCase> closed_form_catalog();

/// Randomized comparisons of brute_force_apply against the FFT path.
std::vector<OracleCase> brute_force_cases(unsigned seed, int trials);

struct OracleResult {
    std::string name;
    bool pass = false;
    double max_error = 0.0;
    double seconds = 0.0;
    std::string message;  ///< error text when the implementation threw
};

struct OracleReport {
    std::vector<OracleResult> results;
    [[nodiscard]] bool all_passed() const;
};

/// Runs each case; exceptions and tolerance violations are recorded as failures.
OracleReport run_oracles(const std::vector<OracleCase>& cases, const ImplementationTable& implementations);

nlohmann::json report_to_json(const OracleReport& report);
std::string report_table(const OracleReport& report);

/// Max absolute difference; optionally after removing each field's mean, and restricted
/// to the centered `interior` fraction of every axis.
double max_abs_difference(const Field& a, const Field& b, bool align_mean = false, double interior = 1.0);

}  // namespace specgrad
