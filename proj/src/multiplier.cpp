#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specgrad/error.hpp"
#include "specgrad/operator.hpp"

namespace specgrad {

namespace {

std::string format_k(const std::vector<double>& k) {
    std::ostringstream out;
    out.precision(6);
    out << '[';
    for (std::size_t d = 0; d < k.size(); ++d) out << (d ? ", " : "") << k[d];
    out << ']';
    return out.str();
}

struct WavenumberTable {
    std::vector<std::vector<double>> k;  // per axis, DFT order
    std::vector<std::size_t> nyquist;    // per axis; n when absent

    explicit WavenumberTable(const Grid& grid) {
        for (int d = 0; d < grid.dims(); ++d) {
            k.push_back(wavenumbers(grid, d));
            nyquist.push_back(nyquist_index(grid, d));
        }
    }

    [[nodiscard]] std::vector<double> at(const std::vector<std::size_t>& idx) const {
        std::vector<double> out(idx.size());
        for (std::size_t d = 0; d < idx.size(); ++d) out[d] = k[d][idx[d]];
        return out;
    }
};

complex eval_symbol_at(const SymbolExpr& symbol, complex z, const std::vector<double>& k) {
    try {
        return eval(symbol, "z", z);
    } catch (const OverflowError& e) {
        throw OverflowError(std::string("symbol overflows at k=") + format_k(k) + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(std::string("symbol undefined at k=") + format_k(k) + ": " + e.what());
    }
}

void check_beta(const OperatorSpec& spec, const Grid& grid) {
    if (spec.kind == OperatorKind::DotGradient && spec.beta.size() != static_cast<std::size_t>(grid.dims())) {
        throw UsageError("beta has " + std::to_string(spec.beta.size()) + " components, grid has " +
                         std::to_string(grid.dims()) + " axes");
    }
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
    return kind == OperatorKind::Laplacian ? "laplacian" : "dot-gradient";
}

OperatorKind operator_kind_from_string(std::string_view text) {
    if (text == "dot-gradient") return OperatorKind::DotGradient;
    if (text == "laplacian") return OperatorKind::Laplacian;
    throw UsageError("unknown operator kind '" + std::string(text) + "' (expected dot-gradient or laplacian)");
}

OperatorSpec make_operator(std::string_view symbol_text, std::vector<complex> beta, OperatorKind kind) {
    return {parse(symbol_text, symbol_vars()), std::move(beta), kind};
}

SpectralMultiplier::SpectralMultiplier(Grid grid, std::vector<complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw UsageError("multiplier has " + std::to_string(values_.size()) + " entries, grid expects " +
                         std::to_string(grid_.size()));
    }
    for (std::size_t m = 0; m < values_.size(); ++m) {
        const double mag = std::abs(values_[m]);
        if (mag > stability_) {
            stability_ = mag;
            argmax_ = m;
        }
    }
}

namespace {

// Multiplier entry at multi-index `idx`, with the Nyquist sign-averaging rule.
complex multiplier_entry(const OperatorSpec& spec, const WavenumberTable& table, const std::vector<std::size_t>& idx) {
    const auto k = table.at(idx);
    if (spec.kind == OperatorKind::Laplacian) {
        double k2 = 0.0;
        for (double kd : k) k2 += kd * kd;
        return eval_symbol_at(spec.symbol, {-k2, 0.0}, k);
    }
    std::vector<std::size_t> nyq_axes;
    for (std::size_t d = 0; d < idx.size(); ++d) {
        if (idx[d] == table.nyquist[d]) nyq_axes.push_back(d);
    }
    const std::size_t combos = std::size_t{1} << nyq_axes.size();
    complex sum{};
    for (std::size_t mask = 0; mask < combos; ++mask) {
        auto ks = k;
        for (std::size_t b = 0; b < nyq_axes.size(); ++b) {
            if (mask & (std::size_t{1} << b)) ks[nyq_axes[b]] = -ks[nyq_axes[b]];
        }
        complex dot{};
        for (std::size_t d = 0; d < ks.size(); ++d) dot += ks[d] * spec.beta[d];
        sum += eval_symbol_at(spec.symbol, complex{0.0, 1.0} * dot, ks);
    }
    return sum / static_cast<double>(combos);
}

double norm2(const std::vector<double>& k) {
    double s = 0.0;
    for (double v : k) s += v * v;
    return s;
}

}  // namespace

SpectralMultiplier build_multiplier(const OperatorSpec& spec, const Grid& grid, GuardPolicy policy) {
    check_beta(spec, grid);
    const WavenumberTable table(grid);
    std::vector<complex> values(grid.size());
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        const auto idx = grid.unflatten(flat);
        try {
            values[flat] = multiplier_entry(spec, table, idx);
        } catch (const OverflowError& e) {
            // Unrepresentable magnitude: the guard verdict regardless of policy.
            throw AmplificationError(std::string(e.what()) + "; exceeds the amplification limit 1e12",
                                     std::numeric_limits<double>::infinity(), table.at(idx));
        }
    }

    SpectralMultiplier mult(grid, std::move(values));
    if (policy == GuardPolicy::Throw && mult.stability() > kAmplificationLimit) {
        const auto report = stability_report(mult);
        std::ostringstream msg;
        msg << "multiplier magnitude " << report.max_magnitude << " at k=" << format_k(report.argmax_k)
            << " exceeds the amplification limit 1e12; the symbol is ill-posed on this grid";
        throw AmplificationError(msg.str(), report.max_magnitude, report.argmax_k);
    }
    return mult;
}

StabilityReport stability_report(const OperatorSpec& spec, const Grid& grid) {
    check_beta(spec, grid);
    const WavenumberTable table(grid);
    StabilityReport report;
    report.argmax_k.assign(static_cast<std::size_t>(grid.dims()), 0.0);
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        const auto idx = grid.unflatten(flat);
        double mag = 0.0;
        try {
            mag = std::abs(multiplier_entry(spec, table, idx));
        } catch (const OverflowError&) {
            mag = std::numeric_limits<double>::infinity();
        }
        const auto k = table.at(idx);
        const bool tie_with_larger_k = mag == report.max_magnitude && norm2(k) > norm2(report.argmax_k);
        if (mag > report.max_magnitude || tie_with_larger_k) {
            report.max_magnitude = mag;
            report.argmax_k = k;
        }
    }
    report.flagged = report.max_magnitude > kAmplificationLimit;
    return report;
}

Field apply_multiplier(const SpectralMultiplier& mult, const Field& field) {
    require_same_grid(mult.grid(), field.grid(), "apply_multiplier");
    const auto spec = dft_forward(field);
    std::vector<complex> coeffs(spec.coeffs().begin(), spec.coeffs().end());
    const auto m = mult.values();
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= m[i];
    return dft_inverse(SpectralField(field.grid(), std::move(coeffs)));
}

Field apply_operator(const OperatorSpec& spec, const Field& field) {
    return apply_multiplier(build_multiplier(spec, field.grid()), field);
}

StabilityReport stability_report(const SpectralMultiplier& mult) {
    StabilityReport report;
    report.max_magnitude = mult.stability();
    const auto idx = mult.grid().unflatten(mult.argmax());
    for (int d = 0; d < mult.grid().dims(); ++d) {
        report.argmax_k.push_back(wavenumbers(mult.grid(), d)[idx[static_cast<std::size_t>(d)]]);
    }
    report.flagged = report.max_magnitude > kAmplificationLimit;
    return report;
}

Field shift_field(const Field& field, std::span<const complex> beta) {
    OperatorSpec spec{parse("exp(z)", symbol_vars()), {beta.begin(), beta.end()}, OperatorKind::DotGradient};
    return apply_operator(spec, field);
}

Field inverse_derivative(const Field& field, complex beta) {
    const Grid& grid = field.grid();
    if (grid.dims() != 1) throw UsageError("inverse_derivative requires a 1D grid");
    if (beta == complex{}) throw UsageError("inverse_derivative: beta must be nonzero");
    const auto k = wavenumbers(grid, 0);
    const std::size_t nyq = nyquist_index(grid, 0);
    std::vector<complex> values(k.size());
    for (std::size_t m = 0; m < k.size(); ++m) {
        // Zero mode dropped; Nyquist averages 1/(ik beta) and 1/(-ik beta), which cancel.
        if (m == 0 || m == nyq) continue;
        values[m] = 1.0 / (complex{0.0, k[m]} * beta);
    }
    return apply_multiplier(SpectralMultiplier(grid, std::move(values)), field);
}

Field shifted_derivative_apply(const Field& field, double beta) {
    const Grid& grid = field.grid();
    if (grid.dims() != 1) throw UsageError("shifted_derivative_apply requires a 1D grid");
    const auto k = wavenumbers(grid, 0);
    const std::size_t nyq = nyquist_index(grid, 0);
    std::vector<complex> deriv(k.size());
    for (std::size_t m = 0; m < k.size(); ++m) {
        if (m != nyq) deriv[m] = complex{0.0, k[m] * beta};
    }
    const Field derivative = apply_multiplier(SpectralMultiplier(grid, std::move(deriv)), field);
    const complex shift[] = {complex{beta, 0.0}};
    return shift_field(derivative, shift);
}

}  // namespace specgrad
