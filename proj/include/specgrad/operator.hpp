#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specgrad/grid.hpp"
#include "specgrad/symbol.hpp"

namespace specgrad {

/// Which differential operator replaces the symbol's argument.
enum class OperatorKind {
    DotGradient,  ///< z -> beta . grad, multiplier argument i k . beta
    Laplacian,    ///< z -> laplacian,   multiplier argument -|k|^2
};

std::string_view to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(std::string_view text);

/// A scalar function of a constant-coefficient operator: f(beta . grad) or f(laplacian).
struct OperatorSpec {
    SymbolExpr symbol;
    std::vector<complex> beta;  ///< one entry per axis; ignored for Laplacian kind
    OperatorKind kind = OperatorKind::DotGradient;
};

/// Parses `symbol_text` over the variable z.
OperatorSpec make_operator(std::string_view symbol_text, std::vector<complex> beta,
                           OperatorKind kind = OperatorKind::DotGradient);

/// Multipliers whose magnitude exceeds this are rejected as ill-posed on the grid.
inline constexpr double kAmplificationLimit = 1e12;

struct StabilityReport {
    double max_magnitude = 0.0;
    std::vector<double> argmax_k;
    bool flagged = false;
};

/// Per-coefficient factor f(i k . beta) or f(-|k|^2), stored in DFT index order.
class SpectralMultiplier {
public:
    SpectralMultiplier(Grid grid, std::vector<complex> values);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const complex> values() const noexcept { return values_; }
    /// Largest entry magnitude.
    [[nodiscard]] double stability() const noexcept { return stability_; }
    [[nodiscard]] std::size_t argmax() const noexcept { return argmax_; }

private:
    Grid grid_;
    std::vector<complex> values_;
    double stability_ = 0.0;
    std::size_t argmax_ = 0;
};

enum class GuardPolicy {
    Throw,   ///< raise AmplificationError when stability exceeds kAmplificationLimit
    Report,  ///< return the multiplier anyway; inspect it with stability_report
};

/// Evaluates the symbol at every DFT wavenumber.
///
/// On even-sized axes the Nyquist entry of a dot-gradient multiplier is the mean of the
/// symbol at +k_N and -k_N (all sign combinations when several axes sit at Nyquist),
/// so conjugate-symmetric symbols keep real fields real. An entry that overflows is
/// reported as AmplificationError with infinite magnitude under either policy.
SpectralMultiplier build_multiplier(const OperatorSpec& spec, const Grid& grid,
                                    GuardPolicy policy = GuardPolicy::Throw);

/// inverse_dft(multiplier * dft(field)).
Field apply_multiplier(const SpectralMultiplier& mult, const Field& field);

Field apply_operator(const OperatorSpec& spec, const Field& field);

StabilityReport stability_report(const SpectralMultiplier& mult);

/// Same verdict without building the multiplier. Entries that overflow double precision
/// count as infinite magnitude instead of raising; poles still raise DomainError.
StabilityReport stability_report(const OperatorSpec& spec, const Grid& grid);

/// Band-limited translation: result(r) = field(r + beta). Exact for whole-step shifts.
Field shift_field(const Field& field, std::span<const complex> beta);

/// Non-fatal findings from quadrature routines (truncation, resolution, periodization).
struct Diagnostics {
    std::vector<std::string> warnings;
};

/// Convolution with the periodized heat kernel (4 pi alpha)^(-d/2) exp(-|r|^2 / (4 alpha)).
///
/// Applied axis by axis. The sampled kernel is normalized to unit discrete mass, which
/// reduces to trapezoidal weights when the kernel is resolved and to the identity as
/// alpha -> 0. Warns when more than 1e-6 of the kernel mass lies beyond half a period.
Field heat_smooth_realspace(const Field& field, double alpha, Diagnostics* diag = nullptr);

/// Tabulated real-space kernel K(rho) of a 1D operator symbol.
struct Kernel1D {
    std::vector<double> offsets;  ///< uniformly spaced, strictly increasing
    std::vector<complex> values;
    complex beta;
    double spacing = 0.0;
};

struct KernelOptions {
    /// k-space refinement relative to the grid's own wavenumber lattice.
    int oversample = 8;
    /// Half-width of the raised-cosine taper around Nyquist, as a fraction of k_N.
    double taper_fraction = 0.1;
};

/// K(rho) = (1/2pi) * integral dk exp(i k rho) f(i k beta), sampled at offsets
/// -floor(n/2)*h .. (n - 1 - floor(n/2))*h.
///
/// The symbol is sampled on a k lattice `oversample` times finer than the grid's and
/// tapered by a raised cosine running from 1 at (1 - taper)k_N to 0 at (1 + taper)k_N.
/// The taper is a partition of unity under aliasing by 2 pi / h, so f = 1 yields an
/// exact discrete delta. Symbols with a pole at k = 0 are rejected.
Kernel1D extract_kernel_1d(const SymbolExpr& symbol, complex beta, const Grid& grid,
                           const KernelOptions& options = {});

/// Periodic discrete convolution sum_j' K(x - x') c(x') h, with x - x' wrapped into the table.
Field convolve_kernel(const Kernel1D& kernel, const Field& field);

/// Spectral inverse of beta d/dx with the zero mode set to zero: the mean-zero
/// antiderivative of (field - mean(field)), divided by beta. 1D only.
Field inverse_derivative(const Field& field, complex beta);

/// (1/2beta) [ integral_{-inf}^{x} c - integral_{x}^{inf} c ] by cumulative quadrature
/// over the finite domain. Warns if the field has not decayed at the domain ends.
Field sgn_kernel_apply(const Field& field, complex beta, Diagnostics* diag = nullptr);

/// [beta c'](x + beta): spectral derivative followed by a band-limited shift.
Field shifted_derivative_apply(const Field& field, double beta);

/// cos((beta d/dx)^2) c by direct quadrature of
/// (1/(sqrt(4 pi) beta)) integral dx' c(x') cos((x - x')^2 / (4 beta^2) - pi/4).
Field fresnel_cos_apply(const Field& field, double beta, Diagnostics* diag = nullptr);

/// Relative boundary magnitude below which a field counts as decayed.
inline constexpr double kDecayTolerance = 1e-8;

}  // namespace specgrad
