#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specgrad/error.hpp"
#include "specgrad/operator.hpp"
#include "specgrad/sample.hpp"

using namespace specgrad;

namespace {

constexpr double kPi = std::numbers::pi;

Grid wide512() { return Grid({512}, {32.0 / 512}, {-16.0}); }
Grid periodic(std::size_t n) { return Grid({n}, {2 * kPi / static_cast<double>(n)}, {0.0}); }
SymbolExpr sym(std::string_view t) { return parse(t, symbol_vars()); }

double max_diff(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Central 80% only: a non-decaying kernel wraps differently from the periodic multiplier near the ends.
double max_diff_central(const Field& a, const Field& b) {
    const std::size_t n = a.size(), skip = n / 10;
    double worst = 0.0;
    for (std::size_t i = skip; i < n - skip; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST(ExtractKernel, LayoutSpansOnePeriod) {
    const Grid g = wide512();
    const auto k = extract_kernel_1d(sym("1"), 1.0, g);
    ASSERT_EQ(k.offsets.size(), 512u);
    ASSERT_EQ(k.values.size(), 512u);
    EXPECT_DOUBLE_EQ(k.offsets.front(), -16.0);
    EXPECT_DOUBLE_EQ(k.offsets.back(), 16.0 - g.spacing(0));
    for (std::size_t j = 1; j < k.offsets.size(); ++j) {
        EXPECT_NEAR(k.offsets[j] - k.offsets[j - 1], g.spacing(0), 1e-12);
    }
    EXPECT_EQ(k.spacing, g.spacing(0));
}

TEST(ExtractKernel, IdentitySymbolIsDiscreteDelta) {
    const Grid g = wide512();
    const double h = g.spacing(0);
    const auto k = extract_kernel_1d(sym("1"), 1.0, g);
    for (std::size_t j = 0; j < k.values.size(); ++j) {
        if (k.offsets[j] == 0.0) {
            EXPECT_NEAR(std::abs(k.values[j] * h - 1.0), 0.0, 1e-3);
        } else {
            EXPECT_LE(std::abs(k.values[j]) * h, 1e-12) << "rho=" << k.offsets[j];
        }
    }
}

TEST(ExtractKernel, FresnelCosineClosedForm) {
    const Grid g = wide512();
    const double beta = 0.5;
    const auto k = extract_kernel_1d(sym("cos(z^2)"), beta, g);
    const double norm = 1.0 / (std::sqrt(4 * kPi) * beta);
    double worst = 0.0;
    for (std::size_t j = 0; j < k.values.size(); ++j) {
        const double rho = k.offsets[j];
        if (std::abs(rho) > 0.8 * 16.0) continue;
        const double expected = norm * std::cos(rho * rho / (4 * beta * beta) - kPi / 4);
        worst = std::max(worst, std::abs(k.values[j] - expected));
    }
    EXPECT_LE(worst, 1e-3);
}

TEST(ExtractKernel, ExponentialIsDeltaAtMinusBeta) {
    const Grid g = wide512();
    const double h = g.spacing(0);
    const double beta = 5 * h;
    const auto k = extract_kernel_1d(sym("exp(z)"), beta, g);
    for (std::size_t j = 0; j < k.values.size(); ++j) {
        const double expected = std::abs(k.offsets[j] + beta) < 0.5 * h ? 1.0 / h : 0.0;
        EXPECT_NEAR(std::abs(k.values[j] - expected) * h, 0.0, 1e-12) << "rho=" << k.offsets[j];
    }
    // Convolution reproduces the shift.
    const Field c = sample_field("exp(-x^2)*cos(3*x)", g);
    const complex b[] = {beta};
    EXPECT_LE(max_diff(convolve_kernel(k, c), shift_field(c, b)), 1e-12);
}

TEST(ExtractKernel, Errors) {
    EXPECT_THROW((void)extract_kernel_1d(sym("1/z"), 1.0, wide512()), DomainError);
    EXPECT_THROW((void)extract_kernel_1d(sym("1"), 1.0, Grid({4, 4, 4}, {1, 1, 1}, {0, 0, 0})), UsageError);
    EXPECT_THROW((void)extract_kernel_1d(sym("exp(-z^2)"), 1.0, wide512()), DomainError);
    KernelOptions bad;
    bad.oversample = 0;
    EXPECT_THROW((void)extract_kernel_1d(sym("1"), 1.0, wide512(), bad), UsageError);
}

TEST(ConvolveKernel, DeltaZeroAndMisaligned) {
    const Grid g = wide512();
    const Field c = sample_field("exp(-x^2)", g);
    EXPECT_LE(max_diff(convolve_kernel(extract_kernel_1d(sym("1"), 1.0, g), c), c), 1e-12);

    Kernel1D zero = extract_kernel_1d(sym("1"), 1.0, g);
    std::fill(zero.values.begin(), zero.values.end(), complex{});
    const Field zero_out = convolve_kernel(zero, c);
    for (const auto& v : zero_out.values()) EXPECT_EQ(v, complex{});

    const Kernel1D coarse = extract_kernel_1d(sym("1"), 1.0, Grid({512}, {0.1}, {0.0}));
    EXPECT_THROW((void)convolve_kernel(coarse, c), UsageError);
    const Kernel1D short_table = extract_kernel_1d(sym("1"), 1.0, Grid({256}, {g.spacing(0)}, {0.0}));
    EXPECT_THROW((void)convolve_kernel(short_table, c), UsageError);
}

TEST(ConvolveKernel, FresnelOnGaussianMatchesSpectralPath) {
    const Grid g = wide512();
    const Field c = sample_field("exp(-x^2)", g);
    const Field via_kernel = convolve_kernel(extract_kernel_1d(sym("cos(z^2)"), 0.5, g), c);
    const Field via_multiplier = apply_operator(make_operator("cos(z^2)", {0.5}), c);
    EXPECT_LE(max_diff_central(via_kernel, via_multiplier), 1e-3);
}

TEST(ConvolveKernel, FresnelOnSineWithGridLatticeKernel) {
    // Without oversampling the table is the grid's own periodic kernel, so a periodic
    // input is handled exactly.
    const Grid g = periodic(64);
    KernelOptions opts;
    opts.oversample = 1;
    const Field out = convolve_kernel(extract_kernel_1d(sym("cos(z^2)"), 0.5, g, opts), sample_field("sin(x)", g));
    EXPECT_LE(max_diff(out, sample_field("cos(0.25)*sin(x)", g)), 1e-3);
    EXPECT_LE(max_diff(out, sample_field("cos(0.25)*sin(x)", g)), 1e-12);
}

TEST(ConvolveKernel, PathEquivalenceForBoundedSymbols) {
    const Grid g = wide512();
    const Field c = sample_field("exp(-x^2)*(1 + 0.5*i*x)", g);
    for (const char* s : {"exp(z)", "cos(z^2)", "1/(1 - z^2)", "exp(z^2)", "1/(2 - z)"}) {
        const Field a = convolve_kernel(extract_kernel_1d(sym(s), 0.5, g), c);
        const Field b = apply_operator(make_operator(s, {0.5}), c);
        EXPECT_LE(max_diff_central(a, b), 1e-3) << s;
    }
}
