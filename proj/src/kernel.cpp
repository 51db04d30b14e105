#include <cmath>
#include <numbers>
#include <sstream>

#include "specgrad/error.hpp"
#include "specgrad/operator.hpp"

namespace specgrad {

namespace {

double raised_cosine_taper(double k, double lo, double hi) {
    const double a = std::abs(k);
    if (a <= lo) return 1.0;
    if (a >= hi) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (a - lo) / (hi - lo)));
}

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Kernel1D extract_kernel_1d(const SymbolExpr& symbol, complex beta, const Grid& grid, const KernelOptions& options) {
    if (grid.dims() != 1) throw UsageError("kernel extraction is 1D-only; got a " + std::to_string(grid.dims()) + "D grid");
    if (options.oversample < 1) throw UsageError("kernel oversampling factor must be at least 1");
    if (!(options.taper_fraction > 0.0 && options.taper_fraction < 1.0)) {
        throw UsageError("kernel taper fraction must lie in (0, 1)");
    }

    try {
        (void)eval(symbol, "z", complex{});
    } catch (const DomainError& e) {
        throw DomainError(std::string("symbol has a pole at k=0 (") + e.what() +
                          "); use inverse_derivative or sgn_kernel_apply for this operator");
    }

    const auto n = static_cast<long long>(grid.n(0));
    const double h = grid.spacing(0);
    const long long bins = n * options.oversample;
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(bins) * h);
    const double k_nyq = std::numbers::pi / h;
    const double lo = (1.0 - options.taper_fraction) * k_nyq;
    const double hi = (1.0 + options.taper_fraction) * k_nyq;
    const auto m_max = static_cast<long long>(std::ceil(hi / dk));

    // Fold the tapered symbol onto the aliasing classes of the sample spacing h.
    std::vector<complex> folded(static_cast<std::size_t>(bins));
    double peak = 0.0;
    double peak_k = 0.0;
    for (long long m = -m_max; m <= m_max; ++m) {
        const double k = static_cast<double>(m) * dk;
        const double w = raised_cosine_taper(k, lo, hi);
        if (w == 0.0) continue;
        complex f;
        try {
            f = eval(symbol, "z", complex{0.0, k} * beta);
        } catch (const OverflowError& e) {
            throw OverflowError("kernel symbol overflows at k=" + std::to_string(k) + ": " + e.what());
        } catch (const DomainError& e) {
            throw DomainError("kernel symbol undefined at k=" + std::to_string(k) + ": " + e.what());
        }
        const double mag = std::abs(f) * w;
        if (mag > peak) {
            peak = mag;
            peak_k = k;
        }
        const auto bin = static_cast<std::size_t>(m - floor_div(m, bins) * bins);
        folded[bin] += w * f;
    }
    if (peak > kAmplificationLimit) {
        std::ostringstream msg;
        msg << "kernel symbol magnitude " << peak << " at k=" << peak_k << " exceeds the amplification limit 1e12";
        throw AmplificationError(msg.str(), peak, {peak_k});
    }

    // K(j h) = (dk / 2pi) sum_b folded[b] exp(2 pi i b j / bins): an unnormalized inverse DFT.
    const Grid fine({static_cast<std::size_t>(bins)}, {h}, {0.0});
    const Field table = dft_inverse(SpectralField(fine, std::move(folded)));
    const double scale = static_cast<double>(bins) * dk / (2.0 * std::numbers::pi);

    Kernel1D kernel;
    kernel.beta = beta;
    kernel.spacing = h;
    const long long first = -(n / 2);
    for (long long j = first; j < first + n; ++j) {
        const auto bin = static_cast<std::size_t>(j - floor_div(j, bins) * bins);
        kernel.offsets.push_back(static_cast<double>(j) * h);
        kernel.values.push_back(scale * table[bin]);
    }
    return kernel;
}

Field convolve_kernel(const Kernel1D& kernel, const Field& field) {
    const Grid& grid = field.grid();
    if (grid.dims() != 1) throw UsageError("convolve_kernel requires a 1D field");
    const double h = grid.spacing(0);
    if (std::abs(kernel.spacing - h) > 1e-12 * h) {
        throw UsageError("convolve_kernel: kernel spacing " + std::to_string(kernel.spacing) +
                         " is not aligned with grid spacing " + std::to_string(h));
    }
    const std::size_t n = grid.n(0);
    if (kernel.values.size() != n || kernel.offsets.size() != n) {
        throw UsageError("convolve_kernel: kernel table has " + std::to_string(kernel.values.size()) +
                         " entries, grid has " + std::to_string(n));
    }
    const auto first = static_cast<long long>(std::llround(kernel.offsets.front() / h));
    const auto nn = static_cast<long long>(n);
    const auto c = field.values();

    std::vector<complex> out(n);
    for (long long j = 0; j < nn; ++j) {
        complex acc{};
        for (long long jp = 0; jp < nn; ++jp) {
            // Wrap the index difference into [first, first + n).
            const long long d = j - jp;
            const long long wrapped = d - floor_div(d - first, nn) * nn;
            acc += kernel.values[static_cast<std::size_t>(wrapped - first)] * c[static_cast<std::size_t>(jp)];
        }
        out[static_cast<std::size_t>(j)] = acc * h;
    }
    return {grid, std::move(out)};
}

}  // namespace specgrad
