#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specgrad/error.hpp"
#include "specgrad/operator.hpp"

namespace specgrad {

namespace {

void warn(Diagnostics* diag, std::string message) {
    if (diag != nullptr) diag->warnings.push_back(std::move(message));
}

double max_abs(std::span<const complex> v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

void check_decay(const Field& field, const char* op, Diagnostics* diag) {
    const auto v = field.values();
    const double peak = max_abs(v);
    if (peak == 0.0) return;
    const double edge = std::max(std::abs(v.front()), std::abs(v.back()));
    if (edge > kDecayTolerance * peak) {
        std::ostringstream msg;
        msg << op << ": field has not decayed at the domain ends (|c| = " << edge << ", " << edge / peak
            << " of peak); truncating the infinite-line integral is not justified";
        warn(diag, msg.str());
    }
}

// Weights for integral_{x_j}^{x_{j+1}} c dx / h from the degree-7 interpolant through
// x_{j-3} .. x_{j+4}.
constexpr std::array<double, 8> kIntervalWeights = {
    -191.0 / 120960.0, 1879.0 / 120960.0, -9531.0 / 120960.0, 68323.0 / 120960.0,
    68323.0 / 120960.0, -9531.0 / 120960.0, 1879.0 / 120960.0, -191.0 / 120960.0,
};

}  // namespace

Field heat_smooth_realspace(const Field& field, double alpha, Diagnostics* diag) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("heat_smooth_realspace: alpha must be positive");
    const Grid& grid = field.grid();
    const double width = std::sqrt(4.0 * alpha);
    std::vector<complex> current(field.values().begin(), field.values().end());

    for (int axis = 0; axis < grid.dims(); ++axis) {
        const std::size_t n = grid.n(axis);
        const double h = grid.spacing(axis);
        const double period = grid.period(axis);

        const double spill = std::erfc(0.5 * period / width);
        if (spill > 1e-6) {
            std::ostringstream msg;
            msg << "heat_smooth_realspace: axis " << axis << " loses " << spill
                << " of the kernel mass to periodization (limit 1e-6)";
            warn(diag, msg.str());
        }

        // Periodized Gaussian at offsets j*h, j = 0..n-1, normalized to unit discrete mass.
        const int images = 1 + static_cast<int>(std::ceil(6.0 * width / period));
        std::vector<double> kernel(n);
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (int p = -images; p <= images; ++p) {
                const double rho = static_cast<double>(j) * h + p * period;
                s += std::exp(-rho * rho / (4.0 * alpha));
            }
            kernel[j] = s;
            mass += s;
        }
        for (auto& w : kernel) w /= mass;

        // Convolve along this axis for every line.
        std::size_t stride = 1;
        for (int d = grid.dims() - 1; d > axis; --d) stride *= grid.n(d);
        const std::size_t block = stride * n;
        std::vector<complex> next(current.size());
        std::vector<complex> line(n);
        for (std::size_t base = 0; base < current.size(); base += block) {
            for (std::size_t offset = 0; offset < stride; ++offset) {
                for (std::size_t j = 0; j < n; ++j) line[j] = current[base + offset + j * stride];
                for (std::size_t j = 0; j < n; ++j) {
                    complex acc{};
                    for (std::size_t jp = 0; jp < n; ++jp) {
                        acc += kernel[(j + n - jp) % n] * line[jp];
                    }
                    next[base + offset + j * stride] = acc;
                }
            }
        }
        current = std::move(next);
    }
    return {grid, std::move(current)};
}

Field sgn_kernel_apply(const Field& field, complex beta, Diagnostics* diag) {
    const Grid& grid = field.grid();
    if (grid.dims() != 1) throw UsageError("sgn_kernel_apply requires a 1D grid");
    if (beta == complex{}) throw UsageError("sgn_kernel_apply: beta must be nonzero");
    check_decay(field, "sgn_kernel_apply", diag);

    const auto c = field.values();
    const std::size_t n = c.size();
    const double h = grid.spacing(0);
    auto sample = [&](long long j) -> complex {
        return (j < 0 || j >= static_cast<long long>(n)) ? complex{} : c[static_cast<std::size_t>(j)];
    };

    // below[j] = integral from the left end to x_j; samples beyond the ends are taken as zero.
    std::vector<complex> below(n);
    complex running{};
    complex compensation{};
    for (std::size_t j = 0; j < n; ++j) {
        below[j] = running;
        complex interval{};
        for (std::size_t s = 0; s < kIntervalWeights.size(); ++s) {
            interval += kIntervalWeights[s] * sample(static_cast<long long>(j) + static_cast<long long>(s) - 3);
        }
        // Kahan summation keeps the cumulative sum at the 1e-16 level.
        const complex y = interval * h - compensation;
        const complex t = running + y;
        compensation = (t - running) - y;
        running = t;
    }
    const complex total = running;

    std::vector<complex> out(n);
    const complex scale = 1.0 / (2.0 * beta);
    for (std::size_t j = 0; j < n; ++j) out[j] = scale * (below[j] - (total - below[j]));
    return {grid, std::move(out)};
}

Field fresnel_cos_apply(const Field& field, double beta, Diagnostics* diag) {
    const Grid& grid = field.grid();
    if (grid.dims() != 1) throw UsageError("fresnel_cos_apply requires a 1D grid");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw UsageError("fresnel_cos_apply: beta must be positive");
    check_decay(field, "fresnel_cos_apply", diag);

    const double h = grid.spacing(0);
    const double half_width = 0.5 * grid.period(0);
    const double resolution_limit = beta * beta * 2.0 * std::numbers::pi / half_width;
    if (h > resolution_limit) {
        std::ostringstream msg;
        msg << "fresnel_cos_apply: spacing " << h << " exceeds " << resolution_limit
            << "; the kernel phase is unresolved near the domain edge";
        warn(diag, msg.str());
    }

    const auto c = field.values();
    const auto x = coordinates(grid, 0);
    const std::size_t n = c.size();
    const double inv4b2 = 1.0 / (4.0 * beta * beta);
    const double norm = 1.0 / (std::sqrt(4.0 * std::numbers::pi) * beta);
    std::vector<complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        complex acc{};
        for (std::size_t jp = 0; jp < n; ++jp) {
            const double d = x[j] - x[jp];
            const double w = (jp == 0 || jp == n - 1) ? 0.5 * h : h;
            acc += w * std::cos(d * d * inv4b2 - 0.25 * std::numbers::pi) * c[jp];
        }
        out[j] = norm * acc;
    }
    return {grid, std::move(out)};
}

}  // namespace specgrad
