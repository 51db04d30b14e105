#include "specgrad/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "specgrad/error.hpp"

namespace specgrad {

namespace {

std::string axis_label(std::size_t axis) { return "axis " + std::to_string(axis); }

void validate_axis(const Grid& grid, int axis) {
    if (axis < 0 || axis >= grid.dims()) {
        throw UsageError("axis " + std::to_string(axis) + " out of range for " +
                         std::to_string(grid.dims()) + "-dimensional grid");
    }
}

// FFTW planning touches global state; execution on distinct plans does not.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

std::vector<complex> transform(const Grid& grid, std::span<const complex> in, int sign) {
    const std::size_t total = grid.size();
    std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(total));
    std::copy(in.begin(), in.end(), reinterpret_cast<complex*>(buf.get()));

    std::vector<int> shape(grid.shape().begin(), grid.shape().end());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft(grid.dims(), shape.data(), buf.get(), buf.get(), sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        throw Error("FFTW failed to create a plan");
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const auto* out = reinterpret_cast<const complex*>(buf.get());
    return {out, out + total};
}

}  // namespace

Grid::Grid(std::vector<std::size_t> n, std::vector<double> spacing, std::vector<double> origin)
    : n_(std::move(n)), spacing_(std::move(spacing)), origin_(std::move(origin)) {
    if (n_.empty() || n_.size() > 3) {
        throw UsageError("grid dims must be 1, 2 or 3, got " + std::to_string(n_.size()));
    }
    if (spacing_.size() != n_.size() || origin_.size() != n_.size()) {
        throw UsageError("grid spacing/origin arrays must have one entry per axis");
    }
    for (std::size_t d = 0; d < n_.size(); ++d) {
        if (n_[d] < 2) {
            throw UsageError(axis_label(d) + ": n must be at least 2, got " + std::to_string(n_[d]));
        }
        if (!(spacing_[d] > 0.0) || !std::isfinite(spacing_[d])) {
            throw UsageError(axis_label(d) + ": spacing must be positive and finite");
        }
        if (!std::isfinite(origin_[d])) {
            throw UsageError(axis_label(d) + ": origin must be finite");
        }
    }
}

std::size_t Grid::size() const noexcept {
    std::size_t total = 1;
    for (auto v : n_) total *= v;
    return total;
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(n_.size());
    for (std::size_t d = n_.size(); d-- > 0;) {
        idx[d] = flat % n_[d];
        flat /= n_[d];
    }
    return idx;
}

Grid make_grid(int dims, std::span<const std::size_t> n, std::span<const double> spacing,
               std::span<const double> origin) {
    if (dims < 1 || dims > 3) {
        throw UsageError("grid dims must be 1, 2 or 3, got " + std::to_string(dims));
    }
    const auto expected = static_cast<std::size_t>(dims);
    if (n.size() != expected) throw UsageError("grid n must have " + std::to_string(dims) + " entries");
    if (spacing.size() != expected) {
        throw UsageError("grid spacing must have " + std::to_string(dims) + " entries");
    }
    if (origin.size() != expected) {
        throw UsageError("grid origin must have " + std::to_string(dims) + " entries");
    }
    return Grid({n.begin(), n.end()}, {spacing.begin(), spacing.end()}, {origin.begin(), origin.end()});
}

std::vector<double> coordinates(const Grid& grid, int axis) {
    validate_axis(grid, axis);
    std::vector<double> out(grid.n(axis));
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = grid.origin(axis) + static_cast<double>(j) * grid.spacing(axis);
    }
    return out;
}

std::vector<double> wavenumbers(const Grid& grid, int axis) {
    validate_axis(grid, axis);
    const std::size_t n = grid.n(axis);
    const double scale = 2.0 * std::numbers::pi / grid.period(axis);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto m = j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        out[j] = scale * m;
    }
    return out;
}

std::size_t nyquist_index(const Grid& grid, int axis) {
    validate_axis(grid, axis);
    const std::size_t n = grid.n(axis);
    return n % 2 == 0 ? n / 2 : n;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) {
        throw UsageError(std::string(what) + ": grid mismatch");
    }
}

Field::Field(Grid grid, std::vector<complex> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw UsageError("field has " + std::to_string(values_.size()) + " values, grid expects " +
                         std::to_string(grid_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
            throw DomainError("field value at flat index " + std::to_string(i) + " is not finite");
        }
    }
}

SpectralField::SpectralField(Grid grid, std::vector<complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) {
        throw UsageError("spectral field has " + std::to_string(coeffs_.size()) +
                         " coefficients, grid expects " + std::to_string(grid_.size()));
    }
}

SpectralField dft_forward(const Field& field) {
    return {field.grid(), transform(field.grid(), field.values(), FFTW_FORWARD)};
}

Field dft_inverse(const SpectralField& spec) {
    auto values = transform(spec.grid(), spec.coeffs(), FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(spec.size());
    for (auto& v : values) v *= scale;
    return {spec.grid(), std::move(values)};
}

}  // namespace specgrad
