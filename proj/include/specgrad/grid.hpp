#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specgrad {

using complex = std::complex<double>;

/// Uniform periodic sampling lattice in one to three dimensions.
///
/// Axis d has n[d] samples at origin[d] + j * spacing[d], j = 0 .. n[d]-1, and
/// physical period n[d] * spacing[d]. Storage of fields on the grid is row-major
/// with axis order (x, y, z), so the last axis varies fastest.
class Grid {
public:
    Grid(std::vector<std::size_t> n, std::vector<double> spacing, std::vector<double> origin);

    [[nodiscard]] int dims() const noexcept { return static_cast<int>(n_.size()); }
    [[nodiscard]] std::size_t n(int axis) const { return n_.at(static_cast<std::size_t>(axis)); }
    [[nodiscard]] double spacing(int axis) const { return spacing_.at(static_cast<std::size_t>(axis)); }
    [[nodiscard]] double origin(int axis) const { return origin_.at(static_cast<std::size_t>(axis)); }
    [[nodiscard]] double period(int axis) const { return static_cast<double>(n(axis)) * spacing(axis); }

    [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return n_; }
    [[nodiscard]] const std::vector<double>& spacings() const noexcept { return spacing_; }
    [[nodiscard]] const std::vector<double>& origins() const noexcept { return origin_; }

    /// Total number of samples.
    [[nodiscard]] std::size_t size() const noexcept;

    /// Row-major multi-index of flat index `flat`.
    [[nodiscard]] std::vector<std::size_t> unflatten(std::size_t flat) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<std::size_t> n_;
    std::vector<double> spacing_;
    std::vector<double> origin_;
};

/// Validating factory. Errors name the offending axis.
Grid make_grid(int dims, std::span<const std::size_t> n, std::span<const double> spacing,
               std::span<const double> origin);

/// Sample coordinates origin + j * spacing along `axis`.
std::vector<double> coordinates(const Grid& grid, int axis);

/// Wavenumbers along `axis` in DFT order: 2*pi*m / (n*h) with m = j for j <= n/2, else j - n.
std::vector<double> wavenumbers(const Grid& grid, int axis);

/// Index of the Nyquist mode along `axis`, or n (one past the end) when n is odd.
std::size_t nyquist_index(const Grid& grid, int axis);

/// Complex samples on a grid. Values are finite and immutable after construction.
class Field {
public:
    Field(Grid grid, std::vector<complex> values);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const complex> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const complex& operator[](std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<complex> values_;
};

/// DFT coefficients of a Field.
///
/// Forward transform is the plain sum sum_j c_j exp(-i k . x_j) with x measured
/// from the grid origin; the inverse divides by the total sample count.
class SpectralField {
public:
    SpectralField(Grid grid, std::vector<complex> coeffs);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const complex> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }

private:
    Grid grid_;
    std::vector<complex> coeffs_;
};

SpectralField dft_forward(const Field& field);
Field dft_inverse(const SpectralField& spec);

/// Throws UsageError unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace specgrad
