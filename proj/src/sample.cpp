#include "specgrad/sample.hpp"

#include "specgrad/error.hpp"

namespace specgrad {

namespace {

std::string format_index(const std::vector<std::size_t>& idx) {
    std::string out = "[";
    for (std::size_t d = 0; d < idx.size(); ++d) {
        if (d > 0) out += ",";
        out += std::to_string(idx[d]);
    }
    return out + "]";
}

}  // namespace

Field sample_field(const SymbolExpr& expression, const Grid& grid) {
    const auto allowed = coordinate_vars(grid.dims());
    for (const auto& v : expression.variables()) {
        if (!allowed.contains(v)) {
            throw UsageError("variable '" + v + "' is not a coordinate of a " + std::to_string(grid.dims()) +
                             "-dimensional grid");
        }
    }
    static const char* names[] = {"x", "y", "z"};
    std::vector<std::vector<double>> axes;
    for (int d = 0; d < grid.dims(); ++d) axes.push_back(coordinates(grid, d));

    std::vector<complex> values(grid.size());
    Bindings bindings;
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        const auto idx = grid.unflatten(flat);
        for (int d = 0; d < grid.dims(); ++d) {
            bindings[names[d]] = {axes[static_cast<std::size_t>(d)][idx[static_cast<std::size_t>(d)]], 0.0};
        }
        try {
            values[flat] = eval(expression, bindings);
        } catch (const OverflowError& e) {
            throw OverflowError(std::string(e.what()) + " at grid index " + format_index(idx));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " at grid index " + format_index(idx));
        }
    }
    return {grid, std::move(values)};
}

Field sample_field(std::string_view text, const Grid& grid) {
    return sample_field(parse(text, coordinate_vars(grid.dims())), grid);
}

}  // namespace specgrad
