#pragma once

#include "specgrad/grid.hpp"
#include "specgrad/symbol.hpp"

namespace specgrad {

/// Evaluates a coordinate expression (variables x, y, z up to grid.dims()) at every grid point.
/// Domain errors are rethrown with the offending multi-index attached.
Field sample_field(const SymbolExpr& expression, const Grid& grid);

/// Parses `text` over the grid's coordinate variables, then samples it.
Field sample_field(std::string_view text, const Grid& grid);

}  // namespace specgrad
