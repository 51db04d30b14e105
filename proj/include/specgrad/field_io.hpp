#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "specgrad/grid.hpp"

namespace specgrad {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// CSV with header `index0[,index1[,index2]],x[,y[,z]],re,im`, one row per sample, row-major.
void write_field_csv(std::ostream& out, const Field& field);

/// Reads the CSV form. The grid is reconstructed from the index and coordinate columns.
Field read_field_csv(std::istream& in);

nlohmann::json grid_to_json(const Grid& grid);
Grid grid_from_json(const nlohmann::json& j);

/// `{grid:{dims,n,spacing,origin},values:[[re,im],...]}`
nlohmann::json field_to_json(const Field& field);
Field field_from_json(const nlohmann::json& j);

/// Chooses CSV or JSON by file extension (`.json` means JSON, anything else CSV).
void save_field(const std::filesystem::path& path, const Field& field);
Field load_field(const std::filesystem::path& path);

}  // namespace specgrad
