#include "specgrad/field_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "specgrad/error.hpp"

namespace specgrad {

namespace {

const char* kCoordNames[] = {"x", "y", "z"};

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t first = 0;
    while (first < s.size() && s[first] == ' ') ++first;
    return s.substr(first);
}

double parse_double(const std::string& cell, std::size_t line_no) {
    const std::string t = trim(cell);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw UsageError("CSV line " + std::to_string(line_no) + ": cannot parse number '" + t + "'");
    }
    return v;
}

std::size_t parse_index(const std::string& cell, std::size_t line_no) {
    const std::string t = trim(cell);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw UsageError("CSV line " + std::to_string(line_no) + ": cannot parse index '" + t + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, ptr};
}

void write_field_csv(std::ostream& out, const Field& field) {
    const Grid& grid = field.grid();
    const auto dims = static_cast<std::size_t>(grid.dims());
    for (std::size_t d = 0; d < dims; ++d) out << "index" << d << ',';
    for (std::size_t d = 0; d < dims; ++d) out << kCoordNames[d] << ',';
    out << "re,im\n";

    std::vector<std::vector<double>> axes;
    for (int d = 0; d < grid.dims(); ++d) axes.push_back(coordinates(grid, d));
    for (std::size_t flat = 0; flat < field.size(); ++flat) {
        const auto idx = grid.unflatten(flat);
        for (std::size_t d = 0; d < dims; ++d) out << idx[d] << ',';
        for (std::size_t d = 0; d < dims; ++d) out << format_double(axes[d][idx[d]]) << ',';
        out << format_double(field[flat].real()) << ',' << format_double(field[flat].imag()) << '\n';
    }
}

Field read_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw UsageError("CSV field: missing header");
    const auto header = split(trim(line), ',');
    const std::size_t cols = header.size();
    if (cols != 4 && cols != 6 && cols != 8) {
        throw UsageError("CSV field: header must have 4, 6 or 8 columns, got " + std::to_string(cols));
    }
    const std::size_t dims = (cols - 2) / 2;
    for (std::size_t d = 0; d < dims; ++d) {
        if (trim(header[d]) != "index" + std::to_string(d) || trim(header[dims + d]) != kCoordNames[d]) {
            throw UsageError("CSV field: unexpected header '" + line + "'");
        }
    }
    if (trim(header[2 * dims]) != "re" || trim(header[2 * dims + 1]) != "im") {
        throw UsageError("CSV field: header must end with re,im");
    }

    std::vector<std::vector<std::size_t>> indices;
    std::vector<std::vector<double>> coords;
    std::vector<complex> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != cols) {
            throw UsageError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                             " columns");
        }
        std::vector<std::size_t> idx(dims);
        std::vector<double> xs(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            idx[d] = parse_index(cells[d], line_no);
            xs[d] = parse_double(cells[dims + d], line_no);
        }
        indices.push_back(std::move(idx));
        coords.push_back(std::move(xs));
        values.emplace_back(parse_double(cells[2 * dims], line_no), parse_double(cells[2 * dims + 1], line_no));
    }
    if (values.empty()) throw UsageError("CSV field: no data rows");

    // Shape from the last row of a row-major listing.
    std::vector<std::size_t> n(dims);
    for (std::size_t d = 0; d < dims; ++d) n[d] = indices.back()[d] + 1;
    std::vector<double> origin(dims), spacing(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        origin[d] = coords.front()[d];
        if (n[d] < 2) throw UsageError("CSV field: axis " + std::to_string(d) + " has fewer than 2 samples");
        spacing[d] = (coords.back()[d] - origin[d]) / static_cast<double>(n[d] - 1);
    }
    Grid grid(n, spacing, origin);
    if (values.size() != grid.size()) {
        throw UsageError("CSV field: " + std::to_string(values.size()) + " rows do not fill a " +
                         std::to_string(grid.size()) + "-sample grid");
    }
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        if (indices[flat] != grid.unflatten(flat)) {
            throw UsageError("CSV field: row " + std::to_string(flat + 2) + " is out of row-major order");
        }
    }
    return {std::move(grid), std::move(values)};
}

nlohmann::json grid_to_json(const Grid& grid) {
    return {{"dims", grid.dims()}, {"n", grid.shape()}, {"spacing", grid.spacings()}, {"origin", grid.origins()}};
}

Grid grid_from_json(const nlohmann::json& j) {
    try {
        const int dims = j.at("dims").get<int>();
        const auto n = j.at("n").get<std::vector<std::size_t>>();
        const auto spacing = j.at("spacing").get<std::vector<double>>();
        const auto origin = j.contains("origin") ? j.at("origin").get<std::vector<double>>()
                                                 : std::vector<double>(n.size(), 0.0);
        return make_grid(dims, n, spacing, origin);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("grid JSON: ") + e.what());
    }
}

nlohmann::json field_to_json(const Field& field) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : field.values()) values.push_back({v.real(), v.imag()});
    return {{"grid", grid_to_json(field.grid())}, {"values", std::move(values)}};
}

Field field_from_json(const nlohmann::json& j) {
    try {
        Grid grid = grid_from_json(j.at("grid"));
        std::vector<complex> values;
        for (const auto& pair : j.at("values")) {
            if (!pair.is_array() || pair.size() != 2) throw UsageError("field JSON: values must be [re, im] pairs");
            values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        return {std::move(grid), std::move(values)};
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("field JSON: ") + e.what());
    }
}

void save_field(const std::filesystem::path& path, const Field& field) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
    if (path.extension() == ".json") {
        out << field_to_json(field).dump() << '\n';
    } else {
        write_field_csv(out, field);
    }
    if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

Field load_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path.string() + "'");
    if (path.extension() == ".json") {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("'" + path.string() + "': " + e.what());
        }
        return field_from_json(j);
    }
    return read_field_csv(in);
}

}  // namespace specgrad
