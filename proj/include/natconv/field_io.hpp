#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "natconv/field.hpp"

namespace natconv {

enum class FieldFormat { vtk, csv };

/// "vtk" or "csv"; throws std::invalid_argument otherwise.
FieldFormat parse_field_format(std::string_view text);
const char* extension(FieldFormat format);

/// Any failure to create, write, rename or read an output file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes content to path through a temporary sibling and a rename, so readers
/// never see a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// VTK legacy ASCII unstructured grid (triangles, cell type 5, point scalars)
/// or CSV rows "x,y,value" in node order. Values round-trip exactly.
std::string format_field(const Field& field, FieldFormat format, std::string_view name = "value");
void write_field(const Field& field, const std::filesystem::path& path, FieldFormat format,
                 std::string_view name = "value");

struct FieldFile {
    std::vector<Point> points;
    std::vector<double> values;
    /// Empty for CSV.
    std::vector<Triangle> cells;
    std::vector<int> cell_types;
};

/// Parses a file produced by write_field. Throws IoError on malformed input.
FieldFile read_field(const std::filesystem::path& path, FieldFormat format);

}  // namespace natconv
