#include "natconv/field_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace natconv {

namespace {

// %.17g round-trips every double exactly.
void put(std::string& out, double v)
{
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

std::string read_all(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
T expect(std::istream& in, const std::string& what)
{
    T v{};
    if (!(in >> v)) {
        throw IoError("malformed field file: expected " + what);
    }
    return v;
}

void expect_word(std::istream& in, const std::string& word)
{
    const auto got = expect<std::string>(in, word);
    if (got != word) {
        throw IoError("malformed field file: expected '" + word + "', found '" + got + "'");
    }
}

double parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError("malformed number '" + std::string(s) + "'");
    }
    return v;
}

FieldFile parse_csv(const std::string& text)
{
    FieldFile f;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,value") {
        throw IoError("malformed CSV field file: missing 'x,y,value' header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw IoError("malformed CSV row '" + line + "'");
        }
        const std::string_view sv(line);
        f.points.push_back({parse_double(sv.substr(0, c1)), parse_double(sv.substr(c1 + 1, c2 - c1 - 1))});
        f.values.push_back(parse_double(sv.substr(c2 + 1)));
    }
    return f;
}

FieldFile parse_vtk(const std::string& text)
{
    FieldFile f;
    std::istringstream in(text);
    std::string line;
    for (int i = 0; i < 4; ++i) {  // version, title, ASCII, DATASET
        if (!std::getline(in, line)) {
            throw IoError("malformed VTK file: truncated header");
        }
        if (i == 2 && line != "ASCII") {
            throw IoError("malformed VTK file: only ASCII is supported");
        }
        if (i == 3 && line != "DATASET UNSTRUCTURED_GRID") {
            throw IoError("malformed VTK file: expected an unstructured grid");
        }
    }
    expect_word(in, "POINTS");
    const auto np = expect<std::size_t>(in, "point count");
    expect<std::string>(in, "point type");
    f.points.resize(np);
    for (auto& p : f.points) {
        p.x = expect<double>(in, "x");
        p.y = expect<double>(in, "y");
        expect<double>(in, "z");
    }
    expect_word(in, "CELLS");
    const auto nc = expect<std::size_t>(in, "cell count");
    expect<std::size_t>(in, "cell list size");
    f.cells.resize(nc);
    for (auto& c : f.cells) {
        if (expect<int>(in, "cell vertex count") != 3) {
            throw IoError("malformed VTK file: non-triangular cell");
        }
        c = {expect<int>(in, "vertex"), expect<int>(in, "vertex"), expect<int>(in, "vertex")};
    }
    expect_word(in, "CELL_TYPES");
    if (expect<std::size_t>(in, "cell type count") != nc) {
        throw IoError("malformed VTK file: CELL_TYPES count mismatch");
    }
    f.cell_types.resize(nc);
    for (auto& t : f.cell_types) {
        t = expect<int>(in, "cell type");
    }
    expect_word(in, "POINT_DATA");
    if (expect<std::size_t>(in, "point data count") != np) {
        throw IoError("malformed VTK file: POINT_DATA count mismatch");
    }
    expect_word(in, "SCALARS");
    expect<std::string>(in, "scalar name");
    expect<std::string>(in, "scalar type");
    // Optional component count before LOOKUP_TABLE.
    auto word = expect<std::string>(in, "LOOKUP_TABLE");
    if (word != "LOOKUP_TABLE") {
        word = expect<std::string>(in, "LOOKUP_TABLE");
    }
    if (word != "LOOKUP_TABLE") {
        throw IoError("malformed VTK file: expected LOOKUP_TABLE");
    }
    expect<std::string>(in, "lookup table name");
    f.values.resize(np);
    for (auto& v : f.values) {
        v = expect<double>(in, "scalar value");
    }
    return f;
}

}  // namespace

FieldFormat parse_field_format(std::string_view text)
{
    if (text == "vtk") {
        return FieldFormat::vtk;
    }
    if (text == "csv") {
        return FieldFormat::csv;
    }
    throw std::invalid_argument("unknown field format '" + std::string(text) + "' (expected vtk or csv)");
}

const char* extension(FieldFormat format)
{
    return format == FieldFormat::vtk ? ".vtk" : ".csv";
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

std::string format_field(const Field& field, FieldFormat format, std::string_view name)
{
    const Mesh& mesh = field.mesh();
    std::string out;
    out.reserve(64 * mesh.num_nodes());
    if (format == FieldFormat::csv) {
        out += "x,y,value\n";
        for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
            put(out, mesh.nodes()[i].x);
            out += ',';
            put(out, mesh.nodes()[i].y);
            out += ',';
            put(out, field[i]);
            out += '\n';
        }
        return out;
    }

    out += "# vtk DataFile Version 3.0\n";
    out += std::string(name) + " n=" + std::to_string(mesh.subdivisions()) + "\n";
    out += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out += "POINTS " + std::to_string(mesh.num_nodes()) + " double\n";
    for (const auto& p : mesh.nodes()) {
        put(out, p.x);
        out += ' ';
        put(out, p.y);
        out += " 0\n";
    }
    const auto nt = mesh.num_triangles();
    out += "CELLS " + std::to_string(nt) + " " + std::to_string(4 * nt) + "\n";
    for (const auto& tri : mesh.triangles()) {
        out += "3 " + std::to_string(tri[0]) + " " + std::to_string(tri[1]) + " " + std::to_string(tri[2]) + "\n";
    }
    out += "CELL_TYPES " + std::to_string(nt) + "\n";
    for (std::size_t t = 0; t < nt; ++t) {
        out += "5\n";
    }
    out += "POINT_DATA " + std::to_string(mesh.num_nodes()) + "\n";
    out += "SCALARS " + std::string(name) + " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        put(out, field[i]);
        out += '\n';
    }
    return out;
}

void write_field(const Field& field, const std::filesystem::path& path, FieldFormat format, std::string_view name)
{
    write_text_atomic(path, format_field(field, format, name));
}

FieldFile read_field(const std::filesystem::path& path, FieldFormat format)
{
    const std::string text = read_all(path);
    return format == FieldFormat::csv ? parse_csv(text) : parse_vtk(text);
}

}  // namespace natconv
