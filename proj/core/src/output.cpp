#include "poromech/output.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "poromech/errors.hpp"

namespace poromech::io {

namespace {

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string format_csv(const Series& series) {
    std::string s;
    for (std::size_t i = 0; i < series.header.size(); ++i) s += (i ? "," : "") + series.header[i];
    s += '\n';
    for (const auto& row : series.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += fmt::format("{:.17g}", row[i]);
        }
        s += '\n';
    }
    return s;
}

void write_csv(const Series& series, const std::string& path) {
    if (series.empty()) throw EmptySeries("series '" + path + "' has no rows");
    for (const auto& row : series.rows)
        if (row.size() != series.header.size())
            throw std::invalid_argument("row width does not match the header of '" + path + "'");
    write_text(format_csv(series), path);
}

std::string format_vtk(const fem::Mesh& mesh, const VtkFields& fields, const std::string& title) {
    const std::size_t n = mesh.nodes.size();
    if (!fields.displacement.empty() && fields.displacement.size() != n)
        throw std::invalid_argument("displacement field is not sized to the mesh");
    for (const auto& [name, v] : fields.scalars)
        if (v.size() != n) throw std::invalid_argument("field '" + name + "' is not sized to the mesh");

    std::string s = "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    s += fmt::format("POINTS {} double\n", n);
    for (const auto& X : mesh.nodes) s += fmt::format("{:.17g} {:.17g} 0\n", X[0], X[1]);
    const auto ne = mesh.elements.size();
    s += fmt::format("CELLS {} {}\n", ne, 5 * ne);
    for (const auto& e : mesh.elements) s += fmt::format("4 {} {} {} {}\n", e[0], e[1], e[2], e[3]);
    s += fmt::format("CELL_TYPES {}\n", ne);
    for (std::size_t e = 0; e < ne; ++e) s += "9\n";
    if (fields.displacement.empty() && fields.scalars.empty()) return s;
    s += fmt::format("POINT_DATA {}\n", n);
    if (!fields.displacement.empty()) {
        s += "VECTORS displacement double\n";
        for (const auto& u : fields.displacement) s += fmt::format("{:.17g} {:.17g} 0\n", u[0], u[1]);
    }
    for (const auto& [name, v] : fields.scalars) {
        s += fmt::format("SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
        for (double x : v) s += fmt::format("{:.17g}\n", x);
    }
    return s;
}

void write_vtk(const fem::Mesh& mesh, const VtkFields& fields, const std::string& path) {
    write_text(format_vtk(mesh, fields), path);
}

}  // namespace poromech::io
