#pragma once

// CSV series and legacy VTK field files.

#include <string>
#include <utility>
#include <vector>

#include "poromech/mesh.hpp"

namespace poromech::io {

/// A table of numbers with named columns.
struct Series {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    bool empty() const { return rows.empty(); }
};

/// Comma-separated, header first, 17 significant digits, LF line endings.
std::string format_csv(const Series& series);

/// Throws EmptySeries or IoError.
void write_csv(const Series& series, const std::string& path);

/// Point data on the corner nodes of a mesh.
struct VtkFields {
    std::vector<Vec2<double>> displacement;
    std::vector<std::pair<std::string, std::vector<double>>> scalars;
};

/// Legacy ASCII 3.0 UnstructuredGrid with quads (cell type 9): "displacement"
/// as VECTORS, every scalar as its own SCALARS block.
std::string format_vtk(const fem::Mesh& mesh, const VtkFields& fields, const std::string& title = "poromech");

/// Throws IoError, or std::invalid_argument when a field is not sized to the mesh.
void write_vtk(const fem::Mesh& mesh, const VtkFields& fields, const std::string& path);

}  // namespace poromech::io
