#pragma once

#include <string>

#include "homoglab/grid.hpp"

namespace homoglab {

/// CSV persistence: a small key,value header (dim, cells, cells_per_unit,
/// origin, h, components) followed by one row per cell in row-major order.
void save_csv(const ScalarField& f, const std::string& path);
void save_csv(const MatrixField& f, const std::string& path);
ScalarField load_scalar_csv(const std::string& path);
MatrixField load_matrix_csv(const std::string& path);

/// Flat binary persistence: 32-byte header (magic "HGLF", version, dim,
/// component count, cells_per_unit, cells, origin in cell units) followed by
/// little-endian 64-bit floats, one row-major plane per component.
void save_binary(const ScalarField& f, const std::string& path);
void save_binary(const MatrixField& f, const std::string& path);
ScalarField load_scalar_binary(const std::string& path);
MatrixField load_matrix_binary(const std::string& path);

} // namespace homoglab
