#pragma once

#include <filesystem>
#include <iosfwd>

#include "heraldshape/grid.hpp"

namespace heraldshape::io {

// Tabulated-field text format. Lines starting with '#' are comments.
//   1-D:  "grid,<t_start>,<dt>,<n>" then n lines "re,im".
//   2-D:  "signal,<t_start>,<dt>,<n>" and "idler,<t_start>,<dt>,<n>" then
//         n_s * n_i lines "re,im" in row-major (signal-major) order.
// Separators may be commas or whitespace. Values are written with 17
// significant digits so round-trips are exact.

Field1D load_field1d(const std::filesystem::path& path);
Field2D load_field2d(const std::filesystem::path& path);

void save_field1d(const Field1D& f, const std::filesystem::path& path);
void save_field2d(const Field2D& f, const std::filesystem::path& path);

/// Full-precision formatting used by every CSV/manifest writer.
std::string format_double(double x);

}  // namespace heraldshape::io
