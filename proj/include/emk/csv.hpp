#ifndef EMK_CSV_HPP
#define EMK_CSV_HPP

#include <string>

#include "emk/types.hpp"

namespace emk {

/// Writes a matrix as comma-separated rows with 17 significant digits, enough
/// for doubles to round-trip exactly.
void write_csv(const std::string& path, const Matrix& m);

/// Reads a comma-separated numeric matrix. Throws IoError on missing files,
/// ragged rows, or unparseable fields.
Matrix read_csv(const std::string& path);

}  // namespace emk

#endif
