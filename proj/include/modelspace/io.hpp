///
/// \file io.hpp
///
/// Text formats shared by every module.
///
/// Matrix CSV: a "rows,cols" line, then one "row,col,re,im" line per entry
/// in row-major order. Floats are written with 17 significant digits so
/// that files round-trip bit-exactly.
///
#ifndef MODELSPACE_IO_HPP
#define MODELSPACE_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "modelspace/types.hpp"

namespace modelspace
{

std::string format_double(double value);

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m);
std::string matrix_to_csv(const ComplexMatrix& m);

/// Reads the matrix CSV format. Entries that are not listed stay zero.
ComplexMatrix read_matrix_csv(std::istream& in);
ComplexMatrix read_matrix_csv_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

} // namespace modelspace

#endif // MODELSPACE_IO_HPP
