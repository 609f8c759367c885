#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dsf/types.hpp"

namespace dsf::io {

// Complex matrices as CSV: a header line "rows,cols", then one line per row
// holding cols "re,im" pairs, i.e. 2*cols comma-separated numbers. Values
// are printed with 17 significant digits so a write/read cycle is exact.
std::string matrix_to_csv(const CMatrix& m);
CMatrix matrix_from_csv(std::string_view text);

// Throws IoError on I/O failure and InvalidInput on malformed content.
void write_matrix(const CMatrix& m, const std::filesystem::path& path);
CMatrix read_matrix(const std::filesystem::path& path);

}  // namespace dsf::io
