#pragma once

#include <string>

#include "fracpar/coefficients.hpp"
#include "fracpar/field.hpp"

namespace fracpar {

// FRACPAR1 field files: one text header line
//   FRACPAR1 n=<n> nx=<nx> nt=<nt> Lx=<Lx> Lt=<Lt>\n
// followed by grid.size() little-endian IEEE-754 (re, im) pairs of 8 bytes
// each, row-major with x fastest and t slowest.
void write_field_fracpar1(const std::string& path, const Field& u);
Field read_field_fracpar1(const std::string& path);

// Coefficient files reuse the layout with n^2 interleaved channels per point
// (entry order a11, a12, a21, a22) and carry the tag and the declared
// ellipticity constants in the header:
//   FRACPAR1 n=... nx=... nt=... Lx=... Lt=... tag=A c1=<c1> c2=<c2>\n
void write_coefficients_fracpar1(const std::string& path,
                                 const CoefficientField& A);
CoefficientField read_coefficients_fracpar1(const std::string& path);

// Small text-file helpers shared by manifests and CSV reports.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Shortest round-trip decimal form of a double (used by every text output so
// identical runs produce byte-identical files).
std::string format_double(double v);

}  // namespace fracpar
