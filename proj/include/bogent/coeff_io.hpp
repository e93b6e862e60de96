#pragma once

#include <iosfwd>
#include <string>

#include "bogent/bogoliubov.hpp"

namespace bogent {

// Text container for Bogoliubov coefficients:
//
//   # bogent-coefficients 1
//   modes 1 2 3
//   M 3
//   order_tag exact | series:<k>
//   h_value <double>            (exact coefficients only)
//   identity_tolerance <double> (optional, exact coefficients only)
//   alpha
//   <M rows of M re im pairs>
//   beta
//   <M rows of M re im pairs>
//
// Numbers are written in scientific notation with 17 significant digits,
// which round-trips every double exactly.

void write_coeffs(const BogoCoeffs& c, std::ostream& out);
void write_coeffs(const BogoCoeffs& c, const std::string& path);

/// Throws std::invalid_argument on malformed content.
BogoCoeffs read_coeffs(std::istream& in);
BogoCoeffs read_coeffs(const std::string& path);

}  // namespace bogent
