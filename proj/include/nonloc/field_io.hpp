#pragma once

#include <iosfwd>
#include <string>

#include "nonloc/field.hpp"

namespace nonloc {

// CSV dump format:
//   # grid: dim=<d> points=<n0>x<n1>.. extent=<L0>x<L1>.. boundary=<b>
//   i0,..,i_{d-1},re,im        (complex)
//   i0,..,i_{d-1},value        (real)
// Numbers are written with 17 significant digits, so a read-back is bit-exact.

void write_csv(std::ostream& os, const ComplexField& f);
void write_csv(std::ostream& os, const RealField& f);
void write_csv(const std::string& path, const ComplexField& f);
void write_csv(const std::string& path, const RealField& f);

ComplexField read_complex_csv(std::istream& is);
RealField read_real_csv(std::istream& is);
ComplexField read_complex_csv(const std::string& path);

/// Parses the `# grid:` header line.
Grid parse_grid_header(const std::string& line);

}  // namespace nonloc
