#include "nonloc/field_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace nonloc {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  // strtod rather than from_chars: subnormals must survive the round trip.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ShapeError(fmt::format("bad number '{}' in field CSV", s));
  return v;
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ShapeError(fmt::format("bad index '{}' in field CSV", s));
  return v;
}

template <class T, class RowWriter>
void write_rows(std::ostream& os, const Field<T>& f, RowWriter&& row) {
  const Grid& g = f.grid();
  os << "# grid: " << g.describe() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    for (int a = 0; a < g.dim(); ++a) os << idx[static_cast<std::size_t>(a)] << ',';
    row(f[i]);
    os << '\n';
  }
}

template <class T, class Parse>
Field<T> read_rows(std::istream& is, std::size_t value_columns, Parse&& parse) {
  std::string line;
  if (!std::getline(is, line)) throw ShapeError("empty field CSV");
  Field<T> out(parse_grid_header(line));
  const Grid& g = out.grid();
  std::vector<bool> seen(g.size(), false);
  std::size_t count = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != static_cast<std::size_t>(g.dim()) + value_columns)
      throw ShapeError(fmt::format("field CSV row has {} columns: '{}'", cols.size(), line));
    Index3 idx{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) {
      const auto v = parse_size(cols[static_cast<std::size_t>(a)]);
      if (v >= g.points(a)) throw ShapeError(fmt::format("index {} out of range", v));
      idx[static_cast<std::size_t>(a)] = v;
    }
    const auto flat = g.flatten(idx);
    if (seen[flat]) throw ShapeError("duplicate row in field CSV");
    seen[flat] = true;
    out[flat] = parse(cols, static_cast<std::size_t>(g.dim()));
    ++count;
  }
  if (count != g.size())
    throw ShapeError(fmt::format("field CSV has {} rows, grid needs {}", count, g.size()));
  return out;
}

}  // namespace

Grid parse_grid_header(const std::string& line) {
  const std::string prefix = "# grid:";
  if (line.rfind(prefix, 0) != 0) throw ShapeError("field CSV must start with '# grid:'");
  std::istringstream ss(line.substr(prefix.size()));
  std::string tok;
  int dim = 0;
  std::vector<std::size_t> points;
  std::vector<double> extent;
  Boundary boundary = Boundary::periodic;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ShapeError(fmt::format("bad header token '{}'", tok));
    const auto key = tok.substr(0, eq);
    const auto val = tok.substr(eq + 1);
    if (key == "dim") {
      dim = static_cast<int>(parse_size(val));
    } else if (key == "points") {
      for (const auto& p : split(val, 'x')) points.push_back(parse_size(p));
    } else if (key == "extent") {
      for (const auto& p : split(val, 'x')) extent.push_back(parse_double(p));
    } else if (key == "boundary") {
      boundary = boundary_from_string(val);
    } else {
      throw ShapeError(fmt::format("unknown header key '{}'", key));
    }
  }
  if (static_cast<int>(points.size()) != dim || static_cast<int>(extent.size()) != dim)
    throw ShapeError("field CSV header dim does not match points/extent");
  return Grid(points, extent, boundary);
}

void write_csv(std::ostream& os, const ComplexField& f) {
  write_rows(os, f, [&](const Complex& v) { os << fmt::format("{:.17g},{:.17g}", v.real(), v.imag()); });
}

void write_csv(std::ostream& os, const RealField& f) {
  write_rows(os, f, [&](double v) { os << fmt::format("{:.17g}", v); });
}

void write_csv(const std::string& path, const ComplexField& f) {
  std::ofstream os(path);
  if (!os) throw ShapeError(fmt::format("cannot open '{}' for writing", path));
  write_csv(os, f);
}

void write_csv(const std::string& path, const RealField& f) {
  std::ofstream os(path);
  if (!os) throw ShapeError(fmt::format("cannot open '{}' for writing", path));
  write_csv(os, f);
}

ComplexField read_complex_csv(std::istream& is) {
  return read_rows<Complex>(is, 2, [](const std::vector<std::string>& c, std::size_t d) {
    return Complex(parse_double(c[d]), parse_double(c[d + 1]));
  });
}

RealField read_real_csv(std::istream& is) {
  return read_rows<double>(is, 1, [](const std::vector<std::string>& c, std::size_t d) {
    return parse_double(c[d]);
  });
}

ComplexField read_complex_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ShapeError(fmt::format("cannot open '{}'", path));
  return read_complex_csv(is);
}

}  // namespace nonloc
