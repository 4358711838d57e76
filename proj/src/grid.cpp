#include "nonloc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nonloc/errors.hpp"

namespace nonloc {

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "dirichlet-zero";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "dirichlet-zero" || s == "dirichlet") return Boundary::dirichlet_zero;
  throw DomainError(fmt::format("unknown boundary '{}'", s));
}

Grid::Grid(std::vector<std::size_t> points, std::vector<double> extent, Boundary boundary)
    : dim_(static_cast<int>(points.size())),
      boundary_(boundary),
      points_(std::move(points)),
      extent_(std::move(extent)) {
  if (dim_ < 1 || dim_ > 3) throw DomainError(fmt::format("grid dim must be 1..3, got {}", dim_));
  if (extent_.size() != points_.size())
    throw ShapeError("grid extent count must match points count");
  size_ = 1;
  for (int a = 0; a < dim_; ++a) {
    const auto n = points_[static_cast<std::size_t>(a)];
    const double len = extent_[static_cast<std::size_t>(a)];
    if (n < 4) throw DomainError(fmt::format("axis {} has {} points; at least 4 required", a, n));
    if (!(len > 0.0) || !std::isfinite(len))
      throw DomainError(fmt::format("axis {} extent must be positive, got {}", a, len));
    if (size_ > std::numeric_limits<std::size_t>::max() / n)
      throw DomainError("grid point count overflows addressable memory");
    size_ *= n;
    const double denom = boundary_ == Boundary::periodic ? double(n) : double(n + 1);
    spacing_.push_back(len / denom);
  }
  stride_.assign(static_cast<std::size_t>(dim_), 1);
  for (int a = dim_ - 2; a >= 0; --a)
    stride_[static_cast<std::size_t>(a)] =
        stride_[static_cast<std::size_t>(a + 1)] * points_[static_cast<std::size_t>(a + 1)];
  cell_volume_ = 1.0;
  for (double h : spacing_) cell_volume_ *= h;
}

Grid Grid::cube(int dim, std::size_t points, double extent, Boundary boundary) {
  if (dim < 1 || dim > 3) throw DomainError(fmt::format("grid dim must be 1..3, got {}", dim));
  return Grid(std::vector<std::size_t>(static_cast<std::size_t>(dim), points),
              std::vector<double>(static_cast<std::size_t>(dim), extent), boundary);
}

double Grid::min_spacing() const { return *std::min_element(spacing_.begin(), spacing_.end()); }
double Grid::max_spacing() const { return *std::max_element(spacing_.begin(), spacing_.end()); }
double Grid::min_extent() const { return *std::min_element(extent_.begin(), extent_.end()); }

Index3 Grid::unflatten(std::size_t flat) const {
  Index3 idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const auto s = stride_[static_cast<std::size_t>(a)];
    idx[static_cast<std::size_t>(a)] = flat / s;
    flat %= s;
  }
  return idx;
}

std::size_t Grid::flatten(const Index3& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a)
    flat += idx[static_cast<std::size_t>(a)] * stride_[static_cast<std::size_t>(a)];
  return flat;
}

double Grid::coordinate(int axis, std::size_t i) const {
  const auto a = static_cast<std::size_t>(axis);
  const double offset = boundary_ == Boundary::periodic ? double(i) : double(i + 1);
  return -0.5 * extent_[a] + offset * spacing_[a];
}

Point Grid::position(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a)
    p[static_cast<std::size_t>(a)] = coordinate(a, idx[static_cast<std::size_t>(a)]);
  return p;
}

double Grid::wavenumber(int axis, std::size_t i) const {
  const auto a = static_cast<std::size_t>(axis);
  const auto n = static_cast<long>(points_[a]);
  long m = static_cast<long>(i);
  if (m >= n - n / 2) m -= n;  // bins [ceil(N/2), N) are negative frequencies
  return 2.0 * M_PI * double(m) / extent_[a];
}

bool Grid::is_nyquist(int axis, std::size_t i) const {
  const auto n = points_[static_cast<std::size_t>(axis)];
  return n % 2 == 0 && i == n / 2;
}

std::string Grid::describe() const {
  std::string pts, ext;
  for (int a = 0; a < dim_; ++a) {
    if (a) {
      pts += 'x';
      ext += 'x';
    }
    pts += std::to_string(points_[static_cast<std::size_t>(a)]);
    ext += fmt::format("{:.17g}", extent_[static_cast<std::size_t>(a)]);
  }
  return fmt::format("dim={} points={} extent={} boundary={}", dim_, pts, ext,
                     to_string(boundary_));
}

}  // namespace nonloc
