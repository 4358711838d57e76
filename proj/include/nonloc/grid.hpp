#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace nonloc {

enum class Boundary { periodic, dirichlet_zero };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

using Point = std::array<double, 3>;
using Index3 = std::array<std::size_t, 3>;

/// Uniform Cartesian grid in 1-3 dimensions, centred on the origin.
///
/// Periodic axes hold the points -L/2 + j h, h = L/N. Dirichlet-zero axes hold
/// the interior points -L/2 + (j+1) h, h = L/(N+1); the wall values are zero and
/// not stored. Flat storage is row-major with the last axis fastest.
class Grid {
 public:
  Grid(std::vector<std::size_t> points, std::vector<double> extent,
       Boundary boundary = Boundary::periodic);

  /// Isotropic convenience constructor.
  static Grid cube(int dim, std::size_t points, double extent,
                   Boundary boundary = Boundary::periodic);

  int dim() const noexcept { return dim_; }
  Boundary boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == Boundary::periodic; }

  std::size_t points(int axis) const { return points_.at(static_cast<std::size_t>(axis)); }
  double extent(int axis) const { return extent_.at(static_cast<std::size_t>(axis)); }
  double spacing(int axis) const { return spacing_.at(static_cast<std::size_t>(axis)); }
  double min_spacing() const;
  double max_spacing() const;
  double min_extent() const;

  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_volume_; }

  std::size_t stride(int axis) const { return stride_.at(static_cast<std::size_t>(axis)); }
  Index3 unflatten(std::size_t flat) const;
  std::size_t flatten(const Index3& idx) const;

  double coordinate(int axis, std::size_t i) const;
  Point position(std::size_t flat) const;

  /// Angular wavenumber of DFT bin i on a periodic axis: 2 pi m / L with
  /// m in [-N/2, N/2).
  double wavenumber(int axis, std::size_t i) const;
  bool is_nyquist(int axis, std::size_t i) const;

  std::string describe() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.boundary_ == b.boundary_ && a.points_ == b.points_ &&
           a.extent_ == b.extent_;
  }

 private:
  int dim_;
  Boundary boundary_;
  std::vector<std::size_t> points_;
  std::vector<double> extent_;
  std::vector<double> spacing_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

}  // namespace nonloc
