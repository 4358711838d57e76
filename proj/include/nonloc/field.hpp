#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nonloc/errors.hpp"
#include "nonloc/grid.hpp"

namespace nonloc {

using Complex = std::complex<double>;

/// Scalar samples on a Grid. Operations in fieldops return fresh fields and
/// leave their inputs untouched.
template <class T>
class Field {
 public:
  using value_type = T;

  explicit Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), T{}) {}
  Field(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw ShapeError("field value count does not match grid size");
  }

  /// Samples f at every grid point.
  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.position(i));
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  std::vector<T>& data() noexcept { return values_; }
  const std::vector<T>& data() const noexcept { return values_; }

  Field& operator+=(const Field& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  template <class S>
  Field& operator*=(S s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  template <class S>
  friend Field operator*(S s, Field a) {
    return a *= s;
  }

  bool all_finite() const {
    for (const auto& v : values_)
      if (!is_finite(v)) return false;
    return true;
  }

  void check_same(const Field& o) const {
    if (!(grid_ == o.grid_)) throw ShapeError("fields live on different grids");
  }

 private:
  static bool is_finite(double v) { return std::isfinite(v); }
  static bool is_finite(const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }

  Grid grid_;
  std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

/// One RealField per grid axis.
class VectorField {
 public:
  explicit VectorField(const Grid& grid)
      : components_(static_cast<std::size_t>(grid.dim()), RealField(grid)) {}
  explicit VectorField(std::vector<RealField> components) : components_(std::move(components)) {
    if (components_.empty()) throw ShapeError("vector field needs at least one component");
    if (static_cast<int>(components_.size()) != components_.front().grid().dim())
      throw ShapeError("vector field component count must equal grid dim");
    for (const auto& c : components_) components_.front().check_same(c);
  }

  const Grid& grid() const { return components_.front().grid(); }
  int dim() const { return static_cast<int>(components_.size()); }
  RealField& operator[](int axis) { return components_.at(static_cast<std::size_t>(axis)); }
  const RealField& operator[](int axis) const {
    return components_.at(static_cast<std::size_t>(axis));
  }

  VectorField& operator+=(const VectorField& o) {
    for (int a = 0; a < dim(); ++a) (*this)[a] += o[a];
    return *this;
  }
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }

  VectorField& operator*=(double s) {
    for (auto& c : components_) c *= s;
    return *this;
  }

  bool all_finite() const {
    for (const auto& c : components_)
      if (!c.all_finite()) return false;
    return true;
  }

  friend bool operator==(const VectorField& a, const VectorField& b) {
    if (a.dim() != b.dim()) return false;
    for (int k = 0; k < a.dim(); ++k)
      if (a[k].data() != b[k].data()) return false;
    return true;
  }

 private:
  std::vector<RealField> components_;
};

RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
ComplexField to_complex(const RealField& f);
ComplexField conj(const ComplexField& f);
/// Pointwise product.
ComplexField multiply(const ComplexField& a, const ComplexField& b);
RealField multiply(const RealField& a, const RealField& b);

}  // namespace nonloc
