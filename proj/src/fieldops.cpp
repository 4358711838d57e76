#include "nonloc/fieldops.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fft.hpp"

namespace nonloc {
namespace {

void check_axis(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dim())
    throw DomainError(fmt::format("axis {} out of range for a {}-d grid", axis, g.dim()));
}

void require_periodic(const Grid& g, const char* what) {
  if (!g.periodic())
    throw UnsupportedBoundaryError(fmt::format("{} requires a periodic grid", what));
}

std::size_t axis_index(const Grid& g, std::size_t flat, int axis) {
  return (flat / g.stride(axis)) % g.points(axis);
}

// i*k along `axis` for each bin, Nyquist dropped.
std::vector<Complex> derivative_symbol(const Grid& g, int axis) {
  std::vector<Complex> sym(g.points(axis));
  for (std::size_t i = 0; i < sym.size(); ++i)
    sym[i] = g.is_nyquist(axis, i) ? Complex{} : Complex(0.0, g.wavenumber(axis, i));
  return sym;
}

std::vector<Complex> spectral_derivative(const Grid& g, const std::vector<Complex>& spectrum,
                                         int axis) {
  const auto sym = derivative_symbol(g, axis);
  const double inv_n = 1.0 / double(g.size());
  std::vector<Complex> work(spectrum.size());
  for (std::size_t i = 0; i < work.size(); ++i)
    work[i] = spectrum[i] * sym[axis_index(g, i, axis)] * inv_n;
  detail::fft_backward(g, work);
  return work;
}

template <class T>
std::vector<T> fd_gradient(const Grid& g, const std::vector<T>& v, int axis) {
  const auto n = g.points(axis);
  const auto s = g.stride(axis);
  const double inv2h = 0.5 / g.spacing(axis);
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto j = axis_index(g, i, axis);
    const T up = j + 1 < n ? v[i + s] : T{};
    const T dn = j > 0 ? v[i - s] : T{};
    out[i] = (up - dn) * inv2h;
  }
  return out;
}

// Central differences inside, second-order one-sided differences at the two
// outermost points. Used for divergence: vector fields need not vanish at the wall.
std::vector<double> fd_gradient_one_sided(const Grid& g, const std::vector<double>& v, int axis) {
  const auto n = g.points(axis);
  const auto s = g.stride(axis);
  const double inv2h = 0.5 / g.spacing(axis);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto j = axis_index(g, i, axis);
    if (j == 0)
      out[i] = (-3.0 * v[i] + 4.0 * v[i + s] - v[i + 2 * s]) * inv2h;
    else if (j + 1 == n)
      out[i] = (3.0 * v[i] - 4.0 * v[i - s] + v[i - 2 * s]) * inv2h;
    else
      out[i] = (v[i + s] - v[i - s]) * inv2h;
  }
  return out;
}

template <class T>
std::vector<T> fd_laplacian(const Grid& g, const std::vector<T>& v) {
  std::vector<T> out(v.size(), T{});
  for (int a = 0; a < g.dim(); ++a) {
    const auto n = g.points(a);
    const auto s = g.stride(a);
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto j = axis_index(g, i, a);
      const T up = j + 1 < n ? v[i + s] : T{};
      const T dn = j > 0 ? v[i - s] : T{};
      out[i] += (up - 2.0 * v[i] + dn) * inv_h2;
    }
  }
  return out;
}

std::vector<Complex> as_complex(const std::vector<double>& v) {
  return std::vector<Complex>(v.begin(), v.end());
}

std::vector<double> real_of(const std::vector<Complex>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

}  // namespace

RealField real_part(const ComplexField& f) {
  return RealField(f.grid(), real_of(f.data()));
}

RealField imag_part(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].imag();
  return out;
}

ComplexField to_complex(const RealField& f) { return ComplexField(f.grid(), as_complex(f.data())); }

ComplexField conj(const ComplexField& f) {
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::conj(f[i]);
  return out;
}

ComplexField multiply(const ComplexField& a, const ComplexField& b) {
  a.check_same(b);
  ComplexField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RealField multiply(const RealField& a, const RealField& b) {
  a.check_same(b);
  RealField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

ComplexField gradient(const ComplexField& f, int axis) {
  const Grid& g = f.grid();
  check_axis(g, axis);
  if (!g.periodic()) return ComplexField(g, fd_gradient(g, f.data(), axis));
  auto spectrum = f.data();
  detail::fft_forward(g, spectrum);
  return ComplexField(g, spectral_derivative(g, spectrum, axis));
}

RealField gradient(const RealField& f, int axis) {
  const Grid& g = f.grid();
  check_axis(g, axis);
  if (!g.periodic()) return RealField(g, fd_gradient(g, f.data(), axis));
  return real_part(gradient(to_complex(f), axis));
}

std::vector<ComplexField> gradients(const ComplexField& f) {
  const Grid& g = f.grid();
  std::vector<ComplexField> out;
  out.reserve(static_cast<std::size_t>(g.dim()));
  if (!g.periodic()) {
    for (int a = 0; a < g.dim(); ++a) out.emplace_back(g, fd_gradient(g, f.data(), a));
    return out;
  }
  auto spectrum = f.data();
  detail::fft_forward(g, spectrum);
  for (int a = 0; a < g.dim(); ++a) out.emplace_back(g, spectral_derivative(g, spectrum, a));
  return out;
}

VectorField gradients(const RealField& f) {
  std::vector<RealField> comps;
  if (f.grid().periodic()) {
    for (auto& c : gradients(to_complex(f))) comps.push_back(real_part(c));
  } else {
    for (int a = 0; a < f.grid().dim(); ++a) comps.push_back(gradient(f, a));
  }
  return VectorField(std::move(comps));
}

RealField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  if (!g.periodic()) {
    RealField out(g);
    for (int a = 0; a < v.dim(); ++a) out += RealField(g, fd_gradient_one_sided(g, v[a].data(), a));
    return out;
  }
  // Sum the spectra first: one inverse transform.
  std::vector<Complex> acc(g.size(), Complex{});
  for (int a = 0; a < v.dim(); ++a) {
    auto spectrum = as_complex(v[a].data());
    detail::fft_forward(g, spectrum);
    const auto sym = derivative_symbol(g, a);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += spectrum[i] * sym[axis_index(g, i, a)];
  }
  const double inv_n = 1.0 / double(g.size());
  for (auto& c : acc) c *= inv_n;
  detail::fft_backward(g, acc);
  return RealField(g, real_of(acc));
}

ComplexField laplacian(const ComplexField& f) {
  const Grid& g = f.grid();
  if (!g.periodic()) return ComplexField(g, fd_laplacian(g, f.data()));
  auto work = f.data();
  detail::fft_forward(g, work);
  const double inv_n = 1.0 / double(g.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double k = g.wavenumber(a, axis_index(g, i, a));
      k2 += k * k;
    }
    work[i] *= -k2 * inv_n;
  }
  detail::fft_backward(g, work);
  return ComplexField(g, std::move(work));
}

RealField laplacian(const RealField& f) {
  if (!f.grid().periodic()) return RealField(f.grid(), fd_laplacian(f.grid(), f.data()));
  return real_part(laplacian(to_complex(f)));
}

ComplexField to_momentum(const ComplexField& f) {
  require_periodic(f.grid(), "to_momentum");
  auto work = f.data();
  detail::fft_forward(f.grid(), work);
  const double s = 1.0 / std::sqrt(double(f.size()));
  for (auto& c : work) c *= s;
  return ComplexField(f.grid(), std::move(work));
}

ComplexField from_momentum(const ComplexField& f) {
  require_periodic(f.grid(), "from_momentum");
  auto work = f.data();
  detail::fft_backward(f.grid(), work);
  const double s = 1.0 / std::sqrt(double(f.size()));
  for (auto& c : work) c *= s;
  return ComplexField(f.grid(), std::move(work));
}

ComplexField apply_momentum_multiplier(const ComplexField& f,
                                       const std::function<Complex(const Point&)>& multiplier) {
  const Grid& g = f.grid();
  require_periodic(g, "momentum-space multiplier");
  auto work = f.data();
  detail::fft_forward(g, work);
  const double inv_n = 1.0 / double(g.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    Point k{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a)
      k[static_cast<std::size_t>(a)] = g.wavenumber(a, axis_index(g, i, a));
    work[i] *= multiplier(k) * inv_n;
  }
  detail::fft_backward(g, work);
  return ComplexField(g, std::move(work));
}

double integrate(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.grid().cell_volume();
}

Complex integrate(const ComplexField& f) {
  Complex sum{};
  for (const auto& v : f.values()) sum += v;
  return sum * f.grid().cell_volume();
}

Complex inner_product(const ComplexField& a, const ComplexField& b) {
  a.check_same(b);
  Complex sum{};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum * a.grid().cell_volume();
}

double norm_squared(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return sum * f.grid().cell_volume();
}

double l2_norm(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return std::sqrt(sum * f.grid().cell_volume());
}

double l2_norm(const ComplexField& f) { return std::sqrt(norm_squared(f)); }

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace nonloc
