#include "nonloc/potentials.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nonloc/fieldops.hpp"

namespace nonloc {

std::string to_string(LocalKind k) {
  switch (k) {
    case LocalKind::none: return "none";
    case LocalKind::linear: return "linear";
    case LocalKind::harmonic: return "harmonic";
    case LocalKind::gaussian_well: return "gaussian-well";
    case LocalKind::complex_absorber: return "complex-absorber";
  }
  return "unknown";
}

LocalPotentialSpec LocalPotentialSpec::linear(double h) {
  LocalPotentialSpec s;
  s.kind = LocalKind::linear;
  s.slope = h;
  return s;
}

LocalPotentialSpec LocalPotentialSpec::harmonic(double omega, double mass) {
  if (!(mass > 0.0)) throw DomainError("harmonic potential needs a positive mass");
  LocalPotentialSpec s;
  s.kind = LocalKind::harmonic;
  s.omega = omega;
  s.mass = mass;
  return s;
}

LocalPotentialSpec LocalPotentialSpec::gaussian_well(double depth, double width) {
  if (!(width > 0.0)) throw DomainError("gaussian-well width must be positive");
  LocalPotentialSpec s;
  s.kind = LocalKind::gaussian_well;
  s.depth = depth;
  s.width = width;
  return s;
}

LocalPotentialSpec LocalPotentialSpec::complex_absorber(double w0, double lo, double hi) {
  if (!(w0 >= 0.0)) throw DomainError("absorber strength W0 must be >= 0");
  if (!(lo < hi)) throw DomainError("absorber region needs lo < hi");
  LocalPotentialSpec s;
  s.kind = LocalKind::complex_absorber;
  s.absorber_strength = w0;
  s.region_lo = lo;
  s.region_hi = hi;
  return s;
}

LocalPotentialField LocalPotentialField::from_samples(ComplexField value) {
  auto grad = gradients(value);
  return {std::move(value), std::move(grad)};
}

bool LocalPotentialField::is_zero() const {
  return std::all_of(value.values().begin(), value.values().end(),
                     [](const Complex& v) { return v == Complex{}; });
}

bool LocalPotentialField::is_real() const {
  return std::all_of(value.values().begin(), value.values().end(),
                     [](const Complex& v) { return v.imag() == 0.0; });
}

LocalPotentialField eval_local(const LocalPotentialSpec& spec, const Grid& grid) {
  const int dim = grid.dim();
  LocalPotentialField out{ComplexField(grid),
                          std::vector<ComplexField>(static_cast<std::size_t>(dim), ComplexField(grid))};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point r = grid.position(i);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += r[static_cast<std::size_t>(a)] * r[static_cast<std::size_t>(a)];
    switch (spec.kind) {
      case LocalKind::none:
        break;
      case LocalKind::linear:
        out.value[i] = spec.slope * r[0];
        out.gradient[0][i] = spec.slope;
        break;
      case LocalKind::harmonic: {
        const double k = spec.mass * spec.omega * spec.omega;
        out.value[i] = 0.5 * k * r2;
        for (int a = 0; a < dim; ++a)
          out.gradient[static_cast<std::size_t>(a)][i] = k * r[static_cast<std::size_t>(a)];
        break;
      }
      case LocalKind::gaussian_well: {
        const double s2 = spec.width * spec.width;
        const double v = -spec.depth * std::exp(-0.5 * r2 / s2);
        out.value[i] = v;
        for (int a = 0; a < dim; ++a)
          out.gradient[static_cast<std::size_t>(a)][i] = -v * r[static_cast<std::size_t>(a)] / s2;
        break;
      }
      case LocalKind::complex_absorber: {
        bool inside = true;
        for (int a = 0; a < dim; ++a) {
          const double x = r[static_cast<std::size_t>(a)];
          inside = inside && x >= spec.region_lo && x <= spec.region_hi;
        }
        if (inside) out.value[i] = Complex(0.0, -spec.absorber_strength);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

NonlocalKernelSpec NonlocalKernelSpec::frahn_lemmer(double v0, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError(fmt::format("frahn-lemmer beta must be positive, got {}", beta));
  if (!std::isfinite(v0)) throw DomainError("frahn-lemmer V0 must be finite");
  return NonlocalKernelSpec(FrahnLemmer{v0, beta});
}

NonlocalKernelSpec NonlocalKernelSpec::tabulated(std::size_t n, std::vector<double> samples,
                                                 bool symmetric) {
  if (samples.size() != n * n)
    throw ShapeError(fmt::format("tabulated kernel needs {} samples, got {}", n * n, samples.size()));
  if (symmetric) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(samples[i * n + j] - samples[j * n + i]) > 1e-12)
          throw DomainError(fmt::format("tabulated kernel flagged symmetric but K[{}][{}] != K[{}][{}]",
                                        i, j, j, i));
  }
  return NonlocalKernelSpec(TabulatedKernel{n, std::move(samples), symmetric});
}

bool NonlocalKernelSpec::real_symmetric() const {
  return is_frahn_lemmer() || tabulated_params().symmetric;
}

void NonlocalKernelSpec::check_resolvable(const Grid& grid) const {
  if (!is_frahn_lemmer()) {
    const auto& t = tabulated_params();
    if (grid.dim() != 1 || grid.points(0) != t.n)
      throw ShapeError(fmt::format("tabulated kernel of size {} does not fit grid {}", t.n,
                                   grid.describe()));
    return;
  }
  const double beta = frahn_lemmer_params().beta;
  for (int a = 0; a < grid.dim(); ++a) {
    if (beta < 2.0 * grid.spacing(a))
      throw ResolutionError(fmt::format("beta = {} is under-resolved: need beta >= 2 h = {} on axis {}",
                                        beta, 2.0 * grid.spacing(a), a));
    if (beta > grid.extent(a) / 8.0)
      throw ResolutionError(fmt::format("beta = {} too wide for the box: need beta <= L/8 = {} on axis {}",
                                        beta, grid.extent(a) / 8.0, a));
  }
}

double frahn_lemmer_eval(const Point& r, const Point& rp, double v0, double beta, int dim) {
  if (!(beta > 0.0)) throw DomainError(fmt::format("beta must be positive, got {}", beta));
  if (dim < 1 || dim > 3) throw DomainError("dim must be 1..3");
  double d2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double d = r[static_cast<std::size_t>(a)] - rp[static_cast<std::size_t>(a)];
    d2 += d * d;
  }
  return v0 * std::pow(M_PI * beta * beta, -0.5 * dim) * std::exp(-d2 / (beta * beta));
}

double kernel_normalization(const NonlocalKernelSpec& kernel, const Grid& grid) {
  kernel.check_resolvable(grid);
  if (!kernel.is_frahn_lemmer()) {
    const auto& t = kernel.tabulated_params();
    const std::size_t c = t.n / 2;
    double sum = 0.0;
    for (std::size_t j = 0; j < t.n; ++j) sum += t.at(c, j);
    return sum * grid.spacing(0);
  }
  const double beta = kernel.frahn_lemmer_params().beta;
  const Point centre{0.0, 0.0, 0.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Point rp = grid.position(i);
    if (grid.periodic()) {
      for (int a = 0; a < grid.dim(); ++a) {
        auto& x = rp[static_cast<std::size_t>(a)];
        x -= grid.extent(a) * std::round(x / grid.extent(a));
      }
    }
    sum += frahn_lemmer_eval(centre, rp, 1.0, beta, grid.dim());
  }
  return sum * grid.cell_volume();
}

namespace {

// Per-axis 1-D Gaussian quadrature weights, indexed by source-minus-target
// offset + (n - 1).
std::vector<double> axis_weights(const Grid& grid, int axis, double beta) {
  const auto n = static_cast<long>(grid.points(axis));
  const double h = grid.spacing(axis);
  const double norm = h / std::sqrt(M_PI * beta * beta);
  std::vector<double> w(static_cast<std::size_t>(2 * n - 1));
  for (long off = -(n - 1); off <= n - 1; ++off) {
    long m = off;
    if (grid.periodic()) {
      m = ((off % n) + n) % n;
      if (2 * m >= n) m -= n;  // minimum image
    }
    const double d = double(m) * h;
    w[static_cast<std::size_t>(off + n - 1)] = norm * std::exp(-d * d / (beta * beta));
  }
  return w;
}

void convolve_axis(const Grid& grid, std::vector<Complex>& data, int axis,
                   const std::vector<double>& w) {
  const auto n = grid.points(axis);
  const auto s = grid.stride(axis);
  std::vector<Complex> line(n), out(n);
  for (std::size_t base = 0; base < grid.size(); ++base) {
    if ((base / s) % n != 0) continue;  // visit each line once, from its first point
    for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * s];
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t jp = 0; jp < n; ++jp) {
        const long off = static_cast<long>(jp) - static_cast<long>(j);
        acc += w[static_cast<std::size_t>(off + static_cast<long>(n) - 1)] * line[jp];
      }
      out[j] = acc;
    }
    for (std::size_t j = 0; j < n; ++j) data[base + j * s] = out[j];
  }
}

}  // namespace

ComplexField apply_nonlocal(const NonlocalKernelSpec& kernel, const ComplexField& psi) {
  const Grid& grid = psi.grid();
  kernel.check_resolvable(grid);
  if (!kernel.is_frahn_lemmer()) {
    const auto& t = kernel.tabulated_params();
    const double dx = grid.spacing(0);
    ComplexField out(grid);
    for (std::size_t i = 0; i < t.n; ++i) {
      Complex acc{};
      for (std::size_t j = 0; j < t.n; ++j) acc += t.at(i, j) * psi[j];
      out[i] = acc * dx;
    }
    return out;
  }
  const auto& fl = kernel.frahn_lemmer_params();
  auto data = psi.data();
  for (int a = 0; a < grid.dim(); ++a) convolve_axis(grid, data, a, axis_weights(grid, a, fl.beta));
  for (auto& v : data) v *= fl.v0;
  return ComplexField(grid, std::move(data));
}

double frahn_lemmer_multiplier(double v0, double beta, double k2) {
  return v0 * std::exp(-0.25 * k2 * beta * beta);
}

ComplexField apply_nonlocal_momentum(double v0, double beta, const ComplexField& psi,
                                     double hbar) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  // exp(-p^2 beta^2 / 4 hbar^2) with p = hbar k: hbar drops out.
  return apply_momentum_multiplier(psi, [&](const Point& k) {
    return Complex(frahn_lemmer_multiplier(v0, beta, k[0] * k[0] + k[1] * k[1] + k[2] * k[2]), 0.0);
  });
}

double dispersion_residual(double k, double energy, double v0, double beta, double mass,
                           double hbar) {
  const double p = hbar * k;
  return energy - p * p / (2.0 * mass) - frahn_lemmer_multiplier(v0, beta, k * k);
}

std::vector<double> dispersion_solve(double energy, double v0, double beta, double mass,
                                     double hbar) {
  for (double v : {energy, v0, beta, mass, hbar})
    if (!std::isfinite(v)) throw DomainError("dispersion inputs must be finite");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("mass and hbar must be positive");

  const auto f = [&](double k) { return dispersion_residual(k, energy, v0, beta, mass, hbar); };
  const double k_max =
      4.0 * std::sqrt(2.0 * mass * std::max({std::abs(energy), std::abs(v0), 1.0})) / hbar;
  constexpr int scan_intervals = 1 << 16;

  std::vector<double> roots;
  double k_prev = 0.0;
  double f_prev = f(0.0);
  if (f_prev == 0.0) roots.push_back(0.0);
  for (int i = 1; i <= scan_intervals; ++i) {
    const double k = k_max * double(i) / scan_intervals;
    const double fk = f(k);
    if (fk == 0.0) {
      roots.push_back(k);
    } else if (f_prev != 0.0 && std::signbit(fk) != std::signbit(f_prev)) {
      double lo = k_prev, hi = k, flo = f_prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi);
    }
    k_prev = k;
    f_prev = fk;
  }
  return roots;
}

}  // namespace nonloc
