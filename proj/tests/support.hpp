#pragma once

// Shared helpers and independent oracles for the test binaries.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "nonloc/field.hpp"
#include "nonloc/fieldops.hpp"

namespace testing {

using nonloc::Complex;
using nonloc::ComplexField;
using nonloc::Grid;
using nonloc::Point;
using nonloc::RealField;

inline double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_l2(const ComplexField& a, const ComplexField& ref) {
  return nonloc::l2_norm(a - ref) / nonloc::l2_norm(ref);
}

/// Random trigonometric polynomial with |m_a| <= mmax modes per axis: exactly
/// periodic and band-limited, so spectral operators act on it without error.
inline ComplexField random_trig(const Grid& g, unsigned seed, int mmax = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  struct Mode {
    int m[3];
    Complex c;
  };
  std::vector<Mode> modes;
  const int d = g.dim();
  const int my = d > 1 ? mmax : 0, mz = d > 2 ? mmax : 0;
  for (int a = -mmax; a <= mmax; ++a)
    for (int b = -my; b <= my; ++b)
      for (int c = -mz; c <= mz; ++c) {
        const double damp = std::exp(-0.25 * (a * a + b * b + c * c));
        modes.push_back({{a, b, c}, damp * Complex(n01(rng), n01(rng))});
      }
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point r = g.position(i);
    Complex s{};
    for (const auto& md : modes) {
      double ph = 0.0;
      for (int a = 0; a < d; ++a)
        ph += 2.0 * std::numbers::pi * md.m[a] * r[static_cast<std::size_t>(a)] / g.extent(a);
      s += md.c * Complex(std::cos(ph), std::sin(ph));
    }
    f[i] = s;
  }
  return f;
}

inline RealField random_trig_real(const Grid& g, unsigned seed, int mmax = 4) {
  return nonloc::real_part(random_trig(g, seed, mmax));
}

/// A few random complex Gaussian blobs well inside the box (for kernels and
/// dirichlet grids, where exact periodicity is not needed).
inline ComplexField random_blobs(const Grid& g, unsigned seed, int count = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> n01;
  double lmin = g.extent(0);
  for (int a = 1; a < g.dim(); ++a) lmin = std::min(lmin, g.extent(a));
  ComplexField f(g);
  for (int b = 0; b < count; ++b) {
    Point c{0, 0, 0}, k{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) {
      c[static_cast<std::size_t>(a)] = u(rng) * g.extent(a) / 10.0;
      k[static_cast<std::size_t>(a)] = u(rng) * 1.5;
    }
    const double w = lmin / 16.0 * (1.0 + 0.3 * u(rng));
    const Complex amp(n01(rng), n01(rng));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point r = g.position(i);
      double r2 = 0.0, ph = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        const auto s = static_cast<std::size_t>(a);
        r2 += (r[s] - c[s]) * (r[s] - c[s]);
        ph += k[s] * r[s];
      }
      f[i] += amp * std::exp(-r2 / (2.0 * w * w)) * Complex(std::cos(ph), std::sin(ph));
    }
  }
  return f;
}

inline ComplexField normalized(ComplexField f) {
  f *= 1.0 / std::sqrt(nonloc::norm_squared(f));
  return f;
}

/// Direct double loop over all point pairs with the full (non-factorised)
/// Gaussian kernel and minimum-image distance on periodic grids.
inline ComplexField direct_kernel_quadrature(const ComplexField& psi, double v0, double beta) {
  const Grid& g = psi.grid();
  const int d = g.dim();
  const double pref = v0 * std::pow(std::numbers::pi * beta * beta, -0.5 * d);
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point r = g.position(i);
    Complex s{};
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Point rp = g.position(j);
      double d2 = 0.0;
      for (int a = 0; a < d; ++a) {
        double dx = r[static_cast<std::size_t>(a)] - rp[static_cast<std::size_t>(a)];
        if (g.periodic()) dx -= g.extent(a) * std::round(dx / g.extent(a));
        d2 += dx * dx;
      }
      s += std::exp(-d2 / (beta * beta)) * psi[j];
    }
    out[i] = pref * g.cell_volume() * s;
  }
  return out;
}

/// Brute-force dispersion roots: scan `n` intervals on [0, kmax], then polish
/// each bracketed sign change with Newton steps.
inline std::vector<double> dispersion_scan(double e, double v0, double beta, double m, double hbar,
                                           long n = 1000000) {
  auto f = [&](double k) {
    return e - hbar * hbar * k * k / (2.0 * m) - v0 * std::exp(-k * k * beta * beta / 4.0);
  };
  auto df = [&](double k) {
    return -hbar * hbar * k / m + v0 * (k * beta * beta / 2.0) * std::exp(-k * k * beta * beta / 4.0);
  };
  const double kmax = 4.0 * std::sqrt(2.0 * m * std::max({std::abs(e), std::abs(v0), 1.0})) / hbar;
  std::vector<double> roots;
  double k0 = 0.0, f0 = f(0.0);
  if (f0 == 0.0) roots.push_back(0.0);
  for (long i = 1; i <= n; ++i) {
    const double k1 = kmax * static_cast<double>(i) / static_cast<double>(n);
    const double f1 = f(k1);
    if (f1 == 0.0) {
      roots.push_back(k1);
    } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
      double k = 0.5 * (k0 + k1);
      for (int it = 0; it < 50; ++it) {
        const double step = f(k) / df(k);
        const double kn = k - step;
        if (kn < k0 || kn > k1) break;
        k = kn;
        if (std::abs(step) < 1e-16 * std::max(1.0, k)) break;
      }
      roots.push_back(k);
    }
    k0 = k1;
    f0 = f1;
  }
  return roots;
}

}  // namespace testing
