#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nonloc/field.hpp"

namespace nonloc {

// ---------------------------------------------------------------------------
// Local potentials V_L(r)
// ---------------------------------------------------------------------------

enum class LocalKind { none, linear, harmonic, gaussian_well, complex_absorber };

std::string to_string(LocalKind k);

/// Analytic local potential. Coordinates are the box-centred grid coordinates.
///
///   linear          V = h x              (x = first axis)
///   harmonic        V = m omega^2 |r|^2 / 2
///   gaussian-well   V = -depth exp(-|r|^2 / (2 width^2))
///   complex-absorber V = -i W0 inside [lo, hi] on every axis, 0 outside
struct LocalPotentialSpec {
  LocalKind kind = LocalKind::none;
  double slope = 0.0;
  double omega = 0.0;
  double mass = 1.0;
  double depth = 0.0;
  double width = 1.0;
  double absorber_strength = 0.0;
  double region_lo = -1e300;
  double region_hi = 1e300;

  static LocalPotentialSpec none() { return {}; }
  static LocalPotentialSpec linear(double h);
  static LocalPotentialSpec harmonic(double omega, double mass = 1.0);
  static LocalPotentialSpec gaussian_well(double depth, double width);
  static LocalPotentialSpec complex_absorber(double w0, double lo = -1e300, double hi = 1e300);

  bool is_real() const { return kind != LocalKind::complex_absorber || absorber_strength == 0.0; }
};

/// Sampled potential plus its analytic gradient. The gradient is carried
/// explicitly because the analytic forms need not be periodic (h x has a jump
/// at the box wrap), so differentiating the samples spectrally would ring.
struct LocalPotentialField {
  ComplexField value;
  std::vector<ComplexField> gradient;  // one per axis

  /// Potential with no analytic gradient: differentiate the samples.
  static LocalPotentialField from_samples(ComplexField value);
  bool is_zero() const;
  bool is_real() const;
};

LocalPotentialField eval_local(const LocalPotentialSpec& spec, const Grid& grid);

// ---------------------------------------------------------------------------
// Non-local kernels V_NL(r, r')
// ---------------------------------------------------------------------------

/// V_NL(r, r') = V0 (pi beta^2)^(-dim/2) exp(-|r - r'|^2 / beta^2).
/// The local-average factor U is taken as the constant V0.
struct FrahnLemmer {
  double v0 = 0.0;
  double beta = 1.0;
};

/// Explicit 1-D kernel matrix K[i][j], row-major, n x n. Applied as
/// (K psi)_i = sum_j K[i][j] psi_j dx.
struct TabulatedKernel {
  std::size_t n = 0;
  std::vector<double> samples;
  bool symmetric = true;

  double at(std::size_t i, std::size_t j) const { return samples[i * n + j]; }
};

class NonlocalKernelSpec {
 public:
  static NonlocalKernelSpec frahn_lemmer(double v0, double beta);
  static NonlocalKernelSpec tabulated(std::size_t n, std::vector<double> samples,
                                      bool symmetric);

  bool is_frahn_lemmer() const { return std::holds_alternative<FrahnLemmer>(kind_); }
  const FrahnLemmer& frahn_lemmer_params() const { return std::get<FrahnLemmer>(kind_); }
  const TabulatedKernel& tabulated_params() const { return std::get<TabulatedKernel>(kind_); }
  bool real_symmetric() const;

  /// Throws unless the kernel can be applied on `grid`: tabulated kernels need
  /// a matching 1-D grid; frahn-lemmer needs 2 h <= beta <= L/8 on every axis.
  void check_resolvable(const Grid& grid) const;

 private:
  explicit NonlocalKernelSpec(std::variant<FrahnLemmer, TabulatedKernel> k) : kind_(std::move(k)) {}
  std::variant<FrahnLemmer, TabulatedKernel> kind_;
};

double frahn_lemmer_eval(const Point& r, const Point& rp, double v0, double beta, int dim);

/// Integral of the normalised kernel shape over r' with r at the grid
/// centre (for tabulated kernels: the centre row sum times dx).
double kernel_normalization(const NonlocalKernelSpec& kernel, const Grid& grid);

/// Direct quadrature sum_{r'} K(r, r') psi(r') dV. Periodic grids use the
/// minimum-image distance. The Gaussian is evaluated as a per-axis offset
/// stencil, applied axis by axis (it factorises exactly).
ComplexField apply_nonlocal(const NonlocalKernelSpec& kernel, const ComplexField& psi);

/// Momentum-space form: multiply the spectrum by V0 exp(-k^2 beta^2 / 4).
ComplexField apply_nonlocal_momentum(double v0, double beta, const ComplexField& psi,
                                     double hbar = 1.0);

/// The Gaussian momentum multiplier V0 exp(-|k|^2 beta^2 / 4).
double frahn_lemmer_multiplier(double v0, double beta, double k2);

/// All k >= 0 with E = (hbar k)^2 / 2m + V0 exp(-k^2 beta^2 / 4), ascending.
/// Sign-bracketing scan on [0, k_max] then bisection.
std::vector<double> dispersion_solve(double energy, double v0, double beta, double mass = 1.0,
                                     double hbar = 1.0);

double dispersion_residual(double k, double energy, double v0, double beta, double mass,
                           double hbar);

}  // namespace nonloc
