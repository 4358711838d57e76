#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nonloc/field.hpp"
#include "nonloc/ncalgebra.hpp"
#include "nonloc/potentials.hpp"

namespace nonloc {

enum class NonlocalPath { quadrature, momentum, fl_approx };
enum class TimeMode { real_time, imaginary_time };
enum class Scheme { crank_nicolson, split_step };

std::string to_string(NonlocalPath p);
std::string to_string(TimeMode m);
std::string to_string(Scheme s);
NonlocalPath nonlocal_path_from_string(const std::string& s);
TimeMode time_mode_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);

/// Coefficients of the linearised Frahn-Lemmer NC equation
///   -a lap psi + b (eta.L) psi + V0 psi = E psi.
struct FlCoefficients {
  double a = 0.0;
  double b = 0.0;
};

/// a = hbar^2/2m + V0 beta^2/4, b = V0 beta^2/(2 hbar^3) - 1/(m hbar).
FlCoefficients fl_nc_coefficients(double v0, double beta, double mass, double hbar);

struct HamiltonianSpec {
  double mass = 1.0;
  double hbar = 1.0;
  LocalPotentialSpec local;
  std::optional<NonlocalKernelSpec> nonlocal;
  NCParams nc;  // only theta and eta are used; hbar comes from this struct
  NonlocalPath nonlocal_path = NonlocalPath::quadrature;
  std::optional<FlCoefficients> fl_coefficients;

  /// Fills fl_coefficients for the fl-approx path (and clears it otherwise).
  void set_path(NonlocalPath path);
};

/// A HamiltonianSpec bound to a grid, with the local potential sampled once.
/// The pieces are public so the sink densities can use exactly the operators
/// the propagator uses. apply() is pure and reentrant.
class Hamiltonian {
 public:
  Hamiltonian(HamiltonianSpec spec, const Grid& grid);

  const HamiltonianSpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return grid_; }
  const LocalPotentialField& local_field() const noexcept { return local_; }
  /// NC parameters carrying this Hamiltonian's hbar.
  const NCParams& nc() const noexcept { return nc_; }
  double mass() const noexcept { return spec_.mass; }
  double hbar() const noexcept { return spec_.hbar; }

  ComplexField apply(const ComplexField& psi) const;

  /// V_L psi + (i/2) Theta (dV)(d psi). Zero field when there is no local potential.
  ComplexField local_term(const ComplexField& psi) const;
  /// The non-local operator by the selected path. For fl-approx this is what
  /// remains of H after the plain kinetic and Bopp terms:
  /// V0 [psi - (beta^2/4) lap psi + (beta^2/2 hbar^3) eta.L psi].
  ComplexField nonlocal_term(const ComplexField& psi) const;
  bool has_nonlocal() const noexcept { return spec_.nonlocal.has_value(); }

  bool hermitian() const;
  /// Cheap upper estimate of the spectral radius of H.
  double spectral_radius_estimate() const;
  /// True when H = T(p) + V(x) with both parts diagonal in their own basis.
  bool splittable() const;
  /// Momentum-diagonal part used by split-step (kinetic + Gaussian multiplier).
  double momentum_symbol(const Point& k) const;

 private:
  void validate() const;

  HamiltonianSpec spec_;
  Grid grid_;
  NCParams nc_;
  LocalPotentialField local_;
};

ComplexField apply_hamiltonian(const HamiltonianSpec& spec, const ComplexField& psi);

/// Relative L2 gap between V0 exp(-p^2 beta^2/4 hbar^2) [1 + (beta^2/2 hbar^3) eta.L] psi
/// and the linearised V0 [1 + (beta^2/4) lap + (beta^2/2 hbar^3) eta.L] psi.
/// Periodic grids only.
double fl_expansion_error(const ComplexField& psi, double v0, double beta, const NCParams& nc,
                          double mass, double hbar);

struct PropagatorConfig {
  double dt = 1e-3;
  TimeMode mode = TimeMode::real_time;
  Scheme scheme = Scheme::crank_nicolson;
  double solver_tol = 1e-12;
  int max_iterations = 1000;

  void validate() const;
};

struct StepInfo {
  int iterations = 0;
  double residual = 0.0;
};

/// One step. Real time: Crank-Nicolson (or Strang split-step); imaginary time:
/// psi' = (1 - dt H/hbar) psi, renormalised.
ComplexField step(const ComplexField& psi, const Hamiltonian& h, const PropagatorConfig& cfg,
                  StepInfo* info = nullptr);

/// Owns a state and advances it; single writer.
class Propagator {
 public:
  Propagator(const Hamiltonian& h, PropagatorConfig cfg, ComplexField initial);

  const ComplexField& state() const noexcept { return psi_; }
  double time() const noexcept { return time_; }
  long steps_taken() const noexcept { return steps_; }
  const StepInfo& advance();

 private:
  const Hamiltonian& h_;
  PropagatorConfig cfg_;
  ComplexField psi_;
  double time_ = 0.0;
  long steps_ = 0;
  StepInfo last_;
};

/// Re <psi, H psi> / <psi, psi>.
double energy(const Hamiltonian& h, const ComplexField& psi);

/// Projection onto the L_z = m hbar sector of the four-fold rotation group,
/// (1/4) sum_q exp(i m q pi/2) R_q psi. Square 2-D grids only.
ComplexField project_lz_sector(const ComplexField& psi, int m);
/// psi rotated by +90 degrees about the box centre (exact on square grids).
ComplexField rotate_quarter(const ComplexField& psi);

struct GroundStateOptions {
  double energy_tol = 1e-10;
  /// If positive, also require ||H psi - E psi|| <= residual_tol.
  double residual_tol = 0.0;
  long max_steps = 200000;
  std::optional<int> lz_sector;
};

struct GroundStateResult {
  ComplexField state;
  double energy = 0.0;
  long steps = 0;
  double residual = 0.0;
};

GroundStateResult ground_state(const Hamiltonian& h, const PropagatorConfig& cfg,
                               ComplexField initial, const GroundStateOptions& opts = {});

}  // namespace nonloc
