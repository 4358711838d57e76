#pragma once

#include <string>
#include <vector>

#include "nonloc/dynamics.hpp"
#include "nonloc/field.hpp"
#include "nonloc/ncalgebra.hpp"
#include "nonloc/potentials.hpp"

namespace nonloc {

// Every sink is real: sigma_X = -(2/hbar) Im(conj(psi) H_X psi) for the part
// H_X of the Hamiltonian, so that d rho/dt + div J + sum sigma = 0.

RealField density(const ComplexField& psi);

/// J = (hbar/m) Im(conj(psi) grad psi).
VectorField current(const ComplexField& psi, double mass, double hbar);

/// -(2/hbar) Im(conj(psi) h_psi) for any operator output h_psi = H_X psi.
RealField sink_density(const ComplexField& psi, const ComplexField& h_psi, double hbar);

/// Non-local sink from the direct quadrature of the kernel.
RealField sink_nonlocal(const ComplexField& psi, const NonlocalKernelSpec& kernel, double hbar);

/// -(2/hbar) Im(V) |psi|^2; exactly zero where V is real.
RealField sink_local(const ComplexField& psi, const ComplexField& v, double hbar);

/// sink_local plus the sink of the Theta correction (i/2) Theta (dV)(d psi).
RealField sink_local_nc(const ComplexField& psi, const LocalPotentialField& v, const NCParams& nc,
                        double hbar);

/// Sink of the Bopp term -(1/m hbar) eta.L: (2/(m hbar^2)) Im(conj(psi) eta.L psi).
RealField sink_nc_phase(const ComplexField& psi, const NCParams& nc, double mass, double hbar);

struct SinkFields {
  RealField sigma_NL;
  RealField sigma_L;
  RealField sigma_L_nc;  // includes sigma_L
  RealField sigma_C;
};

/// All sinks of `h` at psi, using the same operators as the propagator.
SinkFields compute_sinks(const Hamiltonian& h, const ComplexField& psi);

struct SinkIntegrals {
  double NL = 0.0;
  double L = 0.0;
  double L_nc = 0.0;
  double C = 0.0;
};

/// Which terms enter the residual. Turning one off measures how much it matters.
struct ResidualTerms {
  bool nonlocal = true;
  bool local = true;
  bool theta = true;  // Theta part of sigma_L_nc (off: use sigma_L)
  bool phase = true;  // sigma_C
};

class ContinuityReport {
 public:
  ContinuityReport(RealField rho, VectorField j, SinkFields sinks, RealField drho_dt, double dt);

  const RealField& rho() const noexcept { return rho_; }
  const VectorField& J() const noexcept { return j_; }
  const SinkFields& sinks() const noexcept { return sinks_; }
  const RealField& drho_dt() const noexcept { return drho_dt_; }
  double dt() const noexcept { return dt_; }

  /// drho_dt + div J + sigma_NL + sigma_L_nc + sigma_C, recomputed on every call.
  RealField residual(const ResidualTerms& terms = {}) const;
  double residual_l2(const ResidualTerms& terms = {}) const;
  double residual_max(const ResidualTerms& terms = {}) const;
  SinkIntegrals global_sink_integrals() const;

 private:
  RealField rho_;
  VectorField j_;
  SinkFields sinks_;
  RealField drho_dt_;
  double dt_;
};

/// Report for one step psi_prev -> psi_next of length dt. J and the sinks are
/// taken at the midpoint state (psi_prev + psi_next)/2; drho_dt is the centred
/// difference (|psi_next|^2 - |psi_prev|^2)/dt.
ContinuityReport continuity_report(const ComplexField& psi_prev, const ComplexField& psi_next,
                                   double dt, const Hamiltonian& h);

/// Solves lap chi = -source. Periodic grids: spectral, zero-mean gauge, needs
/// |integral(source)| <= 1e-8. Dirichlet-zero grids: conjugate gradients on the
/// finite-difference Laplacian.
RealField poisson_solve(const RealField& source);

enum class CurrentMode { commutative, nc };

struct CurrentDecomposition {
  VectorField J;
  VectorField J_NL;
  VectorField J_L;
  VectorField kappa;
  VectorField J_tot;
  RealField chi_NL;
  RealField phi_L;
  RealField phi_C;
  double div_Jtot_l2 = 0.0;
  /// ||div J_tot + drho_dt||.
  double balance_l2 = 0.0;
  double drho_dt_l2 = 0.0;
  /// Sinks whose periodic Poisson problem has no solution (nonzero integral);
  /// their correction is left at zero.
  std::vector<std::string> irreducible;
};

/// J_NL = -grad chi_NL, J_L = -grad phi_L, kappa = grad phi_C with
/// lap chi_NL = -sigma_NL, lap phi_L = -sigma_L(_nc), lap phi_C = sigma_C, so
/// div J_tot = div J + sum sigma = -drho_dt.
CurrentDecomposition corrected_currents(const ContinuityReport& report, CurrentMode mode);

}  // namespace nonloc
