#pragma once

#include <array>
#include <vector>

#include "nonloc/field.hpp"
#include "nonloc/potentials.hpp"

namespace nonloc {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Non-commutativity parameters. Matrices are built as M_ij = eps_ijk v_k for
/// both theta (length^2) and eta (momentum^2).
class NCParams {
 public:
  NCParams() = default;

  const Vec3& theta() const noexcept { return theta_; }
  const Vec3& eta() const noexcept { return eta_; }
  double hbar() const noexcept { return hbar_; }

  Mat3 theta_matrix() const { return levi_civita_matrix(theta_); }
  Mat3 eta_matrix() const { return levi_civita_matrix(eta_); }

  /// xi = Tr(Theta eta) / 4 hbar^2 = -theta.eta / (2 hbar^2) in this convention.
  double xi() const;
  double hbar_eff() const { return hbar_ * (1.0 + xi()); }

  bool space_commutative() const { return theta_ == Vec3{0.0, 0.0, 0.0}; }
  bool phase_commutative() const { return eta_ == Vec3{0.0, 0.0, 0.0}; }
  bool commutative() const { return space_commutative() && phase_commutative(); }

  /// Rejects components that have no meaning on a `dim`-dimensional grid:
  /// dim 1 needs theta = eta = 0, dim 2 allows only the z components.
  void check_dimension(int dim) const;

  static Mat3 levi_civita_matrix(const Vec3& v);

 private:
  friend NCParams validate_nc_params(const Vec3&, const Vec3&, double);
  Vec3 theta_{0.0, 0.0, 0.0};
  Vec3 eta_{0.0, 0.0, 0.0};
  double hbar_ = 1.0;
};

/// Builds NCParams, enforcing hbar > 0 and |xi| < 1 (warns above 1e-2).
NCParams validate_nc_params(const Vec3& theta, const Vec3& eta, double hbar);

/// Theta_ab restricted to the first `dim` axes.
Mat3 theta_on_grid(const NCParams& nc, int dim);

/// f*g to first order: f g + (i/2) Theta_ab d_a f d_b g.
ComplexField star_product_first_order(const ComplexField& f, const ComplexField& g,
                                      const NCParams& nc);

/// V*psi to first order, using the potential's analytic gradient:
/// V psi + (i/2) Theta_ab (d_a V)(d_b psi).
ComplexField star_apply_local(const LocalPotentialField& v, const ComplexField& psi,
                              const NCParams& nc);

/// Only the Theta correction (i/2) Theta_ab (d_a V)(d_b psi).
ComplexField star_correction(const LocalPotentialField& v, const ComplexField& psi,
                             const NCParams& nc);
/// Same, reusing precomputed d_b psi.
ComplexField star_correction(const LocalPotentialField& v, const std::vector<ComplexField>& dpsi,
                             const NCParams& nc);

/// Angular momentum about the box centre, L = r x p with p = -i hbar grad.
/// Returns {L_z} on 2-D grids and {L_x, L_y, L_z} on 3-D grids.
std::vector<ComplexField> angular_momentum_apply(const ComplexField& psi, double hbar);
std::vector<ComplexField> angular_momentum_apply(const ComplexField& psi,
                                                 const std::vector<ComplexField>& dpsi,
                                                 double hbar);

/// sum_k eta_k L_k psi (only L_z on 2-D grids).
ComplexField eta_dot_angular_momentum(const ComplexField& psi, const NCParams& nc);
ComplexField eta_dot_angular_momentum(const ComplexField& psi,
                                      const std::vector<ComplexField>& dpsi, const NCParams& nc);

/// Bopp-shifted kinetic energy to first order in eta:
/// (1/2m) [ -hbar^2 lap psi - (2/hbar) eta.L psi ], hbar taken from `nc`.
ComplexField nc_kinetic_apply(const ComplexField& psi, const NCParams& nc, double mass);

/// Experimental upper bounds on the NC parameters, SI units (config preset
/// "paper-bounds"): Theta = 4e-40 m^2, eta = 1.76e-61 kg^2 m^2 s^-2.
struct ExperimentalBounds {
  static constexpr double theta_z = 4e-40;
  static constexpr double eta_z = 1.76e-61;
  static constexpr double hbar_si = 1.0546e-34;
};

}  // namespace nonloc
