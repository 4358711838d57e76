#include "nonloc/ncalgebra.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nonloc/fieldops.hpp"
#include "nonloc/log.hpp"

namespace nonloc {

Mat3 NCParams::levi_civita_matrix(const Vec3& v) {
  // M_ij = eps_ijk v_k
  Mat3 m{};
  m[0][1] = v[2];
  m[1][0] = -v[2];
  m[1][2] = v[0];
  m[2][1] = -v[0];
  m[2][0] = v[1];
  m[0][2] = -v[1];
  return m;
}

double NCParams::xi() const {
  const Mat3 t = theta_matrix();
  const Mat3 e = eta_matrix();
  double trace = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) trace += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                         e[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return trace / (4.0 * hbar_ * hbar_);
}

void NCParams::check_dimension(int dim) const {
  if (dim == 1 && !commutative())
    throw DomainError("non-commutative parameters require a grid of dim >= 2 (dim=1 needs theta = eta = 0)");
  if (dim == 2 && (theta_[0] != 0.0 || theta_[1] != 0.0 || eta_[0] != 0.0 || eta_[1] != 0.0))
    throw DomainError("on a 2-D grid only the out-of-plane components theta_z, eta_z may be nonzero");
}

NCParams validate_nc_params(const Vec3& theta, const Vec3& eta, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw DomainError(fmt::format("hbar must be positive, got {}", hbar));
  for (int k = 0; k < 3; ++k)
    if (!std::isfinite(theta[static_cast<std::size_t>(k)]) || !std::isfinite(eta[static_cast<std::size_t>(k)]))
      throw DomainError("non-commutative parameters must be finite");
  NCParams p;
  p.theta_ = theta;
  p.eta_ = eta;
  p.hbar_ = hbar;
  const double xi = p.xi();
  if (!(std::abs(xi) < 1.0))
    throw InconsistentParametersError(
        fmt::format("|xi| = {:.6g} violates the consistency condition |xi| << 1", std::abs(xi)));
  if (std::abs(xi) > 1e-2)
    log().warn("|xi| = {:.3g} is not small; first-order NC expansion may be poor", std::abs(xi));
  return p;
}

Mat3 theta_on_grid(const NCParams& nc, int dim) {
  nc.check_dimension(dim);
  Mat3 t = nc.theta_matrix();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (static_cast<int>(i) >= dim || static_cast<int>(j) >= dim) t[i][j] = 0.0;
  return t;
}

namespace {

// (i/2) Theta_ab A_a B_b summed over grid axes.
ComplexField theta_contract(const Mat3& t, const std::vector<ComplexField>& da,
                            const std::vector<ComplexField>& db) {
  const Grid& g = da.front().grid();
  ComplexField out(g);
  const Complex half_i(0.0, 0.5);
  for (int a = 0; a < g.dim(); ++a)
    for (int b = 0; b < g.dim(); ++b) {
      const double tab = t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (tab == 0.0) continue;
      const auto& fa = da[static_cast<std::size_t>(a)];
      const auto& gb = db[static_cast<std::size_t>(b)];
      for (std::size_t i = 0; i < g.size(); ++i) out[i] += half_i * tab * fa[i] * gb[i];
    }
  return out;
}

}  // namespace

ComplexField star_product_first_order(const ComplexField& f, const ComplexField& g,
                                      const NCParams& nc) {
  f.check_same(g);
  const Mat3 t = theta_on_grid(nc, f.grid().dim());
  ComplexField out = multiply(f, g);
  if (nc.space_commutative()) return out;
  out += theta_contract(t, gradients(f), gradients(g));
  return out;
}

ComplexField star_correction(const LocalPotentialField& v, const std::vector<ComplexField>& dpsi,
                             const NCParams& nc) {
  const Grid& g = v.value.grid();
  const Mat3 t = theta_on_grid(nc, g.dim());
  if (nc.space_commutative()) return ComplexField(g);
  return theta_contract(t, v.gradient, dpsi);
}

ComplexField star_correction(const LocalPotentialField& v, const ComplexField& psi,
                             const NCParams& nc) {
  if (nc.space_commutative()) {
    nc.check_dimension(psi.grid().dim());
    return ComplexField(psi.grid());
  }
  return star_correction(v, gradients(psi), nc);
}

ComplexField star_apply_local(const LocalPotentialField& v, const ComplexField& psi,
                              const NCParams& nc) {
  v.value.check_same(psi);
  nc.check_dimension(psi.grid().dim());
  ComplexField out = multiply(v.value, psi);
  if (nc.space_commutative()) return out;
  out += star_correction(v, psi, nc);
  return out;
}

std::vector<ComplexField> angular_momentum_apply(const ComplexField& psi,
                                                 const std::vector<ComplexField>& dpsi,
                                                 double hbar) {
  const Grid& g = psi.grid();
  if (g.dim() < 2) throw DomainError("angular momentum needs a grid of dim >= 2");
  const Complex mih(0.0, -hbar);
  // L_c = -i hbar (r_a d_b - r_b d_a) for (a, b, c) cyclic.
  auto component = [&](int a, int b) {
    ComplexField out(g);
    const auto& da = dpsi[static_cast<std::size_t>(a)];
    const auto& db = dpsi[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point r = g.position(i);
      out[i] = mih * (r[static_cast<std::size_t>(a)] * db[i] - r[static_cast<std::size_t>(b)] * da[i]);
    }
    return out;
  };
  if (g.dim() == 2) return {component(0, 1)};
  return {component(1, 2), component(2, 0), component(0, 1)};
}

std::vector<ComplexField> angular_momentum_apply(const ComplexField& psi, double hbar) {
  if (psi.grid().dim() < 2) throw DomainError("angular momentum needs a grid of dim >= 2");
  return angular_momentum_apply(psi, gradients(psi), hbar);
}

ComplexField eta_dot_angular_momentum(const ComplexField& psi,
                                      const std::vector<ComplexField>& dpsi, const NCParams& nc) {
  const Grid& g = psi.grid();
  nc.check_dimension(g.dim());
  ComplexField out(g);
  if (nc.phase_commutative()) return out;
  const auto l = angular_momentum_apply(psi, dpsi, nc.hbar());
  if (g.dim() == 2) {
    out = l[0];
    out *= nc.eta()[2];
    return out;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (nc.eta()[k] == 0.0) continue;
    for (std::size_t i = 0; i < g.size(); ++i) out[i] += nc.eta()[k] * l[k][i];
  }
  return out;
}

ComplexField eta_dot_angular_momentum(const ComplexField& psi, const NCParams& nc) {
  nc.check_dimension(psi.grid().dim());
  if (nc.phase_commutative()) return ComplexField(psi.grid());
  return eta_dot_angular_momentum(psi, gradients(psi), nc);
}

ComplexField nc_kinetic_apply(const ComplexField& psi, const NCParams& nc, double mass) {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  nc.check_dimension(psi.grid().dim());
  const double hbar = nc.hbar();
  ComplexField out = laplacian(psi);
  out *= -hbar * hbar / (2.0 * mass);
  if (nc.phase_commutative()) return out;
  ComplexField bopp = eta_dot_angular_momentum(psi, nc);
  bopp *= -1.0 / (mass * hbar);
  out += bopp;
  return out;
}

}  // namespace nonloc
