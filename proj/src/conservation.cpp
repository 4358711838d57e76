#include "nonloc/conservation.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nonloc/fieldops.hpp"
#include "nonloc/krylov.hpp"
#include "nonloc/log.hpp"

namespace nonloc {

RealField density(const ComplexField& psi) {
  RealField out(psi.grid());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::norm(psi[i]);
  return out;
}

VectorField current(const ComplexField& psi, double mass, double hbar) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("current needs positive mass and hbar");
  const auto d = gradients(psi);
  VectorField j(psi.grid());
  const double s = hbar / mass;
  for (int a = 0; a < psi.grid().dim(); ++a)
    for (std::size_t i = 0; i < psi.size(); ++i)
      j[a][i] = s * (std::conj(psi[i]) * d[static_cast<std::size_t>(a)][i]).imag();
  return j;
}

RealField sink_density(const ComplexField& psi, const ComplexField& h_psi, double hbar) {
  psi.check_same(h_psi);
  RealField out(psi.grid());
  const double s = -2.0 / hbar;
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = s * (std::conj(psi[i]) * h_psi[i]).imag();
  return out;
}

RealField sink_nonlocal(const ComplexField& psi, const NonlocalKernelSpec& kernel, double hbar) {
  kernel.check_resolvable(psi.grid());
  return sink_density(psi, apply_nonlocal(kernel, psi), hbar);
}

RealField sink_local(const ComplexField& psi, const ComplexField& v, double hbar) {
  psi.check_same(v);
  RealField out(psi.grid());
  const double s = -2.0 / hbar;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = v[i].imag();
    out[i] = w == 0.0 ? 0.0 : s * w * std::norm(psi[i]);
  }
  return out;
}

RealField sink_local_nc(const ComplexField& psi, const LocalPotentialField& v, const NCParams& nc,
                        double hbar) {
  RealField out = sink_local(psi, v.value, hbar);
  nc.check_dimension(psi.grid().dim());
  if (nc.space_commutative() || v.is_zero()) return out;
  out += sink_density(psi, star_correction(v, psi, nc), hbar);
  return out;
}

RealField sink_nc_phase(const ComplexField& psi, const NCParams& nc, double mass, double hbar) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("sink_nc_phase needs positive mass and hbar");
  nc.check_dimension(psi.grid().dim());
  if (nc.phase_commutative()) return RealField(psi.grid());
  const NCParams p = validate_nc_params(nc.theta(), nc.eta(), hbar);
  ComplexField bopp = eta_dot_angular_momentum(psi, p);
  bopp *= -1.0 / (mass * hbar);
  return sink_density(psi, bopp, hbar);
}

SinkFields compute_sinks(const Hamiltonian& h, const ComplexField& psi) {
  const Grid& g = psi.grid();
  const double hbar = h.hbar();
  RealField s_nl = h.has_nonlocal() ? sink_density(psi, h.nonlocal_term(psi), hbar) : RealField(g);
  RealField s_l = sink_local(psi, h.local_field().value, hbar);
  RealField s_lnc = s_l;
  if (!h.nc().space_commutative() && !h.local_field().is_zero())
    s_lnc += sink_density(psi, star_correction(h.local_field(), psi, h.nc()), hbar);
  RealField s_c = sink_nc_phase(psi, h.nc(), h.mass(), hbar);
  return {std::move(s_nl), std::move(s_l), std::move(s_lnc), std::move(s_c)};
}

// ---------------------------------------------------------------------------

ContinuityReport::ContinuityReport(RealField rho, VectorField j, SinkFields sinks, RealField drho_dt,
                                   double dt)
    : rho_(std::move(rho)), j_(std::move(j)), sinks_(std::move(sinks)), drho_dt_(std::move(drho_dt)), dt_(dt) {
  rho_.check_same(drho_dt_);
  rho_.check_same(j_[0]);
}

RealField ContinuityReport::residual(const ResidualTerms& terms) const {
  RealField r = drho_dt_;
  r += divergence(j_);
  if (terms.nonlocal) r += sinks_.sigma_NL;
  if (terms.local) r += terms.theta ? sinks_.sigma_L_nc : sinks_.sigma_L;
  if (terms.phase) r += sinks_.sigma_C;
  return r;
}

double ContinuityReport::residual_l2(const ResidualTerms& terms) const {
  return l2_norm(residual(terms));
}

double ContinuityReport::residual_max(const ResidualTerms& terms) const {
  return max_abs(residual(terms));
}

SinkIntegrals ContinuityReport::global_sink_integrals() const {
  return {integrate(sinks_.sigma_NL), integrate(sinks_.sigma_L), integrate(sinks_.sigma_L_nc),
          integrate(sinks_.sigma_C)};
}

ContinuityReport continuity_report(const ComplexField& psi_prev, const ComplexField& psi_next,
                                   double dt, const Hamiltonian& h) {
  psi_prev.check_same(psi_next);
  if (!(psi_prev.grid() == h.grid())) throw ShapeError("snapshots and Hamiltonian live on different grids");
  if (!(dt > 0.0)) throw DomainError("continuity_report needs dt > 0");
  ComplexField mid = psi_prev + psi_next;
  mid *= 0.5;
  RealField drho(psi_prev.grid());
  for (std::size_t i = 0; i < drho.size(); ++i)
    drho[i] = (std::norm(psi_next[i]) - std::norm(psi_prev[i])) / dt;
  return ContinuityReport(density(mid), current(mid, h.mass(), h.hbar()), compute_sinks(h, mid),
                          std::move(drho), dt);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kCompatibilityTol = 1e-8;

RealField poisson_periodic(const RealField& source) {
  const double total = integrate(source);
  if (std::abs(total) > kCompatibilityTol)
    throw CompatibilityError(fmt::format(
        "periodic Poisson source integrates to {:.3e}; a solution needs zero integral", total));
  ComplexField chi = apply_momentum_multiplier(to_complex(source), [](const Point& k) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return k2 == 0.0 ? Complex{} : Complex(1.0 / k2, 0.0);
  });
  return real_part(chi);
}

RealField poisson_dirichlet(const RealField& source) {
  const Grid& g = source.grid();
  RealOperator op = [&g](const std::vector<double>& x) {
    RealField lap = laplacian(RealField(g, x));
    std::vector<double> out = std::move(lap.data());
    for (auto& v : out) v = -v;
    return out;
  };
  std::vector<double> x(g.size(), 0.0);
  const int max_it = static_cast<int>(std::min<std::size_t>(20 * g.size() + 100, 1000000));
  conjugate_gradient(op, source.data(), x, 1e-12, max_it);
  return RealField(g, std::move(x));
}

bool all_zero(const RealField& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) return false;
  return true;
}

VectorField scaled_gradient(const RealField& f, double s) {
  VectorField v = gradients(f);
  v *= s;
  return v;
}

}  // namespace

RealField poisson_solve(const RealField& source) {
  if (!source.all_finite()) throw NumericalError("Poisson source has non-finite values");
  if (all_zero(source)) return RealField(source.grid());
  return source.grid().periodic() ? poisson_periodic(source) : poisson_dirichlet(source);
}

CurrentDecomposition corrected_currents(const ContinuityReport& report, CurrentMode mode) {
  const Grid& g = report.rho().grid();
  const auto& s = report.sinks();
  CurrentDecomposition out{report.J(), VectorField(g), VectorField(g), VectorField(g), report.J(),
                           RealField(g), RealField(g), RealField(g), 0.0, 0.0, 0.0, {}};

  // Returns the Poisson potential for `source`, or a zero field (flagged) when
  // the periodic problem has no solution.
  auto solve = [&](const RealField& source, const char* name) {
    if (all_zero(source)) return RealField(g);
    if (g.periodic()) {
      const double total = integrate(source);
      if (std::abs(total) > kCompatibilityTol) {
        log().info("sink {} integrates to {:.3e} on a periodic grid; its correction is irreducible and left at zero",
                   name, total);
        out.irreducible.emplace_back(name);
        return RealField(g);
      }
    }
    return poisson_solve(source);
  };

  const bool nc = mode == CurrentMode::nc;
  out.chi_NL = solve(s.sigma_NL, "NL");
  out.phi_L = solve(nc ? s.sigma_L_nc : s.sigma_L, nc ? "L_nc" : "L");
  if (nc && !all_zero(s.sigma_C)) {
    RealField neg = s.sigma_C;
    neg *= -1.0;
    out.phi_C = solve(neg, "C");
  }

  if (!all_zero(out.chi_NL)) {
    out.J_NL = scaled_gradient(out.chi_NL, -1.0);
    out.J_tot += out.J_NL;
  }
  if (!all_zero(out.phi_L)) {
    out.J_L = scaled_gradient(out.phi_L, -1.0);
    out.J_tot += out.J_L;
  }
  if (!all_zero(out.phi_C)) {
    out.kappa = gradients(out.phi_C);
    out.J_tot += out.kappa;
  }

  RealField div = divergence(out.J_tot);
  out.div_Jtot_l2 = l2_norm(div);
  out.drho_dt_l2 = l2_norm(report.drho_dt());
  div += report.drho_dt();
  out.balance_l2 = l2_norm(div);
  return out;
}

}  // namespace nonloc
