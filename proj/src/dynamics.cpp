#include "nonloc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "nonloc/fieldops.hpp"
#include "nonloc/krylov.hpp"
#include "nonloc/log.hpp"

namespace nonloc {

std::string to_string(NonlocalPath p) {
  switch (p) {
    case NonlocalPath::quadrature: return "quadrature";
    case NonlocalPath::momentum: return "momentum";
    case NonlocalPath::fl_approx: return "fl-approx";
  }
  return "?";
}

std::string to_string(TimeMode m) {
  return m == TimeMode::real_time ? "real-time" : "imaginary-time";
}

std::string to_string(Scheme s) {
  return s == Scheme::crank_nicolson ? "crank-nicolson" : "split-step";
}

NonlocalPath nonlocal_path_from_string(const std::string& s) {
  if (s == "quadrature") return NonlocalPath::quadrature;
  if (s == "momentum") return NonlocalPath::momentum;
  if (s == "fl-approx") return NonlocalPath::fl_approx;
  throw DomainError(fmt::format("unknown nonlocal_path '{}' (quadrature, momentum, fl-approx)", s));
}

TimeMode time_mode_from_string(const std::string& s) {
  if (s == "real-time") return TimeMode::real_time;
  if (s == "imaginary-time") return TimeMode::imaginary_time;
  throw DomainError(fmt::format("unknown mode '{}' (real-time, imaginary-time)", s));
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "crank-nicolson") return Scheme::crank_nicolson;
  if (s == "split-step") return Scheme::split_step;
  throw DomainError(fmt::format("unknown scheme '{}' (crank-nicolson, split-step)", s));
}

FlCoefficients fl_nc_coefficients(double v0, double beta, double mass, double hbar) {
  if (!(beta > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
    throw DomainError("fl_nc_coefficients needs positive beta, mass and hbar");
  FlCoefficients c;
  c.a = hbar * hbar / (2.0 * mass) + v0 * beta * beta / 4.0;
  c.b = v0 * beta * beta / (2.0 * hbar * hbar * hbar) - 1.0 / (mass * hbar);
  return c;
}

void HamiltonianSpec::set_path(NonlocalPath path) {
  nonlocal_path = path;
  fl_coefficients.reset();
  if (path == NonlocalPath::fl_approx && nonlocal && nonlocal->is_frahn_lemmer()) {
    const auto& fl = nonlocal->frahn_lemmer_params();
    fl_coefficients = fl_nc_coefficients(fl.v0, fl.beta, mass, hbar);
  }
}

// ---------------------------------------------------------------------------

Hamiltonian::Hamiltonian(HamiltonianSpec spec, const Grid& grid)
    : spec_(std::move(spec)), grid_(grid), local_(eval_local(spec_.local, grid_)) {
  if (!(spec_.mass > 0.0) || !std::isfinite(spec_.mass))
    throw DomainError(fmt::format("mass must be positive, got {}", spec_.mass));
  nc_ = validate_nc_params(spec_.nc.theta(), spec_.nc.eta(), spec_.hbar);
  validate();
}

void Hamiltonian::validate() const {
  nc_.check_dimension(grid_.dim());
  const bool fl_path = spec_.nonlocal_path == NonlocalPath::fl_approx;
  if (spec_.nonlocal) {
    const auto& k = *spec_.nonlocal;
    if (spec_.nonlocal_path != NonlocalPath::quadrature && !k.is_frahn_lemmer())
      throw ConfigurationError(fmt::format("nonlocal_path {} needs a frahn-lemmer kernel",
                                           to_string(spec_.nonlocal_path)));
    if (spec_.nonlocal_path == NonlocalPath::momentum && !grid_.periodic())
      throw ConfigurationError("nonlocal_path momentum needs a periodic grid");
    if (spec_.nonlocal_path == NonlocalPath::quadrature) k.check_resolvable(grid_);
  }
  if (fl_path != spec_.fl_coefficients.has_value() && spec_.nonlocal)
    throw ConfigurationError("fl_coefficients must be present exactly when nonlocal_path is fl-approx");
  if (!spec_.nonlocal && spec_.fl_coefficients)
    throw ConfigurationError("fl_coefficients given without a non-local kernel");
  if (spec_.fl_coefficients) {
    const auto& fl = spec_.nonlocal->frahn_lemmer_params();
    const auto expect = fl_nc_coefficients(fl.v0, fl.beta, spec_.mass, spec_.hbar);
    const auto& got = *spec_.fl_coefficients;
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
    if (!close(got.a, expect.a) || !close(got.b, expect.b))
      throw InconsistentParametersError(fmt::format(
          "fl_coefficients (a={}, b={}) disagree with the closed forms (a={}, b={})", got.a, got.b,
          expect.a, expect.b));
  }
}

namespace {

void add_scaled(ComplexField& out, const ComplexField& f, double s) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * f[i];
}

}  // namespace

ComplexField Hamiltonian::local_term(const ComplexField& psi) const {
  if (local_.is_zero()) return ComplexField(grid_);
  return star_apply_local(local_, psi, nc_);
}

ComplexField Hamiltonian::nonlocal_term(const ComplexField& psi) const {
  if (!spec_.nonlocal) return ComplexField(grid_);
  switch (spec_.nonlocal_path) {
    case NonlocalPath::quadrature:
      return apply_nonlocal(*spec_.nonlocal, psi);
    case NonlocalPath::momentum: {
      const auto& fl = spec_.nonlocal->frahn_lemmer_params();
      return apply_nonlocal_momentum(fl.v0, fl.beta, psi, spec_.hbar);
    }
    case NonlocalPath::fl_approx: {
      const auto& fl = spec_.nonlocal->frahn_lemmer_params();
      const double b2 = fl.beta * fl.beta;
      // Matches H on this path term by term: the -a lap split leaves
      // -(V0 beta^2/4) lap here, opposite in sign to the Taylor term of the Gaussian.
      ComplexField out = psi;
      add_scaled(out, laplacian(psi), -b2 / 4.0);
      if (!nc_.phase_commutative())
        add_scaled(out, eta_dot_angular_momentum(psi, nc_),
                   b2 / (2.0 * spec_.hbar * spec_.hbar * spec_.hbar));
      out *= fl.v0;
      return out;
    }
  }
  return ComplexField(grid_);
}

ComplexField Hamiltonian::apply(const ComplexField& psi) const {
  if (!(psi.grid() == grid_)) throw ShapeError("wavefunction grid does not match the Hamiltonian");
  const double hbar = spec_.hbar;
  const bool fl_path = spec_.nonlocal && spec_.nonlocal_path == NonlocalPath::fl_approx;

  // Kinetic part: -hbar^2/2m lap, or -a lap on the fl-approx path.
  ComplexField out = laplacian(psi);
  out *= fl_path ? -spec_.fl_coefficients->a : -hbar * hbar / (2.0 * spec_.mass);

  const bool need_grad = !nc_.phase_commutative() || (!nc_.space_commutative() && !local_.is_zero());
  std::vector<ComplexField> dpsi;
  if (need_grad) dpsi = gradients(psi);

  if (!nc_.phase_commutative()) {
    const double coef = fl_path ? spec_.fl_coefficients->b : -1.0 / (spec_.mass * hbar);
    add_scaled(out, eta_dot_angular_momentum(psi, dpsi, nc_), coef);
  }
  if (!local_.is_zero()) {
    out += multiply(local_.value, psi);
    if (!nc_.space_commutative()) out += star_correction(local_, dpsi, nc_);
  }
  if (spec_.nonlocal) {
    if (fl_path) {
      add_scaled(out, psi, spec_.nonlocal->frahn_lemmer_params().v0);
    } else {
      out += nonlocal_term(psi);
    }
  }
  return out;
}

bool Hamiltonian::hermitian() const {
  if (!local_.is_real()) return false;
  if (spec_.nonlocal && !spec_.nonlocal->real_symmetric()) return false;
  return true;
}

bool Hamiltonian::splittable() const {
  if (!grid_.periodic()) return false;
  if (!nc_.phase_commutative()) return false;
  if (!nc_.space_commutative() && !local_.is_zero()) return false;
  if (spec_.nonlocal && spec_.nonlocal_path == NonlocalPath::quadrature) return false;
  return true;
}

double Hamiltonian::momentum_symbol(const Point& k) const {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  if (spec_.nonlocal && spec_.nonlocal_path == NonlocalPath::fl_approx)
    return spec_.fl_coefficients->a * k2 + spec_.nonlocal->frahn_lemmer_params().v0;
  double s = spec_.hbar * spec_.hbar * k2 / (2.0 * spec_.mass);
  if (spec_.nonlocal) {
    const auto& fl = spec_.nonlocal->frahn_lemmer_params();
    s += frahn_lemmer_multiplier(fl.v0, fl.beta, k2);
  }
  return s;
}

double Hamiltonian::spectral_radius_estimate() const {
  const double hbar = spec_.hbar;
  double k2max = 0.0, kmax = 0.0, rmax2 = 0.0;
  for (int a = 0; a < grid_.dim(); ++a) {
    const double h = grid_.spacing(a);
    const double k = grid_.periodic() ? std::numbers::pi / h : 2.0 / h;
    k2max += k * k;
    kmax = std::max(kmax, k);
    rmax2 += 0.25 * grid_.extent(a) * grid_.extent(a);
  }
  const bool fl_path = spec_.nonlocal && spec_.nonlocal_path == NonlocalPath::fl_approx;
  double r = (fl_path ? std::abs(spec_.fl_coefficients->a) : hbar * hbar / (2.0 * spec_.mass)) * k2max;
  r += max_abs(local_.value);
  if (spec_.nonlocal) {
    if (spec_.nonlocal->is_frahn_lemmer()) {
      r += std::abs(spec_.nonlocal->frahn_lemmer_params().v0);
    } else {
      const auto& t = spec_.nonlocal->tabulated_params();
      double row = 0.0;
      for (std::size_t i = 0; i < t.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < t.n; ++j) s += std::abs(t.at(i, j));
        row = std::max(row, s);
      }
      r += row * grid_.spacing(0);
    }
  }
  const auto& eta = nc_.eta();
  const double eta_norm = std::sqrt(eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2]);
  if (eta_norm > 0.0) {
    const double coef = fl_path ? std::abs(spec_.fl_coefficients->b) : 1.0 / (spec_.mass * hbar);
    r += coef * eta_norm * hbar * 2.0 * std::sqrt(rmax2) * kmax;
  }
  const auto& th = nc_.theta();
  const double theta_norm = std::sqrt(th[0] * th[0] + th[1] * th[1] + th[2] * th[2]);
  if (theta_norm > 0.0 && !local_.is_zero()) {
    double gmax = 0.0;
    for (const auto& g : local_.gradient) gmax = std::max(gmax, max_abs(g));
    r += theta_norm * gmax * kmax * grid_.dim();
  }
  return r;
}

ComplexField apply_hamiltonian(const HamiltonianSpec& spec, const ComplexField& psi) {
  return Hamiltonian(spec, psi.grid()).apply(psi);
}

// The mass drops out: both forms act on the non-local factor only.
double fl_expansion_error(const ComplexField& psi, double v0, double beta, const NCParams& nc,
                          double mass, double hbar) {
  const Grid& g = psi.grid();
  if (!g.periodic()) throw UnsupportedBoundaryError("fl_expansion_error needs a periodic grid");
  if (!(beta > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
    throw DomainError("fl_expansion_error needs positive beta, mass and hbar");
  const NCParams ncp = validate_nc_params(nc.theta(), nc.eta(), hbar);
  ncp.check_dimension(g.dim());
  const double b2 = beta * beta;
  const double eta_coef = b2 / (2.0 * hbar * hbar * hbar);

  ComplexField source = psi;
  ComplexField linear = psi;
  add_scaled(linear, laplacian(psi), b2 / 4.0);
  if (!ncp.phase_commutative()) {
    const ComplexField el = eta_dot_angular_momentum(psi, ncp);
    add_scaled(source, el, eta_coef);
    add_scaled(linear, el, eta_coef);
  }
  ComplexField exact = apply_momentum_multiplier(source, [&](const Point& k) {
    return Complex(std::exp(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * b2 / 4.0), 0.0);
  });
  exact *= v0;
  linear *= v0;
  const double denom = l2_norm(exact);
  const double diff = l2_norm(exact - linear);
  if (denom == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / denom;
}

// ---------------------------------------------------------------------------

void PropagatorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError(fmt::format("dt must be positive, got {}", dt));
  if (!(solver_tol > 0.0) || !(solver_tol < 1e-6))
    throw DomainError(fmt::format("solver_tol must lie in (0, 1e-6), got {}", solver_tol));
  if (max_iterations <= 0) throw DomainError("max_iterations must be positive");
}

namespace {

void check_finite(const ComplexField& psi, const char* where) {
  if (!psi.all_finite()) throw NumericalError(fmt::format("non-finite values after {}", where));
}

ComplexField crank_nicolson(const ComplexField& psi, const Hamiltonian& h, const PropagatorConfig& cfg,
                            StepInfo* info) {
  const Complex ia(0.0, cfg.dt / (2.0 * h.hbar()));
  ComplexField rhs = h.apply(psi);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = psi[i] - ia * rhs[i];
  const Grid& g = psi.grid();
  LinearOperator op = [&](const CVec& x) {
    ComplexField xf(g, x);
    ComplexField hx = h.apply(xf);
    CVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + ia * hx[i];
    return out;
  };
  CVec x = rhs.data();
  const auto stats = bicgstab(op, rhs.data(), x, cfg.solver_tol, cfg.max_iterations);
  if (info) *info = {stats.iterations, stats.relative_residual};
  return ComplexField(g, std::move(x));
}

ComplexField split_step(const ComplexField& psi, const Hamiltonian& h, const PropagatorConfig& cfg) {
  const double hbar = h.hbar();
  const Complex half(0.0, -cfg.dt / (2.0 * hbar));
  ComplexField out = psi;
  const auto& v = h.local_field();
  auto half_kick = [&] {
    if (v.is_zero()) return;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(half * v.value[i]);
  };
  half_kick();
  out = apply_momentum_multiplier(out, [&](const Point& k) {
    return std::exp(Complex(0.0, -cfg.dt / hbar) * h.momentum_symbol(k));
  });
  half_kick();
  return out;
}

}  // namespace

ComplexField step(const ComplexField& psi, const Hamiltonian& h, const PropagatorConfig& cfg,
                  StepInfo* info) {
  cfg.validate();
  if (!(psi.grid() == h.grid())) throw ShapeError("wavefunction grid does not match the Hamiltonian");
  ComplexField out(psi.grid());
  if (cfg.mode == TimeMode::imaginary_time) {
    out = psi;
    add_scaled(out, h.apply(psi), -cfg.dt / h.hbar());
    const double n = std::sqrt(norm_squared(out));
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("imaginary-time step produced a zero or non-finite state");
    out *= 1.0 / n;
    if (info) *info = {};
  } else if (cfg.scheme == Scheme::split_step) {
    if (!h.splittable())
      throw ConfigurationError(
          "split-step needs a periodic grid, no theta star term, no eta.L term and a momentum-diagonal non-local path");
    out = split_step(psi, h, cfg);
    if (info) *info = {};
  } else {
    out = crank_nicolson(psi, h, cfg, info);
  }
  check_finite(out, "time step");
  return out;
}

Propagator::Propagator(const Hamiltonian& h, PropagatorConfig cfg, ComplexField initial)
    : h_(h), cfg_(cfg), psi_(std::move(initial)) {
  cfg_.validate();
  if (!(psi_.grid() == h_.grid())) throw ShapeError("initial state grid does not match the Hamiltonian");
  const double scale = cfg_.dt * h_.spectral_radius_estimate() / h_.hbar();
  if (scale >= 1.0) {
    if (cfg_.mode == TimeMode::imaginary_time)
      log().warn("dt * |H|/hbar = {:.3g} >= 1: imaginary-time iteration may diverge", scale);
    else
      log().info("dt * |H|/hbar = {:.3g} >= 1: high modes are poorly resolved in time", scale);
  }
}

const StepInfo& Propagator::advance() {
  psi_ = step(psi_, h_, cfg_, &last_);
  time_ += cfg_.dt;
  ++steps_;
  return last_;
}

double energy(const Hamiltonian& h, const ComplexField& psi) {
  const double n = norm_squared(psi);
  if (!(n > 0.0)) throw DomainError("energy of a zero state");
  return inner_product(psi, h.apply(psi)).real() / n;
}

namespace {

void check_square(const Grid& g) {
  if (g.dim() != 2 || g.points(0) != g.points(1) || g.extent(0) != g.extent(1))
    throw DomainError("L_z sector projection needs a square 2-D grid");
}

}  // namespace

ComplexField rotate_quarter(const ComplexField& psi) {
  const Grid& g = psi.grid();
  check_square(g);
  const std::size_t n = g.points(0);
  // Index of -x: periodic grids are centred on index n/2, dirichlet on (n-1)/2.
  auto mirror = [&](std::size_t i) { return g.periodic() ? (n - i) % n : n - 1 - i; };
  ComplexField out(g);
  // (R psi)(x, y) = psi(y, -x)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = psi[j * n + mirror(i)];
  return out;
}

ComplexField project_lz_sector(const ComplexField& psi, int m) {
  check_square(psi.grid());
  ComplexField out = psi;
  ComplexField r = psi;
  for (int q = 1; q < 4; ++q) {
    r = rotate_quarter(r);
    const double ang = std::numbers::pi / 2.0 * m * q;
    const Complex ph(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += ph * r[i];
  }
  out *= 0.25;
  return out;
}

GroundStateResult ground_state(const Hamiltonian& h, const PropagatorConfig& cfg, ComplexField initial,
                               const GroundStateOptions& opts) {
  cfg.validate();
  if (!h.hermitian()) throw ConfigurationError("ground_state needs a Hermitian Hamiltonian");
  if (!(initial.grid() == h.grid())) throw ShapeError("initial state grid does not match the Hamiltonian");
  const double tau = cfg.dt / h.hbar();
  if (tau * h.spectral_radius_estimate() >= 2.0)
    log().warn("imaginary-time step dt*|H|/hbar = {:.3g} may be unstable", tau * h.spectral_radius_estimate());

  auto normalise = [](ComplexField& f) {
    const double n = std::sqrt(norm_squared(f));
    if (!(n > 0.0)) throw NumericalError("state vanished during imaginary-time iteration");
    f *= 1.0 / n;
  };

  ComplexField psi = std::move(initial);
  if (opts.lz_sector) psi = project_lz_sector(psi, *opts.lz_sector);
  normalise(psi);

  GroundStateResult res{psi, 0.0, 0, 0.0};
  double e_prev = std::numeric_limits<double>::infinity();
  for (long it = 0; it <= opts.max_steps; ++it) {
    const ComplexField hpsi = h.apply(psi);
    const double e = inner_product(psi, hpsi).real();
    ComplexField r = hpsi;
    add_scaled(r, psi, -e);
    const double resid = std::sqrt(norm_squared(r));
    res.energy = e;
    res.residual = resid;
    res.steps = it;
    if (std::abs(e - e_prev) < opts.energy_tol && (opts.residual_tol <= 0.0 || resid <= opts.residual_tol)) {
      res.state = psi;
      return res;
    }
    if (!std::isfinite(e)) throw NumericalError("energy became non-finite during imaginary-time iteration");
    e_prev = e;
    add_scaled(psi, hpsi, -tau);
    if (opts.lz_sector) psi = project_lz_sector(psi, *opts.lz_sector);
    normalise(psi);
  }
  throw IterationError(fmt::format("ground_state did not converge in {} steps (dE {:.3e}, residual {:.3e})",
                                   opts.max_steps, std::abs(res.energy - e_prev), res.residual),
                       static_cast<int>(std::min<long>(opts.max_steps, 2147483647L)), res.residual);
}

}  // namespace nonloc
