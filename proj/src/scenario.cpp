#include "nonloc/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "nonloc/conservation.hpp"
#include "nonloc/field_io.hpp"
#include "nonloc/fieldops.hpp"
#include "nonloc/json_out.hpp"
#include "nonloc/log.hpp"

namespace nonloc {
namespace {

namespace fs = std::filesystem;
using J = nlohmann::ordered_json;

void normalise(ComplexField& psi) {
  const double n = std::sqrt(norm_squared(psi));
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("initial state has zero or non-finite norm");
  psi *= 1.0 / n;
}

J sink_json(const SinkIntegrals& s) {
  return {{"NL", s.NL}, {"L", s.L}, {"L_nc", s.L_nc}, {"C", s.C}};
}

void dump_fields(const fs::path& dir, long step, const ComplexField& psi,
                 const ContinuityReport* report) {
  fs::create_directories(dir);
  const auto name = [&](const char* what) { return (dir / fmt::format("step_{:07d}_{}.csv", step, what)).string(); };
  write_csv(name("psi"), psi);
  write_csv(name("rho"), density(psi));
  if (!report) return;
  write_csv(name("residual"), report->residual());
  write_csv(name("sigma_NL"), report->sinks().sigma_NL);
  write_csv(name("sigma_L"), report->sinks().sigma_L);
  write_csv(name("sigma_L_nc"), report->sinks().sigma_L_nc);
  write_csv(name("sigma_C"), report->sinks().sigma_C);
}

J run_core(const ScenarioConfig& cfg, long sample_every, const std::optional<fs::path>& field_dir) {
  const Hamiltonian h(cfg.hamiltonian, cfg.grid);
  ComplexField psi0 = initial_state(cfg);
  const bool real_time = cfg.propagator.mode == TimeMode::real_time;
  const CurrentMode mode = h.nc().commutative() ? CurrentMode::commutative : CurrentMode::nc;

  J summary;
  summary["scenario"] = cfg.name;
  summary["grid"] = cfg.grid.describe();
  summary["mode"] = to_string(cfg.propagator.mode);
  summary["current_mode"] = mode == CurrentMode::nc ? "nc" : "commutative";
  summary["dt"] = cfg.propagator.dt;
  summary["steps"] = cfg.steps;
  summary["initial"] = {{"norm", norm_squared(psi0)}, {"energy", energy(h, psi0)}};
  if (field_dir) dump_fields(*field_dir, 0, psi0, nullptr);

  Propagator prop(h, cfg.propagator, std::move(psi0));
  J samples = J::array();
  J final_block = J::object();
  bool warned = false;
  for (long n = 1; n <= cfg.steps; ++n) {
    const bool sample = n % sample_every == 0 || n == cfg.steps;
    std::optional<ComplexField> prev;
    if (sample) prev = prop.state();
    const StepInfo info = prop.advance();
    if (!sample) continue;

    const ComplexField& psi = prop.state();
    J s;
    s["step"] = n;
    s["t"] = prop.time();
    s["norm"] = norm_squared(psi);
    s["energy"] = energy(h, psi);
    if (real_time) {
      const auto report = continuity_report(*prev, psi, cfg.propagator.dt, h);
      const auto cd = corrected_currents(report, mode);
      s["residual_l2"] = report.residual_l2();
      s["residual_max"] = report.residual_max();
      s["div_Jtot_l2"] = cd.div_Jtot_l2;
      s["balance_l2"] = cd.balance_l2;
      s["drho_dt_l2"] = cd.drho_dt_l2;
      s["sink_integrals"] = sink_json(report.global_sink_integrals());
      s["solver_iterations"] = info.iterations;
      if (!cd.irreducible.empty() && !warned) {
        for (const auto& name : cd.irreducible)
          log().warn("sink {} has a nonzero integral on a periodic grid; its current correction is irreducible and left at zero",
                     name);
        warned = true;
      }
      if (n == cfg.steps) {
        final_block = {{"step", n},
                       {"t", prop.time()},
                       {"norm", norm_squared(psi)},
                       {"energy", s["energy"]},
                       {"div_Jtot_l2", cd.div_Jtot_l2},
                       {"balance_l2", cd.balance_l2},
                       {"drho_dt_l2", cd.drho_dt_l2},
                       {"J_l2", l2_norm(cd.J[0])},
                       {"irreducible", cd.irreducible}};
      }
      if (field_dir) dump_fields(*field_dir, n, psi, &report);
    } else {
      if (n == cfg.steps)
        final_block = {{"step", n}, {"t", prop.time()}, {"norm", s["norm"]}, {"energy", s["energy"]}};
      if (field_dir) dump_fields(*field_dir, n, psi, nullptr);
    }
    samples.push_back(std::move(s));
  }
  summary["samples"] = std::move(samples);
  summary["final"] = std::move(final_block);
  return summary;
}

}  // namespace

ComplexField initial_state(const ScenarioConfig& cfg) {
  const Grid& g = cfg.grid;
  const auto& ic = cfg.initial;
  const int dim = g.dim();
  ComplexField psi(g);
  switch (ic.kind) {
    case InitialKind::gaussian_packet: {
      psi = ComplexField::sample(g, [&](const Point& r) {
        double r2 = 0.0, phase = 0.0;
        for (int a = 0; a < dim; ++a) {
          const auto k = static_cast<std::size_t>(a);
          const double d = r[k] - ic.center[k];
          r2 += d * d;
          phase += ic.momentum[k] * r[k];
        }
        return std::exp(-r2 / (2.0 * ic.width * ic.width)) * Complex(std::cos(phase), std::sin(phase));
      });
      break;
    }
    case InitialKind::lz_eigenstate: {
      const int am = std::abs(ic.m);
      const double s = ic.m >= 0 ? 1.0 : -1.0;
      psi = ComplexField::sample(g, [&](const Point& r) {
        const Complex z(r[0], s * r[1]);
        return std::pow(z, am) * std::exp(-(r[0] * r[0] + r[1] * r[1]) / (2.0 * ic.width * ic.width));
      });
      normalise(psi);
      if (ic.relax) {
        const Hamiltonian h(cfg.hamiltonian, g);
        PropagatorConfig pc = cfg.propagator;
        pc.mode = TimeMode::imaginary_time;
        pc.dt = ic.relax_dt;
        GroundStateOptions opts;
        opts.energy_tol = 1e-12;
        opts.residual_tol = 1e-10;
        opts.lz_sector = ic.m;
        auto gs = ground_state(h, pc, psi, opts);
        log().info("lz-eigenstate m={} relaxed in {} steps, E = {:.12g}", ic.m, gs.steps, gs.energy);
        psi = std::move(gs.state);
      }
      break;
    }
    case InitialKind::file: {
      psi = read_complex_csv(ic.path);
      if (!(psi.grid() == g))
        throw ShapeError(fmt::format("initial state file grid '{}' does not match the config grid '{}'",
                                     psi.grid().describe(), g.describe()));
      break;
    }
  }
  normalise(psi);
  return psi;
}

J simulate_summary(const ScenarioConfig& cfg, long sample_every) {
  if (sample_every < 1) throw DomainError("sample_every must be >= 1");
  return run_core(cfg, sample_every, std::nullopt);
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOverrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = overrides.out_dir.value_or(cfg.output.out_dir);
  const bool dump = overrides.dump_fields.value_or(cfg.output.dump_fields);
  const long every = overrides.sample_every.value_or(cfg.output.sample_every);
  if (every < 1) throw DomainError("sample_every must be >= 1");
  fs::create_directories(out);

  J summary = run_core(cfg, every, dump ? std::optional<fs::path>(out / "fields") : std::nullopt);
  write_json_file((out / "summary.json").string(), summary);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  J meta;
  meta["version"] = NONLOC_VERSION;
  meta["config"] = cfg.to_json();
  meta["wall_time_s"] = wall;
  meta["sample_every"] = every;
  meta["dump_fields"] = dump;
  write_json_file((out / "run_meta.json").string(), meta);
  return {std::move(summary), out.string()};
}

}  // namespace nonloc
