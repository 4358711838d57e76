#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "nonloc/config.hpp"
#include "nonloc/errors.hpp"
#include "nonloc/potentials.hpp"
#include "nonloc/scenario.hpp"

namespace fs = std::filesystem;
using namespace nonloc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int report_error(const std::exception& e, const std::string& context) {
  nlohmann::ordered_json j;
  int code = kExitNumerical;
  if (const auto* ne = dynamic_cast<const Error*>(&e)) {
    code = ne->category() == ErrorCategory::config ? kExitConfig : kExitNumerical;
    j["error"] = ne->kind();
    j["category"] = ne->category() == ErrorCategory::config ? "config" : "numerical";
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) j["messages"] = ce->messages();
    if (const auto* ie = dynamic_cast<const IterationError*>(&e)) {
      j["iterations"] = ie->iterations();
      j["residual"] = ie->residual();
    }
  } else {
    j["error"] = "runtime";
    j["category"] = "numerical";
  }
  j["message"] = e.what();
  if (!context.empty()) j["context"] = context;
  std::cerr << j.dump() << "\n";
  return code;
}

struct SimulateArgs {
  std::vector<std::string> configs;
  std::string out_dir;
  bool dump_fields = false;
  long sample_every = 0;
  int jobs = 1;
};

int simulate_one(const std::string& path, const RunOverrides& ov) {
  try {
    const auto cfg = parse_config(path);
    const auto res = run_scenario(cfg, ov);
    std::cout << fmt::format("{}: wrote {}", path, (fs::path(res.out_dir) / "summary.json").string()) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, path);
  }
}

RunOverrides overrides_for(const SimulateArgs& a, const std::string& config, bool many) {
  RunOverrides ov;
  if (!a.out_dir.empty())
    ov.out_dir = many ? (fs::path(a.out_dir) / fs::path(config).stem()).string() : a.out_dir;
  if (a.dump_fields) ov.dump_fields = true;
  if (a.sample_every > 0) ov.sample_every = a.sample_every;
  return ov;
}

// Runs each config in its own child process, at most `jobs` at a time.
int simulate_parallel(const SimulateArgs& a) {
  const bool many = a.configs.size() > 1;
  std::map<pid_t, std::string> running;
  int worst = kExitOk;
  auto reap_one = [&] {
    int status = 0;
    const pid_t pid = waitpid(-1, &status, 0);
    if (pid <= 0) return;
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : kExitNumerical;
    worst = std::max(worst, code);
    running.erase(pid);
  };
  for (const auto& cfg : a.configs) {
    while (static_cast<int>(running.size()) >= a.jobs) reap_one();
    const RunOverrides ov = overrides_for(a, cfg, many);
    std::vector<std::string> args{"nonloc", "simulate", cfg};
    if (ov.out_dir) args.insert(args.end(), {"--out-dir", *ov.out_dir});
    if (ov.dump_fields) args.emplace_back("--dump-fields");
    if (ov.sample_every) args.insert(args.end(), {"--sample-every", std::to_string(*ov.sample_every)});
    std::fflush(nullptr);
    const pid_t pid = fork();
    if (pid < 0) {
      std::cerr << "fork failed\n";
      return kExitNumerical;
    }
    if (pid == 0) {
      std::vector<char*> argv;
      for (auto& s : args) argv.push_back(s.data());
      argv.push_back(nullptr);
      execv("/proc/self/exe", argv.data());
      _exit(127);
    }
    running[pid] = cfg;
  }
  while (!running.empty()) reap_one();
  return worst;
}

int cmd_simulate(const SimulateArgs& a) {
  if (a.jobs > 1 && a.configs.size() > 1) return simulate_parallel(a);
  int worst = kExitOk;
  const bool many = a.configs.size() > 1;
  for (const auto& cfg : a.configs) worst = std::max(worst, simulate_one(cfg, overrides_for(a, cfg, many)));
  return worst;
}

int cmd_check(const std::string& path) {
  try {
    const auto cfg = parse_config(path);
    const Hamiltonian h(cfg.hamiltonian, cfg.grid);
    const auto& nc = cfg.hamiltonian.nc;
    std::cout << "OK\n";
    std::cout << fmt::format("grid: {}\n", cfg.grid.describe());
    std::cout << fmt::format("xi: {:.17g}\n", nc.xi());
    std::cout << fmt::format("hbar_eff: {:.17g}\n", nc.hbar_eff());
    std::cout << fmt::format("hermitian: {}\n", h.hermitian());
    if (cfg.hamiltonian.nonlocal && cfg.hamiltonian.nonlocal->is_frahn_lemmer()) {
      std::cout << fmt::format("kernel_normalization: {:.17g}\n",
                               kernel_normalization(*cfg.hamiltonian.nonlocal, cfg.grid));
    }
    if (cfg.hamiltonian.fl_coefficients)
      std::cout << fmt::format("fl_coefficients: a={:.17g} b={:.17g}\n", cfg.hamiltonian.fl_coefficients->a,
                               cfg.hamiltonian.fl_coefficients->b);
    std::cout << fmt::format("dt_times_spectral_radius: {:.6g}\n",
                             cfg.propagator.dt * h.spectral_radius_estimate() / cfg.hamiltonian.hbar);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, path);
  }
}

int cmd_dispersion(double e, double v0, double beta, double m, double hbar) {
  try {
    const auto roots = dispersion_solve(e, v0, beta, m, hbar);
    std::cout << "E,k_root\n";
    for (double k : roots) std::cout << fmt::format("{:.17g},{:.17g}\n", e, k);
    return kExitOk;
  } catch (const std::exception& ex) {
    return report_error(ex, "dispersion");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid simulator for non-local and non-commutative continuity diagnostics"};
  app.set_version_flag("--version", std::string(NONLOC_VERSION));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Evolve one or more scenarios and write diagnostics");
  simulate->add_option("configs", sim.configs, "Scenario YAML files")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out-dir", sim.out_dir, "Output directory (per-config subdirectories when several)");
  simulate->add_flag("--dump-fields", sim.dump_fields, "Write field CSVs at every sample");
  simulate->add_option("--sample-every", sim.sample_every, "Sample interval in steps")->check(CLI::PositiveNumber);
  simulate->add_option("--jobs", sim.jobs, "Scenarios to run in parallel processes")->check(CLI::PositiveNumber);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate a scenario without computing");
  check->add_option("config", check_path, "Scenario YAML file")->required()->check(CLI::ExistingFile);

  double e = 0, v0 = 0, beta = 0, m = 1.0, hbar = 1.0;
  auto* disp = app.add_subcommand("dispersion", "Roots k of E = (hbar k)^2/2m + V0 exp(-k^2 beta^2/4)");
  disp->add_option("--E", e, "Energy")->required();
  disp->add_option("--V0", v0, "Kernel strength")->required();
  disp->add_option("--beta", beta, "Non-locality range")->required();
  disp->add_option("--m", m, "Mass");
  disp->add_option("--hbar", hbar, "Reduced Planck constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int rc = app.exit(pe);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*simulate) return cmd_simulate(sim);
  if (*check) return cmd_check(check_path);
  if (*disp) return cmd_dispersion(e, v0, beta, m, hbar);
  return kExitUsage;
}
