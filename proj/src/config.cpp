#include "nonloc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "nonloc/errors.hpp"

namespace nonloc {
namespace {

namespace fs = std::filesystem;

std::string where(const YAML::Node& n, const std::string& path) {
  const auto m = n.Mark();
  if (m.line < 0) return path;
  return fmt::format("{} (line {})", path, m.line + 1);
}

// Typed access to a YAML mapping that records problems instead of throwing.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& msg) { errors.push_back(msg); }

  bool section(const YAML::Node& root, const char* name, YAML::Node& out) {
    const YAML::Node v = root[name];
    if (!v || v.IsNull()) return false;
    out.reset(v);
    if (!out.IsMap()) {
      fail(fmt::format("{}: expected a mapping", where(out, name)));
      return false;
    }
    return true;
  }

  void allow(const YAML::Node& n, const std::string& path, const std::set<std::string>& keys) {
    if (!n.IsMap()) return;
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) {
        std::string list;
        for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
        fail(fmt::format("{}: unknown key '{}' (allowed: {})", where(kv.first, path), key, list));
      }
    }
  }

  template <class T>
  std::optional<T> get(const YAML::Node& n, const char* key, const std::string& path) {
    const YAML::Node v = n[key];
    if (!v || v.IsNull()) return std::nullopt;
    if (!v.IsScalar()) {
      fail(fmt::format("{}.{}: expected a scalar", where(v, path), key));
      return std::nullopt;
    }
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      fail(fmt::format("{}.{}: cannot read '{}' as {}", where(v, path), key, v.Scalar(), type_name<T>()));
      return std::nullopt;
    }
  }

  /// A number or a list of numbers.
  std::optional<std::vector<double>> get_list(const YAML::Node& n, const char* key,
                                              const std::string& path) {
    const YAML::Node v = n[key];
    if (!v || v.IsNull()) return std::nullopt;
    std::vector<double> out;
    try {
      if (v.IsScalar()) {
        out.push_back(v.as<double>());
      } else if (v.IsSequence()) {
        for (const auto& e : v) out.push_back(e.as<double>());
      } else {
        fail(fmt::format("{}.{}: expected a number or a list of numbers", where(v, path), key));
        return std::nullopt;
      }
    } catch (const YAML::Exception&) {
      fail(fmt::format("{}.{}: expected a number or a list of numbers", where(v, path), key));
      return std::nullopt;
    }
    return out;
  }

  template <class F>
  void guard(const std::string& context, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      fail(fmt::format("{}: {}", context, e.what()));
    }
  }

 private:
  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else return "a string";
  }
};

std::vector<double> expand(const std::vector<double>& v, int dim, const std::string& what,
                           Reader& rd) {
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(dim), v.front());
  if (static_cast<int>(v.size()) != dim) {
    rd.fail(fmt::format("{}: expected 1 or {} values, got {}", what, dim, v.size()));
    return std::vector<double>(static_cast<std::size_t>(dim), v.front());
  }
  return v;
}

Point to_point(const std::vector<double>& v) {
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) p[i] = v[i];
  return p;
}

std::vector<double> point_list(const Point& p, int dim) {
  return std::vector<double>(p.begin(), p.begin() + dim);
}

ScenarioConfig parse_yaml(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root.reset(YAML::Load(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError({fmt::format("syntax error at line {}, column {}: {}", e.mark.line + 1,
                                   e.mark.column + 1, e.msg)});
  }
  if (!root.IsMap()) throw ConfigError({"config root must be a mapping"});

  Reader rd;
  ScenarioConfig cfg;
  rd.allow(root, "config",
           {"name", "grid", "units", "local", "nonlocal", "nc", "dynamics", "initial", "output"});
  if (auto v = rd.get<std::string>(root, "name", "config")) cfg.name = *v;

  // grid
  int dim = 1;
  bool grid_ok = false;
  {
    YAML::Node n;
    if (!rd.section(root, "grid", n)) {
      rd.fail("grid: section is required");
    } else {
      rd.allow(n, "grid", {"dim", "points", "extent", "boundary"});
      auto pts = rd.get_list(n, "points", "grid");
      auto ext = rd.get_list(n, "extent", "grid");
      if (auto d = rd.get<int>(n, "dim", "grid")) dim = *d;
      else if (pts && pts->size() > 1) dim = static_cast<int>(pts->size());
      Boundary b = Boundary::periodic;
      if (auto s = rd.get<std::string>(n, "boundary", "grid"))
        rd.guard("grid.boundary", [&] { b = boundary_from_string(*s); });
      if (!pts) rd.fail("grid.points: required");
      if (!ext) rd.fail("grid.extent: required");
      if (dim < 1 || dim > 3) {
        rd.fail(fmt::format("grid.dim: must be 1, 2 or 3, got {}", dim));
        dim = 1;
      } else if (pts && ext) {
        const auto p = expand(*pts, dim, "grid.points", rd);
        const auto e = expand(*ext, dim, "grid.extent", rd);
        std::vector<std::size_t> ps;
        bool ints = true;
        for (double x : p) {
          if (x < 1 || x != std::floor(x)) ints = false;
          ps.push_back(x >= 1 ? static_cast<std::size_t>(x) : 0);
        }
        if (!ints) rd.fail("grid.points: must be positive integers");
        else rd.guard("grid", [&] {
          cfg.grid = Grid(ps, e, b);
          grid_ok = true;
        });
      }
    }
  }

  // units
  auto& hs = cfg.hamiltonian;
  {
    YAML::Node n;
    if (rd.section(root, "units", n)) {
      rd.allow(n, "units", {"preset", "hbar", "mass"});
      if (auto p = rd.get<std::string>(n, "preset", "units")) {
        // lengths in fm, energies in MeV, time in fm/c; mass defaults to a nucleon
        if (*p == "fm-MeV") {
          hs.hbar = 197.3269804;
          hs.mass = 938.918;
        } else if (*p != "natural") {
          rd.fail(fmt::format("units.preset: unknown '{}' (natural, fm-MeV)", *p));
        }
      }
      if (auto v = rd.get<double>(n, "hbar", "units")) hs.hbar = *v;
      if (auto v = rd.get<double>(n, "mass", "units")) hs.mass = *v;
    }
    if (!(hs.hbar > 0.0) || !std::isfinite(hs.hbar)) rd.fail(fmt::format("units.hbar: must be positive, got {}", hs.hbar));
    if (!(hs.mass > 0.0) || !std::isfinite(hs.mass)) rd.fail(fmt::format("units.mass: must be positive, got {}", hs.mass));
  }

  // local potential
  {
    YAML::Node n;
    if (rd.section(root, "local", n)) {
      rd.allow(n, "local", {"kind", "h", "omega", "depth", "width", "W0", "region"});
      const auto kind = rd.get<std::string>(n, "kind", "local").value_or("none");
      auto need = [&](const char* key) {
        auto v = rd.get<double>(n, key, "local");
        if (!v) rd.fail(fmt::format("local.{}: required for kind {}", key, kind));
        return v.value_or(0.0);
      };
      if (kind == "none") {
        hs.local = LocalPotentialSpec::none();
      } else if (kind == "linear") {
        hs.local = LocalPotentialSpec::linear(need("h"));
      } else if (kind == "harmonic") {
        hs.local = LocalPotentialSpec::harmonic(need("omega"), hs.mass);
      } else if (kind == "gaussian-well") {
        const double depth = need("depth");
        const double width = need("width");
        rd.guard("local", [&] { hs.local = LocalPotentialSpec::gaussian_well(depth, width); });
      } else if (kind == "complex-absorber") {
        const double w0 = need("W0");
        double lo = -1e300, hi = 1e300;
        if (auto r = rd.get_list(n, "region", "local")) {
          if (r->size() != 2) rd.fail("local.region: expected [lo, hi]");
          else {
            lo = (*r)[0];
            hi = (*r)[1];
          }
        }
        rd.guard("local", [&] { hs.local = LocalPotentialSpec::complex_absorber(w0, lo, hi); });
      } else {
        rd.fail(fmt::format("local.kind: unknown '{}' (none, linear, harmonic, gaussian-well, complex-absorber)", kind));
      }
    }
  }

  // non-local kernel
  {
    YAML::Node n;
    if (rd.section(root, "nonlocal", n)) {
      rd.allow(n, "nonlocal", {"kind", "V0", "beta", "matrix", "symmetric"});
      const auto kind = rd.get<std::string>(n, "kind", "nonlocal").value_or("none");
      if (kind == "frahn-lemmer") {
        auto v0 = rd.get<double>(n, "V0", "nonlocal");
        auto beta = rd.get<double>(n, "beta", "nonlocal");
        if (!v0) rd.fail("nonlocal.V0: required for frahn-lemmer");
        if (!beta) rd.fail("nonlocal.beta: required for frahn-lemmer");
        if (v0 && beta) rd.guard("nonlocal", [&] { hs.nonlocal = NonlocalKernelSpec::frahn_lemmer(*v0, *beta); });
      } else if (kind == "tabulated") {
        const YAML::Node m = n["matrix"];
        const bool symmetric = rd.get<bool>(n, "symmetric", "nonlocal").value_or(true);
        if (!m || !m.IsSequence()) {
          rd.fail("nonlocal.matrix: required list of rows for tabulated");
        } else {
          std::vector<double> samples;
          const std::size_t rows = m.size();
          bool ok = true;
          try {
            for (const auto& row : m) {
              if (!row.IsSequence() || row.size() != rows) ok = false;
              else for (const auto& x : row) samples.push_back(x.as<double>());
            }
          } catch (const YAML::Exception&) {
            ok = false;
          }
          if (!ok) rd.fail("nonlocal.matrix: must be a square list of numeric rows");
          else rd.guard("nonlocal", [&] { hs.nonlocal = NonlocalKernelSpec::tabulated(rows, samples, symmetric); });
        }
      } else if (kind != "none") {
        rd.fail(fmt::format("nonlocal.kind: unknown '{}' (none, frahn-lemmer, tabulated)", kind));
      }
      if (hs.nonlocal && grid_ok)
        rd.guard("nonlocal", [&] { hs.nonlocal->check_resolvable(cfg.grid); });
    }
  }

  // non-commutativity
  Vec3 theta{0.0, 0.0, 0.0}, eta{0.0, 0.0, 0.0};
  cfg.nc_hbar = hs.hbar;
  {
    YAML::Node n;
    if (rd.section(root, "nc", n)) {
      rd.allow(n, "nc", {"preset", "theta", "eta", "theta_z", "eta_z", "hbar"});
      if (auto p = rd.get<std::string>(n, "preset", "nc")) {
        if (*p == "paper-bounds") {
          theta = {0.0, 0.0, ExperimentalBounds::theta_z};
          eta = {0.0, 0.0, ExperimentalBounds::eta_z};
          cfg.nc_hbar = ExperimentalBounds::hbar_si;
        } else if (*p != "none") {
          rd.fail(fmt::format("nc.preset: unknown '{}' (none, paper-bounds)", *p));
        }
      }
      auto vec = [&](const char* key, const char* zkey, Vec3& out) {
        if (auto v = rd.get_list(n, key, "nc")) {
          if (v->size() == 3) out = {(*v)[0], (*v)[1], (*v)[2]};
          else rd.fail(fmt::format("nc.{}: expected [x, y, z]", key));
        }
        if (auto z = rd.get<double>(n, zkey, "nc")) {
          if (n[key]) rd.fail(fmt::format("nc: give either {} or {}, not both", key, zkey));
          out = {0.0, 0.0, *z};
        }
      };
      vec("theta", "theta_z", theta);
      vec("eta", "eta_z", eta);
      if (auto h = rd.get<double>(n, "hbar", "nc")) cfg.nc_hbar = *h;
    }
    bool nc_ok = false;
    rd.guard("nc", [&] {
      hs.nc = validate_nc_params(theta, eta, cfg.nc_hbar);
      nc_ok = true;
    });
    if (nc_ok && grid_ok)
      rd.guard("nc", [&] { hs.nc.check_dimension(cfg.grid.dim()); });
  }

  // dynamics
  NonlocalPath path = NonlocalPath::quadrature;
  {
    YAML::Node n;
    auto& pc = cfg.propagator;
    if (rd.section(root, "dynamics", n)) {
      rd.allow(n, "dynamics", {"mode", "dt", "steps", "scheme", "nonlocal_path", "solver_tol", "max_iterations"});
      if (auto v = rd.get<std::string>(n, "mode", "dynamics"))
        rd.guard("dynamics.mode", [&] { pc.mode = time_mode_from_string(*v); });
      if (auto v = rd.get<std::string>(n, "scheme", "dynamics"))
        rd.guard("dynamics.scheme", [&] { pc.scheme = scheme_from_string(*v); });
      if (auto v = rd.get<std::string>(n, "nonlocal_path", "dynamics"))
        rd.guard("dynamics.nonlocal_path", [&] { path = nonlocal_path_from_string(*v); });
      if (auto v = rd.get<double>(n, "dt", "dynamics")) pc.dt = *v;
      if (auto v = rd.get<double>(n, "solver_tol", "dynamics")) pc.solver_tol = *v;
      if (auto v = rd.get<int>(n, "max_iterations", "dynamics")) pc.max_iterations = *v;
      if (auto v = rd.get<long>(n, "steps", "dynamics")) cfg.steps = *v;
    }
    if (cfg.steps < 0) rd.fail("dynamics.steps: must be >= 0");
    rd.guard("dynamics", [&] { pc.validate(); });
    if (hs.hbar > 0.0 && hs.mass > 0.0) rd.guard("dynamics", [&] { hs.set_path(path); });
  }

  // initial state
  {
    YAML::Node n;
    auto& ic = cfg.initial;
    if (rd.section(root, "initial", n)) {
      rd.allow(n, "initial", {"kind", "center", "width", "momentum", "m", "relax", "relax_dt", "path"});
      const auto kind = rd.get<std::string>(n, "kind", "initial").value_or("gaussian-packet");
      if (kind == "gaussian-packet") ic.kind = InitialKind::gaussian_packet;
      else if (kind == "lz-eigenstate") ic.kind = InitialKind::lz_eigenstate;
      else if (kind == "file") ic.kind = InitialKind::file;
      else rd.fail(fmt::format("initial.kind: unknown '{}' (gaussian-packet, lz-eigenstate, file)", kind));
      if (auto c = rd.get_list(n, "center", "initial")) ic.center = to_point(expand(*c, dim, "initial.center", rd));
      if (auto k = rd.get_list(n, "momentum", "initial")) ic.momentum = to_point(expand(*k, dim, "initial.momentum", rd));
      if (auto w = rd.get<double>(n, "width", "initial")) ic.width = *w;
      if (auto m = rd.get<int>(n, "m", "initial")) ic.m = *m;
      if (auto r = rd.get<bool>(n, "relax", "initial")) ic.relax = *r;
      if (auto r = rd.get<double>(n, "relax_dt", "initial")) ic.relax_dt = *r;
      if (auto p = rd.get<std::string>(n, "path", "initial")) {
        fs::path fp(*p);
        ic.path = (fp.is_absolute() ? fp : fs::path(base_dir) / fp).lexically_normal().string();
      }
      if (!(ic.width > 0.0)) rd.fail("initial.width: must be positive");
      if (!(ic.relax_dt > 0.0)) rd.fail("initial.relax_dt: must be positive");
      if (ic.kind == InitialKind::file) {
        if (ic.path.empty()) rd.fail("initial.path: required for kind file");
        else if (!fs::exists(ic.path)) rd.fail(fmt::format("initial.path: no such file '{}'", ic.path));
      }
      if (ic.kind == InitialKind::lz_eigenstate && grid_ok) {
        const auto& g = cfg.grid;
        if (g.dim() != 2 || g.points(0) != g.points(1) || g.extent(0) != g.extent(1))
          rd.fail("initial: lz-eigenstate needs a square 2-D grid");
      }
    }
  }

  // output
  {
    YAML::Node n;
    auto& oc = cfg.output;
    if (rd.section(root, "output", n)) {
      rd.allow(n, "output", {"sample_every", "dump_fields", "out_dir"});
      if (auto v = rd.get<long>(n, "sample_every", "output")) oc.sample_every = *v;
      if (auto v = rd.get<bool>(n, "dump_fields", "output")) oc.dump_fields = *v;
      if (auto v = rd.get<std::string>(n, "out_dir", "output")) oc.out_dir = *v;
    }
    if (oc.sample_every < 1) rd.fail("output.sample_every: must be >= 1");
  }

  // Whole-Hamiltonian checks (path/grid compatibility, hbar-dependent xi).
  if (rd.errors.empty()) {
    rd.guard("hamiltonian", [&] { Hamiltonian(hs, cfg.grid); });
    if (cfg.initial.kind == InitialKind::lz_eigenstate && cfg.initial.relax && rd.errors.empty() &&
        !Hamiltonian(hs, cfg.grid).hermitian())
      rd.fail("initial: lz-eigenstate relaxation needs a Hermitian Hamiltonian (set relax: false)");
    if (cfg.propagator.scheme == Scheme::split_step && rd.errors.empty() &&
        !Hamiltonian(hs, cfg.grid).splittable())
      rd.fail("dynamics.scheme: split-step needs a periodic grid, no theta star term, no eta.L term "
              "and no quadrature non-local path");
  }

  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return cfg;
}

}  // namespace

ScenarioConfig parse_config_string(const std::string& text, const std::string& base_dir) {
  try {
    return parse_yaml(text, base_dir);
  } catch (const YAML::Exception& e) {
    throw ConfigError({fmt::format("line {}, column {}: {}", e.mark.line + 1, e.mark.column + 1, e.msg)});
  }
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError({fmt::format("cannot read config file '{}'", path)});
  std::stringstream ss;
  ss << is.rdbuf();
  const auto dir = fs::path(path).parent_path();
  return parse_config_string(ss.str(), dir.empty() ? "." : dir.string());
}

nlohmann::ordered_json ScenarioConfig::to_json() const {
  using J = nlohmann::ordered_json;
  const int dim = grid.dim();
  J j;
  j["name"] = name;
  std::vector<std::size_t> pts;
  std::vector<double> ext;
  for (int a = 0; a < dim; ++a) {
    pts.push_back(grid.points(a));
    ext.push_back(grid.extent(a));
  }
  j["grid"] = {{"dim", dim}, {"points", pts}, {"extent", ext}, {"boundary", to_string(grid.boundary())}};
  const auto& hs = hamiltonian;
  j["units"] = {{"hbar", hs.hbar}, {"mass", hs.mass}};
  J local = {{"kind", to_string(hs.local.kind)}};
  switch (hs.local.kind) {
    case LocalKind::linear: local["h"] = hs.local.slope; break;
    case LocalKind::harmonic: local["omega"] = hs.local.omega; break;
    case LocalKind::gaussian_well:
      local["depth"] = hs.local.depth;
      local["width"] = hs.local.width;
      break;
    case LocalKind::complex_absorber:
      local["W0"] = hs.local.absorber_strength;
      local["region"] = {hs.local.region_lo, hs.local.region_hi};
      break;
    case LocalKind::none: break;
  }
  j["local"] = local;
  if (!hs.nonlocal) {
    j["nonlocal"] = {{"kind", "none"}};
  } else if (hs.nonlocal->is_frahn_lemmer()) {
    const auto& fl = hs.nonlocal->frahn_lemmer_params();
    j["nonlocal"] = {{"kind", "frahn-lemmer"}, {"V0", fl.v0}, {"beta", fl.beta}};
  } else {
    const auto& t = hs.nonlocal->tabulated_params();
    j["nonlocal"] = {{"kind", "tabulated"}, {"n", t.n}, {"symmetric", t.symmetric}};
  }
  const auto& th = hs.nc.theta();
  const auto& et = hs.nc.eta();
  j["nc"] = {{"theta", {th[0], th[1], th[2]}}, {"eta", {et[0], et[1], et[2]}}, {"hbar", nc_hbar},
             {"xi", hs.nc.xi()}};
  j["dynamics"] = {{"mode", to_string(propagator.mode)},
                   {"dt", propagator.dt},
                   {"steps", steps},
                   {"scheme", to_string(propagator.scheme)},
                   {"nonlocal_path", to_string(hs.nonlocal_path)},
                   {"solver_tol", propagator.solver_tol},
                   {"max_iterations", propagator.max_iterations}};
  if (hs.fl_coefficients) j["dynamics"]["fl_coefficients"] = {{"a", hs.fl_coefficients->a}, {"b", hs.fl_coefficients->b}};
  J init;
  switch (initial.kind) {
    case InitialKind::gaussian_packet:
      init = {{"kind", "gaussian-packet"}, {"center", point_list(initial.center, dim)},
              {"width", initial.width}, {"momentum", point_list(initial.momentum, dim)}};
      break;
    case InitialKind::lz_eigenstate:
      init = {{"kind", "lz-eigenstate"}, {"m", initial.m}, {"width", initial.width},
              {"relax", initial.relax}, {"relax_dt", initial.relax_dt}};
      break;
    case InitialKind::file:
      init = {{"kind", "file"}, {"path", initial.path}};
      break;
  }
  j["initial"] = init;
  j["output"] = {{"sample_every", output.sample_every}, {"dump_fields", output.dump_fields},
                 {"out_dir", output.out_dir}};
  return j;
}

}  // namespace nonloc
