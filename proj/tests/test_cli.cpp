#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nonloc/field_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSource = NONLOC_SOURCE_DIR;
const std::string kCli = NONLOC_CLI;

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("nonloc_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args) {
  const fs::path d = fs::temp_directory_path() / "nonloc_cli_io";
  fs::create_directories(d);
  const std::string cmd = kCli + " " + args + " > " + (d / "out").string() + " 2> " + (d / "err").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(d / "out"), slurp(d / "err")};
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string scenario(const std::string& name) { return (kSource / "scenarios" / (name + ".yaml")).string(); }

// Numbers agree to 1e-9 (relative above 1), everything else exactly.
void compare_json(const json& got, const json& want, const std::string& path, int& mismatches) {
  if (want.is_number() && got.is_number()) {
    const double a = got.get<double>(), b = want.get<double>();
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) {
      if (mismatches++ < 10) MESSAGE(path << ": got " << a << ", golden " << b);
    }
    return;
  }
  if (got.type() != want.type()) {
    if (mismatches++ < 10) MESSAGE(path << ": type differs");
    return;
  }
  if (want.is_object()) {
    if (got.size() != want.size()) ++mismatches;
    for (auto it = want.begin(); it != want.end(); ++it) {
      if (!got.contains(it.key())) {
        if (mismatches++ < 10) MESSAGE(path << "." << it.key() << ": missing");
        continue;
      }
      compare_json(got[it.key()], it.value(), path + "." + it.key(), mismatches);
    }
  } else if (want.is_array()) {
    if (got.size() != want.size()) {
      if (mismatches++ < 10) MESSAGE(path << ": length differs");
      return;
    }
    for (std::size_t i = 0; i < want.size(); ++i)
      compare_json(got[i], want[i], path + "[" + std::to_string(i) + "]", mismatches);
  } else if (got != want) {
    if (mismatches++ < 10) MESSAGE(path << ": value differs");
  }
}

}  // namespace

TEST_CASE("check") {
  const fs::path d = scratch("check");
  SUBCASE("valid config") {
    const Run r = run("check " + scenario("nc-full-2d"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("OK\n", 0) == 0);
    CHECK(r.out.find("xi: ") != std::string::npos);
    CHECK(r.out.find("kernel_normalization: ") != std::string::npos);
  }
  SUBCASE("under-resolved beta") {
    const auto p = write_config(d, "b.yaml", "grid: {dim: 1, points: 64, extent: 20}\nnonlocal: {kind: frahn-lemmer, V0: 1, beta: 0.3}\n");
    const Run r = run("check " + p.string());
    CHECK(r.code == 2);
    const json e = json::parse(r.err);
    CHECK(e["category"] == "config");
    CHECK(e["message"].get<std::string>().find("under-resolved") != std::string::npos);
  }
  SUBCASE("xi of at least one") {
    const auto p = write_config(d, "x.yaml", "grid: {dim: 2, points: 32, extent: 10}\nnc: {theta_z: -4, eta_z: 1}\n");
    const Run r = run("check " + p.string());
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["message"].get<std::string>().find("xi") != std::string::npos);
  }
  SUBCASE("nc on a 1-D grid") {
    const auto p = write_config(d, "n.yaml", "grid: {dim: 1, points: 64, extent: 20}\nnc: {eta_z: 0.1}\n");
    const Run r = run("check " + p.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("dim >= 2") != std::string::npos);
  }
  SUBCASE("syntax error") {
    const auto p = write_config(d, "s.yaml", "grid: [1, 2\n");
    const Run r = run("check " + p.string());
    CHECK(r.code == 2);
    const json e = json::parse(r.err);
    CHECK(e["messages"].size() == 1);
    CHECK(e["messages"][0].get<std::string>().find("line") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(run("").code == 1);
    CHECK(run("check").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("--help").code == 0);
  }
}

TEST_CASE("dispersion") {
  Run r = run("dispersion --E 0.5 --V0 0 --beta 0.85");
  CHECK(r.code == 0);
  CHECK(r.out == "E,k_root\n0.5,1\n");

  r = run("dispersion --E 1.3 --V0 1.3 --beta 0.85");
  CHECK(r.code == 0);
  CHECK(r.out.find("1.3,0\n") != std::string::npos);

  r = run("dispersion --E 0.9 --V0 1 --beta 0.85");
  CHECK(r.code == 0);
  CHECK(r.out == "E,k_root\n");

  r = run("dispersion --E 1.5 --V0 2 --beta 2");
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);

  // only beta^2 enters, so a negative range is accepted
  CHECK(run("dispersion --E 1.5 --V0 2 --beta -2").out == r.out);

  r = run("dispersion --E 1 --V0 1 --beta 1 --m -1");
  CHECK(r.code == 2);
  CHECK(r.err.find("\"domain\"") != std::string::npos);
}

TEST_CASE("simulate") {
  const fs::path d = scratch("simulate");
  SUBCASE("free particle, determinism and dumps") {
    Run r = run("simulate " + scenario("free-1d") + " --out-dir " + (d / "a").string());
    REQUIRE(r.code == 0);
    const json s = json::parse(slurp(d / "a" / "summary.json"));
    CHECK(s["samples"].size() == 10);
    for (const auto& smp : s["samples"]) CHECK(smp["residual_l2"].get<double>() <= 1e-8);
    const json meta = json::parse(slurp(d / "a" / "run_meta.json"));
    CHECK(meta["config"]["name"] == "free-1d");

    r = run("simulate " + scenario("free-1d") + " --out-dir " + (d / "b").string() + " --dump-fields --sample-every 500");
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "a" / "summary.json") != slurp(d / "b" / "summary.json"));
    const auto psi = nonloc::read_complex_csv((d / "b" / "fields" / "step_0000500_psi.csv").string());
    CHECK(psi.size() == 256);
    CHECK(fs::exists(d / "b" / "fields" / "step_0001000_sigma_NL.csv"));

    r = run("simulate " + scenario("free-1d") + " --out-dir " + (d / "c").string());
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "a" / "summary.json") == slurp(d / "c" / "summary.json"));
  }
  SUBCASE("several configs in parallel") {
    const Run r = run("simulate " + scenario("free-1d") + " " + scenario("absorber-1d") + " --jobs 2 --out-dir " +
                      d.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(d / "free-1d" / "summary.json"));
    CHECK(fs::exists(d / "absorber-1d" / "summary.json"));
  }
  SUBCASE("phase-space sink toggles with eta") {
    std::string text = slurp(scenario("nc-full-2d"));
    const auto at = text.find("\n  eta_z: 0.05");
    REQUIRE(at != std::string::npos);
    auto with_steps = [&](std::string t) {
      t.replace(t.find("steps: 200"), 10, "steps: 20");
      return t;
    };
    const auto on = write_config(d, "on.yaml", with_steps(text));
    std::string off_text = with_steps(text);
    off_text.replace(off_text.find("\n  eta_z: 0.05"), 14, "\n  eta_z: 0.0");
    const auto off = write_config(d, "off.yaml", off_text);
    REQUIRE(run("simulate " + on.string() + " --out-dir " + (d / "on").string()).code == 0);
    REQUIRE(run("simulate " + off.string() + " --out-dir " + (d / "off").string()).code == 0);
    const json a = json::parse(slurp(d / "on" / "summary.json")), b = json::parse(slurp(d / "off" / "summary.json"));
    for (const auto& smp : a["samples"]) CHECK(smp["sink_integrals"]["C"].get<double>() != 0.0);
    for (const auto& smp : b["samples"]) CHECK(smp["sink_integrals"]["C"].get<double>() == 0.0);
  }
  SUBCASE("numerical failure") {
    const auto p = write_config(d, "f.yaml", R"(
grid: {dim: 1, points: 128, extent: 16}
nonlocal: {kind: frahn-lemmer, V0: 1, beta: 0.85}
dynamics: {dt: 0.5, steps: 2, solver_tol: 1e-14, max_iterations: 1}
initial: {momentum: 3}
)");
    const Run r = run("simulate " + p.string() + " --out-dir " + (d / "f").string());
    CHECK(r.code == 3);
    const json e = json::parse(r.err);
    CHECK(e["error"] == "iteration");
    CHECK(e.contains("residual"));
  }
  SUBCASE("config failure") {
    const auto p = write_config(d, "c.yaml", "grid: {dim: 1, points: 64, extent: 20}\nbogus: 1\n");
    CHECK(run("simulate " + p.string() + " --out-dir " + (d / "c").string()).code == 2);
  }
}

TEST_CASE("golden summaries") {
  const fs::path d = scratch("golden");
  for (const char* name : {"free-1d", "frahn-lemmer-1d", "absorber-1d", "nc-full-2d"}) {
    CAPTURE(name);
    const fs::path golden = kSource / "tests" / "golden" / (std::string(name) + ".json");
    REQUIRE(fs::exists(golden));
    const Run r = run("simulate " + scenario(name) + " --out-dir " + (d / name).string());
    REQUIRE(r.code == 0);
    int mismatches = 0;
    compare_json(json::parse(slurp(d / name / "summary.json")), json::parse(slurp(golden)), name, mismatches);
    CHECK(mismatches == 0);
  }
}
