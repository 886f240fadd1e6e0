#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stc/artifact.hpp"
#include "stc/config.hpp"
#include "stc/errors.hpp"
#include "stc/pipeline.hpp"
#include "stc/rng.hpp"
#include "support/config_strings.hpp"

using namespace stc;
using stc_test::kSmallConfigJson;

namespace {

std::uint64_t bits(double v) {
  std::uint64_t u = 0;
  std::memcpy(&u, &v, sizeof(u));
  return u;
}

void check_bit_equal(const Artifact& a, const Artifact& b) {
  CHECK(a.version == b.version);
  CHECK(a.model == b.model);
  CHECK(a.trigger_kind == b.trigger_kind);
  CHECK(bits(a.sigma) == bits(b.sigma));
  CHECK(bits(a.epsilon) == bits(b.epsilon));
  CHECK(a.model_hash == b.model_hash);
  CHECK(bits(a.alpha) == bits(b.alpha));
  CHECK(bits(a.theta) == bits(b.theta));
  CHECK(bits(a.delta0) == bits(b.delta0));
  CHECK(bits(a.delta1) == bits(b.delta1));
  CHECK(bits(a.eps_delta) == bits(b.eps_delta));
  CHECK(bits(a.margin) == bits(b.margin));
  CHECK(bits(a.r) == bits(b.r));
  CHECK(bits(a.w_lo) == bits(b.w_lo));
  CHECK(bits(a.w_hi) == bits(b.w_hi));
  CHECK(bits(a.tau1) == bits(b.tau1));
  CHECK(bits(a.ratio) == bits(b.ratio));
  CHECK(a.q == b.q);
  CHECK(a.rows == b.rows);
  CHECK(a.verify_points == b.verify_points);
  CHECK(a.refits == b.refits);
  auto check_box = [](const Box& x, const Box& y) {
    REQUIRE(x.dim() == y.dim());
    for (int i = 0; i < x.dim(); ++i) {
      CHECK(bits(x.lo(i)) == bits(y.lo(i)));
      CHECK(bits(x.hi(i)) == bits(y.hi(i)));
    }
  };
  check_box(a.Z, b.Z);
  check_box(a.phi_box, b.phi_box);
  check_box(a.e_box, b.e_box);
}

// One synthesis shared by the whole binary: the expensive part of the fixture.
const SynthesisOutcome& outcome() {
  static SynthesisOutcome out = run_synthesis(parse_config(kSmallConfigJson));
  return out;
}

}  // namespace

TEST_CASE("synthesis is deterministic for a fixed configuration") {
  Config cfg = parse_config(kSmallConfigJson);
  SynthesisOutcome a = run_synthesis(cfg);
  SynthesisOutcome b = run_synthesis(cfg);
  CHECK(artifact_to_json(a.artifact) == artifact_to_json(b.artifact));
  CHECK(a.coeffs.margin == b.coeffs.margin);
}

TEST_CASE("artifact JSON round-trips bit-exactly") {
  const Artifact& art = outcome().artifact;
  std::string text = artifact_to_json(art);
  Artifact back = artifact_from_json(text);
  check_bit_equal(art, back);
  // serialization is canonical: a second trip gives the same text
  CHECK(artifact_to_json(back) == text);
}

TEST_CASE("artifact file save and load preserve region decisions") {
  const Artifact& art = outcome().artifact;
  auto path = std::filesystem::temp_directory_path() / "stc_artifact_roundtrip.json";
  save_artifact(art, path.string());
  Artifact back = load_artifact(path.string());
  check_bit_equal(art, back);

  System sys1 = rebuild_system(art);
  System sys2 = rebuild_system(back);
  Rng rng(99);
  for (int k = 0; k < 300; ++k) {
    std::vector<double> x(2);
    rng.in_ball(2.0, x);
    CHECK(sys1.partition->region_index(x) == sys2.partition->region_index(x));
    CHECK(bits(sys1.engine->tau_down(x, 1.0)) == bits(sys2.engine->tau_down(x, 1.0)));
  }
  std::filesystem::remove(path);
}

TEST_CASE("loading rejects a degenerate grid ratio") {
  nlohmann::json j = nlohmann::json::parse(artifact_to_json(outcome().artifact));
  j["grid"]["ratio"] = "1.0";
  CHECK_THROWS_AS(artifact_from_json(j.dump()), ConfigError);
}

TEST_CASE("loading rejects a tampered model hash") {
  nlohmann::json j = nlohmann::json::parse(artifact_to_json(outcome().artifact));
  j["model"]["hash"] = "12345";
  CHECK_THROWS_AS(artifact_from_json(j.dump()), ConfigError);
}

TEST_CASE("loading rejects unknown models and non-positive cone data") {
  nlohmann::json j = nlohmann::json::parse(artifact_to_json(outcome().artifact));
  j["model"]["name"] = "no-such-plant";
  CHECK_THROWS_AS(artifact_from_json(j.dump()), ConfigError);

  nlohmann::json k = nlohmann::json::parse(artifact_to_json(outcome().artifact));
  k["cone"]["r"] = "0";
  CHECK_THROWS_AS(artifact_from_json(k.dump()), ConfigError);
}

TEST_CASE("artifacts refuse to run against a different model") {
  Config cfg = parse_config(kSmallConfigJson);
  Config other = cfg;
  other.trigger.epsilon = 3.9;  // different trigger constant, different hash
  CHECK_THROWS_AS(run_benchmark(other, outcome().artifact, 1), ConfigError);
}

TEST_CASE("benchmark results are independent of the worker count") {
  Config cfg = parse_config(kSmallConfigJson);
  const Artifact& art = outcome().artifact;

  BenchResults serial = run_benchmark(cfg, art, 1);
  BenchResults pooled = run_benchmark(cfg, art, 3);
  REQUIRE(serial.rows.size() == pooled.rows.size());
  REQUIRE(serial.rows.size() == static_cast<std::size_t>(cfg.runs) * 3);

  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    const BenchRow &a = serial.rows[i], &b = pooled.rows[i];
    CHECK(a.run == b.run);
    CHECK(a.scheme == b.scheme);
    CHECK(a.x0 == b.x0);
    CHECK(a.samplings == b.samplings);
    CHECK(bits(a.min_dwell) == bits(b.min_dwell));
    CHECK(bits(a.max_trigger) == bits(b.max_trigger));
    CHECK(a.coverage_ok == b.coverage_ok);
  }
  CHECK(serial.mean_region == pooled.mean_region);
  CHECK(serial.mean_baseline == pooled.mean_baseline);
  CHECK(serial.mean_etc == pooled.mean_etc);
  CHECK(serial.min_dwell_region == pooled.min_dwell_region);
  CHECK(serial.flagged == pooled.flagged);

  // CSV output is deterministic except for the wall-time column
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path();
  auto p1 = dir / "stc_bench_serial.csv", p2 = dir / "stc_bench_pooled.csv";
  write_benchmark_csv(serial, p1.string());
  write_benchmark_csv(pooled, p2.string());
  CHECK(fs::file_size(p1) > 0);
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("a corrupted decay coefficient trips the dominance suite") {
  Config cfg = parse_config(kSmallConfigJson);
  Artifact bad = outcome().artifact;
  bad.delta1 *= 0.5;

  VerifySuiteReport report = run_verify_suites(cfg, bad);
  CHECK_FALSE(report.all_pass);
  bool found = false;
  for (const auto& suite : report.suites) {
    if (suite.name == "mu-dominance") {
      found = true;
      CHECK_FALSE(suite.pass);
    }
  }
  CHECK(found);
}

TEST_CASE("single sampling when the horizon ends before the first dwell") {
  Config cfg = parse_config(kSmallConfigJson);
  cfg.horizon = 1e-4;  // below tau1 = 6.3e-4
  const Artifact& art = outcome().artifact;
  std::vector<double> x0 = {-1.0, -1.0};

  for (Scheme s : {Scheme::region_stc, Scheme::baseline_stc, Scheme::etc}) {
    SimResult res = run_single(cfg, art, x0, s);
    CHECK(res.samplings == 1);
    CHECK(res.min_dwell == 0.0);
    CHECK(res.coverage_ok);
  }
}

TEST_CASE("plot data files cover every scheme") {
  Config cfg = parse_config(kSmallConfigJson);
  cfg.horizon = 0.2;  // keep the series short
  const Artifact& art = outcome().artifact;
  std::vector<double> x0 = {-1.0, -1.0};

  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "stc_plot_data_test";
  fs::remove_all(dir);
  write_plot_data(cfg, art, x0, dir.string());
  for (const char* scheme : {"region-stc", "baseline-stc", "etc"}) {
    CHECK(fs::file_size(dir / (std::string("traj_") + scheme + ".csv")) > 0);
    CHECK(fs::file_size(dir / (std::string("dwell_") + scheme + ".csv")) > 0);
  }
  fs::remove_all(dir);
}

TEST_CASE("synthesis report exposes the fit and coverage summary") {
  const SynthesisOutcome& out = outcome();
  std::string report = synthesis_report_json(out);
  nlohmann::json j = nlohmann::json::parse(report);
  CHECK(j.contains("delta"));
  CHECK(j.contains("cone"));
  CHECK(j.contains("grid"));
  CHECK(j.contains("coverage"));
  CHECK(std::stod(j["delta"]["delta1"].get<std::string>()) == out.artifact.delta1);
  CHECK(std::stod(j["coverage"]["covered_fraction"].get<std::string>()) == 1.0);
}
