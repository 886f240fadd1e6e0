#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "stc/config.hpp"
#include "stc/errors.hpp"
#include "support/config_strings.hpp"

using namespace stc;
using nlohmann::json;
using stc_test::kOverrideConfigJson;
using stc_test::kSmallConfigJson;

namespace {

// Parse the reference text, apply a mutation, and return the new text.
template <typename Fn>
std::string mutated(Fn&& fn) {
  json j = json::parse(kSmallConfigJson);
  fn(j);
  return j.dump();
}

}  // namespace

TEST_CASE("reference configuration parses with the documented fields") {
  Config cfg = parse_config(kSmallConfigJson);
  CHECK(cfg.model == "uncertain2d");
  CHECK(cfg.trigger.kind == "mixed");
  CHECK(cfg.trigger.sigma == 0.0049);
  CHECK(cfg.trigger.epsilon == 4.0);
  CHECK(cfg.Z.dim() == 2);
  CHECK(cfg.Z.lo(0) == -0.1);
  CHECK(cfg.Z.hi(1) == 0.1);
  CHECK(cfg.w_lo == 1e-6);
  CHECK(cfg.w_hi == 0.1);
  CHECK(cfg.inflation == 0.05);
  CHECK(cfg.synth.rows == 4000);
  CHECK(cfg.synth.safety == 1.15);
  CHECK(cfg.radius_safety == 0.99);
  REQUIRE(cfg.grid.tau1.has_value());
  CHECK(*cfg.grid.tau1 == 0.00063);
  CHECK(cfg.grid.ratio == 1.01);
  CHECK(cfg.grid.q == 434);
  CHECK(cfg.h == 5e-5);
  CHECK(cfg.event_tol == 1e-9);
  CHECK(cfg.disturbance_mode == "sine");
  CHECK(cfg.runs == 6);
  CHECK(cfg.ball_radius == 2.0);
  CHECK(cfg.horizon == 5.0);
  CHECK(cfg.benchmark_seed == 2024);
  CHECK_FALSE(cfg.delta_override.has_value());
}

TEST_CASE("override coefficients are picked up when present") {
  Config cfg = parse_config(kOverrideConfigJson);
  REQUIRE(cfg.delta_override.has_value());
  CHECK(cfg.delta_override->delta0 == 0.0353);
  CHECK(cfg.delta_override->delta1 == 0.344);
}

TEST_CASE("malformed JSON is a configuration error") {
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2, 3]"), ConfigError);
}

TEST_CASE("unknown keys are rejected with the offending name") {
  try {
    parse_config(mutated([](json& j) { j["bogus_section"] = 1; }));
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus_section") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["trigger"]["extra"] = 2.0; })),
                  ConfigError);
}

TEST_CASE("the origin must be interior to the sampling box") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) {
                    j["sets"]["z"] = {{0.0, 1.0}, {-1.0, 1.0}};
                  })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) {
                    j["sets"]["z"] = {{0.5, 1.0}, {0.5, 1.0}};
                  })),
                  ConfigError);
}

TEST_CASE("scaling interval validation") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["sets"]["w"] = {0.0, 0.1}; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["sets"]["w"] = {0.2, 0.1}; })),
                  ConfigError);
}

TEST_CASE("trigger parameter validation") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["trigger"]["sigma"] = -0.1; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["trigger"]["epsilon"] = 0.0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["trigger"]["kind"] = "nope"; })),
                  ConfigError);
  // the pure error-norm trigger admits no state weight
  CHECK_THROWS_AS(parse_config(mutated([](json& j) {
                    j["trigger"]["kind"] = "lebesgue";
                    j["trigger"]["sigma"] = 0.1;
                  })),
                  ConfigError);
}

TEST_CASE("grid and integrator validation") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["grid"]["ratio"] = 1.0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["grid"]["q"] = 0; })), ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["grid"]["tau1"] = -1e-3; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["integrator"]["h"] = 0.0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["integrator"]["event_tol"] = -1e-9; })),
                  ConfigError);
}

TEST_CASE("decay-fit options validation") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["delta"]["safety"] = 0.5; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["delta"]["safety"] = 20.0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["delta"]["rows"] = 0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["delta"]["eps_delta"] = 0.0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) {
                    j["delta"]["override"] = {{"delta0", 0.1}};
                  })),
                  ConfigError);
}

TEST_CASE("benchmark section validation") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["benchmark"]["runs"] = 0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["benchmark"]["horizon"] = -1.0; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j["benchmark"]["ball_radius"] = 0.0; })),
                  ConfigError);
}

TEST_CASE("constant disturbance mode validates the channel count") {
  Config cfg = parse_config(mutated([](json& j) {
    j["disturbance"] = {{"mode", "constant"}, {"values", {1.0, 0.5, -0.5}}};
  }));
  auto plant = config_plant(cfg);
  auto sig = config_disturbance(cfg, *plant);
  CHECK(sig->dim() == 3);

  Config bad = parse_config(mutated([](json& j) {
    j["disturbance"] = {{"mode", "constant"}, {"values", {1.0}}};
  }));
  auto plant2 = config_plant(bad);
  CHECK_THROWS_AS(config_disturbance(bad, *plant2), ConfigError);

  // constant values must respect the disturbance bounds
  Config oob = parse_config(mutated([](json& j) {
    j["disturbance"] = {{"mode", "constant"}, {"values", {9.0, 0.0, 0.0}}};
  }));
  auto plant3 = config_plant(oob);
  CHECK_THROWS_AS(config_disturbance(oob, *plant3), ConfigError);
}

TEST_CASE("sine amplitude must respect the disturbance bounds") {
  Config cfg = parse_config(mutated([](json& j) { j["disturbance"]["amplitude"] = 9.0; }));
  auto plant = config_plant(cfg);
  CHECK_THROWS_AS(config_disturbance(cfg, *plant), ConfigError);
}

TEST_CASE("model hash identifies the model-plus-trigger pair") {
  Config a = parse_config(kSmallConfigJson);
  Config b = parse_config(kSmallConfigJson);
  CHECK(config_model_hash(a) == config_model_hash(b));

  Config c = parse_config(mutated([](json& j) { j["trigger"]["epsilon"] = 3.9; }));
  CHECK(config_model_hash(a) != config_model_hash(c));

  Config d = parse_config(mutated([](json& j) { j["trigger"]["sigma"] = 0.005; }));
  CHECK(config_model_hash(a) != config_model_hash(d));
}

TEST_CASE("missing required sections are reported") {
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j.erase("model"); })), ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j.erase("trigger"); })), ConfigError);
  CHECK_THROWS_AS(parse_config(mutated([](json& j) { j.erase("sets"); })), ConfigError);
}
