#include "stc/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stc/artifact.hpp"
#include "stc/errors.hpp"
#include "stc/schedulers.hpp"

namespace stc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config." + where + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

const json* get(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double num(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

Box parse_box(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of [lo, hi] pairs");
  std::vector<std::array<double, 2>> iv;
  for (const auto& pair : v) {
    if (!pair.is_array() || pair.size() != 2) fail(where, "each interval must be [lo, hi]");
    iv.push_back({num(pair[0], where), num(pair[1], where)});
  }
  return Box(iv);
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root,
             {"model", "trigger", "sets", "delta", "radius", "grid", "integrator",
              "disturbance", "benchmark"},
             "(top)");

  Config cfg;

  const json* model = get(root, "model");
  if (model == nullptr) throw ConfigError("config.model: required section missing");
  check_keys(*model, {"name"}, "model");
  const json* name = get(*model, "name");
  if (name == nullptr) fail("model.name", "required");
  cfg.model = text(*name, "model.name");

  const json* trig = get(root, "trigger");
  if (trig == nullptr) throw ConfigError("config.trigger: required section missing");
  check_keys(*trig, {"kind", "sigma", "epsilon"}, "trigger");
  const json* kind = get(*trig, "kind");
  const json* eps = get(*trig, "epsilon");
  if (kind == nullptr) fail("trigger.kind", "required");
  if (eps == nullptr) fail("trigger.epsilon", "required");
  cfg.trigger.kind = text(*kind, "trigger.kind");
  cfg.trigger.epsilon = num(*eps, "trigger.epsilon");
  if (const json* s = get(*trig, "sigma")) cfg.trigger.sigma = num(*s, "trigger.sigma");
  if (!(cfg.trigger.epsilon > 0.0)) fail("trigger.epsilon", "must be positive");
  if (!(cfg.trigger.sigma >= 0.0)) fail("trigger.sigma", "must be non-negative");
  if (cfg.trigger.kind != "mixed" && cfg.trigger.kind != "lebesgue")
    fail("trigger.kind", "unknown kind '" + cfg.trigger.kind + "' (mixed | lebesgue)");
  if (cfg.trigger.kind == "lebesgue" && cfg.trigger.sigma != 0.0)
    fail("trigger.sigma", "must be 0 for the pure error-norm trigger");

  const json* sets = get(root, "sets");
  if (sets == nullptr) throw ConfigError("config.sets: required section missing");
  check_keys(*sets, {"z", "w", "inflation"}, "sets");
  const json* z = get(*sets, "z");
  const json* w = get(*sets, "w");
  if (z == nullptr) fail("sets.z", "required");
  if (w == nullptr) fail("sets.w", "required");
  try {
    cfg.Z = parse_box(*z, "sets.z");
  } catch (const ConfigError&) {
    throw;
  }
  for (int i = 0; i < cfg.Z.dim(); ++i)
    if (!(cfg.Z.lo(i) < 0.0 && 0.0 < cfg.Z.hi(i)))
      fail("sets.z", "the origin must lie in the interior of z");
  if (!w->is_array() || w->size() != 2) fail("sets.w", "expected [w_lo, w_hi]");
  cfg.w_lo = num((*w)[0], "sets.w");
  cfg.w_hi = num((*w)[1], "sets.w");
  if (!(cfg.w_lo > 0.0) || !(cfg.w_hi >= cfg.w_lo))
    fail("sets.w", "need 0 < w_lo <= w_hi");
  if (const json* inf = get(*sets, "inflation")) {
    cfg.inflation = num(*inf, "sets.inflation");
    if (!(cfg.inflation >= 0.0)) fail("sets.inflation", "must be non-negative");
  }

  if (const json* delta = get(root, "delta")) {
    check_keys(*delta,
               {"eps_delta", "rows", "boundary_rows", "verify_points", "max_refits",
                "seed", "safety", "override"},
               "delta");
    if (const json* v = get(*delta, "safety")) {
      cfg.synth.safety = num(*v, "delta.safety");
      if (!(cfg.synth.safety >= 1.0 && cfg.synth.safety <= 10.0))
        fail("delta.safety", "must be in [1, 10]");
    }
    if (const json* v = get(*delta, "eps_delta")) {
      cfg.synth.eps_delta = num(*v, "delta.eps_delta");
      if (!(cfg.synth.eps_delta > 0.0)) fail("delta.eps_delta", "must be positive");
    }
    if (const json* v = get(*delta, "rows")) {
      cfg.synth.rows = static_cast<int>(integer(*v, "delta.rows"));
      if (cfg.synth.rows < 1) fail("delta.rows", "must be at least 1");
    }
    if (const json* v = get(*delta, "boundary_rows")) {
      cfg.synth.boundary_rows = static_cast<int>(integer(*v, "delta.boundary_rows"));
      if (cfg.synth.boundary_rows < 0) fail("delta.boundary_rows", "must be non-negative");
    }
    if (const json* v = get(*delta, "verify_points")) {
      cfg.synth.verify_points = integer(*v, "delta.verify_points");
      if (cfg.synth.verify_points < 1) fail("delta.verify_points", "must be at least 1");
    }
    if (const json* v = get(*delta, "max_refits")) {
      cfg.synth.max_refits = static_cast<int>(integer(*v, "delta.max_refits"));
      if (cfg.synth.max_refits < 0) fail("delta.max_refits", "must be non-negative");
    }
    if (const json* v = get(*delta, "seed"))
      cfg.synth.seed = static_cast<std::uint64_t>(integer(*v, "delta.seed"));
    if (const json* ov = get(*delta, "override")) {
      check_keys(*ov, {"delta0", "delta1"}, "delta.override");
      const json* d0 = get(*ov, "delta0");
      const json* d1 = get(*ov, "delta1");
      if (d0 == nullptr || d1 == nullptr)
        fail("delta.override", "needs both delta0 and delta1");
      DeltaOverride o;
      o.delta0 = num(*d0, "delta.override.delta0");
      o.delta1 = num(*d1, "delta.override.delta1");
      if (!(o.delta0 >= 0.0)) fail("delta.override.delta0", "must be non-negative");
      if (!(o.delta1 > 0.0)) fail("delta.override.delta1", "must be positive");
      cfg.delta_override = o;
    }
  }

  if (const json* radius = get(root, "radius")) {
    check_keys(*radius, {"safety"}, "radius");
    if (const json* v = get(*radius, "safety")) {
      cfg.radius_safety = num(*v, "radius.safety");
      if (!(cfg.radius_safety > 0.0 && cfg.radius_safety <= 1.0))
        fail("radius.safety", "must lie in (0, 1]");
    }
  }

  if (const json* grid = get(root, "grid")) {
    check_keys(*grid, {"tau1", "ratio", "q"}, "grid");
    if (const json* v = get(*grid, "tau1")) {
      cfg.grid.tau1 = num(*v, "grid.tau1");
      if (!(*cfg.grid.tau1 > 0.0)) fail("grid.tau1", "must be positive");
    }
    if (const json* v = get(*grid, "ratio")) {
      cfg.grid.ratio = num(*v, "grid.ratio");
      if (!(cfg.grid.ratio > 1.0)) fail("grid.ratio", "must exceed 1");
    }
    if (const json* v = get(*grid, "q")) {
      cfg.grid.q = static_cast<int>(integer(*v, "grid.q"));
      if (cfg.grid.q < 1) fail("grid.q", "must be at least 1");
    }
  }

  if (const json* integ = get(root, "integrator")) {
    check_keys(*integ, {"h", "event_tol"}, "integrator");
    if (const json* v = get(*integ, "h")) {
      cfg.h = num(*v, "integrator.h");
      if (!(cfg.h > 0.0)) fail("integrator.h", "must be positive");
    }
    if (const json* v = get(*integ, "event_tol")) {
      cfg.event_tol = num(*v, "integrator.event_tol");
      if (!(cfg.event_tol > 0.0)) fail("integrator.event_tol", "must be positive");
    }
  }

  if (const json* dist = get(root, "disturbance")) {
    check_keys(*dist, {"mode", "amplitude", "frequency", "values"}, "disturbance");
    if (const json* v = get(*dist, "mode")) cfg.disturbance_mode = text(*v, "disturbance.mode");
    if (cfg.disturbance_mode != "sine" && cfg.disturbance_mode != "constant")
      fail("disturbance.mode", "expected 'sine' or 'constant'");
    if (const json* v = get(*dist, "amplitude"))
      cfg.amplitude = num(*v, "disturbance.amplitude");
    if (const json* v = get(*dist, "frequency")) {
      cfg.frequency = num(*v, "disturbance.frequency");
      if (!(cfg.frequency > 0.0)) fail("disturbance.frequency", "must be positive");
    }
    if (const json* v = get(*dist, "values")) {
      if (!v->is_array()) fail("disturbance.values", "expected an array");
      cfg.constant_values.clear();
      for (const auto& c : *v) cfg.constant_values.push_back(num(c, "disturbance.values"));
    }
  }

  if (const json* bench = get(root, "benchmark")) {
    check_keys(*bench, {"runs", "ball_radius", "horizon", "seed"}, "benchmark");
    if (const json* v = get(*bench, "runs")) {
      cfg.runs = static_cast<int>(integer(*v, "benchmark.runs"));
      if (cfg.runs < 1) fail("benchmark.runs", "must be at least 1");
    }
    if (const json* v = get(*bench, "ball_radius")) {
      cfg.ball_radius = num(*v, "benchmark.ball_radius");
      if (!(cfg.ball_radius > 0.0)) fail("benchmark.ball_radius", "must be positive");
    }
    if (const json* v = get(*bench, "horizon")) {
      cfg.horizon = num(*v, "benchmark.horizon");
      if (!(cfg.horizon > 0.0)) fail("benchmark.horizon", "must be positive");
    }
    if (const json* v = get(*bench, "seed"))
      cfg.benchmark_seed = static_cast<std::uint64_t>(integer(*v, "benchmark.seed"));
  }

  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::unique_ptr<PlantModel> config_plant(const Config& cfg) { return make_plant(cfg.model); }

std::unique_ptr<TriggerSpec> config_trigger(const Config& cfg, int state_dim) {
  return make_trigger(cfg.trigger.kind, state_dim, cfg.trigger.sigma, cfg.trigger.epsilon);
}

std::unique_ptr<DisturbanceSignal> config_disturbance(const Config& cfg,
                                                      const PlantModel& plant) {
  const int md = plant.disturbances().dim();
  if (md == 0) return DisturbanceSignal::constant({});
  if (cfg.disturbance_mode == "sine") {
    if (md != 3)
      throw ConfigError("disturbance.mode 'sine' needs a 3-channel plant, got " +
                        std::to_string(md));
    const Box& box = plant.disturbances().box;
    if (-std::abs(cfg.amplitude) < box.lo(0) || std::abs(cfg.amplitude) > box.hi(0))
      throw ConfigError("disturbance.amplitude: sine exceeds the first channel bounds");
    if (box.lo(1) > -1.0 || box.hi(1) < 1.0 || box.lo(2) > -1.0 || box.hi(2) < 1.0)
      throw ConfigError("disturbance: sine mode needs channels 2 and 3 to admit [-1, 1]");
    return DisturbanceSignal::sine_modulated(cfg.amplitude, cfg.frequency);
  }
  if (static_cast<int>(cfg.constant_values.size()) != md)
    throw ConfigError("disturbance.values: expected " + std::to_string(md) + " channels");
  if (!plant.disturbances().contains(cfg.constant_values, 0.0))
    throw ConfigError("disturbance.values: outside the plant's disturbance bounds");
  return DisturbanceSignal::constant(cfg.constant_values);
}

std::uint64_t config_model_hash(const Config& cfg) {
  return model_description_hash(cfg.model, cfg.trigger.kind, cfg.trigger.sigma,
                                cfg.trigger.epsilon);
}

}  // namespace stc
