#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stc/geometry.hpp"
#include "stc/models.hpp"
#include "stc/setsynth.hpp"
#include "stc/simulate.hpp"

namespace stc {

struct TriggerConfig {
  std::string kind = "mixed";
  double sigma = 0.0;
  double epsilon = 0.0;  // eps_bar; the trigger constant is its square
};

struct GridConfig {
  std::optional<double> tau1;  // absent: auto, spanning up to the origin-slice bound
  double ratio = 1.01;
  int q = 434;
};

struct DeltaOverride {
  double delta0 = 0.0;
  double delta1 = 0.0;
};

/// Parsed and validated run configuration.  Defaults follow the two-state
/// benchmark study; see README for the JSON schema.
struct Config {
  std::string model = "uncertain2d";
  TriggerConfig trigger;

  Box Z;                      // must contain 0 in its interior
  double w_lo = 0.0, w_hi = 0.0;
  double inflation = 0.05;

  SynthesisOptions synth;     // rows, boundary_rows, verify_points, eps_delta, max_refits, seed
  std::optional<DeltaOverride> delta_override;

  double radius_safety = 0.99;
  GridConfig grid;

  double h = 5e-5;
  double event_tol = 1e-9;

  std::string disturbance_mode = "sine";  // "sine" | "constant"
  double amplitude = 4.0;
  double frequency = 1.0;
  std::vector<double> constant_values;    // mode "constant" only

  int runs = 100;
  double ball_radius = 2.0;
  double horizon = 5.0;
  std::uint64_t benchmark_seed = 2024;
};

/// Parses the JSON text and validates every field (ranges, interior origin,
/// unknown keys).  Throws ConfigError with a field-level message.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

std::unique_ptr<PlantModel> config_plant(const Config& cfg);
std::unique_ptr<TriggerSpec> config_trigger(const Config& cfg, int state_dim);

/// Disturbance realization selected by the config; validates the channel
/// count against the plant.
std::unique_ptr<DisturbanceSignal> config_disturbance(const Config& cfg,
                                                      const PlantModel& plant);

/// Hash of the canonical model + trigger description (see artifact.hpp);
/// artifacts made from one config refuse to run against another model.
std::uint64_t config_model_hash(const Config& cfg);

}  // namespace stc
