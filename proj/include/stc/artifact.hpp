#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "stc/geometry.hpp"
#include "stc/isochron.hpp"
#include "stc/models.hpp"
#include "stc/setsynth.hpp"

namespace stc {

/// Persisted output of a synthesis run: everything needed to rebuild the
/// dwell engine and reproduce identical region decisions.  Doubles are
/// serialized as 17-significant-digit decimal strings (bit-exact round
/// trip).
struct Artifact {
  int version = 1;

  std::string model;         // plant registry name
  std::string trigger_kind;  // trigger registry kind
  double sigma = 0.0;
  double epsilon = 0.0;
  std::uint64_t model_hash = 0;

  double alpha = 1.0;  // plant homogeneity degree
  double theta = 1.0;  // trigger homogeneity degree

  double delta0 = 0.0, delta1 = 0.0, eps_delta = 0.0, margin = 0.0;

  double r = 0.0, w_lo = 0.0, w_hi = 0.0;
  double tau1 = 0.0, ratio = 0.0;
  int q = 0;

  Box Z, phi_box, e_box;

  long rows = 0, verify_points = 0;
  int refits = 0;
  bool degenerate_tie = false;
  bool inflated_fallback = false;
};

/// Canonical model + trigger identity hash (FNV-1a over the description
/// string); artifacts refuse to run against configs with a different hash.
std::uint64_t model_description_hash(const std::string& model, const std::string& kind,
                                     double sigma, double epsilon);

std::string artifact_to_json(const Artifact& art);
/// Parses and fully validates (known registry entries, ratio > 1, positive
/// grid and cone parameters, matching dimensions and hash); throws
/// ConfigError on any violation.
Artifact artifact_from_json(const std::string& text);

void save_artifact(const Artifact& art, const std::string& path);
Artifact load_artifact(const std::string& path);

/// Live objects rebuilt from an artifact.
struct System {
  std::unique_ptr<PlantModel> plant;
  std::unique_ptr<TriggerSpec> trigger;
  std::unique_ptr<IsochronEngine> engine;      // holds a pointer to trigger
  std::unique_ptr<RegionPartition> partition;  // owns copies of engine + grid
};
System rebuild_system(const Artifact& art);

/// The synthesis working sets recorded in the artifact.
SetSystem artifact_sets(const Artifact& art);

}  // namespace stc
