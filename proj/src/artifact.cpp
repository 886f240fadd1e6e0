#include "stc/artifact.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stc/errors.hpp"
#include "stc/schedulers.hpp"
#include "stc/textio.hpp"

namespace stc {

namespace {

using nlohmann::json;

json box_to_json(const Box& b) {
  json arr = json::array();
  for (const auto& [lo, hi] : b.iv) arr.push_back({fmt17(lo), fmt17(hi)});
  return arr;
}

Box box_from_json(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError("artifact." + where + ": expected an array");
  std::vector<std::array<double, 2>> iv;
  for (const auto& pair : v) {
    if (!pair.is_array() || pair.size() != 2)
      throw ConfigError("artifact." + where + ": each interval must be [lo, hi]");
    iv.push_back({parse17(pair[0].get<std::string>()), parse17(pair[1].get<std::string>())});
  }
  return Box(iv);
}

const json& need(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("artifact." + where + ": missing '" + key + "'");
  return *it;
}

double dbl(const json& obj, const char* key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_string()) throw ConfigError("artifact." + where + "." + key +
                                        ": numbers are stored as decimal strings");
  return parse17(v.get<std::string>());
}

}  // namespace

std::uint64_t model_description_hash(const std::string& model, const std::string& kind,
                                     double sigma, double epsilon) {
  std::string canonical =
      "model=" + model + ";trigger=" + kind + ";sigma=" + fmt17(sigma) +
      ";epsilon=" + fmt17(epsilon);
  return fnv1a64(canonical);
}

std::string artifact_to_json(const Artifact& art) {
  json root;
  root["version"] = art.version;
  root["model"] = {{"name", art.model}, {"hash", std::to_string(art.model_hash)}};
  root["trigger"] = {{"kind", art.trigger_kind},
                     {"sigma", fmt17(art.sigma)},
                     {"epsilon", fmt17(art.epsilon)}};
  root["homogeneity"] = {{"alpha", fmt17(art.alpha)}, {"theta", fmt17(art.theta)}};
  root["delta"] = {{"delta0", fmt17(art.delta0)},
                   {"delta1", fmt17(art.delta1)},
                   {"eps_delta", fmt17(art.eps_delta)},
                   {"margin", fmt17(art.margin)}};
  root["cone"] = {{"r", fmt17(art.r)}, {"w_lo", fmt17(art.w_lo)}, {"w_hi", fmt17(art.w_hi)}};
  root["grid"] = {{"tau1", fmt17(art.tau1)}, {"ratio", fmt17(art.ratio)}, {"q", art.q}};
  root["sets"] = {{"z", box_to_json(art.Z)},
                  {"phi", box_to_json(art.phi_box)},
                  {"e", box_to_json(art.e_box)}};
  root["synthesis"] = {{"rows", art.rows},
                       {"verify_points", art.verify_points},
                       {"refits", art.refits},
                       {"degenerate_tie", art.degenerate_tie},
                       {"inflated_fallback", art.inflated_fallback}};
  return root.dump(2) + "\n";
}

Artifact artifact_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("artifact: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("artifact: top level must be an object");

  Artifact art;
  try {
    art.version = need(root, "version", "(top)").get<int>();
    const json& model = need(root, "model", "(top)");
    art.model = need(model, "name", "model").get<std::string>();
    art.model_hash = std::stoull(need(model, "hash", "model").get<std::string>());

    const json& trig = need(root, "trigger", "(top)");
    art.trigger_kind = need(trig, "kind", "trigger").get<std::string>();
    art.sigma = dbl(trig, "sigma", "trigger");
    art.epsilon = dbl(trig, "epsilon", "trigger");

    const json& hom = need(root, "homogeneity", "(top)");
    art.alpha = dbl(hom, "alpha", "homogeneity");
    art.theta = dbl(hom, "theta", "homogeneity");

    const json& delta = need(root, "delta", "(top)");
    art.delta0 = dbl(delta, "delta0", "delta");
    art.delta1 = dbl(delta, "delta1", "delta");
    art.eps_delta = dbl(delta, "eps_delta", "delta");
    art.margin = dbl(delta, "margin", "delta");

    const json& cone = need(root, "cone", "(top)");
    art.r = dbl(cone, "r", "cone");
    art.w_lo = dbl(cone, "w_lo", "cone");
    art.w_hi = dbl(cone, "w_hi", "cone");

    const json& grid = need(root, "grid", "(top)");
    art.tau1 = dbl(grid, "tau1", "grid");
    art.ratio = dbl(grid, "ratio", "grid");
    art.q = need(grid, "q", "grid").get<int>();

    const json& sets = need(root, "sets", "(top)");
    art.Z = box_from_json(need(sets, "z", "sets"), "sets.z");
    art.phi_box = box_from_json(need(sets, "phi", "sets"), "sets.phi");
    art.e_box = box_from_json(need(sets, "e", "sets"), "sets.e");

    const json& synth = need(root, "synthesis", "(top)");
    art.rows = need(synth, "rows", "synthesis").get<long>();
    art.verify_points = need(synth, "verify_points", "synthesis").get<long>();
    art.refits = need(synth, "refits", "synthesis").get<int>();
    art.degenerate_tie = need(synth, "degenerate_tie", "synthesis").get<bool>();
    art.inflated_fallback = need(synth, "inflated_fallback", "synthesis").get<bool>();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("artifact: malformed field: ") + e.what());
  }

  // full validation: the loaded artifact must rebuild into a usable system
  if (art.version != 1) throw ConfigError("artifact: unsupported version");
  if (!(art.ratio > 1.0)) throw ConfigError("artifact: grid ratio must exceed 1");
  if (!(art.tau1 > 0.0)) throw ConfigError("artifact: grid tau1 must be positive");
  if (art.q < 1) throw ConfigError("artifact: grid q must be at least 1");
  if (!(art.w_lo > 0.0) || !(art.w_hi >= art.w_lo))
    throw ConfigError("artifact: need 0 < w_lo <= w_hi");
  if (!(art.r > art.w_lo)) throw ConfigError("artifact: radius must exceed w_lo");
  if (!(art.delta0 >= 0.0) || !(art.delta1 > 0.0))
    throw ConfigError("artifact: need delta0 >= 0 and delta1 > 0");
  if (!(art.eps_delta > 0.0)) throw ConfigError("artifact: eps_delta must be positive");
  if (!(art.epsilon > 0.0) || !(art.sigma >= 0.0))
    throw ConfigError("artifact: bad trigger parameters");
  if (!std::isfinite(art.margin)) throw ConfigError("artifact: non-finite margin");

  auto plant = make_plant(art.model);  // throws ConfigError for unknown names
  const int n = plant->state_dim();
  if (art.Z.dim() != n || art.phi_box.dim() != n || art.e_box.dim() != n)
    throw ConfigError("artifact: set dimensions do not match the model");
  if (plant->degree() != art.alpha)
    throw ConfigError("artifact: alpha does not match the model degree");
  auto trigger = make_trigger(art.trigger_kind, n, art.sigma, art.epsilon);
  if (trigger->degree() != art.theta)
    throw ConfigError("artifact: theta does not match the trigger degree");
  std::uint64_t expect =
      model_description_hash(art.model, art.trigger_kind, art.sigma, art.epsilon);
  if (expect != art.model_hash)
    throw ConfigError("artifact: stored model hash does not match its description");
  return art;
}

void save_artifact(const Artifact& art, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("artifact: cannot write '" + path + "'");
  out << artifact_to_json(art);
  if (!out.good()) throw ConfigError("artifact: write failed for '" + path + "'");
}

Artifact load_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("artifact: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return artifact_from_json(buf.str());
}

System rebuild_system(const Artifact& art) {
  System sys;
  sys.plant = make_plant(art.model);
  sys.trigger = make_trigger(art.trigger_kind, sys.plant->state_dim(), art.sigma,
                             art.epsilon);
  sys.engine = std::make_unique<IsochronEngine>(sys.trigger.get(), art.delta0, art.delta1,
                                                art.r, art.w_lo, art.w_hi, art.alpha);
  sys.partition = std::make_unique<RegionPartition>(
      *sys.engine, build_time_grid(art.tau1, art.ratio, art.q));
  return sys;
}

SetSystem artifact_sets(const Artifact& art) {
  SetSystem sets;
  sets.Z = art.Z;
  sets.w_lo = art.w_lo;
  sets.w_hi = art.w_hi;
  sets.phi_box = art.phi_box;
  sets.e_box = art.e_box;
  return sets;
}

}  // namespace stc
