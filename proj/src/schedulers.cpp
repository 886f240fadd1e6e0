#include "stc/schedulers.hpp"

#include <cmath>

#include "stc/errors.hpp"
#include "stc/geometry.hpp"

namespace stc {

DwellFn region_stc_dwell(const RegionPartition& partition) {
  return [&partition](std::span<const double> x) { return partition.dwell(x); };
}

double baseline_dwell_value(std::span<const double> x) {
  return 1.54 / (28.0 * (norm(x) + 4.0) + 29.0);
}

DwellFn baseline_stc_dwell() {
  return [](std::span<const double> x) { return baseline_dwell_value(x); };
}

std::unique_ptr<TriggerSpec> make_trigger(const std::string& kind, int state_dim,
                                          double sigma, double eps_bar) {
  if (kind == "lebesgue") {
    if (sigma != 0.0)
      throw ConfigError("trigger 'lebesgue' takes no sigma (got nonzero)");
    return make_lebesgue_trigger(state_dim, eps_bar);
  }
  if (kind == "mixed") return make_mixed_trigger(state_dim, sigma, eps_bar);
  throw ConfigError("unknown trigger kind '" + kind + "' (expected lebesgue or mixed)");
}

}  // namespace stc
