#pragma once

#include <memory>
#include <span>
#include <string>

#include "stc/isochron.hpp"
#include "stc/simulate.hpp"

namespace stc {

/// Dwell law of the region-based self-triggered scheme: the grid dwell of
/// the region containing the measured state on the w = 1 slice.  The
/// partition is captured by reference and must outlive the returned
/// function.  Coverage failures propagate as CoverageError.
DwellFn region_stc_dwell(const RegionPartition& partition);

/// Small-gain self-triggered baseline for the two-state benchmark:
/// tau(x) = 1.54 / (28 (|x| + 4) + 29).  Positive for every x.
double baseline_dwell_value(std::span<const double> x);
DwellFn baseline_stc_dwell();

/// Trigger registry used by configuration loading:
///   "lebesgue": |eps|^2 - eps_bar^2            (sigma must be 0)
///   "mixed":    |eps|^2 - sigma |zeta|^2 - eps_bar^2   (sigma >= 0)
/// eps_bar > 0 for both kinds.  Unknown kinds and invalid parameters throw
/// ConfigError.
std::unique_ptr<TriggerSpec> make_trigger(const std::string& kind, int state_dim,
                                          double sigma, double eps_bar);

}  // namespace stc
