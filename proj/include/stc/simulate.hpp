#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stc/models.hpp"

namespace stc {

/// Disturbance realization d(t, zeta) with every value inside the plant's
/// bounds.  Piecewise-constant signals expose their switching grid so the
/// integrator can split steps exactly at the discontinuities.
class DisturbanceSignal {
 public:
  virtual ~DisturbanceSignal() = default;

  virtual int dim() const = 0;
  virtual void value(double t, std::span<const double> zeta, std::span<double> out) const = 0;
  virtual std::span<const double> switch_times() const { return {}; }

  static std::unique_ptr<DisturbanceSignal> constant(std::vector<double> d);

  /// Piecewise-constant: value k holds on [times[k], times[k+1]); values[0]
  /// holds before times[0] and values.back() after times.back() is absent
  /// (times has one entry fewer than values).  Validates containment in box.
  static std::unique_ptr<DisturbanceSignal> piecewise(std::vector<double> times,
                                                      std::vector<std::vector<double>> values,
                                                      const DisturbanceBox& box);

  /// Closed-form benchmark realization for 3-channel plants:
  /// d = (amp * sin(2 pi freq t), sin(zeta1), sin(zeta2)).
  static std::unique_ptr<DisturbanceSignal> sine_modulated(double amplitude, double frequency);
};

/// Dense output of one held-input segment (or a whole run): sample times are
/// uniformly spaced by h, except a final refined event point when a trigger
/// crossing was located.
struct Trajectory {
  int dim = 0;
  std::vector<double> times;
  std::vector<double> states;  // row-major, times.size() * dim
  std::vector<double> trigger_values;

  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * dim, static_cast<std::size_t>(dim)};
  }
  std::size_t size() const { return times.size(); }
};

/// The closed loop in extended coordinates: either the plain system on
/// R^{2n} (w fixed at 1) or the homogenized one on R^{2n+1} whose last
/// coordinate is the constant scaling variable.
struct LoopSystem {
  const PlantModel* plant = nullptr;
  const TriggerSpec* trigger = nullptr;
  bool homogenized = false;

  int dim() const { return 2 * plant->state_dim() + (homogenized ? 1 : 0); }
  void eval(std::span<const double> state, std::span<const double> d,
            std::span<double> out) const;
  double trigger_value(std::span<const double> state) const;
};

struct IntegrateOptions {
  double h = 5e-5;
  bool record = true;
};

/// Integrates the held-input extended loop from xi0 over [0, T] with the
/// classical fourth-order Runge-Kutta scheme; the signal is evaluated at
/// stage times and steps are split internally at its switching instants.
/// A (2n+1)-dimensional xi0 selects the homogenized loop (last coordinate
/// the scaling variable).  Throws DivergenceError (with the blow-up time)
/// on non-finite states.
Trajectory integrate_held(const PlantModel& plant, const TriggerSpec& trigger,
                          std::span<const double> xi0, const DisturbanceSignal& signal,
                          double T, const IntegrateOptions& opts);

struct CrossingResult {
  double time = 0.0;
  bool crossed = false;  // false: no crossing before the horizon
};

/// First trigger crossing of the loop started at (x0, 0) under `signal`.
/// Precondition: phi((x0, 0)) < 0.  The crossing is bracketed during the h
/// sweep and refined by bisection to `tol` seconds.
CrossingResult etc_intersample_time(const PlantModel& plant, const TriggerSpec& trigger,
                                    std::span<const double> x0, const DisturbanceSignal& signal,
                                    double h, double tol, double t_max);

/// Same crossing computation on the homogenized loop from (x0, 0, w).
CrossingResult hom_intersample_time(const PlantModel& plant, const TriggerSpec& trigger,
                                    std::span<const double> x0, double w,
                                    const DisturbanceSignal& signal, double h, double tol,
                                    double t_max);

/// Worst-case (minimum) inter-sample time over sampled piecewise-constant
/// realizations of the disturbance family.  Realization j draws from stream
/// (seed, j): with nested seeds the estimate is monotonically non-increasing
/// in n_realizations.  Switch values are box vertices with probability 1/2,
/// uniform in the box otherwise.
CrossingResult di_intersample_oracle(const PlantModel& plant, const TriggerSpec& trigger,
                                     std::span<const double> x0, int n_realizations,
                                     int n_switches, double h, double tol, double t_max,
                                     std::uint64_t seed);

// ── Closed-loop sampled execution ──────────────────────────────────────────

enum class Scheme { region_stc, baseline_stc, etc };

std::string scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& name);

/// Returns the dwell until the next sampling given the just-measured plant
/// state; ETC is handled inside the runner via event detection instead.
using DwellFn = std::function<double(std::span<const double> x)>;

struct RunOptions {
  double T = 5.0;
  double h = 5e-5;
  double event_tol = 1e-9;
  bool record = false;       // keep the dense trajectory
  int record_stride = 1;     // thin dense output by this factor
};

struct SimResult {
  int samplings = 0;              // sampling instants in [0, T); t = 0 counts
  double min_dwell = 0.0;
  double max_trigger = 0.0;       // max phi along the dense trajectory
  std::vector<double> sample_times;
  std::vector<double> dwells;
  Trajectory trajectory;          // filled when opts.record
  bool coverage_ok = true;
  std::string coverage_message;   // which inclusion failed, when aborted
};

/// Runs the sampled-data loop from plant state x0: measure, schedule, hold,
/// reset the error at each sampling.  For Scheme::etc the next sampling is
/// the detected trigger crossing.  A CoverageError from the dwell function
/// aborts the run and is reported in the result rather than thrown.
SimResult closed_loop_run(const PlantModel& plant, const TriggerSpec& trigger, Scheme scheme,
                          const DwellFn& dwell, std::span<const double> x0,
                          const DisturbanceSignal& signal, const RunOptions& opts);

}  // namespace stc
