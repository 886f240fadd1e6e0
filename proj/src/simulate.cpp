#include "stc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stc/errors.hpp"
#include "stc/rng.hpp"

namespace stc {

// ── Signals ────────────────────────────────────────────────────────────────

namespace {

class ConstantSignal final : public DisturbanceSignal {
 public:
  explicit ConstantSignal(std::vector<double> d) : d_(std::move(d)) {}
  int dim() const override { return static_cast<int>(d_.size()); }
  void value(double, std::span<const double>, std::span<double> out) const override {
    std::copy(d_.begin(), d_.end(), out.begin());
  }

 private:
  std::vector<double> d_;
};

class PiecewiseSignal final : public DisturbanceSignal {
 public:
  PiecewiseSignal(std::vector<double> times, std::vector<std::vector<double>> values,
                  const DisturbanceBox& box)
      : times_(std::move(times)), values_(std::move(values)) {
    if (values_.empty()) throw ContractViolation("piecewise signal: no values");
    if (times_.size() + 1 != values_.size())
      throw ContractViolation("piecewise signal: need one more value than switch time");
    for (std::size_t i = 1; i < times_.size(); ++i)
      if (!(times_[i] > times_[i - 1]))
        throw ContractViolation("piecewise signal: switch times must be strictly increasing");
    for (const auto& v : values_) {
      if (static_cast<int>(v.size()) != box.dim())
        throw ContractViolation("piecewise signal: value dimension mismatch");
      if (!box.contains(v, 1e-12))
        throw ContractViolation("piecewise signal: value outside disturbance bounds");
    }
  }

  int dim() const override { return static_cast<int>(values_[0].size()); }

  void value(double t, std::span<const double>, std::span<double> out) const override {
    // index of the interval containing t; right-continuous at switches.
    std::size_t k = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
    const auto& v = values_[k];
    std::copy(v.begin(), v.end(), out.begin());
  }

  std::span<const double> switch_times() const override { return times_; }

 private:
  std::vector<double> times_;
  std::vector<std::vector<double>> values_;
};

class SineModulatedSignal final : public DisturbanceSignal {
 public:
  SineModulatedSignal(double amplitude, double frequency)
      : amp_(amplitude), freq_(frequency) {}

  int dim() const override { return 3; }

  void value(double t, std::span<const double> zeta, std::span<double> out) const override {
    out[0] = amp_ * std::sin(6.283185307179586476925286766559 * freq_ * t);
    out[1] = zeta.empty() ? 0.0 : std::sin(zeta[0]);
    out[2] = zeta.size() < 2 ? 0.0 : std::sin(zeta[1]);
  }

 private:
  double amp_;
  double freq_;
};

}  // namespace

std::unique_ptr<DisturbanceSignal> DisturbanceSignal::constant(std::vector<double> d) {
  return std::make_unique<ConstantSignal>(std::move(d));
}

std::unique_ptr<DisturbanceSignal> DisturbanceSignal::piecewise(
    std::vector<double> times, std::vector<std::vector<double>> values,
    const DisturbanceBox& box) {
  return std::make_unique<PiecewiseSignal>(std::move(times), std::move(values), box);
}

std::unique_ptr<DisturbanceSignal> DisturbanceSignal::sine_modulated(double amplitude,
                                                                     double frequency) {
  return std::make_unique<SineModulatedSignal>(amplitude, frequency);
}

// ── Loop system ────────────────────────────────────────────────────────────

void LoopSystem::eval(std::span<const double> state, std::span<const double> d,
                      std::span<double> out) const {
  if (homogenized) {
    const int m = 2 * plant->state_dim();
    homogenize_field(*plant, state.subspan(0, m), state[m], d, out);
  } else {
    assemble_extended_field(*plant, state, d, out);
  }
}

double LoopSystem::trigger_value(std::span<const double> state) const {
  if (homogenized) {
    const int m = 2 * plant->state_dim();
    return trigger->hom_value(state.subspan(0, m), state[m]);
  }
  return trigger->value(state);
}

// ── Integrator core ────────────────────────────────────────────────────────

namespace {

constexpr int kMaxDim = 17;  // extended state up to 2*8, plus scaling slot

struct Stepper {
  LoopSystem sys;
  const DisturbanceSignal* sig;
  int dim;
  int nd;
  double k1[kMaxDim], k2[kMaxDim], k3[kMaxDim], k4[kMaxDim], tmp[kMaxDim];
  double d[kMaxDim];

  Stepper(const LoopSystem& s, const DisturbanceSignal& g)
      : sys(s), sig(&g), dim(s.dim()), nd(g.dim()) {}

  std::span<const double> zeta(std::span<const double> state) const {
    return state.subspan(0, sys.plant->state_dim());
  }

  void stage(double t, std::span<const double> state, double* k) {
    sig->value(t, zeta(state), std::span<double>(d, nd));
    sys.eval(state, std::span<const double>(d, nd), std::span<double>(k, dim));
  }

  // One classical RK4 step of size h, in place.  The terminal stage is
  // evaluated no later than t_eval_max: a sub-step that ends exactly on a
  // signal switch must read the left limit there, not the post-switch value.
  void rk4(double t, double h, std::span<double> state, double t_eval_max) {
    stage(t, state, k1);
    for (int i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
    stage(t + 0.5 * h, std::span<const double>(tmp, dim), k2);
    for (int i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
    stage(t + 0.5 * h, std::span<const double>(tmp, dim), k3);
    for (int i = 0; i < dim; ++i) tmp[i] = state[i] + h * k3[i];
    stage(std::min(t + h, t_eval_max), std::span<const double>(tmp, dim), k4);
    for (int i = 0; i < dim; ++i)
      state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  // Advance from t0 to t1 (t1 - t0 assumed <= one base step), splitting at
  // the signal's switching instants so discontinuities never sit inside a
  // Runge-Kutta stage interval.  One ulp of evaluation slack at a splitting
  // point keeps the terminal stage on the pre-switch segment; the next
  // sub-step starts exactly on the switch and sees the new value.
  void advance(double t0, double t1, std::span<double> state) {
    auto switches = sig->switch_times();
    auto it = switches.empty()
                  ? switches.end()
                  : std::upper_bound(switches.begin(), switches.end(), t0);
    double t = t0;
    while (t < t1) {
      const bool split = it != switches.end() && *it <= t1;
      const double te = split ? *it : t1;
      const double cap = split ? std::nextafter(te, t) : te;
      rk4(t, te - t, state, cap);
      t = te;
      if (split) ++it;
    }
  }
};

void check_finite(std::span<const double> state, double t) {
  if (!all_finite(state))
    throw DivergenceError(t, "integration diverged (non-finite state) at t = " +
                                 std::to_string(t));
}

}  // namespace

Trajectory integrate_held(const PlantModel& plant, const TriggerSpec& trigger,
                          std::span<const double> xi0, const DisturbanceSignal& signal,
                          double T, const IntegrateOptions& opts) {
  if (!(opts.h > 0.0)) throw ContractViolation("integrate_held: step must be positive");
  if (signal.dim() != plant.disturbances().dim())
    throw ContractViolation("integrate_held: signal dimension mismatch");
  LoopSystem sys{&plant, &trigger, false};
  if (static_cast<int>(xi0.size()) == sys.dim() + 1) sys.homogenized = true;
  const int dim = sys.dim();
  if (static_cast<int>(xi0.size()) != dim)
    throw ContractViolation("integrate_held: state dimension mismatch");

  Stepper st(sys, signal);
  std::vector<double> state(xi0.begin(), xi0.end());
  Trajectory traj;
  traj.dim = dim;
  auto record = [&](double t) {
    if (!opts.record) return;
    traj.times.push_back(t);
    traj.states.insert(traj.states.end(), state.begin(), state.end());
    traj.trigger_values.push_back(sys.trigger_value(state));
  };

  record(0.0);
  double t = 0.0;
  std::size_t k = 0;
  while (t < T) {
    double t_next = std::min(T, static_cast<double>(++k) * opts.h);
    st.advance(t, t_next, state);
    check_finite(state, t_next);
    t = t_next;
    record(t);
  }
  return traj;
}

// ── Crossing detection ─────────────────────────────────────────────────────

namespace {

// Sweeps forward by h from `state` at absolute time t0 until the trigger is
// non-negative, then bisects the bracketing step down to `tol` seconds.
// `state` is left at the crossing (or at t0 + t_max if none found).
CrossingResult sweep_crossing(Stepper& st, std::vector<double>& state, double t0, double h,
                              double tol, double t_max) {
  double phi = st.sys.trigger_value(state);
  if (!(phi < 0.0))
    throw ContractViolation("intersample time: trigger already non-negative at the sample");

  std::vector<double> pre(state.size());
  double t = 0.0;
  while (t < t_max) {
    double dt = std::min(h, t_max - t);
    pre = state;
    st.advance(t0 + t, t0 + t + dt, state);
    check_finite(state, t0 + t + dt);
    if (st.sys.trigger_value(state) >= 0.0) {
      // refine within [t, t + dt]; lo stays strictly negative, hi crossed.
      double lo = 0.0, hi = dt;
      std::vector<double> probe(state.size());
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        probe = pre;
        st.advance(t0 + t, t0 + t + mid, probe);
        if (st.sys.trigger_value(probe) >= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      probe = pre;
      st.advance(t0 + t, t0 + t + hi, probe);
      state = probe;
      return {t + hi, true};
    }
    t += dt;
  }
  return {t_max, false};
}

}  // namespace

CrossingResult etc_intersample_time(const PlantModel& plant, const TriggerSpec& trigger,
                                    std::span<const double> x0, const DisturbanceSignal& signal,
                                    double h, double tol, double t_max) {
  const int n = plant.state_dim();
  if (static_cast<int>(x0.size()) != n)
    throw ContractViolation("etc_intersample_time: state dimension mismatch");
  LoopSystem sys{&plant, &trigger, false};
  Stepper st(sys, signal);
  std::vector<double> state(2 * n, 0.0);
  std::copy(x0.begin(), x0.end(), state.begin());
  return sweep_crossing(st, state, 0.0, h, tol, t_max);
}

CrossingResult hom_intersample_time(const PlantModel& plant, const TriggerSpec& trigger,
                                    std::span<const double> x0, double w,
                                    const DisturbanceSignal& signal, double h, double tol,
                                    double t_max) {
  if (!(w > 0.0)) throw DomainError("hom_intersample_time: w must be positive");
  const int n = plant.state_dim();
  LoopSystem sys{&plant, &trigger, true};
  Stepper st(sys, signal);
  std::vector<double> state(2 * n + 1, 0.0);
  std::copy(x0.begin(), x0.end(), state.begin());
  state[2 * n] = w;
  return sweep_crossing(st, state, 0.0, h, tol, t_max);
}

CrossingResult di_intersample_oracle(const PlantModel& plant, const TriggerSpec& trigger,
                                     std::span<const double> x0, int n_realizations,
                                     int n_switches, double h, double tol, double t_max,
                                     std::uint64_t seed) {
  if (n_realizations < 1) throw ContractViolation("di oracle: need at least one realization");
  const auto& box = plant.disturbances();
  const int md = box.dim();

  CrossingResult best{t_max, false};
  for (int j = 0; j < n_realizations; ++j) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(j));
    std::vector<double> times(n_switches);
    for (auto& t : times) t = rng.uniform(0.0, t_max);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::vector<std::vector<double>> values(times.size() + 1, std::vector<double>(md));
    for (auto& v : values) {
      if (md == 0) continue;
      if (rng.coin()) {
        box.vertex(static_cast<unsigned>(rng.below(box.vertex_count())), v);
      } else {
        for (int i = 0; i < md; ++i) v[i] = rng.uniform(box.box.lo(i), box.box.hi(i));
      }
    }
    auto signal = DisturbanceSignal::piecewise(std::move(times), std::move(values), box);
    CrossingResult r = etc_intersample_time(plant, trigger, x0, *signal, h, tol, t_max);
    if (r.crossed && (!best.crossed || r.time < best.time)) best = r;
  }
  return best;
}

// ── Closed-loop execution ──────────────────────────────────────────────────

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::region_stc: return "region-stc";
    case Scheme::baseline_stc: return "baseline-stc";
    case Scheme::etc: return "etc";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
  if (name == "region-stc") return Scheme::region_stc;
  if (name == "baseline-stc") return Scheme::baseline_stc;
  if (name == "etc") return Scheme::etc;
  return std::nullopt;
}

SimResult closed_loop_run(const PlantModel& plant, const TriggerSpec& trigger, Scheme scheme,
                          const DwellFn& dwell, std::span<const double> x0,
                          const DisturbanceSignal& signal, const RunOptions& opts) {
  const int n = plant.state_dim();
  if (static_cast<int>(x0.size()) != n)
    throw ContractViolation("closed_loop_run: state dimension mismatch");
  if (!(opts.T > 0.0) || !(opts.h > 0.0))
    throw ContractViolation("closed_loop_run: horizon and step must be positive");

  LoopSystem sys{&plant, &trigger, false};
  Stepper st(sys, signal);
  std::vector<double> state(2 * n, 0.0);
  std::copy(x0.begin(), x0.end(), state.begin());

  SimResult res;
  res.trajectory.dim = 2 * n;
  res.max_trigger = sys.trigger_value(state);
  res.samplings = 1;
  res.sample_times.push_back(0.0);
  res.min_dwell = std::numeric_limits<double>::infinity();

  long rec_count = 0;
  auto record = [&](double t) {
    double phi = sys.trigger_value(state);
    res.max_trigger = std::max(res.max_trigger, phi);
    if (opts.record && (rec_count++ % opts.record_stride == 0)) {
      res.trajectory.times.push_back(t);
      res.trajectory.states.insert(res.trajectory.states.end(), state.begin(), state.end());
      res.trajectory.trigger_values.push_back(phi);
    }
  };
  record(0.0);

  double t = 0.0;
  while (t < opts.T) {
    double next_sample;
    if (scheme == Scheme::etc) {
      // event-driven: integrate until the trigger crossing (sweep records
      // nothing; re-run segment recording below on the same substeps).
      std::vector<double> probe = state;
      CrossingResult cr = sweep_crossing(st, probe, t, opts.h, opts.event_tol, opts.T - t);
      next_sample = cr.crossed ? t + cr.time : opts.T;
    } else {
      double d;
      try {
        d = dwell(std::span<const double>(state.data(), n));
      } catch (const CoverageError& e) {
        res.coverage_ok = false;
        res.coverage_message = e.what();
        if (res.dwells.empty()) res.min_dwell = 0.0;
        return res;
      }
      if (!(d > 0.0) || !std::isfinite(d))
        throw ContractViolation("closed_loop_run: scheduler returned non-positive dwell");
      next_sample = t + d;
    }

    // integrate the held segment to min(next_sample, T) on the uniform grid
    double t_end = std::min(next_sample, opts.T);
    double base = t;
    std::size_t k = 0;
    while (t < t_end) {
      double t_next = std::min(t_end, base + static_cast<double>(++k) * opts.h);
      st.advance(t, t_next, state);
      check_finite(state, t_next);
      t = t_next;
      record(t);
    }

    if (next_sample >= opts.T) break;

    // sampling: reset the held-state error and count the instant
    for (int i = 0; i < n; ++i) state[n + i] = 0.0;
    res.samplings += 1;
    res.dwells.push_back(next_sample - res.sample_times.back());
    res.sample_times.push_back(next_sample);
    res.min_dwell = std::min(res.min_dwell, res.dwells.back());
  }
  if (res.dwells.empty()) res.min_dwell = 0.0;
  return res;
}

}  // namespace stc
