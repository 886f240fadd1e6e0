#include "stc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "stc/errors.hpp"
#include "stc/oracles.hpp"
#include "stc/rng.hpp"
#include "stc/schedulers.hpp"
#include "stc/textio.hpp"

namespace stc {

namespace {

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Open-loop piecewise-constant realization: switch times uniform in
/// [0, t_max], values box vertices with probability 1/2.
std::unique_ptr<DisturbanceSignal> random_realization(const DisturbanceBox& box,
                                                      int n_switches, double t_max,
                                                      Rng& rng) {
  if (box.dim() == 0) return DisturbanceSignal::constant({});
  std::vector<double> times;
  times.reserve(n_switches);
  for (int k = 0; k < n_switches; ++k) times.push_back(rng.uniform(0.0, t_max));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k < times.size() + 1; ++k) {
    std::vector<double> v(box.dim());
    if (rng.coin()) {
      box.vertex(static_cast<unsigned>(rng.below(box.vertex_count())), v);
    } else {
      for (int i = 0; i < box.dim(); ++i) v[i] = rng.uniform(box.box.lo(i), box.box.hi(i));
    }
    values.push_back(std::move(v));
  }
  return DisturbanceSignal::piecewise(std::move(times), std::move(values), box);
}

void require_matching_hash(const Config& cfg, const Artifact& art) {
  if (config_model_hash(cfg) != art.model_hash)
    throw ConfigError(
        "artifact was synthesized for a different model/trigger than the configuration");
}

}  // namespace

SynthesisOutcome run_synthesis(const Config& cfg) {
  auto plant = config_plant(cfg);
  const int n = plant->state_dim();
  if (cfg.Z.dim() != n)
    throw ConfigError("sets.z has dimension " + std::to_string(cfg.Z.dim()) +
                      " but the model state dimension is " + std::to_string(n));
  auto trigger = config_trigger(cfg, n);

  SynthesisOutcome out;
  BuildSetsOptions bopts;
  bopts.inflation = cfg.inflation;
  out.sets = build_sets(*trigger, cfg.Z, cfg.w_lo, cfg.w_hi, bopts);

  VerifyReport rep;
  if (cfg.delta_override) {
    DeltaCoefficients c;
    c.delta0 = cfg.delta_override->delta0;
    c.delta1 = cfg.delta_override->delta1;
    c.eps_delta = cfg.synth.eps_delta;
    c.kappa = 0.0;
    rep = verify_delta(*plant, *trigger, out.sets, c, cfg.synth.verify_points,
                       cfg.synth.seed + 7777u);
    c.margin = rep.margin;
    c.verify_points = rep.points;
    if (rep.margin < 0.0)
      throw VerificationError("override coefficients fail verification (margin " +
                              fmt17(rep.margin) + ")");
    out.coeffs = c;
  } else {
    out.coeffs = synthesize_delta(*plant, *trigger, out.sets, cfg.synth, &rep);
  }

  double r = pick_radius(cfg.Z, cfg.w_lo, cfg.w_hi, cfg.radius_safety);
  IsochronEngine engine(trigger.get(), out.coeffs.delta0, out.coeffs.delta1, r, cfg.w_lo,
                        cfg.w_hi, plant->degree());

  double tau1;
  if (cfg.grid.tau1) {
    tau1 = *cfg.grid.tau1;
  } else {
    // auto grid: the deepest dwell equals the certified bound at the origin
    // of the w = 1 slice
    std::vector<double> origin(n, 0.0);
    double tau_max = engine.tau_down(origin, 1.0);
    tau1 = tau_max * std::pow(cfg.grid.ratio, 1 - cfg.grid.q);
  }
  TimeGrid grid = build_time_grid(tau1, cfg.grid.ratio, cfg.grid.q);
  RegionPartition partition(engine, grid);
  out.coverage = coverage_report(partition, cfg.ball_radius, 10000, cfg.synth.seed);

  Artifact& art = out.artifact;
  art.model = cfg.model;
  art.trigger_kind = cfg.trigger.kind;
  art.sigma = cfg.trigger.sigma;
  art.epsilon = cfg.trigger.epsilon;
  art.model_hash = config_model_hash(cfg);
  art.alpha = plant->degree();
  art.theta = trigger->degree();
  art.delta0 = out.coeffs.delta0;
  art.delta1 = out.coeffs.delta1;
  art.eps_delta = out.coeffs.eps_delta;
  art.margin = out.coeffs.margin;
  art.r = r;
  art.w_lo = cfg.w_lo;
  art.w_hi = cfg.w_hi;
  art.tau1 = grid.tau1;
  art.ratio = grid.ratio;
  art.q = grid.q;
  art.Z = cfg.Z;
  art.phi_box = out.sets.phi_box;
  art.e_box = out.sets.e_box;
  art.rows = out.coeffs.rows;
  art.verify_points = out.coeffs.verify_points;
  art.refits = out.coeffs.refits;
  art.degenerate_tie = out.coeffs.degenerate_tie;
  art.inflated_fallback = out.coeffs.inflated_fallback;
  return out;
}

std::string synthesis_report_json(const SynthesisOutcome& outcome) {
  const Artifact& art = outcome.artifact;
  nlohmann::json root;
  root["delta"] = {{"delta0", fmt17(art.delta0)},
                   {"delta1", fmt17(art.delta1)},
                   {"eps_delta", fmt17(art.eps_delta)},
                   {"margin", fmt17(art.margin)},
                   {"refits", art.refits},
                   {"degenerate_tie", art.degenerate_tie},
                   {"inflated_fallback", art.inflated_fallback}};
  root["cone"] = {{"r", fmt17(art.r)},
                  {"w_lo", fmt17(art.w_lo)},
                  {"w_hi", fmt17(art.w_hi)}};
  root["grid"] = {{"tau1", fmt17(art.tau1)},
                  {"ratio", fmt17(art.ratio)},
                  {"q", art.q}};
  root["coverage"] = {{"b1_radius_sq", fmt17(outcome.coverage.b1_radius_sq)},
                      {"covered_fraction", fmt17(outcome.coverage.covered_fraction)},
                      {"query_radius", fmt17(outcome.coverage.query_radius)},
                      {"samples", outcome.coverage.samples}};
  return root.dump(2) + "\n";
}

BenchResults run_benchmark(const Config& cfg, const Artifact& art, int workers) {
  require_matching_hash(cfg, art);
  System sys = rebuild_system(art);
  const int n = sys.plant->state_dim();
  auto signal = config_disturbance(cfg, *sys.plant);

  RunOptions ropts;
  ropts.T = cfg.horizon;
  ropts.h = cfg.h;
  ropts.event_tol = cfg.event_tol;

  const Scheme schemes[] = {Scheme::region_stc, Scheme::baseline_stc, Scheme::etc};
  DwellFn region = region_stc_dwell(*sys.partition);
  DwellFn baseline = baseline_stc_dwell();
  DwellFn none;

  BenchResults results;
  results.rows.resize(static_cast<std::size_t>(cfg.runs) * 3);

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto work = [&]() {
    try {
      for (int run; (run = next.fetch_add(1)) < cfg.runs;) {
        std::vector<double> x0(n);
        Rng rng = Rng::derive(cfg.benchmark_seed, static_cast<std::uint64_t>(run));
        rng.in_ball(cfg.ball_radius, x0);
        for (int si = 0; si < 3; ++si) {
          const DwellFn& dwell = schemes[si] == Scheme::region_stc ? region
                                 : schemes[si] == Scheme::baseline_stc ? baseline
                                                                       : none;
          auto t0 = std::chrono::steady_clock::now();
          SimResult sr = closed_loop_run(*sys.plant, *sys.trigger, schemes[si], dwell, x0,
                                         *signal, ropts);
          BenchRow& row = results.rows[static_cast<std::size_t>(run) * 3 + si];
          row.run = run;
          row.x0 = x0;
          row.scheme = schemes[si];
          row.samplings = sr.samplings;
          row.min_dwell = sr.min_dwell;
          row.max_trigger = sr.max_trigger;
          row.wall_ms = wall_ms_since(t0);
          row.coverage_ok = sr.coverage_ok;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  int pool = std::clamp(workers, 1, 64);
  if (pool == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int i = 0; i < pool; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  long sum_region = 0, sum_baseline = 0, sum_etc = 0;
  int ok_region = 0;
  results.min_dwell_region = std::numeric_limits<double>::infinity();
  results.max_trigger_region = -std::numeric_limits<double>::infinity();
  for (const BenchRow& row : results.rows) {
    switch (row.scheme) {
      case Scheme::region_stc:
        if (row.coverage_ok) {
          sum_region += row.samplings;
          ++ok_region;
          results.max_trigger_region = std::max(results.max_trigger_region, row.max_trigger);
          if (row.samplings > 1)
            results.min_dwell_region = std::min(results.min_dwell_region, row.min_dwell);
        } else {
          ++results.flagged;
        }
        break;
      case Scheme::baseline_stc:
        sum_baseline += row.samplings;
        break;
      case Scheme::etc:
        sum_etc += row.samplings;
        break;
    }
  }
  results.mean_region = ok_region > 0 ? static_cast<double>(sum_region) / ok_region : 0.0;
  results.mean_baseline = static_cast<double>(sum_baseline) / cfg.runs;
  results.mean_etc = static_cast<double>(sum_etc) / cfg.runs;
  if (!std::isfinite(results.min_dwell_region)) results.min_dwell_region = 0.0;
  if (!std::isfinite(results.max_trigger_region)) results.max_trigger_region = 0.0;
  return results;
}

void write_benchmark_csv(const BenchResults& results, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("benchmark: cannot write '" + path + "'");
  const int n = results.rows.empty() ? 0 : static_cast<int>(results.rows.front().x0.size());
  out << "run";
  for (int i = 0; i < n; ++i) out << ",x0_" << i;
  out << ",scheme,samplings,min_dwell,max_phi,wall_ms,status\n";
  for (const BenchRow& row : results.rows) {
    out << row.run;
    for (double c : row.x0) out << ',' << fmt17(c);
    out << ',' << scheme_name(row.scheme) << ',' << row.samplings << ','
        << fmt17(row.min_dwell) << ',' << fmt17(row.max_trigger) << ',';
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", row.wall_ms);
    out << wall << ',' << (row.coverage_ok ? "ok" : "coverage-error") << '\n';
  }
  if (!out.good()) throw ConfigError("benchmark: write failed for '" + path + "'");
}

std::string benchmark_summary_json(const BenchResults& results) {
  nlohmann::json root;
  root["mean_samplings"] = {{"region-stc", results.mean_region},
                            {"baseline-stc", results.mean_baseline},
                            {"etc", results.mean_etc}};
  root["min_dwell_region"] = results.min_dwell_region;
  root["max_trigger_region"] = results.max_trigger_region;
  root["flagged_runs"] = results.flagged;
  root["runs"] = results.rows.size() / 3;
  return root.dump(2) + "\n";
}

SimResult run_single(const Config& cfg, const Artifact& art, std::span<const double> x0,
                     Scheme scheme, bool record) {
  require_matching_hash(cfg, art);
  System sys = rebuild_system(art);
  if (static_cast<int>(x0.size()) != sys.plant->state_dim())
    throw ConfigError("initial state has wrong dimension");
  auto signal = config_disturbance(cfg, *sys.plant);

  RunOptions ropts;
  ropts.T = cfg.horizon;
  ropts.h = cfg.h;
  ropts.event_tol = cfg.event_tol;
  ropts.record = record;

  DwellFn dwell;
  if (scheme == Scheme::region_stc) dwell = region_stc_dwell(*sys.partition);
  if (scheme == Scheme::baseline_stc) dwell = baseline_stc_dwell();
  return closed_loop_run(*sys.plant, *sys.trigger, scheme, dwell, x0, *signal, ropts);
}

// ── Verification suites ────────────────────────────────────────────────────

namespace {

struct SuiteContext {
  const Config& cfg;
  const Artifact& art;
  const PlantModel& plant;
  const TriggerSpec& trigger;
  const IsochronEngine& engine;
  const RegionPartition& partition;
  std::uint64_t seed;
};

SuiteResult scaling_law_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "scaling-law";
  const int n = ctx.plant.state_dim();
  const double alpha = ctx.plant.degree();
  const double lambdas[] = {0.5, 2.0, 10.0};
  const double h = 1e-5, t_max = 2.0;

  double max_rel = 0.0;
  std::uint64_t draw = 0;
  for (int j = 0; j < 20; ++j) {
    std::vector<double> x(n);
    double w = 0.0;
    std::unique_ptr<DisturbanceSignal> sig;
    CrossingResult base;
    // Rejection-sample the base point: a hold started where the controller
    // output is near zero can drift too slowly to reach the trigger surface
    // within the probe horizon, and the identity under test compares crossing
    // times, so only points that cross are usable.
    for (int attempt = 0; attempt < 40 && !base.crossed; ++attempt) {
      Rng rng = Rng::derive(ctx.seed, 100 + draw++);
      rng.in_ball(1.5, x);
      w = rng.uniform(0.5, 1.5);
      sig = random_realization(ctx.plant.disturbances(), 6, t_max, rng);
      base = hom_intersample_time(ctx.plant, ctx.trigger, x, w, *sig, h, 1e-12, t_max);
    }
    if (!base.crossed) {
      res.details = "no trigger crossing at a base point";
      return res;
    }
    for (double lam : lambdas) {
      std::vector<double> lx(n);
      for (int i = 0; i < n; ++i) lx[i] = lam * x[i];
      double s = std::pow(lam, -alpha);
      // matched realization: d'(t) = d(t / s) (same values, rescaled switches)
      std::unique_ptr<DisturbanceSignal> sig2;
      if (ctx.plant.disturbances().dim() == 0) {
        sig2 = DisturbanceSignal::constant({});
      } else {
        std::vector<double> times(sig->switch_times().begin(), sig->switch_times().end());
        for (double& t : times) t *= s;
        std::vector<std::vector<double>> values;
        std::vector<double> v(ctx.plant.disturbances().dim());
        std::vector<double> zeta(n, 0.0);
        for (std::size_t k = 0; k <= times.size(); ++k) {
          double t_probe = k < times.size()
                               ? (k == 0 ? times[k] * 0.5 : 0.5 * (times[k - 1] + times[k]))
                               : (times.empty() ? 0.0 : times.back() + 1.0);
          sig->value(t_probe / s, zeta, v);
          values.push_back(v);
        }
        sig2 = DisturbanceSignal::piecewise(std::move(times), std::move(values),
                                            ctx.plant.disturbances());
      }
      CrossingResult scaled = hom_intersample_time(ctx.plant, ctx.trigger, lx, lam * w,
                                                   *sig2, h * s, 1e-12 * s, t_max * s);
      if (!scaled.crossed) {
        res.details = "no trigger crossing at a scaled point";
        return res;
      }
      double rel = std::abs(scaled.time / s - base.time) / base.time;
      max_rel = std::max(max_rel, rel);
    }
  }
  res.metric = max_rel;
  res.pass = max_rel <= 1e-3;
  res.details = "max relative inter-sample-time error over 20 points x {0.5, 2, 10}";
  return res;
}

SuiteResult mu_dominance_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "mu-dominance";
  const int n = ctx.plant.state_dim();
  double min_gap = std::numeric_limits<double>::infinity();

  for (int p = 0; p < 200; ++p) {
    Rng prng = Rng::derive(ctx.seed, 2000 + static_cast<std::uint64_t>(p));
    std::vector<double> x(n);
    prng.in_ball(ctx.cfg.ball_radius, x);
    double tau = ctx.engine.tau_down(x, 1.0);

    std::vector<double> xi0(2 * n + 1, 0.0);
    std::copy(x.begin(), x.end(), xi0.begin());
    xi0[2 * n] = 1.0;

    for (int j = 0; j < 20; ++j) {
      Rng rng = Rng::derive(ctx.seed, 1000000 + static_cast<std::uint64_t>(p) * 100 +
                                          static_cast<std::uint64_t>(j));
      auto sig = random_realization(ctx.plant.disturbances(), 8, tau, rng);
      IntegrateOptions iopts;
      iopts.h = ctx.cfg.h;
      Trajectory traj = integrate_held(ctx.plant, ctx.trigger, xi0, *sig, tau, iopts);
      for (std::size_t k = 0; k < traj.size(); ++k) {
        double gap = ctx.engine.mu(x, 1.0, traj.times[k]) - traj.trigger_values[k];
        min_gap = std::min(min_gap, gap);
      }
    }
  }
  res.metric = min_gap;
  res.pass = min_gap >= -1e-6;
  res.details = "min of (bound - trigger) over 200 points x 20 realizations";
  return res;
}

SuiteResult root_agreement_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "root-agreement";
  const int n = ctx.plant.state_dim();
  const double r = ctx.engine.radius(), w_lo = ctx.engine.w_lo();
  const double cone_slope = std::sqrt(r * r - w_lo * w_lo) / w_lo;  // radius per unit w

  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    Rng rng = Rng::derive(ctx.seed, 5000 + static_cast<std::uint64_t>(k));
    std::vector<double> x(n);
    double w;
    if (rng.coin()) {
      w = 1.0;
      rng.in_ball(ctx.cfg.ball_radius, x);
    } else {
      w = std::exp(rng.uniform(std::log(ctx.engine.w_lo() * 10.0),
                               std::log(ctx.engine.w_hi())));
      rng.in_ball(0.8 * cone_slope * w, x);
    }
    double tau = ctx.engine.tau_down(x, w);
    double bis = mu_root_bisect(ctx.engine, x, w, 2.0 * tau, 1e-12 * (1.0 + 2.0 * tau));
    worst = std::max(worst, std::abs(tau - bis) / (1.0 + tau));
  }
  std::vector<double> origin(n, 0.0);
  res.metric = worst;
  res.pass = worst <= 1e-9;
  res.details = "max |closed form - bisection| / (1 + tau); origin-slice bound = " +
                fmt17(ctx.engine.tau_down(origin, 1.0));
  return res;
}

SuiteResult safety_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "safety";
  const int n = ctx.plant.state_dim();
  auto signal = config_disturbance(ctx.cfg, ctx.plant);
  DwellFn dwell = region_stc_dwell(ctx.partition);
  RunOptions ropts;
  ropts.T = ctx.cfg.horizon;
  ropts.h = ctx.cfg.h;
  ropts.event_tol = ctx.cfg.event_tol;

  int runs = std::min(ctx.cfg.runs, 20);
  double max_phi = -std::numeric_limits<double>::infinity();
  for (int run = 0; run < runs; ++run) {
    std::vector<double> x0(n);
    Rng rng = Rng::derive(ctx.cfg.benchmark_seed, static_cast<std::uint64_t>(run));
    rng.in_ball(ctx.cfg.ball_radius, x0);
    SimResult sr = closed_loop_run(ctx.plant, ctx.trigger, Scheme::region_stc, dwell, x0,
                                   *signal, ropts);
    if (!sr.coverage_ok) {
      res.details = "coverage failure: " + sr.coverage_message;
      return res;
    }
    max_phi = std::max(max_phi, sr.max_trigger);
  }
  res.metric = max_phi;
  res.pass = max_phi <= 1e-6;
  res.details = "max trigger value across " + std::to_string(runs) + " region runs";
  return res;
}

SuiteResult decay_margin_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "decay-margin";
  DeltaCoefficients c;
  c.delta0 = ctx.art.delta0;
  c.delta1 = ctx.art.delta1;
  c.eps_delta = ctx.art.eps_delta;
  VerifyReport rep = verify_delta(ctx.plant, ctx.trigger, artifact_sets(ctx.art), c,
                                  ctx.cfg.synth.verify_points, ctx.seed ^ 0x30aull);
  res.metric = rep.margin;
  res.pass = rep.margin >= 0.0;
  res.details = "decay-inequality margin re-verified on " + std::to_string(rep.points) +
                " fresh samples";
  return res;
}

SuiteResult emulation_bound_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "emulation-bound";
  const int n = ctx.plant.state_dim();
  double min_gap = std::numeric_limits<double>::infinity();
  int violations = 0;

  for (int k = 0; k < 50; ++k) {
    Rng rng = Rng::derive(ctx.seed, 8000 + static_cast<std::uint64_t>(k));
    std::vector<double> x(n);
    rng.in_ball(ctx.cfg.ball_radius, x);
    double tau = ctx.engine.tau_down(x, 1.0);
    // sound horizon: a bound violation would be a crossing before tau < t_max
    double t_max = 4.0 * tau;
    CrossingResult orc =
        di_intersample_oracle(ctx.plant, ctx.trigger, x, 200, 8, ctx.cfg.h,
                              ctx.cfg.event_tol, t_max,
                              ctx.seed + 0xd100ull + static_cast<std::uint64_t>(k));
    double bound = orc.crossed ? orc.time : t_max;
    min_gap = std::min(min_gap, bound - tau);
    if (tau > bound + 1e-12) ++violations;
  }
  res.metric = min_gap;
  res.pass = violations == 0;
  res.details = "min (worst-case oracle - certified bound) over 50 states, 200 "
                "realizations each; violations = " +
                std::to_string(violations);
  return res;
}

SuiteResult set_membership_suite(const SuiteContext& ctx) {
  SuiteResult res;
  res.name = "set-membership";
  MembershipStats ms =
      membership_reject(ctx.trigger, artifact_sets(ctx.art), 20000, ctx.seed ^ 0x3e7ull);
  ConeAgreement ca =
      b1_agreement(ctx.engine, ctx.plant.state_dim(), 10000, ctx.seed ^ 0xb1ull);
  res.metric = static_cast<double>(ms.box_misses + ca.mismatches);
  res.pass = ms.box_misses == 0 && ca.mismatches == 0;
  res.details = "box misses " + std::to_string(ms.box_misses) + "/" +
                std::to_string(ms.samples) + "; cone-radius mismatches " +
                std::to_string(ca.mismatches) + "/" + std::to_string(ca.samples);
  return res;
}

}  // namespace

VerifySuiteReport run_verify_suites(const Config& cfg, const Artifact& art) {
  require_matching_hash(cfg, art);
  System sys = rebuild_system(art);
  SuiteContext ctx{cfg,          art,
                   *sys.plant,   *sys.trigger,
                   *sys.engine,  *sys.partition,
                   cfg.synth.seed ^ 0x7665726966ull};

  VerifySuiteReport report;
  report.event_tol = cfg.event_tol;
  report.suites.push_back(scaling_law_suite(ctx));
  report.suites.push_back(mu_dominance_suite(ctx));
  report.suites.push_back(root_agreement_suite(ctx));
  report.suites.push_back(safety_suite(ctx));
  report.suites.push_back(decay_margin_suite(ctx));
  report.suites.push_back(emulation_bound_suite(ctx));
  report.suites.push_back(set_membership_suite(ctx));
  report.all_pass = std::all_of(report.suites.begin(), report.suites.end(),
                                [](const SuiteResult& s) { return s.pass; });
  return report;
}

std::string verify_report_json(const VerifySuiteReport& report) {
  nlohmann::json suites = nlohmann::json::array();
  for (const SuiteResult& s : report.suites)
    suites.push_back({{"name", s.name},
                      {"pass", s.pass},
                      {"metric", s.metric},
                      {"details", s.details}});
  nlohmann::json root;
  root["all_pass"] = report.all_pass;
  root["event_detection_tolerance_s"] = fmt17(report.event_tol);
  root["suites"] = suites;
  return root.dump(2) + "\n";
}

void write_plot_data(const Config& cfg, const Artifact& art, std::span<const double> x0,
                     const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const int n = static_cast<int>(x0.size());
  for (Scheme scheme : {Scheme::region_stc, Scheme::baseline_stc, Scheme::etc}) {
    SimResult sr = run_single(cfg, art, x0, scheme, /*record=*/true);
    std::string name = scheme_name(scheme);

    std::ofstream traj(out_dir + "/traj_" + name + ".csv", std::ios::trunc);
    if (!traj) throw ConfigError("plot-data: cannot write trajectory CSV");
    traj << "t";
    for (int i = 0; i < n; ++i) traj << ",zeta_" << i;
    traj << '\n';
    for (std::size_t k = 0; k < sr.trajectory.size(); ++k) {
      traj << fmt17(sr.trajectory.times[k]);
      auto state = sr.trajectory.state(k);
      for (int i = 0; i < n; ++i) traj << ',' << fmt17(state[i]);
      traj << '\n';
    }

    std::ofstream dwell(out_dir + "/dwell_" + name + ".csv", std::ios::trunc);
    if (!dwell) throw ConfigError("plot-data: cannot write dwell CSV");
    dwell << "t,dwell\n";
    for (std::size_t k = 0; k < sr.dwells.size(); ++k)
      dwell << fmt17(sr.sample_times[k]) << ',' << fmt17(sr.dwells[k]) << '\n';
  }
}

}  // namespace stc
