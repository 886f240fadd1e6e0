#pragma once

#include <span>
#include <string>
#include <vector>

#include "stc/artifact.hpp"
#include "stc/config.hpp"
#include "stc/isochron.hpp"
#include "stc/setsynth.hpp"
#include "stc/simulate.hpp"

namespace stc {

struct SynthesisOutcome {
  Artifact artifact;
  SetSystem sets;
  DeltaCoefficients coeffs;
  CoverageReport coverage;
};

/// Full synthesis: working sets -> decay coefficients (or the config's
/// verified override) -> reference radius -> dwell grid -> artifact.
/// Overridden coefficients still run the full a-posteriori verification and
/// are rejected (VerificationError) when their margin is negative.
SynthesisOutcome run_synthesis(const Config& cfg);

/// Human/machine readable summary of a synthesis run: coefficients, margin,
/// reference radius, dwell grid and ball-coverage estimate.
std::string synthesis_report_json(const SynthesisOutcome& outcome);

struct BenchRow {
  int run = 0;
  std::vector<double> x0;
  Scheme scheme = Scheme::region_stc;
  long samplings = 0;
  double min_dwell = 0.0;   // 0 when the run had a single sampling
  double max_trigger = 0.0;
  double wall_ms = 0.0;
  bool coverage_ok = true;
};

struct BenchResults {
  std::vector<BenchRow> rows;  // ordered by (run, scheme); independent of worker count
  double mean_region = 0.0, mean_baseline = 0.0, mean_etc = 0.0;
  double min_dwell_region = 0.0;   // over region runs with at least one dwell
  double max_trigger_region = 0.0;
  int flagged = 0;                 // region runs aborted by coverage failures
};

/// Runs the three schemes (region, baseline, event-triggered) from each of
/// the config's seeded initial conditions.  The worker pool only distributes
/// whole runs; outputs are keyed by run id, so results do not depend on the
/// worker count.  Throws ConfigError when the artifact's model hash does not
/// match the config.
BenchResults run_benchmark(const Config& cfg, const Artifact& art, int workers = 1);

/// CSV columns: run, x0_0..x0_{n-1}, scheme, samplings, min_dwell, max_phi,
/// wall_ms, status.  Deterministic except for the wall_ms column.
void write_benchmark_csv(const BenchResults& results, const std::string& path);
std::string benchmark_summary_json(const BenchResults& results);

/// One closed-loop run from x0 under the given scheme.
SimResult run_single(const Config& cfg, const Artifact& art, std::span<const double> x0,
                     Scheme scheme, bool record = false);

struct SuiteResult {
  std::string name;
  bool pass = false;
  double metric = 0.0;  // suite-specific margin/error; see details
  std::string details;
};

struct VerifySuiteReport {
  std::vector<SuiteResult> suites;
  bool all_pass = false;
  double event_tol = 0.0;  // event-detection tolerance used for crossings (s)
};

/// Property suites over a synthesized artifact: scaling-law, mu-dominance,
/// root-agreement, safety, decay-margin, emulation-bound, set-membership.
VerifySuiteReport run_verify_suites(const Config& cfg, const Artifact& art);
std::string verify_report_json(const VerifySuiteReport& report);

/// Writes (t, zeta...) and (t, dwell) series for one run of every scheme
/// into out_dir (traj_<scheme>.csv, dwell_<scheme>.csv).
void write_plot_data(const Config& cfg, const Artifact& art, std::span<const double> x0,
                     const std::string& out_dir);

}  // namespace stc
