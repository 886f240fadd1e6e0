// Acceptance gate for the toolkit: runs the full synthesis + benchmark +
// verification pipeline on the shipped configurations and prints one
// [PASS]/[FAIL] line per criterion.  Exits nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "stc/artifact.hpp"
#include "stc/config.hpp"
#include "stc/models.hpp"
#include "stc/pipeline.hpp"
#include "stc/simulate.hpp"
#include "support/toy_plants.hpp"

namespace {

int failures = 0;

void report(int n, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

const stc::SuiteResult* find_suite(const stc::VerifySuiteReport& rep, const char* name) {
  for (const auto& s : rep.suites)
    if (s.name == name) return &s;
  return nullptr;
}

// Pass/metric for one named suite on both artifacts.
bool both_pass(const stc::VerifySuiteReport& a, const stc::VerifySuiteReport& b,
               const char* name, std::string& detail) {
  const stc::SuiteResult* sa = find_suite(a, name);
  const stc::SuiteResult* sb = find_suite(b, name);
  if (!sa || !sb) {
    detail = std::string(name) + " suite missing from the report";
    return false;
  }
  detail = std::string(name) + " metric " + fmt(sa->metric) + " (synthesized) / " +
           fmt(sb->metric) + " (reference coefficients)";
  if (!sa->pass) detail += "; synthesized-artifact suite failed: " + sa->details;
  if (!sb->pass) detail += "; reference-artifact suite failed: " + sb->details;
  return sa->pass && sb->pass;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  const std::string dir = CONFIG_DIR;

  try {
    const stc::Config cfg_synth = stc::load_config(dir + "/benchmark.json");
    const stc::Config cfg_ref = stc::load_config(dir + "/benchmark_reference_delta.json");

    const stc::SynthesisOutcome out_synth = stc::run_synthesis(cfg_synth);
    const stc::SynthesisOutcome out_ref = stc::run_synthesis(cfg_ref);

    const stc::BenchResults bench_synth = stc::run_benchmark(cfg_synth, out_synth.artifact, 1);
    const stc::BenchResults bench_ref = stc::run_benchmark(cfg_ref, out_ref.artifact, 1);
    const double bench_elapsed =
        std::chrono::duration<double>(clock::now() - t_start).count();

    // 1. seeded benchmark means inside the reproduction windows, on time
    {
      bool ok = within(bench_synth.mean_baseline, 445.0, 520.0) &&
                within(bench_synth.mean_etc, 30.0, 50.0) &&
                within(bench_synth.mean_region, 150.0, 280.0) &&
                within(bench_ref.mean_baseline, 445.0, 520.0) &&
                within(bench_ref.mean_etc, 30.0, 50.0) &&
                within(bench_ref.mean_region, 170.0, 240.0) && bench_elapsed <= 300.0;
      report(1, ok,
             "benchmark means: baseline " + fmt(bench_synth.mean_baseline) +
                 " in [445,520], etc " + fmt(bench_synth.mean_etc) +
                 " in [30,50], region " + fmt(bench_synth.mean_region) +
                 " in [150,280] (synthesized) and " + fmt(bench_ref.mean_region) +
                 " in [170,240] (reference coefficients); elapsed " + fmt(bench_elapsed) +
                 " s <= 300 s");
    }

    // 2. single-run sampling counts from (-1,-1)
    {
      const std::vector<double> x0 = {-1.0, -1.0};
      const stc::SimResult base =
          stc::run_single(cfg_synth, out_synth.artifact, x0, stc::Scheme::baseline_stc);
      const stc::SimResult reg_s =
          stc::run_single(cfg_synth, out_synth.artifact, x0, stc::Scheme::region_stc);
      const stc::SimResult reg_r =
          stc::run_single(cfg_ref, out_ref.artifact, x0, stc::Scheme::region_stc);
      bool ok = std::abs(base.samplings - 483) <= 2 && base.coverage_ok &&
                within(reg_s.samplings, 140, 200) && reg_s.coverage_ok &&
                within(reg_r.samplings, 150, 185) && reg_r.coverage_ok;
      report(2, ok,
             "single runs from (-1,-1): baseline " + std::to_string(base.samplings) +
                 " = 483 +/- 2, region " + std::to_string(reg_s.samplings) +
                 " in [140,200] (synthesized), " + std::to_string(reg_r.samplings) +
                 " in [150,185] (reference coefficients)");
    }

    // 3. trigger function never positive along region-scheme benchmark runs
    {
      bool ok = bench_synth.max_trigger_region <= 1e-6 &&
                bench_ref.max_trigger_region <= 1e-6 && bench_synth.flagged == 0 &&
                bench_ref.flagged == 0;
      report(3, ok,
             "max trigger value over region runs " + fmt(bench_synth.max_trigger_region) +
                 " / " + fmt(bench_ref.max_trigger_region) +
                 " <= 1e-6, aborted runs " + std::to_string(bench_synth.flagged) + " / " +
                 std::to_string(bench_ref.flagged));
    }

    // 4. decay coefficients certified on a dense constraint sample, and the
    //    reference coefficients pass the same a-posteriori check
    {
      bool ok = out_synth.artifact.margin >= 0.0 &&
                out_synth.artifact.verify_points >= 100000 &&
                out_ref.artifact.margin >= 0.0 && out_ref.artifact.verify_points >= 100000;
      report(4, ok,
             "verification margin " + fmt(out_synth.artifact.margin) + " on " +
                 std::to_string(out_synth.artifact.verify_points) +
                 " samples (synthesized); reference coefficients margin " +
                 fmt(out_ref.artifact.margin) + " on " +
                 std::to_string(out_ref.artifact.verify_points) + " samples");
    }

    const stc::VerifySuiteReport ver_s = stc::run_verify_suites(cfg_synth, out_synth.artifact);
    const stc::VerifySuiteReport ver_r = stc::run_verify_suites(cfg_ref, out_ref.artifact);

    // 5. crossing times obey the dilation scaling law
    {
      std::string detail;
      bool ok = both_pass(ver_s, ver_r, "scaling-law", detail);
      report(5, ok, detail + "; relative error <= 1e-3 for lambda in {0.5, 2, 10}");
    }

    // 6. the closed-form bound dominates the trigger value along real runs
    {
      std::string detail;
      bool ok = both_pass(ver_s, ver_r, "mu-dominance", detail);
      report(6, ok, detail + "; min(mu - phi) >= -1e-6 over cone points x realizations");
    }

    // 7. closed-form dwell bound agrees with the independent root finder, and
    //    the origin-slice bound sits where the dwell grid expects it
    {
      std::string detail;
      bool agree = both_pass(ver_s, ver_r, "root-agreement", detail);

      const stc::System sys = stc::rebuild_system(out_ref.artifact);
      const std::vector<double> origin(sys.plant->state_dim(), 0.0);
      const double tau_origin = sys.engine->tau_down(origin, 1.0);
      const double tau_top = out_ref.artifact.tau1 *
                             std::pow(out_ref.artifact.ratio, out_ref.artifact.q - 1);
      bool window = std::abs(tau_origin - 0.0452) <= 5e-4;
      bool consistent = std::abs(tau_top - 0.047) <= 1e-3 && tau_origin <= tau_top;
      report(7, agree && window && consistent,
             detail + "; origin-slice bound " + fmt(tau_origin) +
                 " = 0.0452 +/- 0.0005 with reference coefficients, deepest grid dwell " +
                 fmt(tau_top) + " ~ 0.047");
    }

    // 8. scheduled times never exceed the worst-case differential-inclusion time
    {
      std::string detail;
      bool ok = both_pass(ver_s, ver_r, "emulation-bound", detail);
      report(8, ok, detail + "; zero violations over 50 covered states");
    }

    // 9. every region-scheme dwell respects the grid floor
    {
      bool ok = bench_synth.min_dwell_region >= out_synth.artifact.tau1 &&
                bench_ref.min_dwell_region >= out_ref.artifact.tau1;
      report(9, ok,
             "min benchmark dwell " + fmt(bench_synth.min_dwell_region) + " >= tau1 = " +
                 fmt(out_synth.artifact.tau1) + " (synthesized); " +
                 fmt(bench_ref.min_dwell_region) + " >= " + fmt(out_ref.artifact.tau1) +
                 " (reference coefficients)");
    }

    // 10. analytic toy: constant field against the error-norm trigger crosses
    //     at eps_bar / |c|
    {
      const stc_test::ConstantFieldPlant slow({0.6, -0.8});  // |c| = 1
      const stc_test::ConstantFieldPlant fast({3.0, 4.0});   // |c| = 5
      const auto trig_quarter = stc::make_lebesgue_trigger(2, 0.25);
      const auto trig_two = stc::make_lebesgue_trigger(2, 2.0);
      const auto sig = stc::DisturbanceSignal::constant({});
      const std::vector<double> x0 = {1.0, 2.0};
      const stc::CrossingResult a =
          stc::etc_intersample_time(slow, *trig_quarter, x0, *sig, 1e-4, 1e-9, 2.0);
      const stc::CrossingResult b =
          stc::etc_intersample_time(fast, *trig_two, x0, *sig, 1e-4, 1e-9, 2.0);
      bool ok = a.crossed && std::abs(a.time - 0.25) <= 1e-6 && b.crossed &&
                std::abs(b.time - 0.4) <= 1e-6;
      report(10, ok,
             "constant-field crossings " + fmt(a.time) + " ~ 0.25 and " + fmt(b.time) +
                 " ~ 0.4, both within 1e-6");
    }
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }

  const double total = std::chrono::duration<double>(clock::now() - t_start).count();
  std::printf("%d/10 criteria passed in %.1f s\n", 10 - failures, total);
  return failures == 0 ? 0 : 1;
}
