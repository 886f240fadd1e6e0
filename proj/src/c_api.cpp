// C ABI wrapper over the pipeline.  Every entry point translates exceptions
// into status codes and stores the message in a thread-local buffer.
#include "stc/stc.h"

#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stc/artifact.hpp"
#include "stc/config.hpp"
#include "stc/errors.hpp"
#include "stc/pipeline.hpp"

struct stc_config {
  stc::Config cfg;
};

struct stc_artifact {
  stc::Artifact art;
  stc::System sys; // rebuilt eagerly so region queries are cheap
};

namespace {

thread_local std::string g_last_error;

template <typename Fn> stc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return STC_OK;
  } catch (const stc::Error& e) {
    g_last_error = e.what();
    return static_cast<stc_status>(static_cast<int>(e.status()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STC_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return STC_ERROR_INTERNAL;
  }
}

stc_status fail_config(const char* msg) {
  g_last_error = msg;
  return STC_ERROR_CONFIG;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

stc_artifact* wrap_artifact(stc::Artifact art) {
  auto* handle = new stc_artifact{std::move(art), {}};
  try {
    handle->sys = stc::rebuild_system(handle->art);
  } catch (...) {
    delete handle;
    throw;
  }
  return handle;
}

} // namespace

extern "C" {

const char* stc_version(void) { return "1.0.0"; }

const char* stc_last_error(void) { return g_last_error.c_str(); }

void stc_string_free(char* s) { delete[] s; }

stc_status stc_config_load_file(const char* path, stc_config** out) {
  if (!path || !out) return fail_config("null argument");
  *out = nullptr;
  return guarded([&] { *out = new stc_config{stc::load_config(path)}; });
}

stc_status stc_config_load_string(const char* json_text, stc_config** out) {
  if (!json_text || !out) return fail_config("null argument");
  *out = nullptr;
  return guarded([&] { *out = new stc_config{stc::parse_config(json_text)}; });
}

void stc_config_free(stc_config* cfg) { delete cfg; }

stc_status stc_config_set_seed(stc_config* cfg, uint64_t seed) {
  if (!cfg) return fail_config("null argument");
  return guarded([&] { cfg->cfg.benchmark_seed = seed; });
}

stc_status stc_config_set_synthesis_seed(stc_config* cfg, uint64_t seed) {
  if (!cfg) return fail_config("null argument");
  return guarded([&] { cfg->cfg.synth.seed = seed; });
}

stc_status stc_config_set_step(stc_config* cfg, double h) {
  if (!cfg) return fail_config("null argument");
  if (!(h > 0.0)) return fail_config("integrator step must be positive");
  return guarded([&] { cfg->cfg.h = h; });
}

stc_status stc_synthesize(const stc_config* cfg, stc_artifact** out, char** report_json) {
  if (!cfg || !out) return fail_config("null argument");
  *out = nullptr;
  if (report_json) *report_json = nullptr;
  return guarded([&] {
    stc::SynthesisOutcome outcome = stc::run_synthesis(cfg->cfg);
    if (report_json) *report_json = dup_string(stc::synthesis_report_json(outcome));
    *out = wrap_artifact(std::move(outcome.artifact));
  });
}

stc_status stc_artifact_load(const char* path, stc_artifact** out) {
  if (!path || !out) return fail_config("null argument");
  *out = nullptr;
  return guarded([&] { *out = wrap_artifact(stc::load_artifact(path)); });
}

stc_status stc_artifact_save(const stc_artifact* art, const char* path) {
  if (!art || !path) return fail_config("null argument");
  return guarded([&] { stc::save_artifact(art->art, path); });
}

void stc_artifact_free(stc_artifact* art) { delete art; }

stc_status stc_artifact_to_json(const stc_artifact* art, char** json_out) {
  if (!art || !json_out) return fail_config("null argument");
  *json_out = nullptr;
  return guarded([&] { *json_out = dup_string(stc::artifact_to_json(art->art)); });
}

stc_status stc_artifact_get(const stc_artifact* art, const char* key, double* out) {
  if (!art || !key || !out) return fail_config("null argument");
  return guarded([&] {
    const stc::Artifact& a = art->art;
    const std::string k = key;
    double v = 0.0;
    if (k == "delta0") v = a.delta0;
    else if (k == "delta1") v = a.delta1;
    else if (k == "eps_delta") v = a.eps_delta;
    else if (k == "margin") v = a.margin;
    else if (k == "r") v = a.r;
    else if (k == "w_lo") v = a.w_lo;
    else if (k == "w_hi") v = a.w_hi;
    else if (k == "alpha") v = static_cast<double>(a.alpha);
    else if (k == "theta") v = static_cast<double>(a.theta);
    else if (k == "tau1") v = a.tau1;
    else if (k == "ratio") v = a.ratio;
    else if (k == "q") v = static_cast<double>(a.q);
    else if (k == "sigma") v = a.sigma;
    else if (k == "epsilon") v = a.epsilon;
    else throw stc::ConfigError("unknown artifact field: " + k);
    *out = v;
  });
}

stc_status stc_tau_down(const stc_artifact* art, const double* x, int n, double w,
                        double* out) {
  if (!art || !x || !out) return fail_config("null argument");
  return guarded([&] {
    if (n != art->sys.plant->state_dim())
      throw stc::ConfigError("state dimension mismatch");
    std::vector<double> xv(x, x + n);
    *out = art->sys.engine->tau_down(xv, w);
  });
}

stc_status stc_region_index(const stc_artifact* art, const double* x, int n, int* out) {
  if (!art || !x || !out) return fail_config("null argument");
  return guarded([&] {
    if (n != art->sys.plant->state_dim())
      throw stc::ConfigError("state dimension mismatch");
    std::vector<double> xv(x, x + n);
    *out = art->sys.partition->region_index(xv);
  });
}

stc_status stc_region_dwell(const stc_artifact* art, const double* x, int n, double* out) {
  if (!art || !x || !out) return fail_config("null argument");
  return guarded([&] {
    if (n != art->sys.plant->state_dim())
      throw stc::ConfigError("state dimension mismatch");
    std::vector<double> xv(x, x + n);
    *out = art->sys.partition->dwell(xv);
  });
}

stc_status stc_benchmark_run(const stc_config* cfg, const stc_artifact* art,
                             const char* csv_path, int workers,
                             stc_benchmark_summary* out) {
  if (!cfg || !art || !out) return fail_config("null argument");
  return guarded([&] {
    stc::BenchResults res = stc::run_benchmark(cfg->cfg, art->art, workers);
    if (csv_path) stc::write_benchmark_csv(res, csv_path);
    out->mean_region = res.mean_region;
    out->mean_baseline = res.mean_baseline;
    out->mean_etc = res.mean_etc;
    out->min_dwell_region = res.min_dwell_region;
    out->max_trigger_region = res.max_trigger_region;
    out->runs = static_cast<int>(cfg->cfg.runs);
    out->flagged = res.flagged;
  });
}

stc_status stc_simulate_run(const stc_config* cfg, const stc_artifact* art,
                            const double* x0, int n, const char* scheme,
                            stc_run_stats* out) {
  if (!cfg || !art || !x0 || !scheme || !out) return fail_config("null argument");
  return guarded([&] {
    std::vector<double> x(x0, x0 + n);
    std::optional<stc::Scheme> parsed = stc::parse_scheme(scheme);
    if (!parsed)
      throw stc::ConfigError(std::string("unknown scheme: ") + scheme);
    stc::SimResult res = stc::run_single(cfg->cfg, art->art, x, *parsed);
    out->samplings = res.samplings;
    out->min_dwell = res.min_dwell;
    out->max_trigger = res.max_trigger;
    out->coverage_ok = res.coverage_ok ? 1 : 0;
  });
}

stc_status stc_verify_run(const stc_config* cfg, const stc_artifact* art,
                          char** report_json, int* all_pass) {
  if (!cfg || !art) return fail_config("null argument");
  if (report_json) *report_json = nullptr;
  return guarded([&] {
    stc::VerifySuiteReport report = stc::run_verify_suites(cfg->cfg, art->art);
    if (report_json) *report_json = dup_string(stc::verify_report_json(report));
    if (all_pass) *all_pass = report.all_pass ? 1 : 0;
    if (!report.all_pass) {
      std::string names;
      for (const auto& s : report.suites)
        if (!s.pass) names += (names.empty() ? "" : ", ") + s.name;
      throw stc::VerificationError("verification suite(s) failed: " + names);
    }
  });
}

stc_status stc_plot_data(const stc_config* cfg, const stc_artifact* art, const double* x0,
                         int n, const char* out_dir) {
  if (!cfg || !art || !x0 || !out_dir) return fail_config("null argument");
  return guarded([&] {
    std::vector<double> x(x0, x0 + n);
    stc::write_plot_data(cfg->cfg, art->art, x, out_dir);
  });
}

} // extern "C"
