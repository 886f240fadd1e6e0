// Command-line front end for the self-triggered-control toolkit.  Talks to
// the shared library exclusively through its public C interface; exit codes
// mirror stc_status (0 ok, 2 config, 3 synthesis, 4 verification,
// 5 coverage, 1 internal).
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stc/stc.h"

namespace {

struct ConfigHandle {
  stc_config* ptr = nullptr;
  ~ConfigHandle() { stc_config_free(ptr); }
};

struct ArtifactHandle {
  stc_artifact* ptr = nullptr;
  ~ArtifactHandle() { stc_artifact_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { stc_string_free(ptr); }
};

int report_error(const std::string& what, stc_status st) {
  std::cerr << "error: " << what << ": " << stc_last_error() << "\n";
  return static_cast<int>(st);
}

std::string d2s(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_x0(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(token, &used);
      while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used])))
        ++used;
      if (used != token.size()) return false;
      out.push_back(v);
    } catch (...) {
      return false;
    }
  }
  return !out.empty();
}

int write_text(const std::string& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = dir + "/" + name;
  std::ofstream f(path, std::ios::trunc);
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return static_cast<int>(STC_ERROR_CONFIG);
  }
  f << text;
  return 0;
}

struct CommonArgs {
  std::string config_path;
  std::string artifact_path;
  std::string out_dir;
  std::string x0_text;
  std::string scheme = "region-stc";
  std::uint64_t seed = 0;
  double h = 0.0;
  int workers = 1;
  bool seed_set = false;
  bool h_set = false;
};

int load_config(const CommonArgs& a, bool seed_is_synthesis, ConfigHandle& cfg) {
  stc_status st = stc_config_load_file(a.config_path.c_str(), &cfg.ptr);
  if (st != STC_OK) return report_error("loading configuration", st);
  if (a.seed_set) {
    st = seed_is_synthesis ? stc_config_set_synthesis_seed(cfg.ptr, a.seed)
                           : stc_config_set_seed(cfg.ptr, a.seed);
    if (st != STC_OK) return report_error("applying --seed", st);
  }
  if (a.h_set) {
    st = stc_config_set_step(cfg.ptr, a.h);
    if (st != STC_OK) return report_error("applying --h", st);
  }
  return 0;
}

int load_artifact(const CommonArgs& a, ArtifactHandle& art) {
  stc_status st = stc_artifact_load(a.artifact_path.c_str(), &art.ptr);
  if (st != STC_OK) return report_error("loading artifact", st);
  return 0;
}

int cmd_synthesize(const CommonArgs& a) {
  ConfigHandle cfg;
  if (int rc = load_config(a, /*seed_is_synthesis=*/true, cfg)) return rc;
  ArtifactHandle art;
  OwnedString report;
  stc_status st = stc_synthesize(cfg.ptr, &art.ptr, &report.ptr);
  if (st != STC_OK) return report_error("synthesis", st);
  st = stc_artifact_save(art.ptr, a.artifact_path.c_str());
  if (st != STC_OK) return report_error("saving artifact", st);
  std::cout << report.ptr;
  if (!a.out_dir.empty())
    if (int rc = write_text(a.out_dir, "synthesis_report.json", report.ptr)) return rc;
  std::cerr << "artifact written to " << a.artifact_path << "\n";
  return 0;
}

int cmd_benchmark(const CommonArgs& a) {
  ConfigHandle cfg;
  if (int rc = load_config(a, /*seed_is_synthesis=*/false, cfg)) return rc;
  ArtifactHandle art;
  if (int rc = load_artifact(a, art)) return rc;

  const std::string out = a.out_dir.empty() ? std::string(".") : a.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  const std::string csv = out + "/benchmark.csv";

  stc_benchmark_summary sum{};
  stc_status st = stc_benchmark_run(cfg.ptr, art.ptr, csv.c_str(), a.workers, &sum);
  if (st != STC_OK) return report_error("benchmark", st);

  std::ostringstream js;
  js << "{\n"
     << "  \"mean_samplings\": {\n"
     << "    \"region-stc\": " << d2s(sum.mean_region) << ",\n"
     << "    \"baseline-stc\": " << d2s(sum.mean_baseline) << ",\n"
     << "    \"etc\": " << d2s(sum.mean_etc) << "\n"
     << "  },\n"
     << "  \"min_dwell_region\": " << d2s(sum.min_dwell_region) << ",\n"
     << "  \"max_trigger_region\": " << d2s(sum.max_trigger_region) << ",\n"
     << "  \"runs\": " << sum.runs << ",\n"
     << "  \"flagged\": " << sum.flagged << "\n"
     << "}\n";
  if (int rc = write_text(out, "benchmark_summary.json", js.str())) return rc;

  std::cout << "mean samplings: region-stc " << d2s(sum.mean_region) << ", baseline-stc "
            << d2s(sum.mean_baseline) << ", etc " << d2s(sum.mean_etc) << "\n"
            << "min region dwell " << d2s(sum.min_dwell_region) << " s, max trigger value "
            << d2s(sum.max_trigger_region) << ", flagged runs " << sum.flagged << "\n"
            << "per-run table: " << csv << "\n";
  return 0;
}

int cmd_simulate(const CommonArgs& a) {
  ConfigHandle cfg;
  if (int rc = load_config(a, /*seed_is_synthesis=*/false, cfg)) return rc;
  ArtifactHandle art;
  if (int rc = load_artifact(a, art)) return rc;
  std::vector<double> x0;
  if (!parse_x0(a.x0_text, x0)) {
    std::cerr << "error: --x0 expects comma-separated numbers\n";
    return static_cast<int>(STC_ERROR_CONFIG);
  }
  stc_run_stats stats{};
  stc_status st = stc_simulate_run(cfg.ptr, art.ptr, x0.data(),
                                   static_cast<int>(x0.size()), a.scheme.c_str(), &stats);
  if (st != STC_OK) return report_error("simulate", st);
  std::cout << "scheme = " << a.scheme << "\n"
            << "samplings = " << stats.samplings << "\n"
            << "min dwell = " << d2s(stats.min_dwell) << " s\n"
            << "max trigger value = " << d2s(stats.max_trigger) << "\n";
  if (!stats.coverage_ok) {
    std::cout << "coverage: run aborted outside the covered ball\n";
    return static_cast<int>(STC_ERROR_COVERAGE);
  }
  return 0;
}

int cmd_verify(const CommonArgs& a) {
  ConfigHandle cfg;
  if (int rc = load_config(a, /*seed_is_synthesis=*/true, cfg)) return rc;
  ArtifactHandle art;
  if (int rc = load_artifact(a, art)) return rc;
  OwnedString report;
  int all_pass = 0;
  stc_status st = stc_verify_run(cfg.ptr, art.ptr, &report.ptr, &all_pass);
  if (report.ptr) {
    std::cout << report.ptr;
    if (!a.out_dir.empty())
      if (int rc = write_text(a.out_dir, "verify_report.json", report.ptr)) return rc;
  }
  if (st != STC_OK) return report_error("verify", st);
  return 0;
}

int cmd_plot_data(const CommonArgs& a) {
  ConfigHandle cfg;
  if (int rc = load_config(a, /*seed_is_synthesis=*/false, cfg)) return rc;
  ArtifactHandle art;
  if (int rc = load_artifact(a, art)) return rc;
  std::vector<double> x0;
  if (!parse_x0(a.x0_text, x0)) {
    std::cerr << "error: --x0 expects comma-separated numbers\n";
    return static_cast<int>(STC_ERROR_CONFIG);
  }
  stc_status st = stc_plot_data(cfg.ptr, art.ptr, x0.data(), static_cast<int>(x0.size()),
                                a.out_dir.c_str());
  if (st != STC_OK) return report_error("plot-data", st);
  std::cout << "trajectory and dwell series written to " << a.out_dir << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-based self-triggered control: synthesis, benchmarking and "
               "verification for perturbed nonlinear plants"};
  // "--h" is the integrator-step override, so help lives on "--help" only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  CommonArgs a;

  CLI::App* syn = app.add_subcommand(
      "synthesize", "Derive decay coefficients, cone radius and dwell grid from a config");
  syn->add_option("--config", a.config_path, "Configuration JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  syn->add_option("--artifact", a.artifact_path, "Output path for the artifact")->required();
  syn->add_option("--seed", a.seed, "Override the constraint-sampling seed");
  syn->add_option("--out", a.out_dir, "Directory for synthesis_report.json (optional)");

  CLI::App* ben = app.add_subcommand(
      "benchmark", "Seeded multi-run comparison of region-STC, baseline-STC and ETC");
  ben->add_option("--config", a.config_path, "Configuration JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  ben->add_option("--artifact", a.artifact_path, "Artifact produced by synthesize")
      ->required()
      ->check(CLI::ExistingFile);
  ben->add_option("--out", a.out_dir, "Directory for benchmark.csv and summary (default .)");
  ben->add_option("--workers", a.workers, "Worker threads")->check(CLI::PositiveNumber);
  ben->add_option("--seed", a.seed, "Override the initial-condition seed");
  ben->add_option("--h", a.h, "Override the integrator step (s)");

  CLI::App* sim = app.add_subcommand("simulate", "Single closed-loop run from --x0");
  sim->add_option("--config", a.config_path, "Configuration JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--artifact", a.artifact_path, "Artifact produced by synthesize")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--x0", a.x0_text, "Initial plant state, comma separated")->required();
  sim->add_option("--scheme", a.scheme, "region-stc | baseline-stc | etc");
  sim->add_option("--h", a.h, "Override the integrator step (s)");

  CLI::App* ver = app.add_subcommand("verify", "Run the property suites against an artifact");
  ver->add_option("--config", a.config_path, "Configuration JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  ver->add_option("--artifact", a.artifact_path, "Artifact to verify")
      ->required()
      ->check(CLI::ExistingFile);
  ver->add_option("--seed", a.seed, "Override the property-sampling seed");
  ver->add_option("--out", a.out_dir, "Directory for verify_report.json (optional)");

  CLI::App* plot =
      app.add_subcommand("plot-data", "Emit (t, state) and (t, dwell) series for plotting");
  plot->add_option("--config", a.config_path, "Configuration JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--artifact", a.artifact_path, "Artifact produced by synthesize")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--x0", a.x0_text, "Initial plant state, comma separated")->required();
  plot->add_option("--out", a.out_dir, "Output directory")->required();
  plot->add_option("--h", a.h, "Override the integrator step (s)");

  for (CLI::App* s : {syn, ben, sim, ver, plot})
    s->set_help_flag("--help", "Print this help message and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(STC_ERROR_CONFIG);
  }

  CLI::App* sub = app.get_subcommands().front();
  auto counted = [&](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  a.seed_set = counted("--seed");
  a.h_set = counted("--h");

  if (sub == syn) return cmd_synthesize(a);
  if (sub == ben) return cmd_benchmark(a);
  if (sub == sim) return cmd_simulate(a);
  if (sub == ver) return cmd_verify(a);
  if (sub == plot) return cmd_plot_data(a);
  return static_cast<int>(STC_ERROR_CONFIG);
}
