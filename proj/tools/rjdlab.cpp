// Command-line front end: one subcommand per experiment kind.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rjd/config.hpp"
#include "rjd/errors.hpp"
#include "rjd/experiments.hpp"
#include "rjd/report.hpp"

namespace {

constexpr int kExitVerdict = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string out;
  std::string format;

  std::optional<double> dt, t_max, burn_in, p, x0, x1, x2, x, window;
  std::optional<std::uint64_t> paths, stride;
  std::string times;
};

rjd::Json read_document(const std::string& path) {
  if (path.empty()) return rjd::Json::object();
  std::ifstream in(path);
  if (!in) throw rjd::ConfigError("cannot open config file " + path);
  try {
    return rjd::Json::parse(in);
  } catch (const rjd::Json::parse_error& e) {
    throw rjd::ConfigError("malformed config file " + path + ": " + e.what());
  }
}

rjd::Json overrides(const Flags& f, const std::string& kind) {
  rjd::Json o = rjd::Json::object();
  o["run.kind"] = kind;
  if (!f.preset.empty()) o["process.preset"] = f.preset;
  if (f.seed) o["numerics.seed"] = *f.seed;
  if (f.jobs) o["numerics.jobs"] = *f.jobs;
  if (!f.out.empty()) o["output.path"] = f.out;
  if (!f.format.empty()) o["output.format"] = f.format;
  auto put = [&](const char* key, const auto& v) {
    if (v) o[key] = *v;
  };
  put("numerics.dt", f.dt);
  put("numerics.t_max", f.t_max);
  put("numerics.burn_in", f.burn_in);
  put("numerics.paths", f.paths);
  put("run.p", f.p);
  put("run.x0", f.x0);
  put("run.x1", f.x1);
  put("run.x2", f.x2);
  put("run.x", f.x);
  put("run.window", f.window);
  put("run.stride", f.stride);
  if (!f.times.empty()) o["run.times"] = f.times;
  return o;
}

rjd::Json report_document(const rjd::Report& report, rjd::RunKind kind) {
  const rjd::Json full = rjd::to_json(report);
  if (kind != rjd::RunKind::certificate || !report.certificate) return full;
  // The certificate subcommand puts the certificate fields at the top level.
  rjd::Json out = rjd::certificate_json(*report.certificate);
  for (const auto& [key, value] : full.items())
    if (key != "certificate") out[key] = value;
  return out;
}

int run(const Flags& flags, const std::string& kind) {
  const rjd::ExperimentConfig cfg =
      rjd::parse_config(rjd::merge_documents(read_document(flags.config_path), overrides(flags, kind)));

  std::ofstream file;
  if (!cfg.output.path.empty() && cfg.output.path != "-") {
    file.open(cfg.output.path, std::ios::binary);
    if (!file) throw rjd::ConfigError("cannot write " + cfg.output.path);
  }
  std::ostream& out = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;

  rjd::Report report;
  if (cfg.output.format == rjd::OutputFormat::csv) {
    rjd::CsvSink sink(out);
    report = rjd::run_experiment(cfg, sink);
  } else {
    rjd::CollectSink sink;
    report = rjd::run_experiment(cfg, sink);
    report.tables = std::move(sink.tables);
    out << report_document(report, cfg.run.kind).dump(2) << '\n';
  }
  out.flush();

  for (const auto& v : report.verdicts)
    std::cerr << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << rjd::format_number(v.measured) << ' '
              << v.relation << ' ' << rjd::format_number(v.threshold) << '\n';
  if (!report.all_pass()) {
    std::cerr << "failed checks: " << report.failures() << '\n';
    return kExitVerdict;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflected jump-diffusion convergence experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_path, "JSON experiment config");
  app.add_option("--preset", f.preset, "process preset: drifted-rbm, reflected-ou, levy-exp2");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--jobs", f.jobs, "worker threads");
  app.add_option("--out", f.out, "output file (default stdout)");
  app.add_option("--format", f.format, "csv or json");

  auto add = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto* certificate = add("certificate", "rate certificate for the configured process");
  auto* simulate = add("simulate", "simulate independent paths");
  auto* couple = add("couple", "simulate ordered coupled pairs");
  auto* decay = add("decay", "Wasserstein decay between two starting points");
  auto* path_decay = add("path-decay", "path-space decay over windows [t, t + window]");
  auto* stationary = add("stationary", "distance to the estimated stationary law");
  auto* verify = add("verify", "contraction and supermartingale checks");
  auto* examples = add("examples", "run the worked examples with their golden verdicts");

  certificate->add_option("--p", f.p, "Wasserstein order");

  simulate->add_option("--x0", f.x0);
  couple->add_option("--x1", f.x1);
  couple->add_option("--x2", f.x2);
  for (auto* s : {simulate, couple, verify}) s->add_option("--t-max", f.t_max);
  for (auto* s : {simulate, couple}) s->add_option("--stride", f.stride, "keep every n-th grid point");

  for (auto* s : {decay, path_decay, verify}) {
    s->add_option("--x1", f.x1);
    s->add_option("--x2", f.x2);
  }
  for (auto* s : {decay, path_decay, stationary}) {
    s->add_option("--times", f.times, "comma-separated times");
    s->add_option("--p", f.p, "Wasserstein order");
  }
  path_decay->add_option("--window", f.window, "window length");
  stationary->add_option("--x", f.x, "starting point");
  stationary->add_option("--burn-in", f.burn_in);
  for (auto* s : {simulate, couple, decay, path_decay, stationary, verify, examples}) {
    s->add_option("--paths", f.paths);
    s->add_option("--dt", f.dt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    return run(f, kind);
  } catch (const rjd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rjd::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerdict;
  }
}
