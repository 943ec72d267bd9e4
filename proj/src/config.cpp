#include "rjd/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rjd/coupling.hpp"
#include "rjd/errors.hpp"

namespace rjd {

namespace {

const std::set<std::string>& process_keys() {
  static const std::set<std::string> keys{
      "preset",         "drift.type", "drift.value", "drift.slope",     "drift.intercept", "drift.knots",
      "sigma",          "jumps.type", "jumps.rate",  "jumps.size",      "jumps.components", "jumps.intensity"};
  return keys;
}

const std::set<std::string>& other_keys() {
  static const std::set<std::string> keys{
      "numerics.dt", "numerics.t_max", "numerics.paths", "numerics.seed", "numerics.burn_in", "numerics.jobs",
      "run.kind",    "run.p",          "run.x0",         "run.x1",        "run.x2",           "run.x",
      "run.times",   "run.window",     "run.stride",     "output.path",   "output.format"};
  return keys;
}

void flatten_into(const Json& node, const std::string& prefix, Json& out) {
  for (const auto& [key, value] : node.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    // A bare preset name stands for {"process": {"preset": name}}.
    if (name == "process" && value.is_string()) {
      if (out.contains("process.preset")) throw ConfigError("key given twice: process.preset");
      out["process.preset"] = value;
    } else if (value.is_object()) {
      flatten_into(value, name, out);
    } else {
      if (out.contains(name)) throw ConfigError("key given twice: " + name);
      out[name] = value;
    }
  }
}

double number(const Json& doc, const std::string& key) {
  const Json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key + " must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_integer(const Json& doc, const std::string& key) {
  const Json& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key + " must be nonnegative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(key + " must be a nonnegative integer");
}

std::string text(const Json& doc, const std::string& key) {
  const Json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key + " must be a string");
  return v.get<std::string>();
}

DisplacementLaw parse_law(const std::string& type, const Json& obj, const std::string& where) {
  auto field = [&](const char* name) {
    if (!obj.contains(name)) throw ConfigError(where + " requires '" + name + "'");
    return number(obj, name);
  };
  if (type == "exponential") return ExponentialLaw{field("rate")};
  if (type == "deterministic") return DeterministicLaw{field("size")};
  throw ConfigError(where + ": unknown displacement type '" + type + "'");
}

RunKind parse_kind(const std::string& s) {
  static const std::pair<const char*, RunKind> table[] = {
      {"certificate", RunKind::certificate}, {"simulate", RunKind::simulate},
      {"couple", RunKind::couple},           {"decay", RunKind::decay},
      {"path-decay", RunKind::path_decay},   {"stationary", RunKind::stationary},
      {"verify", RunKind::verify},           {"examples", RunKind::examples}};
  for (const auto& [name, kind] : table)
    if (s == name) return kind;
  throw ConfigError("run.kind must be one of certificate, simulate, couple, decay, path-decay, stationary, "
                    "verify, examples (got '" + s + "')");
}

bool tabular(RunKind kind) {
  return kind == RunKind::simulate || kind == RunKind::couple || kind == RunKind::decay ||
         kind == RunKind::path_decay || kind == RunKind::stationary;
}

std::vector<double> parse_times(const Json& v) {
  std::vector<double> out;
  if (v.is_string()) {
    out = parse_number_list(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("run.times must contain numbers");
      out.push_back(e.get<double>());
    }
  } else if (v.is_number()) {
    out.push_back(v.get<double>());
  } else {
    throw ConfigError("run.times must be a list of numbers");
  }
  if (out.empty()) throw ConfigError("run.times must not be empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] >= 0.0) || !std::isfinite(out[i])) throw ConfigError("run.times must be nonnegative");
    if (i && !(out[i] > out[i - 1])) throw ConfigError("run.times must be strictly increasing");
  }
  return out;
}

}  // namespace

std::string to_string(RunKind kind) {
  switch (kind) {
    case RunKind::certificate: return "certificate";
    case RunKind::simulate: return "simulate";
    case RunKind::couple: return "couple";
    case RunKind::decay: return "decay";
    case RunKind::path_decay: return "path-decay";
    case RunKind::stationary: return "stationary";
    case RunKind::verify: return "verify";
    case RunKind::examples: return "examples";
  }
  return "?";
}

bool uses_coupling(RunKind kind) {
  return kind == RunKind::couple || kind == RunKind::decay || kind == RunKind::path_decay ||
         kind == RunKind::stationary || kind == RunKind::verify;
}

std::vector<double> parse_number_list(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in number list '" + list + "'");
    const std::string s = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw ConfigError("malformed number '" + s + "'");
    out.push_back(v);
  }
  return out;
}

Json flatten(const Json& document) {
  if (!document.is_object()) throw ConfigError("configuration must be a JSON object");
  Json out = Json::object();
  flatten_into(document, "", out);
  return out;
}

Json merge_documents(const Json& base, const Json& overrides) {
  Json out = flatten(base);
  const Json top = flatten(overrides);
  for (const auto& [key, value] : top.items()) out[key] = value;
  return out;
}

Json preset_keys(const std::string& name) {
  if (name == "drifted-rbm")
    return Json{{"drift.type", "constant"}, {"drift.value", -1.0}, {"sigma", 1.0}, {"jumps.type", "none"}};
  if (name == "reflected-ou")
    return Json{{"drift.type", "affine"}, {"drift.slope", -1.0}, {"drift.intercept", -1.0}, {"sigma", 1.0},
                {"jumps.type", "none"}};
  if (name == "levy-exp2")
    return Json{{"drift.type", "constant"}, {"drift.value", -1.0}, {"sigma", 1.0}, {"jumps.type", "exponential"},
                {"jumps.rate", 2.0},        {"jumps.intensity", 1.0}};
  throw ConfigError("unknown process preset '" + name + "' (known: drifted-rbm, reflected-ou, levy-exp2)");
}

ProcessSpec parse_process(const Json& keys) {
  auto need = [&](const std::string& k) {
    if (!keys.contains(k)) throw ConfigError("process." + k + " is required");
    return number(keys, k);
  };
  ProcessSpec spec;

  const std::string drift = keys.contains("drift.type") ? text(keys, "drift.type") : "";
  if (drift == "constant") {
    spec.drift = ConstantDrift{need("drift.value")};
  } else if (drift == "affine") {
    spec.drift = AffineDrift{need("drift.slope"), keys.contains("drift.intercept") ? number(keys, "drift.intercept") : 0.0};
  } else if (drift == "tabulated") {
    if (!keys.contains("drift.knots") || !keys["drift.knots"].is_array())
      throw ConfigError("process.drift.knots must be a list of [x, g] pairs");
    TabulatedDrift tab;
    for (const auto& k : keys["drift.knots"]) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
        throw ConfigError("process.drift.knots must be a list of [x, g] pairs");
      tab.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    spec.drift = tab;
  } else {
    throw ConfigError("process.drift.type must be constant, affine or tabulated");
  }

  spec.sigma = need("sigma");

  const std::string jumps = keys.contains("jumps.type") ? text(keys, "jumps.type") : "none";
  if (jumps == "none") {
    spec.jumps = NoJumps{};
  } else {
    LevyUpward levy;
    levy.intensity = need("jumps.intensity");
    if (jumps == "mixture") {
      if (!keys.contains("jumps.components") || !keys["jumps.components"].is_array())
        throw ConfigError("process.jumps.components must be a list");
      MixtureLaw mix;
      for (const auto& c : keys["jumps.components"]) {
        if (!c.is_object() || !c.contains("weight") || !c.contains("type"))
          throw ConfigError("each mixture component needs 'weight' and 'type'");
        mix.components.push_back({number(c, "weight"), parse_law(text(c, "type"), c, "mixture component")});
      }
      levy.displacement = mix;
    } else {
      Json law = Json::object();
      if (keys.contains("jumps.rate")) law["rate"] = keys["jumps.rate"];
      if (keys.contains("jumps.size")) law["size"] = keys["jumps.size"];
      levy.displacement = parse_law(jumps, law, "process.jumps");
    }
    spec.jumps = levy;
  }
  validate(spec);
  return spec;
}

ExperimentConfig parse_config(const Json& document) {
  const Json flat = flatten(document);

  std::vector<std::string> unknown;
  Json process = Json::object();
  for (const auto& [key, value] : flat.items()) {
    if (key.rfind("process.", 0) == 0 && process_keys().count(key.substr(8))) {
      process[key.substr(8)] = value;
    } else if (!other_keys().count(key)) {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown configuration keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }

  ExperimentConfig cfg;
  auto has = [&](const char* key) { return flat.contains(key); };
  auto defaulted = [&](const char* key) { cfg.defaults_applied.emplace_back(key); };

  // Run kind first: output defaults and step checks depend on it.
  if (has("run.kind")) cfg.run.kind = parse_kind(text(flat, "run.kind"));
  else defaulted("run.kind");

  if (!process.empty()) {
    Json keys = Json::object();
    if (process.contains("preset")) keys = preset_keys(text(process, "preset"));
    for (const auto& [k, v] : process.items())
      if (k != "preset") keys[k] = v;
    cfg.process = parse_process(keys);
    cfg.echo["process"] = keys;
  } else if (cfg.run.kind != RunKind::examples) {
    throw ConfigError("a process section is required for run kind " + to_string(cfg.run.kind));
  }

  Numerics& num = cfg.numerics;
  if (has("numerics.dt")) num.dt = number(flat, "numerics.dt");
  else defaulted("numerics.dt");
  if (!(num.dt > 0.0) || !std::isfinite(num.dt)) throw ConfigError("dt must be positive");
  if (has("numerics.t_max")) num.t_max = number(flat, "numerics.t_max");
  else defaulted("numerics.t_max");
  if (!(num.t_max > 0.0) || !std::isfinite(num.t_max)) throw ConfigError("t_max must be positive");
  if (has("numerics.paths")) num.paths = unsigned_integer(flat, "numerics.paths");
  else defaulted("numerics.paths");
  if (num.paths < 1) throw ConfigError("paths must be at least 1");
  if (has("numerics.seed")) num.seed = unsigned_integer(flat, "numerics.seed");
  else defaulted("numerics.seed");
  if (has("numerics.burn_in") && !(flat["numerics.burn_in"].is_string() && flat["numerics.burn_in"] == "auto")) {
    num.burn_in = number(flat, "numerics.burn_in");
    if (!(*num.burn_in >= 0.0)) throw ConfigError("burn_in must be nonnegative or \"auto\"");
  } else if (!has("numerics.burn_in")) {
    defaulted("numerics.burn_in");
  }
  if (has("numerics.jobs")) num.jobs = static_cast<unsigned>(unsigned_integer(flat, "numerics.jobs"));
  else defaulted("numerics.jobs");
  if (num.jobs < 1) throw ConfigError("jobs must be at least 1");

  RunSettings& run = cfg.run;
  auto real = [&](const char* key, double& target) {
    if (has(key)) target = number(flat, key);
    else defaulted(key);
  };
  real("run.p", run.p);
  real("run.x0", run.x0);
  real("run.x1", run.x1);
  real("run.x2", run.x2);
  real("run.x", run.x);
  real("run.window", run.window);
  if (has("run.times")) run.times = parse_times(flat["run.times"]);
  else defaulted("run.times");
  if (has("run.stride")) run.stride = unsigned_integer(flat, "run.stride");
  else defaulted("run.stride");
  if (!(run.p >= 1.0)) throw ConfigError("p must be at least 1");
  if (run.stride < 1) throw ConfigError("stride must be at least 1");
  if (!(run.window >= 0.0)) throw ConfigError("window must be nonnegative");
  if (!(run.x0 >= 0.0) || !(run.x >= 0.0)) throw ConfigError("starting states must be nonnegative");
  if (!(0.0 <= run.x1 && run.x1 <= run.x2)) throw ConfigError("starts must satisfy 0 <= x1 <= x2");

  if (has("output.path")) cfg.output.path = text(flat, "output.path");
  else defaulted("output.path");
  if (has("output.format")) {
    const std::string f = text(flat, "output.format");
    if (f == "csv") cfg.output.format = OutputFormat::csv;
    else if (f == "json") cfg.output.format = OutputFormat::json;
    else throw ConfigError("output.format must be csv or json");
    if (cfg.output.format == OutputFormat::csv && !tabular(run.kind))
      throw ConfigError("csv output is not available for run kind " + to_string(run.kind));
  } else {
    cfg.output.format = tabular(run.kind) ? OutputFormat::csv : OutputFormat::json;
    defaulted("output.format");
  }

  if (cfg.process && uses_coupling(run.kind)) check_coupling_step(*cfg.process, num.dt);

  cfg.echo["numerics"] = Json{{"dt", num.dt},
                              {"t_max", num.t_max},
                              {"paths", num.paths},
                              {"seed", num.seed},
                              {"burn_in", num.burn_in ? Json(*num.burn_in) : Json("auto")},
                              {"jobs", num.jobs}};
  cfg.echo["run"] = Json{{"kind", to_string(run.kind)}, {"p", run.p},         {"x0", run.x0},
                         {"x1", run.x1},                 {"x2", run.x2},       {"x", run.x},
                         {"times", run.times},           {"window", run.window}, {"stride", run.stride}};
  cfg.echo["output"] = Json{{"path", cfg.output.path},
                            {"format", cfg.output.format == OutputFormat::csv ? "csv" : "json"}};
  return cfg;
}

}  // namespace rjd
