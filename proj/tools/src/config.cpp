#include "kkmass/cli/config.hpp"

#include "kkmass/mass.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kkmass::cli {

using nlohmann::json;

Task parse_task(const std::string& s) {
  if (s == "mass") return Task::Mass;
  if (s == "decay") return Task::Decay;
  if (s == "verify-identities") return Task::VerifyIdentities;
  if (s == "boundary-limit") return Task::BoundaryLimit;
  if (s == "sweep") return Task::Sweep;
  throw ConfigError("unknown task '" + s + "'");
}

std::string to_string(Task task) {
  switch (task) {
    case Task::Mass: return "mass";
    case Task::Decay: return "decay";
    case Task::VerifyIdentities: return "verify-identities";
    case Task::BoundaryLimit: return "boundary-limit";
    case Task::Sweep: return "sweep";
  }
  return "unknown";
}

std::vector<double> default_radii(const Chart& chart) {
  const double r0 = std::max(62.5, 8.0 * chart.r_min);
  return geometric_ladder(r0, 5);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(source_ + ": field '" + path + "': " + what);
  }

  void allow_only(const json& obj, const std::string& path, const std::set<std::string>& keys) const {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!keys.count(it.key())) fail(join(path, it.key()), "unknown field");
    }
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
  }

  double positive(const json& v, const std::string& path) const {
    const double d = number(v, path);
    if (!(d > 0.0)) fail(path, "must be positive");
    return d;
  }

  int positive_int(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto i = v.get<long long>();
    if (i < 1 || i > 1'000'000) fail(path, "must be a positive integer");
    return static_cast<int>(i);
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const json& v, const std::string& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

 private:
  std::string source_;
};

void strictly_increasing(const Reader& rd, const std::vector<double>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) rd.fail(path, "values must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) rd.fail(path, "values must be strictly increasing");
  }
}

ModelSpec read_model(const Reader& rd, const json& j) {
  rd.allow_only(j, "model", {"name", "parameters", "fiber_periods", "shape"});
  if (!j.contains("name")) rd.fail("model.name", "missing");
  ModelSpec spec;
  try {
    spec.name = parse_model_name(rd.string(j["name"], "model.name"));
  } catch (const InvalidArgument& e) {
    rd.fail("model.name", e.what());
  }
  if (j.contains("parameters")) {
    const json& p = j["parameters"];
    if (!p.is_object()) rd.fail("model.parameters", "expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      spec.parameters[it.key()] = rd.number(it.value(), "model.parameters." + it.key());
    }
  }
  if (j.contains("fiber_periods")) {
    spec.fiber_periods = rd.numbers(j["fiber_periods"], "model.fiber_periods");
    for (double v : spec.fiber_periods) {
      if (!(v > 0.0)) rd.fail("model.fiber_periods", "periods must be positive");
    }
  }
  if (j.contains("shape")) {
    try {
      spec.shape = parse_shape(rd.string(j["shape"], "model.shape"));
    } catch (const InvalidArgument& e) {
      rd.fail("model.shape", e.what());
    }
  }
  return spec;
}

}  // namespace

RunConfig parse_config(const std::string& text, Task task, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto pos = msg.find("parse error");
    throw ConfigError(source + ": " + (pos == std::string::npos ? msg : msg.substr(pos)));
  }
  const Reader rd(source);
  rd.allow_only(doc, "",
                {"model", "task", "radii", "ladder", "quadrature", "step", "output", "threads", "seed",
                 "samples_per_shell", "identities", "sweep", "oracle"});

  RunConfig cfg;
  cfg.task = task;
  if (doc.contains("task") && parse_task(rd.string(doc["task"], "task")) != task) {
    rd.fail("task", "does not match the subcommand '" + to_string(task) + "'");
  }
  if (!doc.contains("model")) rd.fail("model", "missing");
  cfg.model = read_model(rd, doc["model"]);

  if (doc.contains("radii") && doc.contains("ladder")) rd.fail("ladder", "give either radii or ladder, not both");
  if (doc.contains("radii")) {
    cfg.radii = rd.numbers(doc["radii"], "radii");
    if (cfg.radii.size() < 3) rd.fail("radii", "need at least three radii");
    strictly_increasing(rd, cfg.radii, "radii");
  }
  if (doc.contains("ladder")) {
    const json& l = doc["ladder"];
    rd.allow_only(l, "ladder", {"r0", "count"});
    if (!l.contains("r0")) rd.fail("ladder.r0", "missing");
    const double r0 = rd.positive(l["r0"], "ladder.r0");
    const int count = l.contains("count") ? rd.positive_int(l["count"], "ladder.count") : 5;
    if (count < 3) rd.fail("ladder.count", "need at least three radii");
    cfg.radii = geometric_ladder(r0, count);
  }
  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    rd.allow_only(q, "quadrature", {"polar", "azimuthal", "fiber"});
    if (q.contains("polar")) cfg.quadrature.polar = rd.positive_int(q["polar"], "quadrature.polar");
    if (q.contains("azimuthal")) cfg.quadrature.azimuthal = rd.positive_int(q["azimuthal"], "quadrature.azimuthal");
    if (q.contains("fiber")) cfg.quadrature.fiber = rd.positive_int(q["fiber"], "quadrature.fiber");
  }
  if (doc.contains("step")) {
    const json& s = doc["step"];
    rd.allow_only(s, "step", {"step", "relative"});
    if (s.contains("step")) cfg.step.step = rd.positive(s["step"], "step.step");
    if (s.contains("relative")) cfg.step.relative = rd.boolean(s["relative"], "step.relative");
  }
  if (doc.contains("output")) cfg.output = rd.string(doc["output"], "output");
  if (doc.contains("threads")) cfg.threads = rd.positive_int(doc["threads"], "threads");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) rd.fail("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples_per_shell")) {
    cfg.samples_per_shell = rd.positive_int(doc["samples_per_shell"], "samples_per_shell");
  }
  if (doc.contains("identities")) {
    const json& i = doc["identities"];
    rd.allow_only(i, "identities", {"steps", "points", "min_order"});
    if (i.contains("steps")) {
      cfg.identities.steps = rd.numbers(i["steps"], "identities.steps");
      if (cfg.identities.steps.size() < 2) rd.fail("identities.steps", "need at least two steps");
      std::vector<double> asc(cfg.identities.steps.rbegin(), cfg.identities.steps.rend());
      strictly_increasing(rd, asc, "identities.steps (must be strictly decreasing)");
    }
    if (i.contains("points")) cfg.identities.points = rd.positive_int(i["points"], "identities.points");
    if (i.contains("min_order")) cfg.identities.min_order = rd.positive(i["min_order"], "identities.min_order");
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    rd.allow_only(s, "sweep", {"parameter", "values", "fixed_circle"});
    if (!s.contains("parameter")) rd.fail("sweep.parameter", "missing");
    cfg.sweep.parameter = rd.string(s["parameter"], "sweep.parameter");
    if (cfg.sweep.parameter != "epsilon" && cfg.sweep.parameter != "m" && cfg.sweep.parameter != "tau") {
      rd.fail("sweep.parameter", "must be one of epsilon, m, tau");
    }
    if (!s.contains("values")) rd.fail("sweep.values", "missing");
    cfg.sweep.values = rd.numbers(s["values"], "sweep.values");
    if (cfg.sweep.values.empty()) rd.fail("sweep.values", "need at least one value");
    if (s.contains("fixed_circle")) {
      cfg.sweep.fixed_circle = rd.positive(s["fixed_circle"], "sweep.fixed_circle");
      if (cfg.sweep.parameter != "m" || cfg.model.name != ModelName::EuclideanRN) {
        rd.fail("sweep.fixed_circle", "only applies to an m-sweep of euclidean_rn");
      }
    }
  }
  if (task == Task::Sweep && cfg.sweep.parameter.empty()) rd.fail("sweep", "missing for the sweep task");
  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    rd.allow_only(o, "oracle", {"mass", "tolerance"});
    if (!o.contains("mass")) rd.fail("oracle.mass", "missing");
    MassOracle oracle;
    oracle.value = rd.number(o["mass"], "oracle.mass");
    if (o.contains("tolerance")) oracle.tolerance = rd.positive(o["tolerance"], "oracle.tolerance");
    cfg.oracle = oracle;
  }
  return cfg;
}

RunConfig load_config(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), task, path);
}

}  // namespace kkmass::cli
