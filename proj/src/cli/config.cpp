#include "nlgame/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nlgame/errors.hpp"

namespace nlgame::cli {

using nlohmann::json;

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::initial_slope: return "initial_slope";
    case SweepParameter::sigmoid_parameter: return "sigmoid_parameter";
    case SweepParameter::support_radius: return "support_radius";
  }
  return "unknown";
}

const char* to_string(InitialType t) {
  switch (t) {
    case InitialType::linear: return "linear";
    case InitialType::logistic: return "logistic";
    case InitialType::constant: return "constant";
  }
  return "unknown";
}

ScalarField make_initial(const InitialSpec& spec) {
  switch (spec.type) {
    case InitialType::linear:
      return [a = spec.slope, b = spec.offset](std::span<const double> x) { return a * x[0] + b; };
    case InitialType::logistic:
      return [l = spec.l](std::span<const double> x) { return 1.0 / (1.0 + std::exp(-l * x[0])); };
    case InitialType::constant:
      return [v = spec.value](std::span<const double>) { return v; };
  }
  return {};
}

std::string initial_formula(const InitialSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  switch (spec.type) {
    case InitialType::linear: os << "u0(x) = " << spec.slope << " * x + " << spec.offset; break;
    case InitialType::logistic: os << "u0(x) = 1 / (1 + exp(-" << spec.l << " * x))"; break;
    case InitialType::constant: os << "u0(x) = " << spec.value; break;
  }
  return os.str();
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k)
    v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  v.back() = hi;
  return v;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Object reader that remembers which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "missing required field");
    return as_number(raw(key), path(key));
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::string string(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "missing required field");
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "missing required field");
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path(key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  Section child(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "missing required section");
    return Section(raw(key), path(key));
  }

  // Unknown keys are errors.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(path(it.key()), "unknown field");
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where, "must be finite");
    return d;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> coords(Section& s, const std::string& key) {
  if (!s.has(key)) throw ConfigError(s.path(key), "missing required field");
  const json& v = s.raw(key);
  if (v.is_number()) return {Section::as_number(v, s.path(key))};
  if (!v.is_array() || v.empty()) throw ConfigError(s.path(key), "expected a number or a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Section::as_number(v[i], s.path(key) + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

KernelSpec parse_kernel(Section s, const std::filesystem::path& base_dir) {
  const std::string family = s.string("family");
  KernelSpec k;
  if (family == "uniform") {
    k = KernelSpec::uniform();
  } else if (family == "gaussian") {
    const double width = s.number("s");
    k = wrap(s.path("s"), [&] { return KernelSpec::gaussian(width); });
  } else if (family == "table") {
    if (s.has("table_path")) {
      if (s.has("offsets") || s.has("values"))
        throw ConfigError(s.path("table_path"), "give either table_path or offsets/values, not both");
      std::filesystem::path p = s.string("table_path");
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      try {
        k = load_kernel_table(p.string());
      } catch (const IoError& e) {
        throw ConfigError(s.path("table_path"), e.what());
      } catch (const Error& e) {
        throw ConfigError(s.path("table_path"), e.what());
      }
    } else {
      auto offsets = s.numbers("offsets");
      auto values = s.numbers("values");
      k = wrap(s.path("values"), [&] { return KernelSpec::table(offsets, values); });
    }
  } else {
    throw ConfigError(s.path("family"), "unknown kernel family '" + family + "'");
  }
  if (s.has("lower_bound")) {
    const double lb = s.number("lower_bound");
    k = wrap(s.path("lower_bound"), [&] { return k.with_lower_bound(lb); });
  }
  s.finish();
  return k;
}

RecognitionSpec parse_recognition(Section s) {
  const std::string family = s.string("family");
  RecognitionSpec r = RecognitionSpec::quad_coord();
  if (family == "quad_coord") {
    r = RecognitionSpec::quad_coord();
  } else if (family == "quad_anticoord") {
    r = RecognitionSpec::quad_anticoord();
  } else if (family == "linear") {
    const double c = s.number("c");
    r = wrap(s.path("c"), [&] { return RecognitionSpec::linear(c); });
  } else if (family == "bump") {
    const double radius = s.number("r");
    r = wrap(s.path("r"), [&] { return RecognitionSpec::bump(radius); });
  } else if (family == "quad_coord_advect") {
    const double c = s.number("c");
    r = wrap(s.path("c"), [&] { return RecognitionSpec::quad_coord_advect(c); });
  } else if (family == "table") {
    auto knots = s.numbers("knots");
    auto deriv = s.numbers("derivative");
    const double rho0 = s.number("rho_at_zero", 0.0);
    r = wrap(s.path("derivative"), [&] { return RecognitionSpec::table(knots, deriv, rho0); });
  } else {
    throw ConfigError(s.path("family"), "unknown recognition family '" + family + "'");
  }
  if (s.has("scale")) {
    const double k = s.number("scale");
    r = wrap(s.path("scale"), [&] { return r.scaled(k); });
  }
  s.finish();
  wrap(s.path("family"), [&] {
    nlgame::validate(r);
    return 0;
  });
  return r;
}

InitialSpec parse_initial(Section s) {
  InitialSpec init;
  const std::string type = s.string("type");
  if (type == "linear") {
    init.type = InitialType::linear;
    init.slope = s.number("slope");
    init.offset = s.number("offset", 0.0);
  } else if (type == "logistic") {
    init.type = InitialType::logistic;
    init.l = s.number("l");
  } else if (type == "constant") {
    init.type = InitialType::constant;
    init.value = s.number("value");
  } else {
    throw ConfigError(s.path("type"), "unknown initial type '" + type + "'");
  }
  s.finish();
  return init;
}

SweepSpec parse_sweep(Section s) {
  SweepSpec sw;
  const std::string p = s.string("parameter");
  if (p == "initial_slope") sw.parameter = SweepParameter::initial_slope;
  else if (p == "sigmoid_parameter") sw.parameter = SweepParameter::sigmoid_parameter;
  else if (p == "support_radius") sw.parameter = SweepParameter::support_radius;
  else throw ConfigError(s.path("parameter"), "unknown sweep parameter '" + p + "'");
  sw.values = s.numbers("values");
  if (sw.values.empty()) throw ConfigError(s.path("values"), "must not be empty");
  s.finish();
  return sw;
}

std::size_t count_field(Section& s, const std::string& key, std::size_t fallback) {
  if (!s.has(key)) return fallback;
  const json& v = s.raw(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(s.path(key), "expected a nonnegative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  Section s(j, "");
  RunConfig cfg;
  cfg.name = s.string("name", cfg.name);

  {
    Section d = s.child("domain");
    auto lo = coords(d, "lower");
    auto hi = coords(d, "upper");
    d.finish();
    cfg.domain = wrap("domain", [&] { return Domain(lo, hi); });
  }

  cfg.h = s.number("h");
  if (!(cfg.h > 0.0)) throw ConfigError("h", "must be positive");
  if (s.has("tau")) {
    const json& t = s.raw("tau");
    if (t.is_string()) {
      if (t.get<std::string>() != "auto") throw ConfigError("tau", "expected \"auto\" or a positive number");
    } else {
      cfg.tau = Section::as_number(t, "tau");
      if (!(*cfg.tau > 0.0)) throw ConfigError("tau", "must be positive");
    }
  }
  cfg.T = s.number("T");
  if (!(cfg.T >= 0.0)) throw ConfigError("T", "must be nonnegative");

  cfg.kernel = s.has("kernel") ? parse_kernel(s.child("kernel"), base_dir) : KernelSpec::uniform();
  cfg.recognition = s.has("recognition") ? parse_recognition(s.child("recognition")) : RecognitionSpec::quad_coord();
  cfg.initial = parse_initial(s.child("initial"));

  if (s.has("forcing")) {
    Section f = s.child("forcing");
    const std::string type = f.string("type", "constant");
    if (type != "constant") throw ConfigError(f.path("type"), "only constant forcing is supported");
    cfg.forcing = f.number("value");
    f.finish();
  }
  if (s.has("snapshots")) cfg.snapshots = s.numbers("snapshots");
  if (s.has("sweep")) cfg.sweep = parse_sweep(s.child("sweep"));

  if (s.has("analysis")) {
    Section a = s.child("analysis");
    cfg.histogram_bins = count_field(a, "histogram_bins", cfg.histogram_bins);
    if (a.has("gap_threshold")) {
      cfg.gap_threshold = a.number("gap_threshold");
      if (!(*cfg.gap_threshold > 0.0)) throw ConfigError(a.path("gap_threshold"), "must be positive");
    }
    a.finish();
  }
  if (s.has("solver")) {
    Section o = s.child("solver");
    cfg.safety = o.number("safety", cfg.safety);
    cfg.memory_cap_bytes = count_field(o, "memory_cap_bytes", cfg.memory_cap_bytes);
    o.finish();
  }
  s.finish();
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  // Manifests carry the config they ran with.
  if (j.is_object() && j.contains("manifest_version") && j.contains("config")) j = j.at("config");
  return parse_config(j, path.parent_path());
}

json to_json(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["domain"] = {{"lower", cfg.domain.lower()}, {"upper", cfg.domain.upper()}};
  j["h"] = cfg.h;
  if (cfg.tau) j["tau"] = *cfg.tau;
  else j["tau"] = "auto";
  j["T"] = cfg.T;

  json k;
  k["family"] = to_string(cfg.kernel.family());
  switch (cfg.kernel.family()) {
    case KernelFamily::uniform: break;
    case KernelFamily::gaussian: k["s"] = cfg.kernel.width(); break;
    case KernelFamily::table:
      k["offsets"] = cfg.kernel.offsets();
      k["values"] = cfg.kernel.values();
      break;
  }
  if (cfg.kernel.lower_bound()) k["lower_bound"] = *cfg.kernel.lower_bound();
  j["kernel"] = k;

  json r;
  const RecognitionSpec& rs = cfg.recognition;
  r["family"] = to_string(rs.family());
  switch (rs.family()) {
    case RecognitionFamily::quad_coord:
    case RecognitionFamily::quad_anticoord: break;
    case RecognitionFamily::linear:
    case RecognitionFamily::quad_coord_advect: r["c"] = rs.c(); break;
    case RecognitionFamily::bump: r["r"] = rs.r(); break;
    case RecognitionFamily::table:
      r["knots"] = rs.knots();
      r["derivative"] = rs.derivative_samples();
      r["rho_at_zero"] = rs.rho_at_zero();
      break;
  }
  if (rs.scale() != 1.0) r["scale"] = rs.scale();
  j["recognition"] = r;

  json init;
  init["type"] = to_string(cfg.initial.type);
  switch (cfg.initial.type) {
    case InitialType::linear:
      init["slope"] = cfg.initial.slope;
      init["offset"] = cfg.initial.offset;
      break;
    case InitialType::logistic: init["l"] = cfg.initial.l; break;
    case InitialType::constant: init["value"] = cfg.initial.value; break;
  }
  j["initial"] = init;

  if (cfg.forcing) j["forcing"] = {{"type", "constant"}, {"value", *cfg.forcing}};
  if (!cfg.snapshots.empty()) j["snapshots"] = cfg.snapshots;
  if (cfg.sweep) j["sweep"] = {{"parameter", to_string(cfg.sweep->parameter)}, {"values", cfg.sweep->values}};
  json a;
  a["histogram_bins"] = cfg.histogram_bins;
  if (cfg.gap_threshold) a["gap_threshold"] = *cfg.gap_threshold;
  j["analysis"] = a;
  j["solver"] = {{"safety", cfg.safety}, {"memory_cap_bytes", cfg.memory_cap_bytes}};
  return j;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw ConfigError("h", "must be positive");
  for (std::size_t a = 0; a < cfg.domain.dimension(); ++a)
    if (cfg.h > cfg.domain.length(a)) throw ConfigError("h", "larger than the domain");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw ConfigError("tau", "must be positive");
  if (!(cfg.T >= 0.0) || !std::isfinite(cfg.T)) throw ConfigError("T", "must be nonnegative");
  for (std::size_t i = 0; i < cfg.snapshots.size(); ++i)
    if (!(cfg.snapshots[i] >= 0.0 && cfg.snapshots[i] <= cfg.T))
      throw ConfigError("snapshots[" + std::to_string(i) + "]", "must lie in [0, T]");
  if (!(cfg.safety > 0.0 && cfg.safety <= 1.0)) throw ConfigError("solver.safety", "must lie in (0, 1]");
  if (cfg.histogram_bins < 2) throw ConfigError("analysis.histogram_bins", "need at least 2 bins");
  if (!cfg.tau && !is_coordination(cfg.recognition))
    throw ConfigError("tau", "\"auto\" needs a coordination recognition function; give tau explicitly");

  if (!cfg.sweep) return;
  const SweepSpec& sw = *cfg.sweep;
  if (sw.values.empty()) throw ConfigError("sweep.values", "must not be empty");
  for (std::size_t i = 0; i < sw.values.size(); ++i) {
    const std::string where = "sweep.values[" + std::to_string(i) + "]";
    if (!std::isfinite(sw.values[i])) throw ConfigError(where, "must be finite");
    if (sw.parameter == SweepParameter::support_radius && !(sw.values[i] > 0.0))
      throw ConfigError(where, "support radius must be positive");
  }
  switch (sw.parameter) {
    case SweepParameter::initial_slope:
      if (cfg.initial.type != InitialType::linear)
        throw ConfigError("sweep.parameter", "initial_slope needs a linear initial profile");
      break;
    case SweepParameter::sigmoid_parameter:
      if (cfg.initial.type != InitialType::logistic)
        throw ConfigError("sweep.parameter", "sigmoid_parameter needs a logistic initial profile");
      break;
    case SweepParameter::support_radius:
      if (cfg.recognition.family() != RecognitionFamily::bump)
        throw ConfigError("sweep.parameter", "support_radius needs the bump recognition family");
      break;
  }
}

RunConfig at_point(const RunConfig& cfg, double value) {
  RunConfig p = cfg;
  p.sweep.reset();
  if (!cfg.sweep) return p;
  switch (cfg.sweep->parameter) {
    case SweepParameter::initial_slope: p.initial.slope = value; break;
    case SweepParameter::sigmoid_parameter: p.initial.l = value; break;
    case SweepParameter::support_radius:
      p.recognition = RecognitionSpec::bump(value).scaled(cfg.recognition.scale());
      break;
  }
  return p;
}

}  // namespace nlgame::cli
