#include "expheat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "expheat/error.hpp"

namespace expheat {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x)) {
    throw ConfigError(key, "config: '" + key + "' expects a finite number, got '" +
                               v + "'");
  }
  return x;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) {
    throw ConfigError(key, "config: '" + key +
                               "' expects a nonnegative integer, got '" + v + "'");
  }
  return x;
}

template <std::size_t N>
std::string join(const char* const (&items)[N]) {
  std::string out;
  for (const char* s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

Key real(const char* name, double RunConfig::*m) {
  return {name,
          [name, m](RunConfig& c, const std::string& v) {
            c.*m = parse_real(name, v);
          },
          [m](const RunConfig& c) { return format_real(c.*m); }};
}

Key count(const char* name, std::size_t RunConfig::*m) {
  return {name,
          [name, m](RunConfig& c, const std::string& v) {
            c.*m = parse_int<std::size_t>(name, v);
          },
          [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

Key choice(const char* name, std::string RunConfig::*m,
           std::vector<std::string> allowed) {
  return {name,
          [name, m, allowed](RunConfig& c, const std::string& v) {
            if (!allowed.empty() &&
                std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
              std::string list;
              for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
              throw ConfigError(name, "config: '" + std::string(name) +
                                          "' must be one of {" + list +
                                          "}, got '" + v + "'");
            }
            c.*m = v;
          },
          [m](const RunConfig& c) { return c.*m; }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<std::string> scenarios(std::begin(kScenarios),
                                       std::end(kScenarios));
    std::vector<std::string> experiments(std::begin(kExperiments),
                                         std::end(kExperiments));
    std::vector<Key> k;
    k.push_back(choice("scenario", &RunConfig::scenario, scenarios));
    k.push_back(choice("experiment", &RunConfig::experiment, experiments));
    k.push_back(choice("output_dir", &RunConfig::output_dir, {}));
    k.push_back({"seed",
                 [](RunConfig& c, const std::string& v) {
                   c.seed = parse_int<std::uint64_t>("seed", v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    k.push_back(count("nodes", &RunConfig::nodes));
    k.push_back(real("grading", &RunConfig::grading));
    k.push_back(choice("domain", &RunConfig::domain,
                       {"truncated_plane", "unit_disc"}));
    k.push_back(real("radius", &RunConfig::radius));
    k.push_back(choice("sign", &RunConfig::sign, {"focusing", "defocusing"}));
    k.push_back(choice("variant", &RunConfig::variant,
                       {"full", "pure_exp", "zero"}));
    k.push_back(real("amplitude", &RunConfig::amplitude));
    k.push_back(real("dt_init", &RunConfig::dt_init));
    k.push_back(real("dt_min", &RunConfig::dt_min));
    k.push_back(real("theta", &RunConfig::theta));
    k.push_back(real("cfl_safety", &RunConfig::cfl_safety));
    k.push_back(real("t_end", &RunConfig::t_end));
    k.push_back(real("u_max_blowup", &RunConfig::u_max_blowup));
    k.push_back(count("snapshot_stride", &RunConfig::snapshot_stride));
    k.push_back(choice("scheme", &RunConfig::scheme, {"heun", "euler"}));
    k.push_back(
        count("implicit_startup_steps", &RunConfig::implicit_startup_steps));
    k.push_back(real("alpha", &RunConfig::alpha));
    k.push_back(real("t_max", &RunConfig::t_max));
    k.push_back(real("tol", &RunConfig::tol));
    k.push_back(real("alpha_min", &RunConfig::alpha_min));
    k.push_back(real("alpha_max", &RunConfig::alpha_max));
    k.push_back(count("alpha_count", &RunConfig::alpha_count));
    k.push_back(real("sub_radius", &RunConfig::sub_radius));
    k.push_back(real("blowup_factor", &RunConfig::blowup_factor));
    k.push_back(real("convexity_factor", &RunConfig::convexity_factor));
    k.push_back(real("separation_threshold", &RunConfig::separation_threshold));
    k.push_back(real("dg_m_factor", &RunConfig::dg_m_factor));
    k.push_back(real("dg_t0", &RunConfig::dg_t0));
    k.push_back(real("dg_alpha", &RunConfig::dg_alpha));
    k.push_back(count("dg_k_max", &RunConfig::dg_k_max));
    return k;
  }();
  return table;
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, "config: '" + std::string(key) + "' " + what);
}

void apply_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + line + "'");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

}  // namespace

GridSpec RunConfig::grid_spec() const {
  GridSpec s;
  s.n = nodes;
  s.grading = grading;
  s.kind = domain == "unit_disc" ? DomainKind::UnitDisc
                                 : DomainKind::TruncatedPlane;
  s.radius = radius;
  return s;
}

Nonlinearity RunConfig::nonlinearity() const {
  const Variant v = variant == "pure_exp" ? Variant::PureExp
                    : variant == "zero"   ? Variant::Zero
                                          : Variant::Full;
  return sign == "focusing" ? Nonlinearity::focusing(v)
                            : Nonlinearity::defocusing(v);
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.dt_init = dt_init;
  s.dt_min = dt_min;
  s.theta = theta;
  s.cfl_safety = cfl_safety;
  s.t_end = t_end;
  s.u_max_blowup = u_max_blowup;
  s.snapshot_stride = snapshot_stride;
  s.scheme = scheme == "euler" ? SourceScheme::Euler : SourceScheme::Heun;
  s.implicit_startup_steps = implicit_startup_steps;
  return s;
}

RunConfig default_config(const std::string& scenario,
                         const std::string& experiment) {
  if (std::find(std::begin(kScenarios), std::end(kScenarios), scenario) ==
      std::end(kScenarios)) {
    throw ConfigError("scenario", "unknown scenario '" + scenario +
                                      "'; valid choices: " + join(kScenarios));
  }
  RunConfig c;
  c.scenario = scenario;
  auto unit_disc = [&c](std::size_t n) {
    c.domain = "unit_disc";
    c.radius = 1.0;
    c.nodes = n;
  };
  if (scenario == "evolve") {
    c.t_end = 1.0;
  } else if (scenario == "shoot") {
    unit_disc(4096);
    c.sign = "focusing";
  } else if (scenario == "scan-alpha") {
    c.sign = "focusing";
  } else if (scenario == "orlicz-norm") {
    unit_disc(2048);
    c.amplitude = 1.0;
  } else {
    if (std::find(std::begin(kExperiments), std::end(kExperiments),
                  experiment) == std::end(kExperiments)) {
      throw ConfigError("experiment",
                        "unknown experiment '" + experiment +
                            "'; valid choices: " + join(kExperiments));
    }
    c.experiment = experiment;
    if (experiment == "blowup") {
      c.sign = "focusing";
      c.t_end = 1.0;
      c.snapshot_stride = 1;
    } else if (experiment == "nonuniqueness") {
      unit_disc(4096);
      c.sign = "focusing";
      c.t_end = 0.05;
      c.dt_init = 1e-4;
      c.implicit_startup_steps = 20;
    } else if (experiment == "mt-sharpness") {
      unit_disc(4096);
    }
  }
  return c;
}

void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value) {
  for (const auto& k : keys()) {
    if (key == k.name) {
      k.set(cfg, value);
      return;
    }
  }
  throw ConfigError(key, "config: unknown key '" + key + "'");
}

std::pair<std::string, std::string> split_setting(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(trim(text),
                      "config: expected key=value, got '" + text + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

void validate(const RunConfig& c) {
  require(c.nodes >= 8, "nodes", "must be >= 8");
  require(c.grading > 0.0, "grading", "must be > 0");
  require(c.radius > 0.0, "radius", "must be > 0");
  require(c.domain != "unit_disc" || c.radius == 1.0, "radius",
          "must be 1 for domain=unit_disc");
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  require(c.amplitude >= 0.0 && c.amplitude <= kDefaultOverflowGuard,
          "amplitude", "must lie in [0, 13]");
  require(c.dt_init > 0.0, "dt_init", "must be > 0");
  require(c.dt_min > 0.0 && c.dt_min <= c.dt_init, "dt_min",
          "must lie in (0, dt_init]");
  require(c.theta >= 0.0 && c.theta <= 1.0, "theta", "must lie in [0, 1]");
  require(c.cfl_safety > 0.0, "cfl_safety", "must be > 0");
  require(c.t_end > 0.0, "t_end", "must be > 0");
  require(c.u_max_blowup > 0.0 && c.u_max_blowup < kDefaultOverflowGuard,
          "u_max_blowup", "must lie in (0, 13)");
  require(c.snapshot_stride >= 1, "snapshot_stride", "must be >= 1");
  require(c.alpha >= 0.0, "alpha", "must be >= 0");
  require(c.t_max > 0.0, "t_max", "must be > 0");
  require(c.tol > 0.0 && c.tol < 1.0, "tol", "must lie in (0, 1)");
  require(c.alpha_min > 0.0, "alpha_min", "must be > 0");
  require(c.alpha_max > c.alpha_min, "alpha_max", "must exceed alpha_min");
  require(c.alpha_count >= 2, "alpha_count", "must be >= 2");
  require(c.sub_radius >= 0.0 && c.sub_radius <= c.radius, "sub_radius",
          "must lie in [0, radius]");
  require(c.blowup_factor > 0.0, "blowup_factor", "must be > 0");
  require(c.convexity_factor > 0.0, "convexity_factor", "must be > 0");
  require(c.separation_threshold > 0.0, "separation_threshold", "must be > 0");
  require(c.dg_m_factor > 0.0, "dg_m_factor", "must be > 0");
  require(c.dg_t0 > 0.0, "dg_t0", "must be > 0");
  require(c.dg_alpha > 2.0, "dg_alpha", "must be > 2");
  require(c.dg_k_max >= 1, "dg_k_max", "must be >= 1");
}

RunConfig parse_config_text(const std::string& scenario,
                            const std::string& experiment,
                            const std::string& text,
                            const std::vector<std::string>& overrides) {
  RunConfig cfg = default_config(scenario, experiment);
  apply_text(cfg, text);
  for (const auto& o : overrides) {
    const auto [k, v] = split_setting(o);
    apply_setting(cfg, k, v);
  }
  if (cfg.scenario != scenario || cfg.experiment != experiment) {
    // A file may not silently switch the run to a different scenario.
    if (cfg.scenario != scenario) {
      throw ConfigError("scenario", "config: 'scenario' conflicts with the "
                                    "command line ('" + scenario + "')");
    }
    if (scenario == "experiment") {
      throw ConfigError("experiment", "config: 'experiment' conflicts with "
                                      "the command line ('" + experiment + "')");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& scenario,
                       const std::string& experiment,
                       const std::optional<std::string>& file,
                       const std::vector<std::string>& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("--config", "cannot open config file " + *file);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(scenario, experiment, text, overrides);
}

std::vector<std::pair<std::string, std::string>> echo(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

}  // namespace expheat
