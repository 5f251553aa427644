#include "etwist/config.hpp"

#include "etwist/results.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace etwist {

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key.empty() ? message : "config key '" + key + "': " + message),
      key_(std::move(key)) {}

namespace {

constexpr std::string_view kCommandNames[] = {"figure1", "figure2", "figure3", "figure4",
                                              "voltage", "design",  "sweep"};

enum class Kind { number, integer, angle, number_list, angle_list, word, flag, word_list };

struct KeySpec {
  std::string_view key;
  Kind kind;
  std::optional<std::string_view> fallback; // nullopt: required (or optional, see below)
  std::string_view unit;
  std::vector<std::string_view> choices = {};
  bool optional = false; // absent without error when no fallback
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"physics.particle", Kind::word, "neutron", "", {"neutron", "custom"}},
      {"physics.gyromagnetic_ratio", Kind::number, std::nullopt, "rad/(s T)", {}, true},
      {"physics.speed_of_light", Kind::number, std::nullopt, "m/s", {}, true},
      {"seed", Kind::integer, std::nullopt, "", {}, true},
      {"output.plot_script", Kind::flag, "false", ""},

      {"figure1.k_z", Kind::number, "1", "1/m"},
      {"figure1.C", Kind::number, "0.1", "1/m"},
      {"figure1.z", Kind::number_list, "linspace(0, 10000, 401)", "m"},
      {"figure1.spin", Kind::word, "up", "", {"up", "down"}},
      {"figure1.panels", Kind::integer, "8", ""},
      {"figure1.order", Kind::integer, "16", ""},
      {"figure1.two_pinholes.radius", Kind::number, "1", "m"},
      {"figure1.two_pinholes.separation", Kind::number, "20", "m"},
      {"figure1.exit_and_pinhole.exit_radius", Kind::number, "1.5", "m"},
      {"figure1.exit_and_pinhole.pinhole_radius", Kind::number, "0.25", "m"},
      {"figure1.exit_and_pinhole.separation", Kind::number, "20", "m"},
      {"figure1.annulus.inner", Kind::number, "1.0", "m"},
      {"figure1.annulus.outer", Kind::number, "1.05", "m"},
      {"figure1.annulus.pinhole_radius", Kind::number, "0.02", "m"},
      {"figure1.annulus.separation", Kind::number, "20", "m"},
      {"figure1.mc_rays", Kind::integer, "0", ""},
      {"figure1.mc_points", Kind::integer, "200", ""},

      {"figure2.lambda", Kind::number, "2e-10", "m"},
      {"figure2.E", Kind::number, "1e10", "V/m"},
      {"figure2.theta", Kind::angle_list, "logspace(1e-5deg, 1e-2deg, 301)", "deg or rad suffix"},
      {"figure2.spin", Kind::word, "down", "", {"up", "down"}},

      {"figure3.sigma_y", Kind::number_list, "linspace(0.1, 0.5, 9)", "1/m"},
      {"figure3.R", Kind::number_list, "linspace(0.5, 1.5, 5)", "1"},
      {"figure3.k_y_mean", Kind::number, "1", "1/m"},
      {"figure3.model", Kind::word, "ideal", "", {"ideal", "exact"}},
      {"figure3.rotation", Kind::angle, "90deg", "deg or rad suffix"},

      {"figure4.k_y_mean", Kind::number, "1", "1/m"},
      {"figure4.sigma_y2", Kind::number, "0.1", "1/m^2"},
      {"figure4.R", Kind::number, "1", "1"},
      {"figure4.half_width", Kind::number, "12", "m"},
      {"figure4.points", Kind::integer, "121", ""},
      {"figure4.k_points", Kind::integer, "129", ""},
      {"figure4.spin", Kind::word, "up", "", {"up", "down"}},

      {"voltage.alpha", Kind::angle_list, std::nullopt, "deg or rad suffix"},

      {"design.E", Kind::number_list, "1e7, 1e8", "V/m"},
      {"design.L", Kind::number_list, "1", "m"},

      {"sweep.target", Kind::word, std::nullopt, "",
       {"figure1", "figure2", "figure3", "figure4", "voltage", "design"}},
      {"sweep.axes", Kind::word_list, std::nullopt, ""},
      {"sweep.threads", Kind::integer, "0", ""},
  };
  return keys;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : schema())
    if (k.key == key) return &k;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& key, std::string_view text) {
  const auto t = trim(text);
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last)
    throw ConfigError(key, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
  return v;
}

long long parse_integer(const std::string& key, std::string_view text) {
  const auto t = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  return v;
}

double parse_angle(const std::string& key, std::string_view text) {
  const auto t = trim(text);
  double scale = 0.0;
  std::string_view body;
  if (t.size() > 3 && t.ends_with("deg")) {
    scale = kPi / 180.0;
    body = std::string_view(t).substr(0, t.size() - 3);
  } else if (t.size() > 3 && t.ends_with("rad")) {
    scale = 1.0;
    body = std::string_view(t).substr(0, t.size() - 3);
  } else {
    throw ConfigError(key, "angle '" + t + "' needs an explicit deg or rad suffix");
  }
  return parse_number(key, body) * scale;
}

// Values of a list key. Accepts `a, b, c`, `linspace(a, b, n)` and
// `logspace(a, b, n)` (geometric, endpoints included).
std::vector<double> parse_list(const std::string& key, std::string_view text, bool angles) {
  const auto t = trim(text);
  const auto element = [&](std::string_view s) {
    return angles ? parse_angle(key, s) : parse_number(key, s);
  };
  for (std::string_view fn : {"linspace", "logspace"}) {
    if (!t.starts_with(fn)) continue;
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')' || trim(t.substr(fn.size(), open - fn.size())) != "")
      throw ConfigError(key, "malformed " + std::string(fn) + " expression");
    const auto args = split_commas(std::string_view(t).substr(open + 1, t.size() - open - 2));
    if (args.size() != 3) throw ConfigError(key, std::string(fn) + " takes (start, stop, count)");
    const double a = element(args[0]);
    const double b = element(args[1]);
    const long long n = parse_integer(key, args[2]);
    if (n < 1) throw ConfigError(key, "count must be >= 1");
    if (fn == "logspace" && !(a > 0.0 && b > 0.0))
      throw ConfigError(key, "logspace endpoints must be > 0");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      v[i] = fn == "linspace" ? a + (b - a) * f : a * std::pow(b / a, f);
    }
    v.back() = n == 1 ? a : b;
    return v;
  }
  std::vector<double> v;
  for (const auto& item : split_commas(t)) {
    if (item.empty()) throw ConfigError(key, "empty list element");
    v.push_back(element(item));
  }
  return v;
}

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Textual elements of a value, used to pin sweep axes to one value each.
std::vector<std::string> list_elements(const KeySpec& spec, const std::string& key,
                                       const std::string& text) {
  switch (spec.kind) {
  case Kind::number: {
    std::vector<std::string> out;
    for (double x : parse_list(key, text, false)) out.push_back(format_exact(x));
    return out;
  }
  case Kind::angle: {
    std::vector<std::string> out;
    for (double x : parse_list(key, text, true)) out.push_back(format_exact(x) + "rad");
    return out;
  }
  case Kind::integer: {
    std::vector<std::string> out;
    for (const auto& item : split_commas(text)) {
      parse_integer(key, item);
      out.push_back(item);
    }
    return out;
  }
  default:
    throw ConfigError(key, "sweep axes must be scalar numeric keys");
  }
}

Spin parse_spin(const std::string& v) { return v == "up" ? Spin::up : Spin::down; }

bool parse_flag(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

// Canonical scalar check for one value of a key.
void check_value(const KeySpec& spec, const std::string& key, const std::string& v) {
  switch (spec.kind) {
  case Kind::number: parse_number(key, v); break;
  case Kind::integer: parse_integer(key, v); break;
  case Kind::angle: parse_angle(key, v); break;
  case Kind::number_list:
    if (parse_list(key, v, false).empty()) throw ConfigError(key, "list is empty");
    break;
  case Kind::angle_list:
    if (parse_list(key, v, true).empty()) throw ConfigError(key, "list is empty");
    break;
  case Kind::flag: parse_flag(key, v); break;
  case Kind::word:
    if (!spec.choices.empty() &&
        std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
      std::string allowed;
      for (auto c : spec.choices) allowed += (allowed.empty() ? "" : ", ") + std::string(c);
      throw ConfigError(key, "'" + v + "' is not one of {" + allowed + "}");
    }
    break;
  case Kind::word_list:
    for (const auto& w : split_commas(v))
      if (w.empty()) throw ConfigError(key, "empty list element");
    break;
  }
}

std::string resolve_key(std::string key, Command command) {
  if (find_key(key)) return key;
  const auto prefixed = std::string(command_name(command)) + "." + key;
  if (find_key(prefixed)) return prefixed;
  return key;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

void require_positive(double v, const std::string& key) {
  require(v > 0.0, key, "must be > 0");
}

} // namespace

Command parse_command(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kCommandNames); ++i)
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command c) { return kCommandNames[static_cast<int>(c)]; }

std::vector<ConfigEntry> parse_document(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const auto body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto where = "line " + std::to_string(line) + ": ";
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("", where + "unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (section.find_first_of(" =") != std::string::npos)
        throw ConfigError("", where + "malformed section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + "expected 'key = value'");
    auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos)
      throw ConfigError("", where + "malformed key");
    if (!section.empty()) key = section + "." + key;
    if (value.empty()) throw ConfigError(key, where + "missing value");
    for (const auto& e : out)
      if (e.key == key) throw ConfigError(key, where + "duplicate key (first set on line " +
                                                   std::to_string(e.line) + ")");
    out.push_back({key, value, line});
  }
  return out;
}

RunConfig parse_config(std::string_view text, Command command,
                       const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> values;
  for (const auto& e : parse_document(text)) values[resolve_key(e.key, command)] = e.value;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("", "override '" + o + "' is not key=value");
    const auto key = trim(std::string_view(o).substr(0, eq));
    const auto value = trim(std::string_view(o).substr(eq + 1));
    if (key.empty()) throw ConfigError("", "override '" + o + "' has an empty key");
    if (value.empty()) throw ConfigError(key, "override has an empty value");
    values[resolve_key(key, command)] = value;
  }
  return build_config(command, values);
}

RunConfig build_config(Command command, const std::map<std::string, std::string>& values) {
  RunConfig cfg;
  cfg.command = command;

  for (const auto& [key, value] : values)
    if (!find_key(key)) throw ConfigError(key, "unknown key");

  // sweep axes may carry lists in place of scalars
  std::vector<std::string> axes;
  if (command == Command::sweep) {
    if (auto it = values.find("sweep.axes"); it != values.end()) axes = split_commas(it->second);
  }
  const auto is_axis = [&](const std::string& k) {
    return std::find(axes.begin(), axes.end(), k) != axes.end();
  };

  for (const auto& spec : schema()) {
    const std::string key(spec.key);
    auto it = values.find(key);
    if (it != values.end()) {
      if (is_axis(key))
        list_elements(spec, key, it->second);
      else
        check_value(spec, key, it->second);
      cfg.effective[key] = it->second;
    } else if (spec.fallback) {
      cfg.effective[key] = std::string(*spec.fallback);
    }
  }
  const auto has = [&](const std::string& k) { return cfg.effective.count(k) > 0; };
  const auto& ev = cfg.effective;
  const auto num = [&](const std::string& k) { return parse_number(k, ev.at(k)); };
  const auto integer = [&](const std::string& k) { return parse_integer(k, ev.at(k)); };

  // physics
  const auto particle = ev.at("physics.particle");
  if (particle == "neutron") {
    for (const char* k : {"physics.gyromagnetic_ratio", "physics.speed_of_light"})
      if (has(k)) throw ConfigError(k, "only settable with physics.particle = custom");
    cfg.physics = PhysicsContext::neutron();
  } else {
    if (!has("physics.gyromagnetic_ratio"))
      throw ConfigError("physics.gyromagnetic_ratio", "required for a custom particle");
    const double g = num("physics.gyromagnetic_ratio");
    const double c = has("physics.speed_of_light") ? num("physics.speed_of_light")
                                                   : kSpeedOfLight;
    require(g != 0.0, "physics.gyromagnetic_ratio", "must be nonzero");
    require_positive(c, "physics.speed_of_light");
    cfg.physics = PhysicsContext::custom(g, c);
  }
  if (has("seed")) {
    const auto& s = ev.at("seed");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("seed", "expected an unsigned 64-bit integer");
    cfg.seed = v;
  }
  cfg.plot_script = parse_flag("output.plot_script", ev.at("output.plot_script"));

  const auto target = command == Command::sweep && has("sweep.target")
                          ? parse_command(ev.at("sweep.target"))
                          : command;
  const auto active = [&](Command c) { return target == c; };

  // Parse one command's keys; skipped for sweep axes, which expand later.
  const auto scalar = [&](const std::string& k, auto&& fn) {
    if (!is_axis(k)) fn();
  };

  if (active(Command::figure1)) {
    auto& p = cfg.figure1;
    scalar("figure1.k_z", [&] { p.k_z = num("figure1.k_z"); require_positive(p.k_z, "figure1.k_z"); });
    scalar("figure1.C", [&] { p.C = num("figure1.C"); });
    p.z = parse_list("figure1.z", ev.at("figure1.z"), false);
    for (double z : p.z) require(z >= 0.0, "figure1.z", "depths must be >= 0");
    p.spin = parse_spin(ev.at("figure1.spin"));
    scalar("figure1.panels", [&] {
      p.panels = static_cast<int>(integer("figure1.panels"));
      require(p.panels >= 1 && p.panels <= 4096, "figure1.panels", "must be in [1, 4096]");
    });
    scalar("figure1.order", [&] {
      p.order = static_cast<int>(integer("figure1.order"));
      require(p.order >= 2 && p.order <= 128, "figure1.order", "must be in [2, 128]");
    });
    const auto pos = [&](const char* k, double& dst) {
      scalar(k, [&] { dst = num(k); require_positive(dst, k); });
    };
    pos("figure1.two_pinholes.radius", p.pinhole_radius);
    pos("figure1.two_pinholes.separation", p.pinhole_separation);
    pos("figure1.exit_and_pinhole.exit_radius", p.exit_radius);
    pos("figure1.exit_and_pinhole.pinhole_radius", p.exit_pinhole_radius);
    pos("figure1.exit_and_pinhole.separation", p.exit_separation);
    pos("figure1.annulus.inner", p.annulus_inner);
    pos("figure1.annulus.outer", p.annulus_outer);
    pos("figure1.annulus.pinhole_radius", p.annulus_pinhole_radius);
    pos("figure1.annulus.separation", p.annulus_separation);
    require(is_axis("figure1.annulus.inner") || is_axis("figure1.annulus.outer") ||
                p.annulus_inner < p.annulus_outer,
            "figure1.annulus.inner", "must be smaller than figure1.annulus.outer");
    scalar("figure1.mc_rays", [&] {
      const auto r = integer("figure1.mc_rays");
      require(r >= 0, "figure1.mc_rays", "must be >= 0");
      p.mc_rays = static_cast<std::uint64_t>(r);
    });
    scalar("figure1.mc_points", [&] {
      p.mc_points = static_cast<int>(integer("figure1.mc_points"));
      require(p.mc_points >= 2, "figure1.mc_points", "must be >= 2");
    });
    if (p.mc_rays > 0 && !cfg.seed)
      throw ConfigError("seed", "required when figure1.mc_rays > 0 (Monte Carlo sampling)");
  }

  if (active(Command::figure2)) {
    auto& p = cfg.figure2;
    scalar("figure2.lambda", [&] { p.lambda = num("figure2.lambda"); require_positive(p.lambda, "figure2.lambda"); });
    scalar("figure2.E", [&] { p.E = num("figure2.E"); });
    p.theta = parse_list("figure2.theta", ev.at("figure2.theta"), true);
    for (double t : p.theta)
      require(t > 0.0 && t <= kPi / 2.0, "figure2.theta", "angles must lie in (0, 90deg]");
    p.spin = parse_spin(ev.at("figure2.spin"));
  }

  if (active(Command::figure3)) {
    auto& p = cfg.figure3;
    p.sigma_y = parse_list("figure3.sigma_y", ev.at("figure3.sigma_y"), false);
    p.R = parse_list("figure3.R", ev.at("figure3.R"), false);
    for (double v : p.sigma_y) require_positive(v, "figure3.sigma_y");
    for (double v : p.R) require_positive(v, "figure3.R");
    scalar("figure3.k_y_mean", [&] { p.k_y_mean = num("figure3.k_y_mean"); require_positive(p.k_y_mean, "figure3.k_y_mean"); });
    p.exact = ev.at("figure3.model") == "exact";
    scalar("figure3.rotation", [&] { p.rotation = parse_angle("figure3.rotation", ev.at("figure3.rotation")); });
  }

  if (active(Command::figure4)) {
    auto& p = cfg.figure4;
    const auto pos = [&](const char* k, double& dst) {
      scalar(k, [&] { dst = num(k); require_positive(dst, k); });
    };
    pos("figure4.k_y_mean", p.k_y_mean);
    pos("figure4.sigma_y2", p.sigma_y2);
    pos("figure4.R", p.R);
    pos("figure4.half_width", p.half_width);
    scalar("figure4.points", [&] {
      p.points = static_cast<int>(integer("figure4.points"));
      require(p.points >= 2 && p.points <= 2001, "figure4.points", "must be in [2, 2001]");
    });
    scalar("figure4.k_points", [&] {
      p.k_points = static_cast<int>(integer("figure4.k_points"));
      require(p.k_points >= 9 && p.k_points <= 2049, "figure4.k_points", "must be in [9, 2049]");
    });
    p.spin = parse_spin(ev.at("figure4.spin"));
  }

  if (active(Command::voltage)) {
    if (!has("voltage.alpha")) throw ConfigError("voltage.alpha", "missing required key 'alpha'");
    scalar("voltage.alpha", [&] {
      cfg.voltage.alpha = parse_list("voltage.alpha", ev.at("voltage.alpha"), true);
      for (double a : cfg.voltage.alpha) require_positive(a, "voltage.alpha");
    });
  }

  if (active(Command::design)) {
    auto& p = cfg.design;
    scalar("design.E", [&] { p.E = parse_list("design.E", ev.at("design.E"), false); });
    scalar("design.L", [&] {
      p.L = parse_list("design.L", ev.at("design.L"), false);
      for (double l : p.L) require(l >= 0.0, "design.L", "lengths must be >= 0");
    });
  }

  if (command == Command::sweep) {
    if (!has("sweep.target")) throw ConfigError("sweep.target", "missing required key 'target'");
    if (!has("sweep.axes")) throw ConfigError("sweep.axes", "missing required key 'axes'");
    cfg.sweep.target = target;
    cfg.sweep.axes = axes;
    cfg.sweep.threads = static_cast<int>(integer("sweep.threads"));
    require(cfg.sweep.threads >= 0, "sweep.threads", "must be >= 0");
    for (const auto& a : axes) {
      const auto* spec = find_key(a);
      if (!spec) throw ConfigError(a, "unknown sweep axis");
      if (spec->kind != Kind::number && spec->kind != Kind::angle && spec->kind != Kind::integer)
        throw ConfigError(a, "sweep axes must be scalar numeric keys");
      if (!a.starts_with(std::string(command_name(target)) + ".") && !a.starts_with("physics."))
        throw ConfigError(a, "axis does not belong to the sweep target");
      if (!has(a)) throw ConfigError(a, "sweep axis has no values");
      if (std::count(axes.begin(), axes.end(), a) > 1) throw ConfigError(a, "duplicate sweep axis");
    }
  }
  return cfg;
}

std::string RunConfig::hash() const {
  std::string canon = "command=" + std::string(command_name(command)) + "\n";
  for (const auto& [k, v] : effective) canon += k + "=" + v + "\n";
  return hex64(fnv1a64(canon));
}

std::vector<SweepPoint> expand_sweep(const RunConfig& config) {
  if (config.command != Command::sweep) throw ConfigError("command", "not a sweep");
  std::vector<std::vector<std::string>> values;
  for (const auto& a : config.sweep.axes)
    values.push_back(list_elements(*find_key(a), a, config.effective.at(a)));

  std::map<std::string, std::string> base;
  for (const auto& [k, v] : config.effective) {
    if (k.starts_with("sweep.")) continue;
    const auto* spec = find_key(k);
    if (spec->fallback && *spec->fallback == v) continue; // keep defaults implicit
    base[k] = v;
  }

  std::vector<SweepPoint> out;
  std::vector<std::size_t> idx(values.size(), 0);
  while (true) {
    SweepPoint p;
    auto assignment = base;
    for (std::size_t i = 0; i < values.size(); ++i) {
      p.assignment[config.sweep.axes[i]] = values[i][idx[i]];
      assignment[config.sweep.axes[i]] = values[i][idx[i]];
    }
    p.config = build_config(config.sweep.target, assignment);
    out.push_back(std::move(p));
    std::size_t d = values.size();
    while (d > 0) {
      --d;
      if (++idx[d] < values[d].size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (values.empty()) return out;
  }
}

std::vector<DesignPoint> design_plan(const DesignParams& p) {
  std::vector<DesignPoint> out;
  for (double e : p.E)
    for (double l : p.L) out.push_back({e, l});
  return out;
}

std::string key_unit(std::string_view key) {
  const auto* k = find_key(key);
  if (!k) throw ConfigError(std::string(key), "unknown key");
  if (k->kind == Kind::angle || k->kind == Kind::angle_list) return "rad";
  return k->unit.empty() ? "1" : std::string(k->unit);
}

double axis_value(std::string_view key, const std::string& value) {
  const auto* k = find_key(key);
  if (!k) throw ConfigError(std::string(key), "unknown key");
  const std::string name(key);
  if (k->kind == Kind::angle) return parse_angle(name, value);
  if (k->kind == Kind::integer) return static_cast<double>(parse_integer(name, value));
  return parse_number(name, value);
}

std::string describe_keys() {
  std::string out;
  for (const auto& k : schema()) {
    std::string kind;
    switch (k.kind) {
    case Kind::number: kind = "number"; break;
    case Kind::integer: kind = "integer"; break;
    case Kind::angle: kind = "angle"; break;
    case Kind::number_list: kind = "number list"; break;
    case Kind::angle_list: kind = "angle list"; break;
    case Kind::word: kind = "word"; break;
    case Kind::flag: kind = "true/false"; break;
    case Kind::word_list: kind = "word list"; break;
    }
    if (!k.choices.empty()) {
      kind += " {";
      for (std::size_t i = 0; i < k.choices.size(); ++i)
        kind += (i ? "|" : "") + std::string(k.choices[i]);
      kind += "}";
    }
    out += std::string(k.key) + "  (" + kind + (k.unit.empty() ? "" : ", " + std::string(k.unit)) +
           ")  default: " +
           (k.fallback ? std::string(*k.fallback) : (k.optional ? "unset" : "required")) + "\n";
  }
  return out;
}

} // namespace etwist
