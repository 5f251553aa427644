#pragma once

#include "etwist/errors.hpp"
#include "etwist/scattering.hpp"
#include "etwist/units.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace etwist {

// Problem with the configuration document or an override. key() names the
// offending key (empty for purely syntactic problems).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

enum class Command { figure1, figure2, figure3, figure4, voltage, design, sweep };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

// One `key = value` line of a configuration document.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// Key-value text format:
//   # comment
//   [figure1]            <- prefixes following keys with "figure1."
//   k_z = 1
//   two_pinholes.radius = 1
//   physics.particle = neutron   <- dotted keys work inside or outside sections
//   [ ]                  <- an empty header returns to the top level
// Duplicate keys are rejected.
std::vector<ConfigEntry> parse_document(std::string_view text);

struct Figure1Params {
  double k_z = 1.0;
  double C = 0.1;
  std::vector<double> z;
  Spin spin = Spin::up;
  int panels = 8;
  int order = 16;
  double pinhole_radius = 1.0, pinhole_separation = 20.0;
  double exit_radius = 1.5, exit_pinhole_radius = 0.25, exit_separation = 20.0;
  double annulus_inner = 1.0, annulus_outer = 1.05, annulus_pinhole_radius = 0.02,
         annulus_separation = 20.0;
  std::uint64_t mc_rays = 0;
  int mc_points = 200;
};

struct Figure2Params {
  double lambda = 2e-10;
  double E = 1e10;
  std::vector<double> theta; // rad
  Spin spin = Spin::down;
};

struct Figure3Params {
  std::vector<double> sigma_y;
  std::vector<double> R;
  double k_y_mean = 1.0;
  bool exact = false;
  double rotation = kPi / 2.0;
};

struct Figure4Params {
  double k_y_mean = 1.0;
  double sigma_y2 = 0.1;
  double R = 1.0;
  double half_width = 12.0;
  int points = 121;
  int k_points = 129;
  Spin spin = Spin::up;
};

struct VoltageParams {
  std::vector<double> alpha; // rad
};

struct DesignParams {
  std::vector<double> E;
  std::vector<double> L;
};

struct SweepParams {
  Command target = Command::figure2;
  std::vector<std::string> axes;
  int threads = 0; // 0: hardware concurrency
};

struct RunConfig {
  Command command = Command::figure1;
  PhysicsContext physics;
  std::optional<std::uint64_t> seed;
  bool plot_script = false;

  Figure1Params figure1;
  Figure2Params figure2;
  Figure3Params figure3;
  Figure4Params figure4;
  VoltageParams voltage;
  DesignParams design;
  SweepParams sweep;

  // Every known key with its effective textual value (defaults included).
  std::map<std::string, std::string> effective;

  // FNV-1a 64 of the command and the sorted effective values, as 16 hex digits.
  std::string hash() const;
};

// Builds a validated RunConfig for `command` from a document plus
// `key=value` overrides applied on top. Inside a command, keys of that
// command may be given without the prefix (`alpha=1deg` for voltage).
// Throws ConfigError naming the key for unknown keys, malformed values,
// missing required keys and out-of-range values.
RunConfig parse_config(std::string_view text, Command command,
                       const std::vector<std::string>& overrides = {});

// Same, from already-resolved key/value pairs.
RunConfig build_config(Command command, const std::map<std::string, std::string>& values);

// Cartesian expansion of a sweep: one RunConfig per point, with the target
// command and the axis keys pinned to scalar values. Points are ordered with
// the last axis varying fastest.
struct SweepPoint {
  std::map<std::string, std::string> assignment;
  RunConfig config;
};
std::vector<SweepPoint> expand_sweep(const RunConfig& config);

// E x L plan of the design command, E varying slowest.
struct DesignPoint {
  double E = 0.0;
  double L = 0.0;
};
std::vector<DesignPoint> design_plan(const DesignParams& p);

// Unit of a key's values ("rad" for angles, "1" when dimensionless).
std::string key_unit(std::string_view key);

// Numeric value of one sweep-axis element (angles in rad).
double axis_value(std::string_view key, const std::string& value);

// Documented keys with kinds and defaults, one per line.
std::string describe_keys();

} // namespace etwist
