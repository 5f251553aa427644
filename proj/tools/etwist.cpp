// etwist <command> [--config FILE] [--set key=value]... [--out DIR] [--seed N]
//
// Exit status: 0 success, 2 configuration error, 3 numeric error, 4 I/O error.

#include "etwist/config.hpp"
#include "etwist/errors.hpp"
#include "etwist/run.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIO = 4;

struct Options {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool plot_script = false;
  std::string alpha; // voltage shorthand
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw etwist::ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-orbit state generation in static electric fields: figures, design "
               "numbers and parameter sweeps as CSV tables."};
  app.require_subcommand(0, 1);
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "Print every configuration key with its default");

  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"figure1", "OAM conversion A^1 versus depth for three collimator profiles"},
      {"figure2", "Grazing-incidence reflection probabilities versus angle"},
      {"figure3", "A^1 and ln sigma_l of twisted Gaussian packets over (sigma_y, R)"},
      {"figure4", "Real-space fields of an unraised and a raised Gaussian packet"},
      {"voltage", "Field integral for a full twist at divergence alpha"},
      {"design", "Beam-twister amplitude over field strength and length"},
      {"sweep", "Cartesian sweep of another command over list-valued keys"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_file, "Key-value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", opt.sets, "Override one key (key=value), repeatable")
        ->allow_extra_args(false);
    sub->add_option("--out", opt.out, "Output directory (default: out/<command>)");
    sub->add_option("--seed", opt.seed, "64-bit seed for Monte Carlo sampling");
    sub->add_flag("--plot-script", opt.plot_script, "Also write a matplotlib script");
    if (std::string_view(name) == "voltage")
      sub->add_option("--alpha", opt.alpha, "Beam divergence with unit, e.g. 1deg");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (list_keys) {
    std::cout << etwist::describe_keys();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    const auto command = etwist::parse_command(name);
    auto overrides = opt.sets;
    if (!opt.alpha.empty()) overrides.push_back("voltage.alpha=" + opt.alpha);
    if (opt.seed) overrides.push_back("seed=" + std::to_string(*opt.seed));
    if (opt.plot_script) overrides.push_back("output.plot_script=true");
    const auto text = opt.config_file.empty() ? std::string() : read_file(opt.config_file);
    const auto config = etwist::parse_config(text, command, overrides);
    const std::filesystem::path out = opt.out.empty() ? std::filesystem::path("out") / name
                                                      : std::filesystem::path(opt.out);
    const auto report = etwist::run(config, out);
    for (const auto& line : report.summary) std::cout << line << "\n";
    std::cout << "wrote " << report.files.size() << " files to " << out.string() << "\n";
    return 0;
  } catch (const etwist::ConfigError& e) {
    std::cerr << "etwist: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const etwist::Error& e) {
    std::cerr << "etwist: numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "etwist: I/O error: " << e.what() << "\n";
    return kExitIO;
  }
}
