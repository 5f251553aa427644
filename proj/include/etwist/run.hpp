#pragma once

#include "etwist/config.hpp"
#include "etwist/results.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace etwist {

// Tables produced by one non-sweep command, in a fixed order.
std::vector<ResultTable> compute_tables(const RunConfig& config);

struct RunReport {
  std::vector<std::filesystem::path> files; // everything written, sidecar last
  std::vector<std::string> summary;         // one human-readable line per table
};

// Computes and writes every table of the command into `out_dir` as CSV plus a
// provenance.json sidecar (and plot script when requested). Sweeps write one
// subdirectory per plan point and a sweep_plan.csv. Nothing is left behind if
// any step throws.
RunReport run(const RunConfig& config, const std::filesystem::path& out_dir);

// Python/matplotlib script that plots every CSV named in `files` (relative to
// the script's directory).
std::string plot_script(const std::vector<std::string>& files);

} // namespace etwist
