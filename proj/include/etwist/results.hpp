#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace etwist {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

struct Column {
  std::string name;
  std::string unit; // "1" for dimensionless
};

// One numeric table, written as one CSV file.
struct ResultTable {
  std::string name; // file stem
  std::vector<Column> columns;
  std::vector<double> data; // row-major
  std::vector<std::pair<std::string, std::string>> metadata;
  // "curve" (first column is the abscissa) or "grid" (first two columns are
  // coordinates of a surface); read by the generated plot script.
  std::string layout = "curve";

  std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
  double at(std::size_t row, std::size_t col) const { return data[row * columns.size() + col]; }
  void add_row(std::initializer_list<double> row);
  // Column count constant, units present, every value finite.
  void validate() const;
};

// What every output file records about the run that produced it.
struct Provenance {
  std::string command;
  std::string config_hash;
  std::string version;
  std::optional<std::uint64_t> seed;
};

// `#` preamble (tool, version, command, config hash, seed, table metadata,
// layout), a `name [unit]` header row, then the body with every value as %.12e.
std::string format_csv(const ResultTable& table, const Provenance& prov);

// Files staged as `<name>.partial` and renamed on commit. If the transaction
// is destroyed before commit() completes, its staged files and any it already
// renamed are removed; files from earlier runs are left alone.
class OutputTransaction {
public:
  explicit OutputTransaction(std::filesystem::path dir);
  ~OutputTransaction();
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;

  // Relative path inside the output directory; subdirectories are created.
  void stage(const std::filesystem::path& relative, std::string_view content);
  void commit();

  const std::vector<std::filesystem::path>& files() const { return final_; }
  const std::filesystem::path& dir() const { return dir_; }

private:
  void rollback() noexcept;

  std::filesystem::path dir_;
  std::vector<std::filesystem::path> staged_;
  std::vector<std::filesystem::path> final_;
  std::vector<std::filesystem::path> created_dirs_;
  std::size_t renamed_ = 0;
  bool committed_ = false;
};

// ISO-8601 UTC timestamp of the current time.
std::string utc_timestamp();

} // namespace etwist
