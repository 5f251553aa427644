#include "etwist/results.hpp"

#include "etwist/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace etwist {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void ResultTable::add_row(std::initializer_list<double> row) {
  if (row.size() != columns.size())
    throw Error("ResultTable '" + name + "': row has " + std::to_string(row.size()) +
                " values for " + std::to_string(columns.size()) + " columns");
  data.insert(data.end(), row.begin(), row.end());
}

void ResultTable::validate() const {
  if (columns.empty()) throw Error("ResultTable '" + name + "': no columns");
  if (data.size() % columns.size() != 0)
    throw Error("ResultTable '" + name + "': ragged rows");
  for (const auto& c : columns)
    if (c.name.empty() || c.unit.empty())
      throw Error("ResultTable '" + name + "': every column needs a name and unit");
  for (double v : data)
    if (!std::isfinite(v)) throw Error("ResultTable '" + name + "': non-finite value");
}

std::string format_csv(const ResultTable& table, const Provenance& prov) {
  table.validate();
  std::string out;
  out += "# tool: etwist " + prov.version + "\n";
  out += "# command: " + prov.command + "\n";
  out += "# config_hash: fnv1a64:" + prov.config_hash + "\n";
  if (prov.seed) out += "# seed: " + std::to_string(*prov.seed) + "\n";
  out += "# table: " + table.name + "\n";
  out += "# layout: " + table.layout + "\n";
  for (const auto& [k, v] : table.metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out += (c ? "," : "") + table.columns[c].name + " [" + table.columns[c].unit + "]";
  out += "\n";
  char buf[32];
  const std::size_t n = table.columns.size();
  for (std::size_t i = 0; i < table.data.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e", table.data[i]);
    out += buf;
    out += (i % n == n - 1) ? '\n' : ',';
  }
  return out;
}

OutputTransaction::OutputTransaction(std::filesystem::path dir) : dir_(std::move(dir)) {}

OutputTransaction::~OutputTransaction() {
  if (!committed_) rollback();
}

void OutputTransaction::stage(const std::filesystem::path& relative, std::string_view content) {
  const auto target = dir_ / relative;
  // remember directories we create so a rollback leaves no empty shells
  std::vector<std::filesystem::path> missing;
  for (auto p = target.parent_path(); !p.empty() && !std::filesystem::exists(p);
       p = p.parent_path())
    missing.push_back(p);
  std::filesystem::create_directories(target.parent_path());
  created_dirs_.insert(created_dirs_.end(), missing.begin(), missing.end());

  auto partial = target;
  partial += ".partial";
  {
    std::ofstream f(partial, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + partial.string());
    staged_.push_back(partial);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed for " + partial.string());
  }
  final_.push_back(target);
}

void OutputTransaction::commit() {
  for (; renamed_ < staged_.size(); ++renamed_)
    std::filesystem::rename(staged_[renamed_], final_[renamed_]);
  committed_ = true;
}

void OutputTransaction::rollback() noexcept {
  std::error_code ec;
  for (std::size_t i = 0; i < staged_.size(); ++i) {
    if (i < renamed_)
      std::filesystem::remove(final_[i], ec);
    else
      std::filesystem::remove(staged_[i], ec);
  }
  // innermost first; only removes directories that are now empty
  for (const auto& d : created_dirs_) std::filesystem::remove(d, ec);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace etwist
