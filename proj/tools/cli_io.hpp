#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusweyl/common.hpp"
#include "torusweyl/symbol.hpp"

namespace tw::cli {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Comma-separated table built in memory and written in one go.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  CsvTable& row();
  CsvTable& cell(double v);
  CsvTable& cell(long long v);
  CsvTable& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvTable& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvTable& cell(const std::string& v);

  /// Full file contents; every row, the last included, ends in a newline.
  std::string text() const;
  std::size_t rows() const { return rows_; }

 private:
  void separator();

  std::size_t columns_;
  std::size_t rows_ = 0;
  std::size_t in_row_ = 0;
  std::string text_;
};

std::string sha256_hex(std::string_view bytes);

/// Symbol from a builtin name, inline JSON, or a JSON file path.
struct ParsedSymbol {
  TorusSymbol symbol;
  /// Self-contained form for the manifest: builtin name or inline JSON.
  std::string canonical;
};
ParsedSymbol parse_symbol(const std::string& text);

/// Inclusive start:stop:step grid, parsed exactly in decimal.
std::vector<double> parse_range(const std::string& text);
/// "re" or "re,im".
Complex parse_complex(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// One run's manifest plus its output files; written once at the end.
class Run {
 public:
  Run(std::string subcommand, std::filesystem::path out_dir, std::string prefix);

  nlohmann::json& manifest() { return manifest_; }
  /// Parameter record in flag names, so the manifest replays through --config.
  nlohmann::json& parameters() { return manifest_[subcommand_]; }

  void write_csv(const std::string& stem, const CsvTable& table);
  /// Writes <prefix>.manifest.json and returns its path.
  std::filesystem::path finish();

 private:
  std::string subcommand_;
  std::filesystem::path out_dir_;
  std::string prefix_;
  nlohmann::json manifest_;
  std::chrono::steady_clock::time_point start_;
};

/// CLI11 config reader for JSON documents. Objects keyed by a subcommand name
/// supply that subcommand's options; other top-level keys are left to the
/// main app (and ignored when unknown).
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace tw::cli
