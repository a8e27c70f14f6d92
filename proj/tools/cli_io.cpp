#include "cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

#ifndef TORUSWEYL_VERSION
#define TORUSWEYL_VERSION "0.0.0"
#endif

namespace tw::cli {
namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += columns[i];
  }
  text_ += '\n';
}

CsvTable& CsvTable::row() {
  if (rows_ > 0) {
    if (in_row_ != columns_) throw std::logic_error("csv row has the wrong number of cells");
    text_ += '\n';
  }
  ++rows_;
  in_row_ = 0;
  return *this;
}

std::string CsvTable::text() const {
  if (rows_ == 0) return text_;
  if (in_row_ != columns_) throw std::logic_error("csv row has the wrong number of cells");
  return text_ + '\n';
}

void CsvTable::separator() {
  if (in_row_ > 0) text_ += ',';
  ++in_row_;
}

CsvTable& CsvTable::cell(double v) {
  separator();
  text_ += format_double(v);
  return *this;
}

CsvTable& CsvTable::cell(long long v) {
  separator();
  text_ += std::to_string(v);
  return *this;
}

CsvTable& CsvTable::cell(const std::string& v) {
  separator();
  text_ += v;
  return *this;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

namespace {

TorusSymbol builtin_symbol(const std::string& name) {
  if (name == "scottish_flag") return scottish_flag();
  if (name == "cos_x" || name == "f(x)=cos(2pi x)") return cos_position();
  if (name == "cos_xi" || name == "f(xi)=cos(2pi xi)") return cos_momentum();
  throw std::invalid_argument("unknown builtin symbol '" + name + "'");
}

std::string builtin_canonical(const std::string& name) {
  if (name == "f(x)=cos(2pi x)") return "cos_x";
  if (name == "f(xi)=cos(2pi xi)") return "cos_xi";
  return name;
}

ParsedSymbol symbol_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("symbol document must be a JSON object");
  if (j.contains("builtin")) {
    const auto name = j.at("builtin").get<std::string>();
    return {builtin_symbol(name), builtin_canonical(name)};
  }
  if (!j.contains("n") || !j.contains("coeffs")) {
    throw std::invalid_argument("symbol document needs either 'builtin' or 'n' and 'coeffs'");
  }
  const int n = j.at("n").get<int>();
  if (n < 1) throw PreconditionError("symbol dimension n must be >= 1");
  TorusSymbol::CoefficientMap coeffs;
  for (const auto& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != static_cast<std::size_t>(2 * n + 2)) {
      throw std::invalid_argument("each coefficient needs 2n indices followed by re, im");
    }
    TorusSymbol::Index k(2 * n);
    for (int a = 0; a < 2 * n; ++a) k[a] = entry[a].get<int>();
    coeffs[k] += Complex(entry[2 * n].get<double>(), entry[2 * n + 1].get<double>());
  }
  const bool real = j.value("real", false);
  json canonical{{"n", n}, {"coeffs", j.at("coeffs")}};
  if (real) canonical["real"] = true;
  return {TorusSymbol::from_coefficients(n, std::move(coeffs), real), canonical.dump()};
}

// value = mantissa * 10^-scale
struct Decimal {
  long long mantissa = 0;
  int scale = 0;
};

Decimal parse_decimal(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty number in range");
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  Decimal d;
  bool digits = false, point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= '0' && c <= '9') {
      if (d.mantissa > (std::numeric_limits<long long>::max() - 9) / 10) {
        throw std::invalid_argument("too many digits in '" + std::string(s) + "'");
      }
      d.mantissa = 10 * d.mantissa + (c - '0');
      if (point) ++d.scale;
      digits = true;
    } else if (c == '.' && !point) {
      point = true;
    } else if ((c == 'e' || c == 'E') && digits && i + 1 < s.size()) {
      int exponent = 0;
      const auto res = std::from_chars(s.data() + i + 1 + (s[i + 1] == '+'), s.data() + s.size(), exponent);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad exponent in '" + std::string(s) + "'");
      }
      d.scale -= exponent;
      i = s.size();
      break;
    } else {
      throw std::invalid_argument("bad number '" + std::string(s) + "'");
    }
  }
  if (!digits) throw std::invalid_argument("bad number '" + std::string(s) + "'");
  for (; d.scale < 0; ++d.scale) d.mantissa *= 10;
  if (negative) d.mantissa = -d.mantissa;
  return d;
}

long long rescale(const Decimal& d, int scale) {
  long long m = d.mantissa;
  for (int s = d.scale; s < scale; ++s) m *= 10;
  return m;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data() + (s.size() > 0 && s[0] == '+');
  const auto res = std::from_chars(begin, s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  return v;
}

}  // namespace

ParsedSymbol parse_symbol(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty symbol");
  if (text.front() == '{') return symbol_from_json(json::parse(text));
  if (fs::exists(text)) {
    std::ifstream in(text);
    if (!in) throw std::invalid_argument("cannot read symbol file " + text);
    return symbol_from_json(json::parse(in));
  }
  return {builtin_symbol(text), builtin_canonical(text)};
}

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step, got '" + text + "'");
  const Decimal start = parse_decimal(parts[0]);
  const Decimal stop = parse_decimal(parts[1]);
  const Decimal step = parse_decimal(parts[2]);
  const int scale = std::max({start.scale, stop.scale, step.scale});
  if (scale > 15) throw std::invalid_argument("range has too many decimals: " + text);
  const long long a = rescale(start, scale), b = rescale(stop, scale), h = rescale(step, scale);
  if (h <= 0) throw std::invalid_argument("range step must be > 0");
  if (b < a) throw std::invalid_argument("range stop must be >= start");
  const long long count = (b - a) / h + 1;
  if (count > 1000000) throw std::invalid_argument("range has too many points");
  double denom = 1.0;
  for (int s = 0; s < scale; ++s) denom *= 10.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) out.push_back(static_cast<double>(a + k * h) / denom);
  return out;
}

Complex parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_double(parts[0]), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0]), parse_double(parts[1])};
  throw std::invalid_argument("complex value must be 're' or 're,im', got '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) {
    int v = 0;
    const auto res = std::from_chars(p.data(), p.data() + p.size(), v);
    if (p.empty() || res.ec != std::errc{} || res.ptr != p.data() + p.size()) {
      throw std::invalid_argument("bad integer list '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

Run::Run(std::string subcommand, fs::path out_dir, std::string prefix)
    : subcommand_(std::move(subcommand)),
      out_dir_(std::move(out_dir)),
      prefix_(prefix.empty() ? subcommand_ : std::move(prefix)),
      start_(std::chrono::steady_clock::now()) {
  manifest_["tool_version"] = TORUSWEYL_VERSION;
  manifest_["subcommand"] = subcommand_;
  manifest_[subcommand_] = json::object();
  manifest_["outputs"] = json::array();
  fs::create_directories(out_dir_);
}

void Run::write_csv(const std::string& stem, const CsvTable& table) {
  const std::string name = prefix_ + "." + stem + ".csv";
  const std::string text = table.text();
  std::ofstream out(out_dir_ / name, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("failed to write " + (out_dir_ / name).string());
  manifest_["outputs"].push_back(
      {{"file", name}, {"bytes", text.size()}, {"rows", table.rows()}, {"sha256", sha256_hex(text)}});
}

fs::path Run::finish() {
  manifest_["wall_time"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const fs::path path = out_dir_ / (prefix_ + ".manifest.json");
  std::ofstream out(path, std::ios::binary);
  out << manifest_.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed to write " + path.string());
  return path;
}

namespace {

std::vector<std::string> config_inputs(const json& v) {
  if (v.is_string()) return {v.get<std::string>()};
  if (v.is_boolean()) return {v.get<bool>() ? "true" : "false"};
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    return out;
  }
  return {v.dump()};
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App*, bool, bool, std::string) const {
  throw CLI::ConfigError("writing JSON configs is not supported");
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json j;
  try {
    input >> j;
  } catch (const json::exception& e) {
    throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
  std::vector<CLI::ConfigItem> items;
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    if (value.is_object()) {
      for (const auto& [name, v] : value.items()) {
        if (v.is_null()) continue;
        CLI::ConfigItem item;
        item.parents = {key};
        item.name = name;
        item.inputs = config_inputs(v);
        items.push_back(std::move(item));
      }
    } else {
      CLI::ConfigItem item;
      item.name = key;
      item.inputs = config_inputs(value);
      items.push_back(std::move(item));
    }
  }
  return items;
}

}  // namespace tw::cli
