#pragma once

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

namespace exsieve::report {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal text that parses back to the same double. Locale-independent.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw std::invalid_argument("parse_double: " + s);
  return v;
}

/// A table rendered either as CSV or as a JSON array of row objects.
class Table {
 public:
  using Cell = nlohmann::ordered_json;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("Table: row width mismatch");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += cell_text(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  std::string json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }

  std::string render(const std::string& format) const { return format == "json" ? json() : csv(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;

  static std::string cell_text(const Cell& c) {
    if (c.is_null()) return "";
    if (c.is_string()) return c.get<std::string>();
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_number_float()) return format_double(c.get<double>());
    return c.dump();
  }
};

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Parameters and digests tying a run's outputs to its inputs.
struct RunManifest {
  std::string subcommand;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::uint64_t table_limit = 0;
  double duration_seconds = 0;
  std::string version = kVersion;
  std::vector<OutputFile> outputs;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["table_limit"] = table_limit;
    j["duration_seconds"] = duration_seconds;
    j["version"] = version;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& o : outputs) j["outputs"].push_back({{"file", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    return j;
  }
};

/// Writes `content` to dir/name and records its digest in the manifest.
inline void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& content,
                         RunManifest& manifest) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  f << content;
  manifest.outputs.push_back({name, sha256_hex(content), content.size()});
}

}  // namespace exsieve::report
