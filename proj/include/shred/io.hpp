#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "shred/excursion.hpp"

namespace shred {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// `shredwalk v1 alpha=<a> n=<n> seed=<s>` followed by one step per line.
struct WalkFile {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  DiscreteExcursion walk;
};

void write_walk_file(std::ostream& os, const WalkFile& w);
/// Throws MalformedConfig on a bad header, a non-integer line, a step count
/// other than n + 1, or steps that do not form an excursion.
WalkFile read_walk_file(std::istream& is);

/// A tidy table: one row per trial or measurement.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows{};

  void add(std::vector<std::string> row);
};

/// Cell helpers so call sites stay short.
std::string cell(double x);
std::string cell(std::int64_t x);
std::string cell(std::uint64_t x);
std::string cell(int x);
std::string cell(bool x);
std::string cell(const std::string& s);

/// RFC 4180: quote fields containing a comma, quote, CR or LF.
std::string csv_field(const std::string& s);
void write_csv(std::ostream& os, const Table& t);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& p);

/// Lists every regular file under `dir` (except the manifest itself) with
/// its size and SHA-256, sorted by relative path, and writes manifest.json.
nlohmann::json write_manifest(const std::filesystem::path& dir,
                              const nlohmann::json& extra = nlohmann::json::object());

/// Writes text to a file, creating parent directories.
void write_text_file(const std::filesystem::path& p, const std::string& text);

}  // namespace shred
