#include "shred/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "shred/errors.hpp"

namespace shred {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_walk_file(std::ostream& os, const WalkFile& w) {
  os << "shredwalk v1 alpha=" << format_double(w.alpha) << " n=" << w.walk.n()
     << " seed=" << w.seed << '\n';
  for (auto s : w.walk.steps()) os << s << '\n';
}

namespace {

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw MalformedConfig("walk file: bad " + what + " '" + text + "'");
  }
  return value;
}

std::string field(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) {
    throw MalformedConfig("walk file: expected " + key + "=..., got '" + token + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

WalkFile read_walk_file(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw MalformedConfig("walk file: empty");
  std::istringstream head(line);
  std::string magic, version, a, n, s, extra;
  head >> magic >> version >> a >> n >> s;
  if (magic != "shredwalk" || version != "v1") {
    throw MalformedConfig("walk file: missing 'shredwalk v1' header");
  }
  if (head >> extra) throw MalformedConfig("walk file: trailing header fields");
  WalkFile w;
  w.alpha = parse_number<double>(field(a, "alpha"), "alpha");
  const auto count = parse_number<std::int64_t>(field(n, "n"), "n");
  w.seed = parse_number<std::uint64_t>(field(s, "seed"), "seed");
  if (count < 0) throw MalformedConfig("walk file: negative n");
  std::vector<std::int64_t> steps;
  steps.reserve(static_cast<std::size_t>(count) + 1);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    steps.push_back(parse_number<std::int64_t>(line, "step"));
  }
  if (static_cast<std::int64_t>(steps.size()) != count + 1) {
    throw MalformedConfig("walk file: expected " + std::to_string(count + 1) + " steps, found " +
                          std::to_string(steps.size()));
  }
  try {
    w.walk = DiscreteExcursion(std::move(steps));
  } catch (const std::invalid_argument& e) {
    throw MalformedConfig(std::string("walk file: ") + e.what());
  }
  return w;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table " + name + ": row width " + std::to_string(row.size()) +
                           " != " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string cell(double x) { return format_double(x); }
std::string cell(std::int64_t x) { return std::to_string(x); }
std::string cell(std::uint64_t x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "true" : "false"; }
std::string cell(const std::string& s) { return s; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      os << csv_field(r[i]);
    }
    os << "\r\n";
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

nlohmann::json write_manifest(const std::filesystem::path& dir, const nlohmann::json& extra) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir);
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  nlohmann::json m = extra;
  m["files"] = nlohmann::json::array();
  for (const auto& f : files) {
    m["files"].push_back({{"path", f.generic_string()},
                          {"bytes", fs::file_size(dir / f)},
                          {"sha256", sha256_file(dir / f)}});
  }
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
  return m;
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace shred
