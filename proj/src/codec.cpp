#include "shred/codec.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "shred/errors.hpp"

namespace shred {

std::int64_t MultimerConfig::vertex_count() const {
  std::int64_t v = 0;
  for (const auto& m : multimers) v += m.length + 1;
  return v;
}

MultimerConfig walk_to_multimers(const DiscreteExcursion& e) {
  MultimerConfig m;
  m.root = e.n() + 1;
  const auto& s = e.steps();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] >= 0) {
      m.multimers.push_back({static_cast<std::int64_t>(k) + 1,
                             e.height(static_cast<std::int64_t>(k)), s[k]});
    }
  }
  return m;
}

DiscreteExcursion multimers_to_walk(const MultimerConfig& m) {
  if (m.root < 2) throw MalformedConfig("root column must be >= 2");
  const std::int64_t n = m.n();
  std::vector<std::int64_t> steps(static_cast<std::size_t>(n + 1), -1);
  std::int64_t prev = 0;
  for (const auto& mm : m.multimers) {
    if (mm.column < 1 || mm.column > n + 1) {
      throw MalformedConfig("column " + std::to_string(mm.column) +
                            " outside [1, " + std::to_string(n + 1) + "]");
    }
    if (mm.column <= prev) throw MalformedConfig("columns not strictly increasing");
    if (mm.length < 0) throw MalformedConfig("negative multimer length");
    prev = mm.column;
    steps[static_cast<std::size_t>(mm.column - 1)] = mm.length;
  }
  DiscreteExcursion e;
  try {
    e = DiscreteExcursion(std::move(steps));
  } catch (const std::invalid_argument& ex) {
    throw MalformedConfig(std::string("not a first-passage configuration: ") +
                          ex.what());
  }
  for (const auto& mm : m.multimers) {
    if (e.height(mm.column - 1) != mm.bottom) {
      throw MalformedConfig("multimer at column " + std::to_string(mm.column) +
                            " has bottom " + std::to_string(mm.bottom) +
                            ", staircase gives " +
                            std::to_string(e.height(mm.column - 1)));
    }
  }
  return e;
}

void write_multimers_csv(std::ostream& os, const MultimerConfig& m) {
  os << "# root=" << m.root << "\n";
  os << "column,bottom,length\n";
  for (const auto& mm : m.multimers) {
    os << mm.column << ',' << mm.bottom << ',' << mm.length << '\n';
  }
}

MultimerConfig read_multimers_csv(std::istream& is) {
  MultimerConfig m;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# root=", 0) == 0) {
      m.root = std::stoll(line.substr(7));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "column,bottom,length") {
        throw MalformedConfig("unexpected multimer CSV header: " + line);
      }
      header = true;
      continue;
    }
    std::istringstream row(line);
    Multimer mm{};
    char c1 = 0, c2 = 0;
    if (!(row >> mm.column >> c1 >> mm.bottom >> c2 >> mm.length) || c1 != ',' ||
        c2 != ',') {
      throw MalformedConfig("bad multimer row: " + line);
    }
    m.multimers.push_back(mm);
  }
  if (m.root == 0) throw MalformedConfig("missing '# root=' header");
  return m;
}

std::size_t SlitList::blocking_count() const {
  std::size_t c = 0;
  for (const auto& s : slits) c += s.blocking() ? 1 : 0;
  return c;
}

SlitList slits_of(const DiscreteExcursion& e) {
  SlitList out;
  out.circumference = static_cast<double>(e.n() + 1);
  const auto& s = e.steps();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0) continue;
    const auto ki = static_cast<std::int64_t>(k);
    out.slits.push_back({static_cast<double>(k + 1),
                         static_cast<double>(e.height(ki)),
                         static_cast<double>(e.height(ki + 1))});
  }
  return out;
}

SlitList slits_of(const RescaledExcursion& r) {
  SlitList out;
  const double nn = static_cast<double>(r.n);
  out.circumference = (nn + 1.0) / nn;
  for (std::size_t k = 0; k + 1 < r.raw.size(); ++k) {
    const std::int64_t step = r.raw[k + 1] - r.raw[k];
    if (step < 0) continue;
    out.slits.push_back({static_cast<double>(k + 1) / nn,
                         r.scale * static_cast<double>(r.raw[k]),
                         r.scale * static_cast<double>(r.raw[k + 1])});
  }
  return out;
}

}  // namespace shred
