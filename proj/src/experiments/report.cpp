#include <fstream>

#include "shred/experiments.hpp"

namespace shred {

void Report::check(const std::string& name, bool passed, const nlohmann::json& detail,
                   bool calibration) {
  checks.push_back(
      {{"name", name}, {"passed", passed}, {"calibration", calibration}, {"detail", detail}});
}

bool Report::passed() const {
  for (const auto& c : checks) {
    if (!c["passed"].get<bool>()) return false;
  }
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json tables_json = nlohmann::json::array();
  for (const auto& t : tables) {
    tables_json.push_back({{"name", t.name}, {"file", t.name + ".csv"}, {"columns", t.columns},
                           {"rows", t.rows.size()}});
  }
  return {{"suite", suite},   {"config", config},      {"results", results},
          {"checks", checks}, {"passed", passed()},    {"tables", tables_json}};
}

void write_report(const std::filesystem::path& dir, const Report& r) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "report.json", r.to_json().dump(2) + "\n");
  for (const auto& t : r.tables) {
    std::ofstream out(dir / (t.name + ".csv"), std::ios::binary);
    write_csv(out, t);
  }
}

}  // namespace shred
