#include "cli/report.hpp"

#include <cmath>
#include <fstream>

namespace multisym::cli {

namespace {

constexpr const char* kArtifact = "multisym";
constexpr const char* kVersion = "0.1.0";

// JSON has no infinities or NaNs; write them as strings instead of null.
nlohmann::json real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

bool Report::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json out;
  out["artifact"] = kArtifact;
  out["version"] = kVersion;
  out["command"] = command;
  out["config"] = config;
  out["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["status"] = c.passed ? "pass" : "fail";
    j["residual"] = real(c.residual);
    j["tolerance"] = c.tolerance;
    j["runtime_ms"] = c.runtime_ms;
    if (c.error) j["error"] = *c.error;
    if (c.cell) j["cell"] = *c.cell;
    out["checks"].push_back(std::move(j));
  }
  out["results"] = results;
  out["overall"] = passed() ? "pass" : "fail";
  return out;
}

nlohmann::json without_timing(nlohmann::json report) {
  if (report.contains("checks")) {
    for (auto& c : report["checks"]) c.erase("runtime_ms");
  }
  return report;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) throw std::ios_base::failure("failed writing '" + path.string() + "'");
}

}  // namespace multisym::cli
