#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace multisym::cli {

struct Check {
  std::string name;
  std::string anchor;  // the mathematical claim the check exercises
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double runtime_ms = 0.0;
  std::optional<std::string> error;
  std::optional<long> cell;
};

struct Report {
  std::string command;
  nlohmann::json config;
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

// Report with every runtime_ms removed, for byte-level comparisons.
nlohmann::json without_timing(nlohmann::json report);

// Throws std::ios_base::failure when the file cannot be written.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace multisym::cli
