#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "cli/config.hpp"
#include "cli/report.hpp"

namespace multisym::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Overrides the directory of every output file (report and CSV).
inline constexpr const char* kOutputDirEnv = "MULTISYM_OUTPUT_DIR";

Report cmd_verify(const RunConfig& config);
Report cmd_action(const RunConfig& config);
// Writes the sampled image to csv_path; throws std::ios_base::failure when
// the file cannot be written.
Report cmd_image(const RunConfig& config, const std::filesystem::path& csv_path);

// Loads the config, runs `command` and writes the report to `out`. Returns
// the process exit status; diagnostics go to `log`.
int run(const std::string& command, const std::filesystem::path& config_path,
        const std::filesystem::path& out, std::ostream& log);

}  // namespace multisym::cli
