#pragma once

#include "stlf/config.hpp"

#include <exception>
#include <iosfwd>
#include <string>

namespace stlf::cli {

// Each command reads its inputs from the config (and earlier artifacts in
// cfg.out_dir) and writes its artifacts there. Progress goes to `log`.
void cmd_synth(const RunConfig& cfg, std::ostream& log);
void cmd_ingest(const RunConfig& cfg, std::ostream& log);
void cmd_fit(const RunConfig& cfg, std::ostream& log);
void cmd_predict(const RunConfig& cfg, std::ostream& log);
void cmd_attack(const RunConfig& cfg, std::ostream& log);
void cmd_measure(const RunConfig& cfg, std::ostream& log);
void cmd_detect(const RunConfig& cfg, std::ostream& log);
void cmd_report(const RunConfig& cfg, std::ostream& log);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// kExitUsage for library and filesystem errors, kExitInternal for anything else.
int exit_code_for(const std::exception& e) noexcept;

/// Parses arguments, runs one subcommand and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stlf::cli
