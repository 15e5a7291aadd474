#pragma once

#include <filesystem>
#include <iosfwd>

#include "noderank/app/config.hpp"

namespace noderank::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitDataError = 2,
    kExitNotConverged = 3,
};

inline constexpr char kDataDirEnv[] = "NODERANK_DATA_DIR";
inline constexpr char kHiggsUrl[] = "https://snap.stanford.edu/data/higgs-twitter.html";

/// Returns `path` if it exists, else the same relative path (or file name)
/// under $NODERANK_DATA_DIR when that exists, else `path` unchanged.
std::filesystem::path resolve_dataset(const std::filesystem::path& path);

// Each command reads what it needs from the config, writes its artifacts
// under config.out and returns an exit code. Errors are thrown.
int cmd_ingest(const RunConfig& config, std::ostream& log);
int cmd_embed(const RunConfig& config, std::ostream& log);
int cmd_rank(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_report(const RunConfig& config, std::ostream& log);
/// ingest, embed (when a variant needs it), rank, simulate and report.
int cmd_pipeline(const RunConfig& config, std::ostream& log);

/// Parses arguments, runs the subcommand and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace noderank::app
