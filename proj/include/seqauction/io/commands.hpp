#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqauction {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

// Runs the search and writes checkpoints, the trace and the class dump into
// the configured output directory. Progress and errors go to `log`.
int cmd_solve(const std::string& config_path, const std::vector<std::string>& overrides, std::ostream& log);

// Bounds epsilon for a checkpoint; writes the report JSON and the vertex-loss
// table.
int cmd_verify(const std::string& config_path, const std::string& checkpoint,
               const std::vector<std::string>& overrides, std::ostream& log);

// Distances of a checkpoint to the environment's analytical equilibrium.
int cmd_compare(const std::string& config_path, const std::string& checkpoint,
                const std::vector<std::string>& overrides, std::ostream& log);

}  // namespace seqauction
