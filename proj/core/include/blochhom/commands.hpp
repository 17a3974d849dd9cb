#pragma once

#include <iosfwd>
#include <string>

#include "blochhom/config.hpp"

namespace blochhom {

/// Command implementations behind the CLI subcommands. Each writes its CSV
/// and JSON outputs under cfg.out_dir (created if missing) together with a
/// copy of the resolved configuration, logging progress to `log`.
void command_band(const RunConfig& cfg, std::ostream& log);
void command_physical(const RunConfig& cfg, std::ostream& log);
void command_match(const RunConfig& cfg, std::ostream& log);
void command_model(const RunConfig& cfg, std::ostream& log);
void command_converge(const RunConfig& cfg, std::ostream& log);

}  // namespace blochhom
