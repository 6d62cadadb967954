#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "vibroident/geotech.hpp"

namespace vibroident {

/// Each command returns a process exit code and reports failures on `err`.
int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& err);
int cmd_analyze(const std::string& config_path, const std::string& response_path, const std::string& force_path,
                const std::string& out_dir, std::ostream& err);
int cmd_linearity(const std::string& frc_a, const std::string& frc_b, double exclude_below,
                  const std::optional<std::string>& id, const std::optional<std::string>& axis, std::ostream& out,
                  std::ostream& err);
int cmd_vs(const std::string& cpt_path, const std::string& out_path, const AndrusOptions& andrus, std::ostream& out,
           std::ostream& err);

} // namespace vibroident
