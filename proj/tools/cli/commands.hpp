#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "phasespace/errors.hpp"

namespace phasespace::cli {

/// Files produced by a command, staged in memory and written only after the
/// whole computation succeeded.
class OutputSet {
 public:
  void add(std::string name, std::string contents);
  // Atomic per-file write into dir (created if missing); returns written paths.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;
  const std::vector<std::pair<std::string, std::string>>& files() const noexcept { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

OutputSet cmd_wigner(const RunConfig& config);
OutputSet cmd_tiles(const RunConfig& config);
OutputSet cmd_sensitivity(const RunConfig& config);
OutputSet cmd_decohere(const RunConfig& config);
OutputSet cmd_kerr(const RunConfig& config);
OutputSet cmd_compare(const RunConfig& config);

// Dispatches by subcommand name; throws config for an unknown name.
OutputSet run_command(const std::string& name, const RunConfig& config);

// 0 ok, 2 config/argument, 3 numeric validation, 4 resolution/coverage/window.
int exit_code_for(ErrorCode code) noexcept;
// {"error": {"code": ..., "message": ...}} on one line.
std::string error_json(std::string_view code, std::string_view message);

}  // namespace phasespace::cli
