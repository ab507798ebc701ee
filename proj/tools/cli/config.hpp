#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phasespace/decoherence.hpp"
#include "phasespace/grid.hpp"
#include "phasespace/metrology.hpp"
#include "phasespace/state_spec.hpp"
#include "phasespace/units.hpp"

namespace phasespace::cli {

enum class OutputFormat { csv, json, both };

OutputFormat parse_format(const std::string& name);
std::string to_string(OutputFormat format);

struct GridConfig {
  Bounds bounds;
  std::size_t nx = 201;
  std::size_t np = 201;
};

struct WignerConfig {
  std::string method = "auto";  // auto | closed_form | oracle
  bool compare_oracle = false;
};

struct TilesConfig {
  double envelope_x = 0.0;  // 0 selects two touch spacings
  double envelope_p = 0.0;
};

struct SensitivityConfig {
  double delta1_max = 0.0;  // 0 selects the default bracket
  double delta2_max = 0.0;
  std::size_t scan_samples = 21;
  OrthogonalityOptions search;
};

struct DecohereConfig {
  BathParams bath;
  std::vector<double> times;  // empty selects gamma t in {0.001, 0.01, 0.05}
  Kinematics kinematics = Kinematics::derivative_flow;
  double threshold = 1.0;
  bool fft_visibility = true;
  std::size_t fft_points = 512;
};

struct KerrConfig {
  complex alpha{2.0, 0.0};
  double kappa_t = 0.0;
  std::size_t cutoff = 0;  // 0 selects the minimum safe cutoff
};

struct CompareConfig {
  std::optional<double> sigma;
  std::optional<double> x0;
  std::optional<double> p0;
};

/// Parsed configuration document. The state is kept as JSON text until the
/// unit system is final, because flags may still override hbar.
struct RunConfig {
  std::optional<std::string> state_json;
  std::optional<GridConfig> grid;
  UnitSystem units;
  int threads = 0;  // 0 selects the hardware concurrency
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::both;
  WignerConfig wigner;
  TilesConfig tiles;
  SensitivityConfig sensitivity;
  DecohereConfig decohere;
  std::optional<KerrConfig> kerr;  // falls back to a fock state when absent
  CompareConfig compare;
};

// Strict parse: unknown keys and wrong types raise ErrorCode::config.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Validates every section against the module preconditions.
void validate(const RunConfig& config);

// StateSpec built with the final unit system; throws config if absent.
StateSpec resolve_state(const RunConfig& config);

}  // namespace phasespace::cli
