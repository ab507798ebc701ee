#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/parallel.hpp"

namespace {

constexpr const char* kCommands[][2] = {
    {"wigner", "Sample the Wigner function on a grid and summarize it"},
    {"tiles", "Locate the zero lattice and measure the interference tiles"},
    {"sensitivity", "Scan the displacement overlap and find orthogonality"},
    {"decohere", "Attenuation, fringe visibility and decoherence time in an Ohmic bath"},
    {"kerr", "Kerr-evolved coherent state and its coherent components"},
    {"compare", "Sensitivity of the mixed state against the compass state"},
};

}  // namespace

int main(int argc, char** argv) {
  namespace ps = phasespace;
  CLI::App app{"Phase-space numerics for cat, mixed and compass states"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> hbar;
  std::optional<int> threads;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("--hbar", hbar, "Reduced Planck constant (overrides units.hbar)");
  app.add_option("--threads", threads, "Worker threads (overrides threads)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "csv, json or both (overrides output.format)");
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << ps::cli::error_json("config", e.what()) << "\n";
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ps::cli::RunConfig config = config_path.empty() ? ps::cli::RunConfig{} : ps::cli::load_config(config_path);
    if (out_dir) config.out_dir = *out_dir;
    if (hbar) config.units.hbar = *hbar;
    if (threads) config.threads = *threads;
    if (format) config.format = ps::cli::parse_format(*format);

    const unsigned hw = std::thread::hardware_concurrency();
    ps::set_num_threads(config.threads > 0 ? config.threads : static_cast<int>(hw == 0 ? 1 : hw));

    const ps::cli::OutputSet outputs = ps::cli::run_command(command, config);
    for (const auto& path : outputs.commit(config.out_dir)) std::cout << path.string() << "\n";
    return 0;
  } catch (const ps::Error& e) {
    std::cerr << ps::cli::error_json(ps::to_string(e.code()), e.what()) << "\n";
    return ps::cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << ps::cli::error_json("internal", e.what()) << "\n";
    return 1;
  }
}
