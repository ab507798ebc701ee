#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "json.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/parallel.hpp"

using namespace phasespace;
using namespace phasespace::cli;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kMixed = R"({"type": "mixed", "probability": 0.5, "branches": [
  {"type": "cat", "axis": "position", "sigma": 0.5, "x0": 4.5},
  {"type": "cat", "axis": "momentum", "sigma": 0.5, "p0": 10.0}]})";

RunConfig config_with(const std::string& state, const std::string& extra = "") {
  std::string text = std::string("{\"state\": ") + state;
  if (!extra.empty()) text += ", " + extra;
  return parse_config(text + "}");
}

json file_json(const OutputSet& out, const std::string& name) {
  for (const auto& [file, contents] : out.files()) {
    if (file == name) return json::parse(contents);
  }
  ADD_FAILURE() << "missing output " << name;
  return {};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::numeric;
}

}  // namespace

TEST(Config, RejectsUnknownKeysAndTypes) {
  EXPECT_EQ(code_of([] { parse_config(R"({"stat": {}})"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config(R"({"grid": {"x_min": 0, "x_max": 1, "p_min": 0, "p_max": 1, "n": 3}})"); }),
            ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config(R"({"decohere": {"gamma": "fast"}})"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config(R"({"output": {"format": "xml"}})"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("{not json"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { validate(parse_config(R"({"decohere": {"gamma": -1}})")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { resolve_state(parse_config("{}")); }), ErrorCode::config);
}

TEST(Config, UnitsReachTheState) {
  RunConfig c = config_with(R"({"type": "cat", "axis": "momentum", "sigma": 0.5, "p0": 2})", R"("units": {"hbar": 0.5})");
  EXPECT_EQ(c.units.hbar, 0.5);
  const StateSpec s = resolve_state(c);
  EXPECT_EQ(units_of(s).hbar, 0.5);
}

TEST(Commands, SingleGaussianFieldIsPositive) {
  const OutputSet out = run_command("wigner", config_with(R"({"type": "cat", "axis": "position", "sigma": 0.5, "x0": 0})"));
  const json s = file_json(out, "wigner_summary.json");
  EXPECT_FALSE(s["has_negative_values"].get<bool>());
  EXPECT_GE(s["min"].get<double>(), 0.0);
  EXPECT_NEAR(s["integral"].get<double>(), 1.0, 1e-6);
}

TEST(Commands, MixtureFieldHasNegativeTilesAndMatchesOracle) {
  const RunConfig c = config_with(kMixed, R"("grid": {"x_min": -9, "x_max": 9, "p_min": -18, "p_max": 18, "nx": 201, "np": 201},
                                             "wigner": {"compare_oracle": true})");
  const OutputSet out = run_command("wigner", c);
  const json s = file_json(out, "wigner_summary.json");
  EXPECT_EQ(s["method"], "closed_form");
  EXPECT_TRUE(s["has_negative_values"].get<bool>());
  EXPECT_NEAR(s["purity"].get<double>(), 0.5, 1e-3);
  EXPECT_LT(file_json(out, "wigner_diff.json")["max_abs_diff"].get<double>(), 1e-8);
}

TEST(Commands, TilesAreaWithinTwoPercent) {
  const json t = file_json(run_command("tiles", config_with(kMixed)), "tiles.json");
  EXPECT_EQ(t["geometry"], "diamond");
  EXPECT_NEAR(t["tile_area_measured"].get<double>() / 0.013707, 1.0, 0.02);
  EXPECT_NEAR(t["tile_area_predicted"].get<double>(), kPi * kPi / (16 * 45.0), 1e-15);
  EXPECT_TRUE(t["checkerboard"]["alternates"].get<bool>());
}

TEST(Commands, DecoherenceTimeNearFormula) {
  const RunConfig c = config_with(R"({"type": "cat", "axis": "position", "sigma": 0.5, "x0": 4.5})",
                                  R"("decohere": {"m": 1, "gamma": 0.1, "T": 10, "times": [0.01, 0.1]})");
  const OutputSet out = run_command("decohere", c);
  const json d = file_json(out, "decoherence.json");
  const double ratio = d["tau_d_measured"].get<double>() / d["tau_d_formula"].get<double>();
  EXPECT_GE(ratio, 0.9);
  EXPECT_LE(ratio, 1.1);
  for (const json& p : d["points"]) {
    EXPECT_NEAR(p["visibility"].get<double>() / p["visibility_predicted"].get<double>(), 1.0, 0.05);
  }
  EXPECT_EQ(code_of([&] { run_command("decohere", config_with(kMixed)); }), ErrorCode::config);
}

TEST(Commands, KerrFromSectionOrFockState) {
  const json k = file_json(run_command("kerr", parse_config(R"({"kerr": {"alpha": [2, 0], "kappa_t": 3.141592653589793, "cutoff": 32}})")),
                           "kerr.json");
  EXPECT_GE(k["cat_fidelity"].get<double>(), 1.0 - 1e-8);
  EXPECT_EQ(k["components"]["dft_components"], 2);
  const json f = file_json(run_command("kerr", config_with(R"({"type": "fock", "alpha": [2, 0], "kappa_t": 1.5707963267948966})")),
                           "kerr.json");
  EXPECT_EQ(f["components"]["dft_components"], 4);
  EXPECT_EQ(f["components_predicted"], 4);
}

TEST(Commands, SearchFailureInSmallBracket) {
  const RunConfig c = config_with(kMixed, R"("sensitivity": {"delta1_max": 0.01, "delta2_max": 0.01, "scan_samples": 2, "search_samples": 8})");
  EXPECT_EQ(code_of([&] { run_command("sensitivity", c); }), ErrorCode::search);
}

TEST(Commands, FormatSelectsFiles) {
  RunConfig c = config_with(R"({"type": "cat", "axis": "position", "sigma": 0.5, "x0": 1})");
  for (auto [format, ext] : {std::pair{OutputFormat::json, ".json"}, {OutputFormat::csv, ".csv"}}) {
    c.format = format;
    const OutputSet out = run_command("wigner", c);
    EXPECT_FALSE(out.files().empty());
    for (const auto& [name, contents] : out.files()) EXPECT_EQ(std::filesystem::path(name).extension(), ext);
  }
  EXPECT_EQ(code_of([&] { run_command("plot", c); }), ErrorCode::config);
}

TEST(Commands, OutputsIdenticalAcrossThreadCounts) {
  const RunConfig c = config_with(kMixed);
  set_num_threads(1);
  const OutputSet a = run_command("tiles", c);
  set_num_threads(3);
  const OutputSet b = run_command("tiles", c);
  set_num_threads(1);
  ASSERT_EQ(a.files().size(), b.files().size());
  for (std::size_t k = 0; k < a.files().size(); ++k) EXPECT_EQ(a.files()[k].second, b.files()[k].second);
}

TEST(Commands, CommitWritesEveryFile) {
  const auto dir = std::filesystem::temp_directory_path() / "phasespace_cli_commit";
  std::filesystem::remove_all(dir);
  OutputSet out;
  out.add("a.json", "{}\n");
  out.add("b.csv", "x\n1\n");
  EXPECT_EQ(out.commit(dir).size(), 2u);
  std::ifstream in(dir / "b.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "x\n1\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "b.csv.tmp"));
  std::filesystem::remove_all(dir);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::config), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::argument), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::numeric), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::search), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::resolution), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::coverage), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::window), 4);
  EXPECT_EQ(json::parse(error_json("config", "bad"))["error"]["code"], "config");
}
