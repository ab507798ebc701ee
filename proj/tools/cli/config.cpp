#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "phasespace/errors.hpp"

namespace phasespace::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) fail(ErrorCode::config, std::string(where) + " must be a JSON object");
}

void allow_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) fail(ErrorCode::config, "unknown key '" + key + "' in " + std::string(where));
  }
}

double get_number(const json& j, const char* key, std::string_view where) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(ErrorCode::config, std::string(where) + "." + key + " must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& j, const char* key, std::string_view where) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(ErrorCode::config, std::string(where) + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool get_bool(const json& j, const char* key, std::string_view where) {
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(ErrorCode::config, std::string(where) + "." + key + " must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, std::string_view where) {
  const json& v = j.at(key);
  if (!v.is_string()) fail(ErrorCode::config, std::string(where) + "." + key + " must be a string");
  return v.get<std::string>();
}

template <class T, class Get>
void assign_if(const json& j, const char* key, T& target, Get get) {
  if (j.contains(key)) target = get(j, key);
}

GridConfig parse_grid(const json& j) {
  allow_keys(j, "grid", {"x_min", "x_max", "p_min", "p_max", "nx", "np"});
  GridConfig g;
  for (const char* k : {"x_min", "x_max", "p_min", "p_max"}) {
    if (!j.contains(k)) fail(ErrorCode::config, std::string("grid.") + k + " is required");
  }
  g.bounds = {get_number(j, "x_min", "grid"), get_number(j, "x_max", "grid"), get_number(j, "p_min", "grid"),
              get_number(j, "p_max", "grid")};
  assign_if(j, "nx", g.nx, [](const json& o, const char* k) { return get_count(o, k, "grid"); });
  assign_if(j, "np", g.np, [](const json& o, const char* k) { return get_count(o, k, "grid"); });
  return g;
}

void parse_units(const json& j, UnitSystem& u) {
  allow_keys(j, "units", {"hbar", "kB"});
  assign_if(j, "hbar", u.hbar, [](const json& o, const char* k) { return get_number(o, k, "units"); });
  assign_if(j, "kB", u.kB, [](const json& o, const char* k) { return get_number(o, k, "units"); });
}

void parse_output(const json& j, RunConfig& c) {
  allow_keys(j, "output", {"dir", "format"});
  if (j.contains("dir")) c.out_dir = get_string(j, "dir", "output");
  if (j.contains("format")) c.format = parse_format(get_string(j, "format", "output"));
}

void parse_wigner(const json& j, WignerConfig& w) {
  allow_keys(j, "wigner", {"method", "compare_oracle"});
  assign_if(j, "method", w.method, [](const json& o, const char* k) { return get_string(o, k, "wigner"); });
  assign_if(j, "compare_oracle", w.compare_oracle,
            [](const json& o, const char* k) { return get_bool(o, k, "wigner"); });
}

void parse_tiles(const json& j, TilesConfig& t) {
  allow_keys(j, "tiles", {"envelope_x", "envelope_p"});
  assign_if(j, "envelope_x", t.envelope_x, [](const json& o, const char* k) { return get_number(o, k, "tiles"); });
  assign_if(j, "envelope_p", t.envelope_p, [](const json& o, const char* k) { return get_number(o, k, "tiles"); });
}

void parse_sensitivity(const json& j, SensitivityConfig& s) {
  constexpr std::string_view where = "sensitivity";
  allow_keys(j, where, {"delta1_max", "delta2_max", "scan_samples", "tolerance", "search_samples", "max_iterations"});
  auto num = [&](const json& o, const char* k) { return get_number(o, k, where); };
  auto count = [&](const json& o, const char* k) { return get_count(o, k, where); };
  assign_if(j, "delta1_max", s.delta1_max, num);
  assign_if(j, "delta2_max", s.delta2_max, num);
  assign_if(j, "scan_samples", s.scan_samples, count);
  assign_if(j, "tolerance", s.search.tolerance, num);
  if (j.contains("search_samples")) s.search.samples = static_cast<int>(count(j, "search_samples"));
  if (j.contains("max_iterations")) s.search.max_iterations = static_cast<int>(count(j, "max_iterations"));
}

Kinematics parse_kinematics(const std::string& name) {
  if (name == "derivative_flow") return Kinematics::derivative_flow;
  if (name == "free_particle") return Kinematics::free_particle;
  fail(ErrorCode::config, "decohere.kinematics must be \"derivative_flow\" or \"free_particle\", got \"" + name + "\"");
}

void parse_decohere(const json& j, DecohereConfig& d) {
  constexpr std::string_view where = "decohere";
  allow_keys(j, where, {"m", "gamma", "T", "times", "kinematics", "threshold", "fft_visibility", "fft_points"});
  auto num = [&](const json& o, const char* k) { return get_number(o, k, where); };
  assign_if(j, "m", d.bath.m, num);
  assign_if(j, "gamma", d.bath.gamma, num);
  assign_if(j, "T", d.bath.T, num);
  assign_if(j, "threshold", d.threshold, num);
  if (j.contains("times")) {
    const json& t = j.at("times");
    if (!t.is_array()) fail(ErrorCode::config, "decohere.times must be an array of numbers");
    d.times.clear();
    for (const json& v : t) {
      if (!v.is_number()) fail(ErrorCode::config, "decohere.times must be an array of numbers");
      d.times.push_back(v.get<double>());
    }
  }
  if (j.contains("kinematics")) d.kinematics = parse_kinematics(get_string(j, "kinematics", where));
  assign_if(j, "fft_visibility", d.fft_visibility, [&](const json& o, const char* k) { return get_bool(o, k, where); });
  assign_if(j, "fft_points", d.fft_points, [&](const json& o, const char* k) { return get_count(o, k, where); });
}

void parse_kerr(const json& j, KerrConfig& k) {
  constexpr std::string_view where = "kerr";
  allow_keys(j, where, {"alpha", "kappa_t", "cutoff"});
  if (j.contains("alpha")) {
    const json& a = j.at("alpha");
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      fail(ErrorCode::config, "kerr.alpha must be [re, im]");
    }
    k.alpha = {a[0].get<double>(), a[1].get<double>()};
  }
  if (!j.contains("kappa_t")) fail(ErrorCode::config, "kerr.kappa_t is required");
  k.kappa_t = get_number(j, "kappa_t", where);
  assign_if(j, "cutoff", k.cutoff, [&](const json& o, const char* key) { return get_count(o, key, where); });
}

void parse_compare(const json& j, CompareConfig& c) {
  constexpr std::string_view where = "compare";
  allow_keys(j, where, {"sigma", "x0", "p0"});
  if (j.contains("sigma")) c.sigma = get_number(j, "sigma", where);
  if (j.contains("x0")) c.x0 = get_number(j, "x0", where);
  if (j.contains("p0")) c.p0 = get_number(j, "p0", where);
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "both") return OutputFormat::both;
  fail(ErrorCode::config, "format must be csv, json or both, got \"" + name + "\"");
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::both: return "both";
  }
  return "both";
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
  }
  allow_keys(doc, "config",
             {"state", "grid", "units", "threads", "output", "wigner", "tiles", "sensitivity", "decohere", "kerr",
              "compare"});
  RunConfig c;
  try {
    if (doc.contains("state")) {
      require_object(doc.at("state"), "state");
      c.state_json = doc.at("state").dump();
    }
    if (doc.contains("grid")) c.grid = parse_grid(doc.at("grid"));
    if (doc.contains("units")) parse_units(doc.at("units"), c.units);
    if (doc.contains("threads")) c.threads = static_cast<int>(get_count(doc, "threads", "config"));
    if (doc.contains("output")) parse_output(doc.at("output"), c);
    if (doc.contains("wigner")) parse_wigner(doc.at("wigner"), c.wigner);
    if (doc.contains("tiles")) parse_tiles(doc.at("tiles"), c.tiles);
    if (doc.contains("sensitivity")) parse_sensitivity(doc.at("sensitivity"), c.sensitivity);
    if (doc.contains("decohere")) parse_decohere(doc.at("decohere"), c.decohere);
    if (doc.contains("kerr")) parse_kerr(doc.at("kerr"), c.kerr.emplace());
    if (doc.contains("compare")) parse_compare(doc.at("compare"), c.compare);
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::config, what);
  };
  try {
    c.units.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("units: ") + e.what());
  }
  if (c.grid) {
    const Bounds& b = c.grid->bounds;
    check(b.x_min < b.x_max && b.p_min < b.p_max, "grid bounds must satisfy min < max");
    check(c.grid->nx >= 2 && c.grid->np >= 2, "grid needs at least 2 nodes per axis");
  }
  check(c.wigner.method == "auto" || c.wigner.method == "closed_form" || c.wigner.method == "oracle",
        "wigner.method must be auto, closed_form or oracle");
  check(c.tiles.envelope_x >= 0.0 && c.tiles.envelope_p >= 0.0, "tiles envelopes must be non-negative");
  check(c.sensitivity.delta1_max >= 0.0 && c.sensitivity.delta2_max >= 0.0, "sensitivity bracket must be non-negative");
  check(c.sensitivity.scan_samples >= 2, "sensitivity.scan_samples must be at least 2");
  check(c.sensitivity.search.tolerance > 0.0, "sensitivity.tolerance must be positive");
  check(c.sensitivity.search.samples >= 8, "sensitivity.search_samples must be at least 8");
  try {
    c.decohere.bath.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("decohere: ") + e.what());
  }
  for (double t : c.decohere.times) check(t >= 0.0, "decohere.times must be non-negative");
  check(c.decohere.threshold > 0.0, "decohere.threshold must be positive");
  check(c.decohere.fft_points >= 16 && c.decohere.fft_points % 4 == 0,
        "decohere.fft_points must be a multiple of 4 and at least 16");
  check(!c.kerr || c.kerr->kappa_t >= 0.0, "kerr.kappa_t must be non-negative");
  for (const auto& v : {c.compare.sigma, c.compare.x0, c.compare.p0}) {
    check(!v || *v > 0.0, "compare parameters must be positive");
  }
}

StateSpec resolve_state(const RunConfig& c) {
  if (!c.state_json) fail(ErrorCode::config, "this command needs a \"state\" section");
  return state_from_json(*c.state_json, c.units);
}

}  // namespace phasespace::cli
