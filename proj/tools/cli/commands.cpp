#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "phasespace/decoherence.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/field_io.hpp"
#include "phasespace/interference.hpp"
#include "phasespace/kerr.hpp"
#include "phasespace/metrology.hpp"
#include "phasespace/quadrature.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace::cli {

namespace {

using ojson = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson units_json(const UnitSystem& u) { return {{"hbar", u.hbar}, {"kB", u.kB}}; }

ojson bounds_json(const Bounds& b) {
  return {{"x_min", b.x_min}, {"x_max", b.x_max}, {"p_min", b.p_min}, {"p_max", b.p_max}};
}

ojson grid_json(const PhaseSpaceGrid& g) {
  return {{"nx", g.nx()}, {"np", g.np()}, {"bounds", bounds_json(g.bounds())}};
}

ojson header(const char* command, const StateSpec& state, const UnitSystem& units) {
  return {{"command", command}, {"units", units_json(units)}, {"state", ojson::parse(state_to_json(state))}};
}

double relative(double measured, double predicted) { return (measured - predicted) / predicted; }

// Packet width and separations of the equal-width mixed or compass state.
struct Separation {
  double sigma = 0.0;
  double x0 = 0.0;
  double p0 = 0.0;
  bool compass = false;
};

std::optional<Separation> separation_of(const StateSpec& state) {
  if (const auto* cat = std::get_if<CatSpec>(&state)) {
    if (cat->kind == CatKind::compass) return Separation{cat->sigma, cat->x0, cat->p0, true};
    return std::nullopt;
  }
  if (const auto* mixed = std::get_if<MixedSpec>(&state)) {
    if (mixed->branches.size() != 2) return std::nullopt;
    const CatSpec* pos = nullptr;
    const CatSpec* mom = nullptr;
    for (const auto& b : mixed->branches) {
      if (b.state.kind == CatKind::position_cat) pos = &b.state;
      if (b.state.kind == CatKind::momentum_cat) mom = &b.state;
    }
    if (pos && mom && pos->sigma == mom->sigma) return Separation{pos->sigma, pos->x0, mom->p0, false};
  }
  return std::nullopt;
}

const char* method_of(const StateSpec& state) {
  if (closed_form_for(state)) return "closed_form";
  if (const auto* cat = std::get_if<CatSpec>(&state); cat && has_pair_expansion(*cat)) return "pair_expansion";
  if (const auto* mixed = std::get_if<MixedSpec>(&state)) {
    bool all_pairs = true;
    for (const auto& b : mixed->branches) all_pairs = all_pairs && has_pair_expansion(b.state);
    if (all_pairs) return "pair_expansion";
  }
  return "oracle";
}

double predicted_purity(const StateSpec& state) {
  if (const auto* mixed = std::get_if<MixedSpec>(&state)) return purity_by_quadrature(*mixed);
  return 1.0;
}

PhaseSpaceGrid grid_or(const RunConfig& c, const Bounds& fallback, std::size_t n) {
  if (c.grid) return linspace_grid(c.grid->bounds, c.grid->nx, c.grid->np);
  return linspace_grid(fallback, n, n);
}

std::string csv_line(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    line += format_double(v);
  }
  return line + "\n";
}

}  // namespace

void OutputSet::add(std::string name, std::string contents) {
  files_.emplace_back(std::move(name), std::move(contents));
}

std::vector<std::filesystem::path> OutputSet::commit(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::config, "cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [name, contents] : files_) {
    const auto path = dir / name;
    write_file_atomic(path, contents);
    written.push_back(path);
  }
  return written;
}

OutputSet cmd_wigner(const RunConfig& config) {
  const StateSpec state = resolve_state(config);
  const UnitSystem& units = config.units;
  const PhaseSpaceGrid grid = grid_or(config, default_window(state), 201);

  std::string method = config.wigner.method;
  std::optional<WignerField> field;
  if (method == "closed_form") {
    const auto cf = closed_form_for(state);
    if (!cf) fail(ErrorCode::config, "wigner.method closed_form: no closed form for this state");
    field = closed_form_field(*cf, grid);
  } else if (method == "oracle") {
    field = wigner_transform(state, grid);
  } else {
    method = method_of(state);
    field = wigner_field(state, grid);
  }

  const double hb = units.hbar;
  ojson summary = header("wigner", state, units);
  summary["method"] = method;
  summary["grid"] = grid_json(grid);
  summary["min"] = field->min();
  summary["max"] = field->max();
  summary["has_negative_values"] = field->min() < 0.0;
  summary["integral"] = integrate_2d(*field);
  summary["integral_predicted"] = 1.0;
  summary["purity"] = 2.0 * kPi * hb * integrate_product(*field, *field);
  summary["purity_predicted"] = predicted_purity(state);

  OutputSet out;
  out.add("wigner_field.csv", field_csv(*field));
  if (config.wigner.compare_oracle) {
    const WignerField reference = wigner_transform(state, grid);
    const WignerField candidate = method == "oracle" ? wigner_field(state, grid) : *field;
    const DiffReport d = compare_fields(candidate, reference);
    ojson diff = ojson::parse(diff_report_json(d));
    diff["tolerance"] = 1e-8;
    diff["within_tolerance"] = d.max_abs_diff < 1e-8;
    summary["oracle_max_abs_diff"] = d.max_abs_diff;
    out.add("wigner_diff.json", dump(diff));
  }
  out.add("wigner_summary.json", dump(summary));
  return out;
}

OutputSet cmd_tiles(const RunConfig& config) {
  const StateSpec state = resolve_state(config);
  const UnitSystem& units = config.units;
  const double hb = units.hbar;
  const auto sep = separation_of(state);
  if (!sep && !config.grid) fail(ErrorCode::config, "tiles needs a grid section for states without a known separation");

  double touch_x = 0.0;
  double touch_p = 0.0;
  Bounds window;
  if (sep) {
    touch_x = kPi * hb / (2.0 * sep->p0);
    touch_p = kPi * hb / (2.0 * sep->x0);
    window = {-4.0 * touch_x, 4.0 * touch_x, -4.0 * touch_p, 4.0 * touch_p};
  }
  const PhaseSpaceGrid grid = grid_or(config, window, 241);
  const WignerField field = wigner_field(state, grid);
  const PointFunction eval = wigner_point_function(state);

  LatticeOptions opt;
  opt.refine = eval;
  const ZeroLattice lat = find_zero_lattice(field, opt);

  const double env_x = config.tiles.envelope_x > 0.0 ? config.tiles.envelope_x
                       : sep                        ? 2.0 * touch_x
                                                    : 0.5 * grid.bounds().x_max;
  const double env_p = config.tiles.envelope_p > 0.0 ? config.tiles.envelope_p
                       : sep                        ? 2.0 * touch_p
                                                    : 0.5 * grid.bounds().p_max;

  ojson report = header("tiles", state, units);
  report["grid"] = grid_json(grid);
  report["geometry"] = to_string(lat.geometry);
  report["n_max"] = lat.n_max;
  report["x_lines"] = lat.x_lines;
  report["p_lines"] = lat.p_lines;
  report["x_touch"] = lat.x_touch;
  report["p_touch"] = lat.p_touch;
  if (sep) {
    const ZeroLattice pred = predicted_lattice(sep->x0, sep->p0, std::max(lat.n_max, 1), units);
    report["x_lines_predicted"] = pred.x_lines;
    report["p_lines_predicted"] = pred.p_lines;
    report["x_touch_predicted"] = pred.x_touch;
    report["p_touch_predicted"] = pred.p_touch;
  }

  const bool has_lines = !lat.x_lines.empty() && !lat.p_lines.empty();
  if (has_lines) {
    const TileArea area = tile_area(lat);
    report["tile_area_measured"] = area.measured;
    report["gap_product"] = area.gap_product;
    report["tile_area_spread"] = area.spread;
    if (sep) {
      const double a = predicted_tile_area(sep->x0, sep->p0, units);
      report["tile_area_predicted"] = a;
      report["tile_area_relative_error"] = relative(area.measured, a);
    }
  } else {
    report["tile_area_measured"] = nullptr;
  }

  std::string csv = "x_center,p_center,area,sign\n";
  if (lat.geometry != LatticeGeometry::none && has_lines) {
    const CheckerboardReport board = checkerboard_report(field, lat, env_x, env_p, eval);
    report["checkerboard"] = {{"envelope_x", env_x},   {"envelope_p", env_p},         {"tiles", board.tiles.size()},
                              {"positive", board.positive}, {"negative", board.negative}, {"alternates", board.alternates}};
    for (const Tile& t : board.tiles) {
      csv += format_double(t.x_center) + "," + format_double(t.p_center) + "," + format_double(t.area) + "," +
             std::to_string(t.sign) + "\n";
    }
  }

  OutputSet out;
  out.add("tiles.csv", csv);
  out.add("tiles.json", dump(report));
  return out;
}

OutputSet cmd_sensitivity(const RunConfig& config) {
  const StateSpec state = resolve_state(config);
  const UnitSystem& units = config.units;
  const double hb = units.hbar;
  const auto sep = separation_of(state);
  const SensitivityConfig& sc = config.sensitivity;

  SearchBracket bracket{sc.delta1_max, sc.delta2_max};
  if (bracket.delta1_max == 0.0 || bracket.delta2_max == 0.0) {
    if (!sep) fail(ErrorCode::config, "sensitivity needs delta1_max and delta2_max for this state");
    const SearchBracket d = default_bracket(sep->x0, sep->p0, units);
    if (bracket.delta1_max == 0.0) bracket.delta1_max = d.delta1_max;
    if (bracket.delta2_max == 0.0) bracket.delta2_max = d.delta2_max;
  }

  const OverlapEvaluator overlap(field_function(state), overlap_grid(state));
  const SensitivityResult r = find_orthogonality(overlap, SearchMode::joint, bracket, sc.search);

  std::vector<double> d1(sc.scan_samples);
  std::vector<double> d2(sc.scan_samples);
  const auto last = static_cast<double>(sc.scan_samples - 1);
  for (std::size_t k = 0; k < sc.scan_samples; ++k) {
    d1[k] = bracket.delta1_max * static_cast<double>(k) / last;
    d2[k] = bracket.delta2_max * static_cast<double>(k) / last;
  }
  const OverlapScan scan = scan_overlap(overlap, d1, d2);

  const bool closed = sep && !sep->compass;
  const double closed_zero = closed ? overlap_closed_form(sep->sigma, sep->x0, sep->p0, 0.0, 0.0, units) : 0.0;
  std::string csv = "delta1,delta2,overlap_numeric,overlap_closed_form\n";
  for (std::size_t i = 0; i < d1.size(); ++i) {
    for (std::size_t j = 0; j < d2.size(); ++j) {
      const double cf = closed ? overlap_closed_form(sep->sigma, sep->x0, sep->p0, d1[i], d2[j], units) / closed_zero
                               : std::nan("");
      csv += csv_line({d1[i], d2[j], scan.at(i, j), cf});
    }
  }

  ojson report = header("sensitivity", state, units);
  report["bracket"] = {{"delta1_max", bracket.delta1_max}, {"delta2_max", bracket.delta2_max}};
  report["overlap_at_zero"] = overlap.at_zero();
  report["overlap_at_zero_predicted"] = predicted_purity(state) / (2.0 * kPi * hb);
  report["delta1_star"] = r.delta1_star;
  report["delta2_star"] = r.delta2_star;
  report["product"] = r.product;
  report["overlap_at_star"] = r.overlap_at_star;
  report["tolerance"] = sc.search.tolerance;
  report["converged"] = r.converged;
  report["iterations"] = r.iterations;
  report["axis_minima"] = {{"delta1", r.axis_delta1},
                           {"overlap_delta1", r.axis_overlap1},
                           {"delta2", r.axis_delta2},
                           {"overlap_delta2", r.axis_overlap2}};
  if (sep) {
    const double d1p = kPi * hb / (2.0 * sep->x0);
    const double d2p = kPi * hb / (2.0 * sep->p0);
    report["delta1_predicted"] = d1p;
    report["delta2_predicted"] = d2p;
    report["product_predicted"] = d1p * d2p;
    report["product_relative_error"] = relative(r.product, d1p * d2p);
    // Twice the tile area; reached only if delta2 stopped at a quarter period.
    report["product_quarter_period"] = kPi * kPi * hb * hb / (8.0 * sep->x0 * sep->p0);
  }

  OutputSet out;
  out.add("sensitivity_scan.csv", csv);
  out.add("sensitivity.json", dump(report));
  return out;
}

OutputSet cmd_decohere(const RunConfig& config) {
  const StateSpec state = resolve_state(config);
  const auto* cat = std::get_if<CatSpec>(&state);
  if (!cat || (cat->kind != CatKind::position_cat && cat->kind != CatKind::momentum_cat)) {
    fail(ErrorCode::config, "decohere needs a position or momentum cat state");
  }
  const DecohereConfig& dc = config.decohere;
  const BathParams& bath = dc.bath;
  const UnitSystem& units = config.units;

  std::vector<double> times = dc.times;
  if (times.empty()) {
    for (double gt : {0.001, 0.01, 0.05}) times.push_back(gt / bath.gamma);
  }
  const AttenuationCurve curve = attenuation_curve(*cat, bath, times, dc.kinematics);
  std::vector<double> measured(times.size(), std::nan(""));
  if (dc.fft_visibility) {
    EvolutionGridOptions opt;
    opt.n = dc.fft_points;
    opt.kinematics = dc.kinematics;
    for (std::size_t k = 0; k < times.size(); ++k) measured[k] = central_visibility(*cat, bath, times[k], opt);
  }
  const DecoherenceTime tau = decoherence_time(*cat, bath, dc.threshold, dc.kinematics);

  std::string csv = "t,A0,visibility,visibility_predicted\n";
  ojson points = ojson::array();
  for (std::size_t k = 0; k < times.size(); ++k) {
    csv += csv_line({times[k], curve.A0[k], measured[k], curve.visibility[k]});
    ojson p = {{"t", times[k]}, {"A0", curve.A0[k]}};
    p["visibility"] = dc.fft_visibility ? ojson(measured[k]) : ojson(nullptr);
    p["visibility_predicted"] = curve.visibility[k];
    points.push_back(p);
  }

  ojson report = header("decohere", state, units);
  report["bath"] = {{"m", bath.m}, {"gamma", bath.gamma}, {"T", bath.T}};
  report["kinematics"] = dc.kinematics == Kinematics::derivative_flow ? "derivative_flow" : "free_particle";
  report["threshold"] = tau.threshold;
  report["tau_d_formula"] = tau.tau_formula;
  report["tau_d_measured"] = tau.tau_crossing;
  report["relative_error"] = tau.relative_error;
  report["tau_d_linear"] = tau.tau_linear;
  if (cat->kind == CatKind::position_cat) {
    const double slope = attenuation_slope(bath, cat->x0, units);
    const double ts = 1e-4 / bath.gamma;
    report["A0_slope_predicted"] = slope;
    report["A0_slope_measured"] = attenuation_exponent(*cat, bath, ts, dc.kinematics) / ts;
  }
  report["points"] = points;

  OutputSet out;
  out.add("attenuation.csv", csv);
  out.add("decoherence.json", dump(report));
  return out;
}

OutputSet cmd_kerr(const RunConfig& config) {
  KerrConfig kc;
  if (config.kerr) {
    kc = *config.kerr;
  } else {
    const StateSpec state = resolve_state(config);
    const auto* fock = std::get_if<FockState>(&state);
    if (!fock) fail(ErrorCode::config, "kerr needs a kerr section or a fock state");
    kc = {fock->alpha, fock->kappa_t, fock->cutoff};
  }
  const std::size_t cutoff = kc.cutoff == 0 ? min_cutoff(kc.alpha) : kc.cutoff;
  const FockVector evolved = kerr_evolve(kc.alpha, kc.kappa_t, cutoff);
  const ComponentCount count = kerr_component_count(kc.alpha, kc.kappa_t, cutoff);

  ojson report = {{"command", "kerr"},
                  {"alpha", {kc.alpha.real(), kc.alpha.imag()}},
                  {"kappa_t", kc.kappa_t},
                  {"cutoff", cutoff},
                  {"cutoff_minimum", min_cutoff(kc.alpha)},
                  {"norm_squared", evolved.norm_squared()}};
  ojson weights = ojson::array();
  for (const complex& w : count.weights) weights.push_back({w.real(), w.imag()});
  report["components"] = {{"finite", count.finite},
                          {"period", count.period},
                          {"dft_components", count.dft_components},
                          {"husimi_peaks", count.husimi_peaks},
                          {"weights", weights},
                          {"message", count.message}};
  // kappa t = 2 pi / q splits the coherent state into q components.
  if (kc.kappa_t > 0.0) {
    const double q = 2.0 * kPi / kc.kappa_t;
    if (std::abs(q - std::round(q)) < 1e-9 && q >= 1.0) report["components_predicted"] = std::lround(q);
  } else {
    report["components_predicted"] = 1;
  }
  if (std::abs(std::remainder(kc.kappa_t - kPi, 4.0 * kPi)) < 1e-12) {
    const complex i{0.0, 1.0};
    const FockVector cat = coherent_superposition(
        {{std::exp(-i * kPi / 4.0) / std::sqrt(2.0), kc.alpha}, {std::exp(i * kPi / 4.0) / std::sqrt(2.0), -kc.alpha}},
        cutoff);
    report["cat_fidelity"] = fidelity(evolved, cat);
    report["cat_fidelity_predicted"] = 1.0;
  }

  std::string csv = "n,re,im,probability\n";
  for (std::size_t n = 0; n < evolved.amplitudes.size(); ++n) {
    const complex c = evolved.amplitudes[n];
    csv += std::to_string(n) + "," + format_double(c.real()) + "," + format_double(c.imag()) + "," +
           format_double(std::norm(c)) + "\n";
  }

  OutputSet out;
  out.add("kerr_amplitudes.csv", csv);
  out.add("kerr.json", dump(report));
  return out;
}

OutputSet cmd_compare(const RunConfig& config) {
  const CompareConfig& cc = config.compare;
  std::optional<Separation> sep;
  if (config.state_json) sep = separation_of(resolve_state(config));
  auto pick = [&](const std::optional<double>& given, double Separation::*field) {
    if (given) return *given;
    if (!sep) fail(ErrorCode::config, "compare needs sigma, x0 and p0 from the compare section or a mixed state");
    return (*sep).*field;
  };
  const double sigma = pick(cc.sigma, &Separation::sigma);
  const double x0 = pick(cc.x0, &Separation::x0);
  const double p0 = pick(cc.p0, &Separation::p0);

  const UnitSystem& units = config.units;
  const CompassComparison cmp = compare_with_compass(sigma, x0, p0, units, config.sensitivity.search);
  auto result_json = [](const SensitivityResult& r) {
    return ojson{{"delta1_star", r.delta1_star}, {"delta2_star", r.delta2_star}, {"product", r.product},
                 {"overlap_at_star", r.overlap_at_star}, {"converged", r.converged}};
  };
  const double hb = units.hbar;
  ojson report = {{"command", "compare"},
                  {"units", units_json(units)},
                  {"sigma", sigma},
                  {"x0", x0},
                  {"p0", p0},
                  {"mixed", result_json(cmp.mixed)},
                  {"compass", result_json(cmp.compass)},
                  {"ratio", cmp.ratio},
                  {"ratio_bounds", {0.5, 2.0}},
                  {"within_factor_two", cmp.ratio >= 0.5 && cmp.ratio <= 2.0},
                  {"product_predicted", kPi * kPi * hb * hb / (4.0 * x0 * p0)}};

  std::string csv = "state,delta1_star,delta2_star,product,overlap_at_star,converged\n";
  for (const auto& [name, r] : {std::pair{"mixed", cmp.mixed}, {"compass", cmp.compass}}) {
    csv += std::string(name) + "," + format_double(r.delta1_star) + "," + format_double(r.delta2_star) + "," +
           format_double(r.product) + "," + format_double(r.overlap_at_star) + "," + (r.converged ? "1" : "0") + "\n";
  }

  OutputSet out;
  out.add("compare.csv", csv);
  out.add("compare.json", dump(report));
  return out;
}

OutputSet run_command(const std::string& name, const RunConfig& config) {
  validate(config);
  OutputSet all;
  if (name == "wigner") {
    all = cmd_wigner(config);
  } else if (name == "tiles") {
    all = cmd_tiles(config);
  } else if (name == "sensitivity") {
    all = cmd_sensitivity(config);
  } else if (name == "decohere") {
    all = cmd_decohere(config);
  } else if (name == "kerr") {
    all = cmd_kerr(config);
  } else if (name == "compare") {
    all = cmd_compare(config);
  } else {
    fail(ErrorCode::config, "unknown command " + name);
  }
  OutputSet kept;
  for (const auto& [file, contents] : all.files()) {
    const bool is_csv = std::filesystem::path(file).extension() == ".csv";
    if (config.format == OutputFormat::both || is_csv == (config.format == OutputFormat::csv)) kept.add(file, contents);
  }
  return kept;
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::argument: return 2;
    case ErrorCode::numeric:
    case ErrorCode::invalid_field:
    case ErrorCode::truncation:
    case ErrorCode::search: return 3;
    case ErrorCode::resolution:
    case ErrorCode::coverage:
    case ErrorCode::window: return 4;
  }
  return 3;
}

std::string error_json(std::string_view code, std::string_view message) {
  return ojson{{"error", {{"code", code}, {"message", message}}}}.dump();
}

}  // namespace phasespace::cli
