// Acceptance checks. Each criterion prints one line:
//   criterion N: PASS|FAIL  <measured values against their targets>
// and the process exits non-zero if any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "phasespace/decoherence.hpp"
#include "phasespace/field_io.hpp"
#include "phasespace/interference.hpp"
#include "phasespace/kerr.hpp"
#include "phasespace/metrology.hpp"
#include "phasespace/parallel.hpp"
#include "phasespace/quadrature.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSigma = 0.5;
constexpr double kX0 = 4.5;
constexpr double kP0 = 10.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records one sub-check; the criterion passes only if every sub-check does.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [fail]");
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

StateSpec reference_mixture() { return make_mixed(make_cat_position(kSigma, kX0), make_cat_momentum(kSigma, kP0), 0.5); }

double max_oracle_diff(const StateSpec& s, const PhaseSpaceGrid& grid) {
  const auto cf = closed_form_for(s);
  if (!cf) throw std::logic_error("closed form expected");
  return compare_fields(closed_form_field(*cf, grid), wigner_transform(s, grid)).max_abs_diff;
}

ZeroLattice central_lattice(const StateSpec& s, double x0, double p0, std::size_t n = 241) {
  const double tx = kPi / (2.0 * p0);
  const double tp = kPi / (2.0 * x0);
  const PhaseSpaceGrid grid = linspace_grid({-4.0 * tx, 4.0 * tx, -4.0 * tp, 4.0 * tp}, n, n);
  LatticeOptions opt;
  opt.refine = wigner_point_function(s);
  opt.tolerance = 1e-12;
  return find_zero_lattice(wigner_field(s, grid), opt);
}

// 1. Closed forms against the defining-integral transform.
void oracle_equivalence(Outcome& o) {
  const StateSpec mix = reference_mixture();
  const PhaseSpaceGrid grid = linspace_grid(default_window(mix), 601, 601);
  double worst_fig = 0.0;
  for (const StateSpec& s : {StateSpec{make_cat_position(kSigma, kX0)}, StateSpec{make_cat_momentum(kSigma, kP0)}, mix}) {
    worst_fig = std::max(worst_fig, max_oracle_diff(s, grid));
  }
  o.check(worst_fig < 1e-8, "sigma 0.5, x0 4.5, p0 10, 601x601: max|dW| = " + fmt(worst_fig, 3) + " (< 1e-8)");

  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> sig(0.1, 2.0);
  std::uniform_real_distribution<double> xs(0.0, 10.0);
  std::uniform_real_distribution<double> ps(0.0, 20.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double s = sig(rng);
    const double x0 = xs(rng);
    const double p0 = ps(rng);
    const StateSpec mixed = make_mixed(make_cat_position(s, x0), make_cat_momentum(s, p0), 0.5);
    const PhaseSpaceGrid g = linspace_grid(default_window(mixed), 201, 201);
    for (const StateSpec& st : {StateSpec{make_cat_position(s, x0)}, StateSpec{make_cat_momentum(s, p0)}, mixed}) {
      worst = std::max(worst, max_oracle_diff(st, g));
    }
  }
  o.check(worst < 1e-6, "20 seeded draws, 201x201: worst max|dW| = " + fmt(worst, 3) + " (< 1e-6)");
}

// 2. Normalization and purity of W_rho.
void normalization(Outcome& o) {
  const StateSpec mix = reference_mixture();
  const WignerField w = wigner_field(mix, linspace_grid(default_window(mix), 401, 401));
  const double integral = integrate_2d(w);
  const double purity = 2.0 * kPi * integrate_product(w, w);
  o.check(std::abs(integral - 1.0) < 1e-6, "integral = " + fmt(integral, 12) + " (1 +- 1e-6)");
  o.check(std::abs(purity - 0.5) < 1e-3, "purity = " + fmt(purity, 10) + " (0.5 +- 1e-3)");
}

// 3. First zero lines against pi hbar/(4 p0) and pi hbar/(4 x0).
void zero_lattice(Outcome& o) {
  const ZeroLattice lat = central_lattice(reference_mixture(), kX0, kP0);
  const double dx = 2.0 * 4.0 * kPi / (2.0 * kP0) / 240.0;
  const double dp = 2.0 * 4.0 * kPi / (2.0 * kX0) / 240.0;
  auto first = [](const std::vector<double>& v) {
    for (double x : v) {
      if (x > 0.0) return x;
    }
    return 0.0;
  };
  const double x1 = first(lat.x_lines);
  const double p1 = first(lat.p_lines);
  const double xp = kPi / (4.0 * kP0);
  const double pp = kPi / (4.0 * kX0);
  o.check(lat.geometry == LatticeGeometry::diamond, "geometry = " + to_string(lat.geometry));
  o.check(std::abs(x1 - xp) < 0.5 * dx && std::abs(x1 - xp) < 1e-6,
          "x line = " + fmt(x1, 10) + " vs pi/(4 p0) = " + fmt(xp, 10) + " (|d| = " + fmt(std::abs(x1 - xp), 2) + ")");
  o.check(std::abs(p1 - pp) < 0.5 * dp && std::abs(p1 - pp) < 1e-6,
          "p line = " + fmt(p1, 10) + " vs pi/(4 x0) = " + fmt(pp, 10) + " (|d| = " + fmt(std::abs(p1 - pp), 2) + ")");
}

// 4. Central tile area and its inverse scaling with x0 p0.
void tile_scaling(Outcome& o) {
  const double a = tile_area(central_lattice(reference_mixture(), kX0, kP0)).measured;
  o.check(std::abs(a / 0.013707 - 1.0) < 0.02, "tile area = " + fmt(a, 8) + " vs 0.013707 (2%)");
  std::vector<double> lx;
  std::vector<double> ly;
  for (double p0 : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    const StateSpec s = make_mixed(make_cat_position(kSigma, kX0), make_cat_momentum(kSigma, p0), 0.5);
    lx.push_back(std::log(kX0 * p0));
    ly.push_back(std::log(tile_area(central_lattice(s, kX0, p0)).measured));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3] + lx[4]) / 5.0;
  const double my = (ly[0] + ly[1] + ly[2] + ly[3] + ly[4]) / 5.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  o.check(std::abs(slope + 1.0) < 0.02, "log-log slope over x0 p0 in {22.5..360} = " + fmt(slope, 8) + " (-1 +- 0.02)");
}

// 5. Orthogonality under small displacements.
void sensitivity(Outcome& o) {
  const StateSpec mix = reference_mixture();
  const OverlapEvaluator overlap(field_function(mix), overlap_grid(mix));
  const SensitivityResult r = find_orthogonality(overlap, SearchMode::joint, default_bracket(kX0, kP0));
  const double d1 = kPi / (2.0 * kX0);
  const double d2 = kPi / (4.0 * kP0);
  const double prod = kPi * kPi / (8.0 * kX0 * kP0);
  o.check(std::abs(r.overlap_at_star) < 0.02, "|O| = " + fmt(std::abs(r.overlap_at_star), 3) + " at the search minimum (< 0.02)");
  o.check(std::abs(r.delta1_star / d1 - 1.0) < 0.02, "delta1* = " + fmt(r.delta1_star) + " vs " + fmt(d1) + " (2%)");
  o.check(std::abs(r.delta2_star / d2 - 1.0) < 0.02, "delta2* = " + fmt(r.delta2_star) + " vs " + fmt(d2) + " (2%)");
  o.check(std::abs(r.product / prod - 1.0) < 0.05, "product = " + fmt(r.product) + " vs " + fmt(prod) + " (5%)");
  o.detail << "; |O| at (" << fmt(d1) << ", " << fmt(d2) << ") = " << fmt(std::abs(overlap.unit(d1, d2)), 4);
}

// 6. Compass against mixed sensitivity product.
void compass_parity(Outcome& o) {
  const CompassComparison c = compare_with_compass(kSigma, kX0, kP0);
  o.check(c.mixed.converged && c.compass.converged, std::string("searches converged = ") +
                                                        (c.mixed.converged ? "yes" : "no") + "/" +
                                                        (c.compass.converged ? "yes" : "no"));
  o.check(c.ratio >= 0.5 && c.ratio <= 2.0, "compass/mixed product = " + fmt(c.compass.product) + "/" +
                                                fmt(c.mixed.product) + " = " + fmt(c.ratio) + " (within x2)");
}

// 7. Kerr half-revival cat and quarter-revival compass.
void kerr(Outcome& o) {
  const complex alpha{2.0, 0.0};
  const complex i{0.0, 1.0};
  const FockVector evolved = kerr_evolve(alpha, kPi, 32);
  const FockVector cat = coherent_superposition(
      {{std::exp(-i * kPi / 4.0) / std::sqrt(2.0), alpha}, {std::exp(i * kPi / 4.0) / std::sqrt(2.0), -alpha}}, 32);
  const double f = fidelity(evolved, cat);
  o.check(f >= 1.0 - 1e-8, "kappa t = pi, cutoff 32: 1 - F = " + fmt(1.0 - f, 3) + " (<= 1e-8)");
  const ComponentCount q = kerr_component_count(alpha, kPi / 2.0, 32);
  o.check(q.finite && q.dft_components == 4 && q.husimi_peaks == 4,
          "kappa t = pi/2: " + std::to_string(q.dft_components) + " components, " + std::to_string(q.husimi_peaks) +
              " Husimi peaks (4)");
}

// 8. Attenuation, visibility and decoherence times.
void decoherence(Outcome& o) {
  const BathParams bath{1.0, 0.1, 10.0};
  const CatSpec cat = make_cat_position(kSigma, kX0);
  o.check(attenuation_exponent(cat, bath, 0.0) == 0.0, "A0(0) = " + fmt(attenuation_exponent(cat, bath, 0.0)));
  const double ts = 1e-4 / bath.gamma;
  const double slope = attenuation_exponent(cat, bath, ts) / ts;
  const double slope_pred = attenuation_slope(bath, kX0);
  o.check(std::abs(slope / slope_pred - 1.0) < 0.02, "slope = " + fmt(slope) + " vs " + fmt(slope_pred) + " (2%)");

  EvolutionGridOptions opt;
  opt.n = 512;
  double worst = 0.0;
  for (double gt : {0.001, 0.01, 0.05}) {
    const double t = gt / bath.gamma;
    const double v = central_visibility(cat, bath, t, opt);
    worst = std::max(worst, std::abs(v / std::exp(-attenuation_exponent(cat, bath, t)) - 1.0));
  }
  o.check(worst < 0.05, "FFT visibility / exp(-A0) worst deviation = " + fmt(worst, 3) + " (5%)");

  const DecoherenceTime t1 = decoherence_time(cat, bath);
  const bool short_regime = bath.gamma * t1.tau_formula < 0.1;
  o.check(short_regime && std::abs(t1.relative_error) < 0.1,
          "tau1 crossing = " + fmt(t1.tau_crossing) + " vs " + fmt(t1.tau_formula) + " (10%)");

  const DecoherenceTime t2 = decoherence_time(make_cat_momentum(kSigma, kP0), bath);
  o.check(std::abs(t2.relative_error) < 0.15,
          "tau2 crossing = " + fmt(t2.tau_crossing) + " vs " + fmt(t2.tau_formula) + " (15%)");
}

// 9. Vanishing coupling reduces to the free shear.
void free_limit(Outcome& o) {
  const BathParams bath{1.0, 1e-12, 10.0};
  const double t = 0.5;
  double worst = 0.0;
  for (const CatSpec& cat : {make_cat_position(kSigma, kX0), make_cat_momentum(kSigma, kP0)}) {
    EvolutionGridOptions opt;
    opt.n = 1024;
    const WignerField w = evolved_wigner(cat, bath, t, opt);
    const ClosedFormWigner w0 = *closed_form_for(StateSpec{cat});
    const WignerField shear = sample_field(w.grid, [&](double x, double p) { return w0(x - p * t / bath.m, p); });
    worst = std::max(worst, compare_fields(w, shear).max_abs_diff);
  }
  o.check(worst < 1e-6, "gamma = 1e-12, t = 0.5: max|W - W0(x - p t/m, p)| = " + fmt(worst, 3) + " (< 1e-6)");
}

// 10. Byte-identical command outputs at 1, 2 and 8 threads.
void determinism(Outcome& o) {
  const std::string mixed = R"({"type": "mixed", "probability": 0.5, "branches": [
      {"type": "cat", "axis": "position", "sigma": 0.5, "x0": 4.5},
      {"type": "cat", "axis": "momentum", "sigma": 0.5, "p0": 10.0}]})";
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"wigner", R"({"state": )" + mixed + R"(, "grid": {"x_min": -9, "x_max": 9, "p_min": -18, "p_max": 18, "nx": 201, "np": 201},
                   "wigner": {"compare_oracle": true}})"},
      {"tiles", R"({"state": )" + mixed + "}"},
      {"decohere", R"({"state": {"type": "cat", "axis": "position", "sigma": 0.5, "x0": 4.5},
                     "decohere": {"m": 1, "gamma": 0.1, "T": 10}})"},
      {"kerr", R"({"kerr": {"alpha": [2, 0], "kappa_t": 1.5707963267948966}})"},
  };
  const int before = num_threads();
  int identical = 0;
  for (const auto& [command, text] : runs) {
    const cli::RunConfig config = cli::parse_config(text);
    std::vector<std::vector<std::pair<std::string, std::string>>> outputs;
    for (int threads : {1, 2, 8}) {
      set_num_threads(threads);
      outputs.push_back(cli::run_command(command, config).files());
    }
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    identical += same ? 1 : 0;
    o.check(same, command + (same ? " identical" : " differs"));
  }
  set_num_threads(before);
  o.detail << " (" << identical << "/" << runs.size() << " commands)";
}

const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> kCriteria = {
    {"oracle equivalence", oracle_equivalence},
    {"normalization and purity", normalization},
    {"zero lattice", zero_lattice},
    {"tile area", tile_scaling},
    {"sensitivity", sensitivity},
    {"compass parity", compass_parity},
    {"Kerr preparation", kerr},
    {"decoherence", decoherence},
    {"free-particle limit", free_limit},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10); all when omitted")
      ->check(CLI::Range(1, static_cast<int>(kCriteria.size())));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (std::size_t k = 0; k < kCriteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome o;
    try {
      kCriteria[k].second(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    all_pass = all_pass && o.pass;
    std::cout << "criterion " << k + 1 << " (" << kCriteria[k].first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail.str() << std::endl;
  }
  return all_pass ? 0 : 1;
}
