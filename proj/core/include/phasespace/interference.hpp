#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/units.hpp"

namespace phasespace {

// Bracketed factor of W_rho = (2 pi hbar)^-1 exp(-2 p^2 sigma^2/hbar^2 - x^2/2 sigma^2) * [...].
double zero_condition_residual(double sigma, double x0, double p0, double x, double p,
                               const UnitSystem& units = {});

// True when exp(-x0^2/2 sigma^2) and exp(-2 p0^2 sigma^2/hbar^2) are both below 1e-8.
bool large_separation(double sigma, double x0, double p0, const UnitSystem& units = {});

enum class LatticeGeometry {
  none,         // no interference structure near the origin
  stripes_x,    // sign changes along x only
  stripes_p,    // sign changes along p only
  rectangular,  // sign changes along both axes
  diamond,      // diagonal zero lines, axes touch zero (mixed / compass chess board)
};

std::string to_string(LatticeGeometry g);

struct ZeroLattice {
  std::vector<double> x_lines;  // strictly increasing, +- pairs
  std::vector<double> p_lines;
  int n_max = 0;                // lines per half-axis
  LatticeGeometry geometry = LatticeGeometry::none;
  double x_touch = 0.0;         // first double zero on the x axis (diamond only)
  double p_touch = 0.0;
};

struct LatticeOptions {
  PointFunction refine;               // analytic evaluator for bisection; bilinear sampling if empty
  int min_nodes_per_half_period = 8;
  double touch_fraction = 1e-3;       // |W(touch)| <= fraction * |W(0,0)|
  double tolerance = 1e-10;
  double envelope_x = 0.0;            // scan half-widths; 0 means the grid edge
  double envelope_p = 0.0;
};

ZeroLattice find_zero_lattice(const WignerField& field, const LatticeOptions& options = {});

// Lines x_n = (2n+1) pi hbar/(4 p0), p_n = (2n+1) pi hbar/(4 x0), n = 0..n_max-1, with mirrors.
ZeroLattice predicted_lattice(double x0, double p0, int n_max, const UnitSystem& units = {});

// pi^2 hbar^2 / (16 x0 p0)
double predicted_tile_area(double x0, double p0, const UnitSystem& units = {});

struct TileArea {
  double measured = 0.0;           // x_0 * p_0 of the first positive lines
  double gap_product = 0.0;        // central x gap * central p gap (= 4 * measured on a uniform lattice)
  std::vector<double> tile_areas;  // gap_x * gap_p / 4 for every pair of adjacent-line gaps
  double spread = 0.0;             // (max - min) / mean of tile_areas
};

TileArea tile_area(const ZeroLattice& lattice);

struct Tile {
  double x_center = 0.0;
  double p_center = 0.0;
  double area = 0.0;
  int sign = 0;
};

struct CheckerboardReport {
  LatticeGeometry geometry = LatticeGeometry::none;
  std::vector<Tile> tiles;
  int positive = 0;
  int negative = 0;
  bool alternates = true;
};

// Tiles of the detected lattice whose centers lie within |x| < envelope_x, |p| < envelope_p.
CheckerboardReport checkerboard_report(const WignerField& field, const ZeroLattice& lattice,
                                       double envelope_x, double envelope_p,
                                       const PointFunction& evaluator = {});

}  // namespace phasespace
