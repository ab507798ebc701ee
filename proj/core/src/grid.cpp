#include "phasespace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/parallel.hpp"

namespace phasespace {

namespace {

bool finite_bounds(const Bounds& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.x_max) && std::isfinite(b.p_min) && std::isfinite(b.p_max);
}

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(Bounds bounds, std::size_t nx, std::size_t np)
    : bounds_(bounds), nx_(nx), np_(np) {
  require(finite_bounds(bounds), ErrorCode::argument, "grid bounds must be finite");
  require(bounds.x_min < bounds.x_max, ErrorCode::argument, "grid requires x_min < x_max");
  require(bounds.p_min < bounds.p_max, ErrorCode::argument, "grid requires p_min < p_max");
  require(nx >= 2 && np >= 2, ErrorCode::argument, "grid requires at least 2 nodes per axis");
}

PhaseSpaceGrid PhaseSpaceGrid::shifted(double shift_x, double shift_p) const {
  Bounds b = bounds_;
  b.x_min += shift_x;
  b.x_max += shift_x;
  b.p_min += shift_p;
  b.p_max += shift_p;
  return PhaseSpaceGrid(b, nx_, np_);
}

PhaseSpaceGrid linspace_grid(Bounds bounds, std::size_t nx, std::size_t np) {
  return PhaseSpaceGrid(bounds, nx, np);
}

WignerField::WignerField(PhaseSpaceGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  require(values.size() == grid.size(), ErrorCode::invalid_field,
          "field has " + std::to_string(values.size()) + " values for " + std::to_string(grid.size()) +
              " grid nodes");
}

double WignerField::min() const { return *std::min_element(values.begin(), values.end()); }

double WignerField::max() const { return *std::max_element(values.begin(), values.end()); }

bool WignerField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

WignerField sample_field(const PhaseSpaceGrid& grid, const PointFunction& fn) {
  WignerField field(grid);
  parallel_for(grid.nx(), [&](std::size_t i) {
    const double x = grid.x(i);
    for (std::size_t j = 0; j < grid.np(); ++j) field.at(i, j) = fn(x, grid.p(j));
  });
  return field;
}

double interpolate(const WignerField& field, double x, double p) {
  const auto& g = field.grid;
  if (!g.contains(x, p)) return 0.0;
  const double fx = (x - g.bounds().x_min) / g.dx();
  const double fp = (p - g.bounds().p_min) / g.dp();
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(fx), g.nx() - 2);
  const auto j = std::min<std::size_t>(static_cast<std::size_t>(fp), g.np() - 2);
  const double tx = fx - static_cast<double>(i);
  const double tp = fp - static_cast<double>(j);
  return (1 - tx) * (1 - tp) * field.at(i, j) + tx * (1 - tp) * field.at(i + 1, j) +
         (1 - tx) * tp * field.at(i, j + 1) + tx * tp * field.at(i + 1, j + 1);
}

WignerField combine(double a, const WignerField& f, double b, const WignerField& g) {
  require(f.grid == g.grid, ErrorCode::argument, "combine requires identical grids");
  WignerField out(f.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a * f.values[k] + b * g.values[k];
  return out;
}

}  // namespace phasespace
