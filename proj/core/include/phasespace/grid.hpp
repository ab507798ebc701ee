#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace phasespace {

struct Bounds {
  double x_min = 0.0;
  double x_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Uniform rectangular (x, p) lattice with both endpoints included.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(Bounds bounds, std::size_t nx, std::size_t np);

  const Bounds& bounds() const noexcept { return bounds_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t np() const noexcept { return np_; }
  std::size_t size() const noexcept { return nx_ * np_; }

  double dx() const noexcept { return (bounds_.x_max - bounds_.x_min) / static_cast<double>(nx_ - 1); }
  double dp() const noexcept { return (bounds_.p_max - bounds_.p_min) / static_cast<double>(np_ - 1); }
  double x(std::size_t i) const noexcept { return bounds_.x_min + static_cast<double>(i) * dx(); }
  double p(std::size_t j) const noexcept { return bounds_.p_min + static_cast<double>(j) * dp(); }

  // Row-major, x-major: all p samples of x(0) first.
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * np_ + j; }

  bool contains(double x, double p) const noexcept {
    return x >= bounds_.x_min && x <= bounds_.x_max && p >= bounds_.p_min && p <= bounds_.p_max;
  }

  // Same spacing and counts, translated by (shift_x, shift_p).
  PhaseSpaceGrid shifted(double shift_x, double shift_p) const;

  friend bool operator==(const PhaseSpaceGrid&, const PhaseSpaceGrid&) = default;

 private:
  Bounds bounds_;
  std::size_t nx_;
  std::size_t np_;
};

PhaseSpaceGrid linspace_grid(Bounds bounds, std::size_t nx, std::size_t np);

/// Scalar Wigner samples on a grid.
struct WignerField {
  PhaseSpaceGrid grid;
  std::vector<double> values;

  explicit WignerField(PhaseSpaceGrid g) : grid(g), values(g.size(), 0.0) {}
  WignerField(PhaseSpaceGrid g, std::vector<double> v);

  double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }

  double min() const;
  double max() const;
  bool all_finite() const;
};

using PointFunction = std::function<double(double x, double p)>;

// Fills a field by evaluating fn at every node (parallel over x rows).
WignerField sample_field(const PhaseSpaceGrid& grid, const PointFunction& fn);

// Bilinear interpolation; returns 0 outside the grid.
double interpolate(const WignerField& field, double x, double p);

// a*F + b*G on identical grids.
WignerField combine(double a, const WignerField& f, double b, const WignerField& g);

}  // namespace phasespace
