#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "phasespace/grid.hpp"

namespace phasespace {

enum class QuadratureRule { trapezoid, simpson, gauss_hermite };

struct Rule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;  // weights * exp(t^2), finite at high order
};

// Uniform-spacing weights for n samples with step h.
std::vector<double> trapezoid_weights(std::size_t n, double h);
// Composite Simpson; an even sample count closes with a 3/8 panel.
std::vector<double> simpson_weights(std::size_t n, double h);

// Nodes/weights for the weight function exp(-t^2). order >= 16.
Rule1d gauss_hermite(std::size_t order);

// int f(x) dx with f ~ Gaussian around center with scale s, via x = center + s*t.
double integrate_gauss_hermite(const std::function<double(double)>& f, double center, double scale,
                               std::size_t order = 64);

// Double integral of a sampled field. Gauss-Hermite is rejected (needs scattered nodes).
double integrate_2d(const WignerField& field, QuadratureRule rule = QuadratureRule::trapezoid);

// Weighted inner product sum_ij w_i w_j a_ij b_ij on fields sharing a node layout.
double integrate_product(const WignerField& a, const WignerField& b,
                         QuadratureRule rule = QuadratureRule::trapezoid);

}  // namespace phasespace
