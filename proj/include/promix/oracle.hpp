#pragma once

#include <functional>
#include <vector>

#include "promix/monotone.hpp"
#include "promix/vec.hpp"

namespace promix::oracle {

// Uniform grid over a box in 1 or 2 dimensions. points_per_axis must be odd
// and >= 3 so that 0 (and box midpoints) land on a node.
struct GridSpec {
  Vec lower, upper;
  int points_per_axis = 2001;
};

void validate_grid(const GridSpec& g);
std::int64_t grid_size(const GridSpec& g);
Vec grid_point(const GridSpec& g, std::int64_t flat);

struct ConjugateResult {
  double value = 0.0;
  bool boundary = false;  // supremum attained on the outermost grid layer
  Vec argmax;
};

// sup_{y in grid} <y, xstar> - f(y). Errors if f is +infinity on the whole
// grid. The boundary flag signals likely unbounded growth past the box.
ConjugateResult grid_conjugate(const std::function<double(const Vec&)>& f,
                               const GridSpec& g, std::span<const double> xstar);

// argmin_{y in grid} f(y) + ||x - y||^2 / 2; ties resolve to the smallest
// lexicographic grid index.
Vec grid_prox(const std::function<double(const Vec&)>& f, const GridSpec& g,
              std::span<const double> x);

// min_{y in grid} f(y) + ||x - y||^2 / 2.
double grid_envelope(const std::function<double(const Vec&)>& f,
                     const GridSpec& g, std::span<const double> x);

// Solves y + gamma a(y) = x for a scalar maximally monotone variant by
// bisection on a minimal-norm selection over the operator's domain, bracket
// [x - 10(1+|x|), x + 10(1+|x|)], tolerance 1e-10. Domain endpoints absorb
// the normal-cone case. Supports the scalar-capable catalog variants.
double bisect_resolvent_1d(const MonotoneOpSpec& a, double gamma, double x);

}  // namespace promix::oracle
