#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "promix/family.hpp"
#include "promix/vec.hpp"

namespace promix::kernels {

// Data-parallel primitives behind the mixture operations and the grid oracle.
// Each has an OpenMP variant and a serial reference twin. Parallel variants
// compute per-item results into indexed storage and reduce serially in
// ascending index order, so outputs are bit-identical to the serial reference
// for any thread count.

// sum_i w_i L_i^T local(i, L_i x); the kernel evaluates y_i = L_i x itself.
Vec weighted_adjoint_sum(
    const MixtureFamily& f, std::span<const double> x,
    const std::function<Vec(int, const Vec&)>& local);
Vec weighted_adjoint_sum_serial(
    const MixtureFamily& f, std::span<const double> x,
    const std::function<Vec(int, const Vec&)>& local);

// sum_i w_i local(i, L_i x).
double weighted_scalar_sum(
    const MixtureFamily& f, std::span<const double> x,
    const std::function<double(int, const Vec&)>& local);
double weighted_scalar_sum_serial(
    const MixtureFamily& f, std::span<const double> x,
    const std::function<double(int, const Vec&)>& local);

struct GridBest {
  double value = 0.0;
  std::int64_t index = -1;
};

// Extremum of h over flat indices [0, n); ties resolve to the smallest index.
GridBest grid_max(std::int64_t n, const std::function<double(std::int64_t)>& h);
GridBest grid_max_serial(std::int64_t n,
                         const std::function<double(std::int64_t)>& h);
GridBest grid_min(std::int64_t n, const std::function<double(std::int64_t)>& h);
GridBest grid_min_serial(std::int64_t n,
                         const std::function<double(std::int64_t)>& h);

int thread_count();

}  // namespace promix::kernels
