#include <algorithm>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "promix/errors.hpp"
#include "promix/kernels.hpp"

namespace promix::kernels {

namespace {

// Below this many items the parallel variants fall back to the serial loop;
// results are identical either way.
constexpr std::int64_t kAtomGrain = 8;
constexpr std::int64_t kGridGrain = 4096;

void check_x(const MixtureFamily& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.x_dim) {
    throw DimensionMismatch("mixture kernel: vector dimension " +
                            std::to_string(x.size()) + ", family x_dim " +
                            std::to_string(f.x_dim));
  }
}

Vec atom_contribution(const MixtureFamily& f, std::span<const double> x,
                      const std::function<Vec(int, const Vec&)>& local, int i) {
  const Atom& a = f.atoms[static_cast<std::size_t>(i)];
  const Vec y = apply(a.linop, x);
  Vec c = apply_adjoint(a.linop, local(i, y));
  for (auto& e : c) e *= a.weight;
  return c;
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Vec weighted_adjoint_sum_serial(
    const MixtureFamily& f, std::span<const double> x,
    const std::function<Vec(int, const Vec&)>& local) {
  check_x(f, x);
  Vec out(x.size(), 0.0);
  for (int i = 0; i < static_cast<int>(f.atoms.size()); ++i) {
    axpy(1.0, atom_contribution(f, x, local, i), out);
  }
  return out;
}

Vec weighted_adjoint_sum(const MixtureFamily& f, std::span<const double> x,
                         const std::function<Vec(int, const Vec&)>& local) {
  check_x(f, x);
  const int n = static_cast<int>(f.atoms.size());
  if (n < kAtomGrain) return weighted_adjoint_sum_serial(f, x, local);
  std::vector<Vec> parts(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    parts[static_cast<std::size_t>(i)] = atom_contribution(f, x, local, i);
  }
  Vec out(x.size(), 0.0);
  for (int i = 0; i < n; ++i) axpy(1.0, parts[static_cast<std::size_t>(i)], out);
  return out;
}

double weighted_scalar_sum_serial(
    const MixtureFamily& f, std::span<const double> x,
    const std::function<double(int, const Vec&)>& local) {
  check_x(f, x);
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(f.atoms.size()); ++i) {
    const Atom& a = f.atoms[static_cast<std::size_t>(i)];
    s += a.weight * local(i, apply(a.linop, x));
  }
  return s;
}

double weighted_scalar_sum(const MixtureFamily& f, std::span<const double> x,
                           const std::function<double(int, const Vec&)>& local) {
  check_x(f, x);
  const int n = static_cast<int>(f.atoms.size());
  if (n < kAtomGrain) return weighted_scalar_sum_serial(f, x, local);
  std::vector<double> parts(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    const Atom& a = f.atoms[static_cast<std::size_t>(i)];
    parts[static_cast<std::size_t>(i)] = a.weight * local(i, apply(a.linop, x));
  }
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

namespace {

template <bool Max>
GridBest scan_serial(std::int64_t lo, std::int64_t hi,
                     const std::function<double(std::int64_t)>& h) {
  GridBest best;
  for (std::int64_t i = lo; i < hi; ++i) {
    const double v = h(i);
    const bool better =
        best.index < 0 || (Max ? v > best.value : v < best.value);
    if (better) best = GridBest{v, i};
  }
  return best;
}

template <bool Max>
GridBest scan_parallel(std::int64_t n,
                       const std::function<double(std::int64_t)>& h) {
  if (n <= 0) return GridBest{};
  if (n < kGridGrain) return scan_serial<Max>(0, n, h);
  const int chunks = std::max(1, std::min<int>(thread_count() * 4,
                                               static_cast<int>(n / kGridGrain) + 1));
  const std::int64_t step = (n + chunks - 1) / chunks;
  std::vector<GridBest> parts(static_cast<std::size_t>(chunks));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < chunks; ++c) {
    const std::int64_t lo = static_cast<std::int64_t>(c) * step;
    const std::int64_t hi = std::min<std::int64_t>(n, lo + step);
    parts[static_cast<std::size_t>(c)] = scan_serial<Max>(lo, hi, h);
  }
  // Chunks are merged in ascending index order with strict improvement only,
  // which reproduces the serial smallest-index tie-break.
  GridBest best;
  for (const GridBest& p : parts) {
    if (p.index < 0) continue;
    const bool better =
        best.index < 0 || (Max ? p.value > best.value : p.value < best.value);
    if (better) best = p;
  }
  return best;
}

}  // namespace

GridBest grid_max_serial(std::int64_t n,
                         const std::function<double(std::int64_t)>& h) {
  return scan_serial<true>(0, n, h);
}

GridBest grid_max(std::int64_t n, const std::function<double(std::int64_t)>& h) {
  return scan_parallel<true>(n, h);
}

GridBest grid_min_serial(std::int64_t n,
                         const std::function<double(std::int64_t)>& h) {
  return scan_serial<false>(0, n, h);
}

GridBest grid_min(std::int64_t n, const std::function<double(std::int64_t)>& h) {
  return scan_parallel<false>(n, h);
}

}  // namespace promix::kernels
