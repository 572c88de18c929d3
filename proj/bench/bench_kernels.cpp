// Parallel kernels against their serial reference twins.
// Run with --benchmark_filter=... to narrow; results are wall time per call.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "promix/family.hpp"
#include "promix/kernels.hpp"
#include "promix/mixtures.hpp"
#include "promix/monotone.hpp"
#include "promix/rng.hpp"
#include "promix/verify.hpp"

namespace {

using namespace promix;

MixtureFamily wide_family(std::uint64_t seed, int x_dim, int n_atoms) {
  Rng rng(seed);
  MixtureFamily raw;
  raw.x_dim = x_dim;
  for (int i = 0; i < n_atoms; ++i) {
    const int rows = rng.range(1, 3);
    std::vector<Vec> rv;
    for (int r = 0; r < rows; ++r) {
      rv.push_back(rng.uniform_vec(static_cast<std::size_t>(x_dim), -1.0, 1.0));
    }
    raw.atoms.push_back(Atom{1.0 / n_atoms, LinOp::from_rows(rv),
                             PayloadSpec{random_monotone_op(rng, rows)}});
  }
  return rescale_to_admissible(raw);
}

void bm_adjoint_sum_serial(benchmark::State& state) {
  const MixtureFamily f = wide_family(7, 16, static_cast<int>(state.range(0)));
  Rng rng(8);
  const Vec x = rng.uniform_vec(16, -4.0, 4.0);
  const auto local = [&](int i, const Vec& y) {
    return resolvent(monotone_payload(f.atoms[static_cast<std::size_t>(i)]),
                     1.0, y);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_adjoint_sum_serial(f, x, local));
  }
}

void bm_adjoint_sum_parallel(benchmark::State& state) {
  const MixtureFamily f = wide_family(7, 16, static_cast<int>(state.range(0)));
  Rng rng(8);
  const Vec x = rng.uniform_vec(16, -4.0, 4.0);
  const auto local = [&](int i, const Vec& y) {
    return resolvent(monotone_payload(f.atoms[static_cast<std::size_t>(i)]),
                     1.0, y);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_adjoint_sum(f, x, local));
  }
}

void bm_resolvent_mixture(benchmark::State& state) {
  const MixtureFamily f = wide_family(7, 16, static_cast<int>(state.range(0)));
  Rng rng(8);
  const Vec x = rng.uniform_vec(16, -4.0, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolvent_mixture(f, x));
  }
}

double plateau(std::int64_t i) {
  return std::floor(std::sin(static_cast<double>(i) * 0.001) * 8.0);
}

void bm_grid_max_serial(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::grid_max_serial(n, plateau));
  }
}

void bm_grid_max_parallel(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::grid_max(n, plateau));
  }
}

}  // namespace

BENCHMARK(bm_adjoint_sum_serial)->Arg(8)->Arg(64)->Arg(512);
BENCHMARK(bm_adjoint_sum_parallel)->Arg(8)->Arg(64)->Arg(512);
BENCHMARK(bm_resolvent_mixture)->Arg(8)->Arg(64)->Arg(512);
BENCHMARK(bm_grid_max_serial)->Arg(4096)->Arg(262144)->Arg(2097152);
BENCHMARK(bm_grid_max_parallel)->Arg(4096)->Arg(262144)->Arg(2097152);

BENCHMARK_MAIN();
