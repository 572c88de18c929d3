#include <doctest.h>

#include <cmath>
#include <cstring>

#include "promix/family.hpp"
#include "promix/kernels.hpp"
#include "promix/mixtures.hpp"
#include "promix/rng.hpp"
#include "promix/verify.hpp"

#include "test_util.hpp"

using namespace promix;

namespace {

bool bit_equal(const Vec& a, const Vec& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

MixtureFamily wide_family(Rng& rng, int x_dim, int n_atoms) {
  std::vector<Atom> atoms;
  for (int i = 0; i < n_atoms; ++i) {
    Rng gen = rng.child(static_cast<std::uint64_t>(i) + 100);
    std::vector<Vec> rows;
    const int r = gen.range(1, 3);
    for (int k = 0; k < r; ++k) {
      rows.push_back(gen.normal_vec(static_cast<std::size_t>(x_dim)));
    }
    atoms.push_back(Atom{gen.uniform(0.2, 1.0), LinOp::from_rows(rows),
                         PayloadSpec{random_monotone_op(gen, r)}});
  }
  MixtureFamily raw;
  raw.x_dim = x_dim;
  raw.atoms = std::move(atoms);
  return rescale_to_admissible(raw);
}

}  // namespace

TEST_CASE("parallel weighted adjoint sum is bit-identical to serial") {
  Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    Rng gen = rng.child(static_cast<std::uint64_t>(trial));
    const int dim = 5;
    const MixtureFamily f = wide_family(gen, dim, 13);
    const auto local = [&](int i, const Vec& y) {
      return resolvent(monotone_payload(f.atoms[static_cast<std::size_t>(i)]),
                       1.0, y);
    };
    for (int t = 0; t < 10; ++t) {
      const Vec x = gen.uniform_vec(dim, -5.0, 5.0);
      const Vec par = kernels::weighted_adjoint_sum(f, x, local);
      const Vec ser = kernels::weighted_adjoint_sum_serial(f, x, local);
      CHECK(bit_equal(par, ser));
    }
  }
}

TEST_CASE("parallel weighted scalar sum is bit-identical to serial") {
  Rng rng(73);
  const MixtureFamily f = wide_family(rng, 4, 17);
  const auto local = [&](int i, const Vec& y) {
    (void)i;
    return half_sqnorm(y) + std::sin(y[0]);
  };
  for (int t = 0; t < 10; ++t) {
    const Vec x = rng.uniform_vec(4, -5.0, 5.0);
    const double par = kernels::weighted_scalar_sum(f, x, local);
    const double ser = kernels::weighted_scalar_sum_serial(f, x, local);
    CHECK(std::memcmp(&par, &ser, sizeof(double)) == 0);
  }
}

TEST_CASE("parallel grid extrema are bit-identical to serial") {
  const auto h = [](std::int64_t i) {
    // Plateaus force tie-breaking; the smallest index must win.
    return std::floor(std::sin(static_cast<double>(i) * 0.001) * 8.0);
  };
  for (std::int64_t n : {5, 4095, 4096, 50001}) {
    const auto pmax = kernels::grid_max(n, h);
    const auto smax = kernels::grid_max_serial(n, h);
    CHECK(pmax.value == smax.value);
    CHECK(pmax.index == smax.index);
    const auto pmin = kernels::grid_min(n, h);
    const auto smin = kernels::grid_min_serial(n, h);
    CHECK(pmin.value == smin.value);
    CHECK(pmin.index == smin.index);
  }
  CHECK(kernels::thread_count() >= 1);
}

TEST_CASE("tie resolution picks the smallest flat index") {
  const auto flat = [](std::int64_t) { return 1.0; };
  CHECK(kernels::grid_max(10000, flat).index == 0);
  CHECK(kernels::grid_min(10000, flat).index == 0);
  const auto two_peaks = [](std::int64_t i) {
    return (i == 5000 || i == 7000) ? 2.0 : 0.0;
  };
  CHECK(kernels::grid_max(10000, two_peaks).index == 5000);
}

TEST_CASE("mixture evaluation is reproducible call to call") {
  Rng rng(79);
  const MixtureFamily f = wide_family(rng, 6, 12);
  const Vec x = rng.uniform_vec(6, -3.0, 3.0);
  const Vec a = resolvent_mixture(f, x);
  const Vec b = resolvent_mixture(f, x);
  CHECK(bit_equal(a, b));
}
