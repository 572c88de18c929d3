#include <doctest.h>

#include <cmath>

#include "promix/convex.hpp"
#include "promix/errors.hpp"
#include "promix/monotone.hpp"
#include "promix/oracle.hpp"
#include "promix/rng.hpp"
#include "promix/vec.hpp"

using namespace promix;
using oracle::GridSpec;

namespace {

GridSpec grid_1d(double half_width, int points) {
  return GridSpec{Vec{-half_width}, Vec{half_width}, points};
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(oracle::validate_grid(GridSpec{Vec{-1.0}, Vec{1.0}, 4}),
                  InvalidParameter);
  CHECK_THROWS_AS(oracle::validate_grid(GridSpec{Vec{-1.0}, Vec{1.0}, 1}),
                  InvalidParameter);
  CHECK_THROWS_AS(
      oracle::validate_grid(GridSpec{Vec{1.0}, Vec{-1.0}, 5}),
      InvalidParameter);
  CHECK_THROWS_AS(oracle::validate_grid(
                      GridSpec{Vec{0.0, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}, 5}),
                  InvalidParameter);
  const GridSpec g{Vec{-1.0, 0.0}, Vec{1.0, 2.0}, 5};
  CHECK(oracle::grid_size(g) == 25);
  CHECK(oracle::grid_point(g, 0) == Vec{-1.0, 0.0});
  CHECK(oracle::grid_point(g, 24) == Vec{1.0, 2.0});
}

TEST_CASE("grid conjugate of the kernel is the kernel on nodes") {
  const GridSpec g = grid_1d(8.0, 1601);  // step 0.01
  const auto q = [](const Vec& y) { return half_sqnorm(y); };
  for (double s : {0.0, 0.5, -2.0, 3.25}) {
    const auto r = oracle::grid_conjugate(q, g, Vec{s});
    CHECK(std::abs(r.value - s * s / 2.0) < 1e-12);
    CHECK_FALSE(r.boundary);
  }
  // Slope past the box pushes the argmax onto the outer layer.
  const auto far = oracle::grid_conjugate(q, g, Vec{10.0});
  CHECK(far.boundary);
}

TEST_CASE("grid conjugate flags linear growth") {
  const auto zero = [](const Vec&) { return 0.0; };
  const GridSpec g = grid_1d(8.0, 1601);
  const auto r = oracle::grid_conjugate(zero, g, Vec{0.5});
  CHECK(r.boundary);
  CHECK(r.value == doctest::Approx(4.0));
  const auto at0 = oracle::grid_conjugate(zero, g, Vec{0.0});
  CHECK(at0.value == 0.0);
}

TEST_CASE("grid prox and envelope of the absolute value") {
  const GridSpec g = grid_1d(8.0, 1601);
  const auto f = [](const Vec& y) { return std::abs(y[0]); };
  CHECK(oracle::grid_prox(f, g, Vec{3.0})[0] == doctest::Approx(2.0));
  CHECK(oracle::grid_prox(f, g, Vec{-0.4})[0] == doctest::Approx(0.0));
  CHECK(oracle::grid_envelope(f, g, Vec{3.0}) == doctest::Approx(2.5));
  CHECK(oracle::grid_envelope(f, g, Vec{0.25}) ==
        doctest::Approx(0.25 * 0.25 / 2.0));
}

TEST_CASE("grid oracles reject all-infinite functions") {
  const auto inf = [](const Vec&) { return kInf; };
  const GridSpec g = grid_1d(1.0, 5);
  CHECK_THROWS_AS(oracle::grid_prox(inf, g, Vec{0.0}), ValidationError);
  CHECK_THROWS_AS(oracle::grid_conjugate(inf, g, Vec{0.0}), ValidationError);
}

TEST_CASE("two dimensional grid prox") {
  const GridSpec g{Vec{-4.0, -4.0}, Vec{4.0, 4.0}, 161};  // step 0.05
  const auto f = [](const Vec& y) {
    return std::abs(y[0]) + std::abs(y[1]);
  };
  const Vec p = oracle::grid_prox(f, g, Vec{2.0, -0.5});
  CHECK(std::abs(p[0] - 1.0) < 1e-12);
  CHECK(std::abs(p[1]) < 1e-12);
}

TEST_CASE("bisection resolvent matches closed forms") {
  Rng rng(61);
  const auto check = [&](const MonotoneOpSpec& a, double gamma, double x,
                         double expected) {
    CHECK(std::abs(oracle::bisect_resolvent_1d(a, gamma, x) - expected) <
          1e-9);
  };
  check(MonotoneOpSpec{ScaledIdentityOp{2.0}}, 0.5, 3.0, 1.5);
  check(MonotoneOpSpec{ZeroOp{}}, 2.0, -4.0, -4.0);
  check(MonotoneOpSpec{NormalConeBoxOp{Vec{0.0}, Vec{1.0}}}, 1.0, 5.0, 1.0);
  check(MonotoneOpSpec{NormalConeBoxOp{Vec{0.0}, Vec{1.0}}}, 1.0, -3.0, 0.0);
  check(MonotoneOpSpec{NormalConeBallOp{Vec{1.0}, 2.0}}, 1.0, 6.0, 3.0);
  check(MonotoneOpSpec{SubdiffSupportIntervalOp{Vec{-1.0}, Vec{1.0}}}, 1.0,
        3.0, 2.0);
  check(MonotoneOpSpec{AffineMonotoneOp{1, {3.0}, Vec{1.0}}}, 1.0, 5.0, 1.0);

  // Residual op: J = x - clamp(x) + r at unit scaling.
  const MonotoneOpSpec w{WienerResidualOp{
      ProjectionSpec{ProjectionSpec::Box{Vec{-1.0}, Vec{1.0}}}, Vec{0.5}}};
  check(w, 1.0, 3.0, 2.5);

  for (int t = 0; t < 40; ++t) {
    const double alpha = rng.uniform(0.1, 3.0);
    const double g = rng.uniform(0.3, 2.5);
    const double x = rng.uniform(-8.0, 8.0);
    check(MonotoneOpSpec{ScaledIdentityOp{alpha}}, g, x,
          x / (1.0 + g * alpha));
  }
}

TEST_CASE("bisection handles wrapped operators") {
  const MonotoneOpSpec cone{NormalConeBoxOp{Vec{-1.0}, Vec{2.0}}};
  Rng rng(67);
  for (int t = 0; t < 30; ++t) {
    const double g = rng.uniform(0.3, 2.0);
    const double x = rng.uniform(-6.0, 6.0);
    // Inverse of a normal cone: compare with the closed-form identity.
    const double via_bisect =
        oracle::bisect_resolvent_1d(inverse_of(cone), g, x);
    const double closed = resolvent(inverse_of(cone), g, Vec{x})[0];
    CHECK(std::abs(via_bisect - closed) < 1e-9);

    const MonotoneOpSpec scaled = scaled_op(1.7, cone);
    CHECK(std::abs(oracle::bisect_resolvent_1d(scaled, g, x) -
                   resolvent(scaled, g, Vec{x})[0]) < 1e-9);
  }

  const ConvexFnSpec abs1{AbsSumFn{Vec{1.0}}};
  const MonotoneOpSpec sub = subdiff_of(conjugate_wrap(abs1));
  // d(|.|*) = N_{[-1,1]}.
  CHECK(std::abs(oracle::bisect_resolvent_1d(sub, 1.0, 4.0) - 1.0) < 1e-9);
}
