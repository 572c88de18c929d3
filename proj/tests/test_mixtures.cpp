#include <doctest.h>

#include <cmath>

#include "promix/errors.hpp"
#include "promix/family.hpp"
#include "promix/mixtures.hpp"
#include "promix/oracle.hpp"
#include "promix/rng.hpp"
#include "promix/verify.hpp"

#include "test_util.hpp"

using namespace promix;
using testutil::convex_atom;
using testutil::max_abs_diff;
using testutil::monotone_atom;

namespace {

MixtureFamily soft_threshold_family(int n, double bound) {
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k) {
    Vec ek(static_cast<std::size_t>(n), 0.0);
    ek[static_cast<std::size_t>(k)] = 1.0;
    atoms.push_back(monotone_atom(
        1.0 / n, LinOp::single_row(ek),
        MonotoneOpSpec{SubdiffSupportIntervalOp{Vec{-bound}, Vec{bound}}}));
  }
  return make_family(n, std::move(atoms));
}

}  // namespace

TEST_CASE("weighted soft threshold on the standard basis") {
  const MixtureFamily f = soft_threshold_family(2, 1.0);
  const Vec out = resolvent_mixture(f, Vec{3.0, -0.5});
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(0.0));
}

TEST_CASE("resolvent expectation averages atom resolvents") {
  std::vector<Atom> atoms;
  atoms.push_back(monotone_atom(0.5, LinOp::identity(1),
                                MonotoneOpSpec{NormalConeBoxOp{Vec{0.0}, Vec{1.0}}}));
  atoms.push_back(monotone_atom(0.5, LinOp::identity(1),
                                MonotoneOpSpec{NormalConeBoxOp{Vec{2.0}, Vec{3.0}}}));
  const MixtureFamily f = make_family(1, std::move(atoms));
  CHECK(resolvent_expectation(f, Vec{4.0})[0] == doctest::Approx(2.0));
  // Expectation form and generic mixture agree when every linop is Id.
  CHECK(max_abs_diff(resolvent_expectation(f, Vec{4.0}),
                     resolvent_mixture(f, Vec{4.0})) < 1e-15);

  std::vector<Atom> uneven;
  uneven.push_back(monotone_atom(0.5, LinOp::scaled_identity(1, 0.5),
                                 MonotoneOpSpec{ZeroOp{}}));
  const MixtureFamily bad = make_family(1, std::move(uneven));
  CHECK_THROWS_AS(resolvent_expectation(bad, Vec{1.0}), ValidationError);
}

TEST_CASE("proximal average of abs and kernel") {
  std::vector<Atom> atoms;
  atoms.push_back(convex_atom(0.5, LinOp::identity(1),
                              ConvexFnSpec{AbsSumFn{Vec{1.0}}}));
  atoms.push_back(convex_atom(0.5, LinOp::identity(1),
                              ConvexFnSpec{QuadraticKernelFn{}}));
  const MixtureFamily f = make_family(1, std::move(atoms));
  CHECK(proximal_expectation_prox(f, Vec{3.0})[0] == doctest::Approx(1.75));
}

TEST_CASE("proximal average of a conjugate pair is the half map") {
  std::vector<Atom> atoms;
  atoms.push_back(convex_atom(0.5, LinOp::identity(1),
                              ConvexFnSpec{AbsSumFn{Vec{1.0}}}));
  atoms.push_back(convex_atom(0.5, LinOp::identity(1),
                              conjugate_wrap(ConvexFnSpec{AbsSumFn{Vec{1.0}}})));
  const MixtureFamily f = make_family(1, std::move(atoms));
  Rng rng(83);
  for (int t = 0; t < 50; ++t) {
    const double x = rng.uniform(-10.0, 10.0);
    CHECK(std::abs(proximal_expectation_prox(f, Vec{x})[0] - x / 2.0) <
          1e-13);
  }
}

TEST_CASE("prox route and subdifferential route agree") {
  Rng rng(87);
  for (int t = 0; t < 12; ++t) {
    Rng gen = rng.child(static_cast<std::uint64_t>(t));
    const int dim = gen.range(1, 4);
    const MixtureFamily f = random_convex_family(gen, dim, 4);
    const MixtureFamily fsub = subdiff_payload_family(f);
    for (int s = 0; s < 5; ++s) {
      const Vec x = gen.uniform_vec(static_cast<std::size_t>(dim), -4.0, 4.0);
      CHECK(max_abs_diff(prox_mixture(f, x), resolvent_mixture(fsub, x)) <
            1e-12);
      CHECK(max_abs_diff(prox_comixture(f, x), resolvent_comixture(fsub, x)) <
            1e-12);
    }
  }
}

TEST_CASE("mixture level moreau decomposition") {
  Rng rng(91);
  for (int t = 0; t < 12; ++t) {
    Rng gen = rng.child(static_cast<std::uint64_t>(t));
    const int dim = gen.range(1, 4);
    const MixtureFamily f = random_convex_family(gen, dim, 4);
    const MixtureFamily fstar = conjugate_payload_family(f);
    for (int s = 0; s < 5; ++s) {
      const Vec x = gen.uniform_vec(static_cast<std::size_t>(dim), -4.0, 4.0);
      const Vec lhs = add(prox_mixture(f, x), prox_comixture(fstar, x));
      CHECK(max_abs_diff(lhs, x) < 1e-11);
      // Envelope partition of the kernel at the mixture level.
      CHECK(std::abs(envelope_mixture(f, x) + envelope_comixture(fstar, x) -
                     half_sqnorm(x)) < 1e-9);
    }
  }
}

TEST_CASE("resolvent duality between mixture and comixture") {
  Rng rng(95);
  for (int t = 0; t < 12; ++t) {
    Rng gen = rng.child(static_cast<std::uint64_t>(t));
    const int dim = gen.range(1, 4);
    const MixtureFamily f = random_monotone_family(gen, dim, 4);
    const MixtureFamily finv = inverse_payload_family(f);
    for (int s = 0; s < 5; ++s) {
      const Vec x = gen.uniform_vec(static_cast<std::size_t>(dim), -4.0, 4.0);
      CHECK(max_abs_diff(sub(x, resolvent_mixture(f, x)),
                         resolvent_comixture(finv, x)) < 1e-11);
      CHECK(max_abs_diff(sub(x, resolvent_comixture(f, x)),
                         resolvent_mixture(finv, x)) < 1e-11);
    }
  }
}

TEST_CASE("yosida routes match resolvent differences") {
  Rng rng(99);
  for (int t = 0; t < 12; ++t) {
    Rng gen = rng.child(static_cast<std::uint64_t>(t));
    const int dim = gen.range(1, 4);
    const MixtureFamily f = random_monotone_family(gen, dim, 4);
    for (int s = 0; s < 5; ++s) {
      const Vec x = gen.uniform_vec(static_cast<std::size_t>(dim), -4.0, 4.0);
      CHECK(max_abs_diff(yosida_mixture(f, MixtureKind::Mixture, x),
                         sub(x, resolvent_mixture(f, x))) < 1e-11);
      CHECK(max_abs_diff(yosida_mixture(f, MixtureKind::Comixture, x),
                         sub(x, resolvent_comixture(f, x))) < 1e-11);
    }
  }
}

TEST_CASE("zeros residual of overlapping boxes") {
  std::vector<Atom> atoms;
  atoms.push_back(monotone_atom(0.5, LinOp::identity(1),
                                MonotoneOpSpec{NormalConeBoxOp{Vec{0.0}, Vec{2.0}}}));
  atoms.push_back(monotone_atom(0.5, LinOp::identity(1),
                                MonotoneOpSpec{NormalConeBoxOp{Vec{1.0}, Vec{3.0}}}));
  const MixtureFamily f = make_family(1, std::move(atoms));
  CHECK(zeros_residual(f, Vec{1.5}) == doctest::Approx(0.0));
  CHECK(zeros_residual(f, Vec{5.0}) == doctest::Approx(2.5));
  CHECK(zeros_residual(f, Vec{0.5}) == doctest::Approx(0.25));
}

TEST_CASE("probability weights with isometries collapse the two mixtures") {
  Rng rng(103);
  for (int t = 0; t < 8; ++t) {
    Rng gen = rng.child(static_cast<std::uint64_t>(t));
    const int dim = gen.range(1, 5);
    const MixtureFamily m = random_isometry_family(gen, dim, 4, false);
    const MixtureFamily c = random_isometry_family(gen, dim, 4, true);
    for (int s = 0; s < 10; ++s) {
      const Vec x = gen.uniform_vec(static_cast<std::size_t>(dim), -4.0, 4.0);
      CHECK(max_abs_diff(resolvent_mixture(m, x), resolvent_comixture(m, x)) <
            1e-11);
      CHECK(max_abs_diff(prox_mixture(c, x), prox_comixture(c, x)) < 1e-11);
    }
  }
}

TEST_CASE("mixture value recovers single-atom functions") {
  const oracle::GridSpec g{Vec{-12.0}, Vec{12.0}, 2401};
  std::vector<Atom> abs_atom;
  abs_atom.push_back(convex_atom(1.0, LinOp::identity(1),
                                 ConvexFnSpec{AbsSumFn{Vec{1.0}}}));
  const MixtureFamily fa = make_family(1, std::move(abs_atom));
  for (double x : {0.0, 1.0, 3.0, -2.5}) {
    const MixtureValueResult r = mixture_value(fa, Vec{x}, g);
    CHECK_FALSE(r.boundary);
    CHECK(std::abs(r.value - std::abs(x)) < 1e-9);
  }

  std::vector<Atom> quad_atom;
  quad_atom.push_back(convex_atom(1.0, LinOp::identity(1),
                                  ConvexFnSpec{QuadraticKernelFn{}}));
  const MixtureFamily fq = make_family(1, std::move(quad_atom));
  for (double x : {0.5, 1.5, -3.0}) {
    const MixtureValueResult r = mixture_value(fq, Vec{x}, g);
    CHECK_FALSE(r.boundary);
    CHECK(std::abs(r.value - x * x / 2.0) < 1e-9);
  }

  // A point far outside the box trips the boundary flag.
  const oracle::GridSpec tiny{Vec{-4.0}, Vec{4.0}, 801};
  const MixtureValueResult far = mixture_value(fa, Vec{20.0}, tiny);
  CHECK(far.boundary);
}

TEST_CASE("proximal average of a conjugate pair has kernel values") {
  std::vector<Atom> atoms;
  atoms.push_back(convex_atom(0.5, LinOp::identity(1),
                              ConvexFnSpec{AbsSumFn{Vec{1.0}}}));
  atoms.push_back(convex_atom(0.5, LinOp::identity(1),
                              conjugate_wrap(ConvexFnSpec{AbsSumFn{Vec{1.0}}})));
  const MixtureFamily f = make_family(1, std::move(atoms));
  const oracle::GridSpec g{Vec{-12.0}, Vec{12.0}, 2401};
  for (double x : {0.0, 0.7, -1.3, 2.0}) {
    const MixtureValueResult r = mixture_value(f, Vec{x}, g);
    CHECK(std::abs(r.value - x * x / 2.0) < 1e-2);
  }
}

TEST_CASE("mixture prox minimizes the mixture value objective") {
  std::vector<Atom> atoms;
  atoms.push_back(convex_atom(0.3, LinOp::scaled_identity(1, 1.5),
                              ConvexFnSpec{AbsSumFn{Vec{1.0}}}));
  atoms.push_back(convex_atom(0.4, LinOp::scaled_identity(1, 0.5),
                              ConvexFnSpec{QuadraticFn{2.0, Vec{0.5}}}));
  const MixtureFamily f = make_family(1, std::move(atoms));
  REQUIRE(f.mass <= 1.0);
  const oracle::GridSpec conj_grid{Vec{-30.0}, Vec{30.0}, 6001};

  const auto value_at = [&](double y) {
    return mixture_value(f, Vec{y}, conj_grid).value;
  };
  for (double x : {0.0, 1.2, -2.4}) {
    const double p = prox_mixture(f, Vec{x})[0];
    // Scan y on a 0.01 lattice for the prox objective minimizer.
    double best_y = 0.0, best = kInf;
    for (int k = -600; k <= 600; ++k) {
      const double y = k * 0.01;
      const double obj = value_at(y) + (x - y) * (x - y) / 2.0;
      if (obj < best) {
        best = obj;
        best_y = y;
      }
    }
    CHECK(std::abs(best_y - p) < 0.011);
    // The envelope is the minimal objective value.
    CHECK(std::abs(best - envelope_mixture(f, Vec{x})) < 1e-3);
  }
}

TEST_CASE("cocoercivity constants") {
  std::vector<Atom> atoms;
  atoms.push_back(monotone_atom(0.25, LinOp::identity(3),
                                MonotoneOpSpec{ScaledIdentityOp{1.0}}));
  atoms.push_back(monotone_atom(0.25, LinOp::identity(3),
                                MonotoneOpSpec{ScaledIdentityOp{1.0}}));
  const MixtureFamily f = make_family(3, std::move(atoms));
  CHECK(f.mass == doctest::Approx(0.5));
  const CompositeConstants c = cocoercivity_constant(f, 1.0);
  CHECK(c.delta == doctest::Approx(3.0));
  CHECK(c.lipschitz == doctest::Approx(0.5));

  const Vec beta{2.0, 2.0};
  CHECK(cocoercivity_constant(f, 1.0, beta).lipschitz == doctest::Approx(1.0));
  CHECK_THROWS_AS(cocoercivity_constant(f, 0.0), InvalidParameter);
}
