#include <doctest.h>

#include <cmath>

#include "promix/errors.hpp"
#include "promix/family.hpp"
#include "promix/rng.hpp"
#include "promix/solver.hpp"
#include "promix/subspace.hpp"
#include "promix/verify.hpp"

#include "test_util.hpp"

using namespace promix;
using testutil::max_abs_diff;
using testutil::monotone_atom;

namespace {

MixtureFamily two_halfspaces() {
  std::vector<Atom> atoms;
  atoms.push_back(monotone_atom(
      0.5, LinOp::identity(2),
      MonotoneOpSpec{NormalConeBoxOp{Vec{-kInf, -kInf}, Vec{0.0, kInf}}}));
  atoms.push_back(monotone_atom(
      0.5, LinOp::identity(2),
      MonotoneOpSpec{NormalConeBoxOp{Vec{1.0, -kInf}, Vec{kInf, kInf}}}));
  return make_family(2, std::move(atoms));
}

MixtureFamily disk_and_halfspace() {
  std::vector<Atom> atoms;
  atoms.push_back(monotone_atom(0.5, LinOp::identity(2),
                                MonotoneOpSpec{NormalConeBallOp{Vec{0.0, 0.0}, 1.0}}));
  atoms.push_back(monotone_atom(
      0.5, LinOp::identity(2),
      MonotoneOpSpec{NormalConeBoxOp{Vec{0.5, -kInf}, Vec{kInf, kInf}}}));
  return make_family(2, std::move(atoms));
}

}  // namespace

TEST_CASE("inconsistent halfspaces balance at the midpoint") {
  StopRule stop;
  stop.abs_tol = 1e-12;
  stop.max_iter = 1000;
  const RelaxedProblem p = make_relaxed_problem(
      two_halfspaces(), full_space(2), 1.0, {1.0}, Vec{0.0, 0.0}, stop);

  // One relaxed step from the origin lands on (0.5, 0).
  const Vec first = iterate_once(p, Vec{0.0, 0.0}, 1.0);
  CHECK(max_abs_diff(first, Vec{0.5, 0.0}) < 1e-15);

  const SolveTrace trace = solve(p);
  CHECK(trace.converged);
  CHECK(std::abs(trace.final_x[0] - 0.5) < 1e-9);
  CHECK(std::abs(trace.final_x[1]) < 1e-12);
  CHECK(trace.in_v_defect == 0.0);
  CHECK(trace.normal_defect < 1e-9);
  // The individual atoms stay strictly infeasible.
  const std::vector<double> exact = exactness_check(p, trace.final_x);
  CHECK(exact[0] == doctest::Approx(0.5));
  CHECK(exact[1] == doctest::Approx(0.5));
}

TEST_CASE("disk and halfspace intersection is reached") {
  StopRule stop;
  stop.abs_tol = 1e-9;
  stop.max_iter = 5000;
  const RelaxedProblem p = make_relaxed_problem(
      disk_and_halfspace(), full_space(2), 1.0, {1.0}, Vec{2.0, 2.0}, stop);
  const SolveTrace trace = solve(p);
  CHECK(trace.converged);
  CHECK(trace.iterations <= 5000);
  CHECK(norm(trace.final_x) <= 1.0 + 1e-7);
  CHECK(trace.final_x[0] >= 0.5 - 1e-7);
  for (double r : exactness_check(p, trace.final_x)) CHECK(r <= 1e-6);
}

TEST_CASE("relaxed resolvent is an equivalent route to the update") {
  Rng rng(111);
  for (int t = 0; t < 10; ++t) {
    Rng gen = rng.child(static_cast<std::uint64_t>(t));
    const int dim = 4;
    const MixtureFamily f = random_monotone_family(gen, dim, 4);
    const Subspace v =
        make_subspace(dim, {gen.normal_vec(4), gen.normal_vec(4)});
    StopRule stop;
    const Vec x0 = project(v, gen.uniform_vec(4, -2.0, 2.0));
    const RelaxedProblem p =
        make_relaxed_problem(f, v, 1.0, {0.7}, x0, stop);
    for (int s = 0; s < 5; ++s) {
      const Vec x = project(v, gen.uniform_vec(4, -3.0, 3.0));
      const double lambda = gen.uniform(0.1, 1.9);
      const Vec direct = iterate_once(p, x, lambda);
      const Vec jr = relaxed_resolvent(p, x);
      Vec mixed(x.begin(), x.end());
      axpy(lambda, sub(jr, x), mixed);
      CHECK(max_abs_diff(direct, mixed) < 1e-12);
    }
  }
}

TEST_CASE("lambda schedule cycles") {
  StopRule stop;
  stop.abs_tol = 0.0;
  stop.max_iter = 2;
  const RelaxedProblem p = make_relaxed_problem(
      two_halfspaces(), full_space(2), 1.0, {0.5, 1.5}, Vec{0.0, 0.0}, stop);
  // Step 1 with lambda=0.5 moves half as far as the unit step.
  const SolveTrace trace = solve(p);
  REQUIRE(trace.step_norms.size() == 2);
  CHECK(trace.step_norms[0] == doctest::Approx(0.25));
  // From (0.25, 0): direction is still 0.5 - x1 = 0.25; lambda=1.5.
  CHECK(trace.step_norms[1] == doctest::Approx(0.375));
}

TEST_CASE("solver respects the subspace constraint") {
  // Unconstrained balance point is x1 = 0.5; restricted to the diagonal the
  // update direction is projected onto it.
  const Subspace diag = make_subspace(2, {Vec{1.0, 1.0}});
  StopRule stop;
  stop.abs_tol = 1e-12;
  stop.max_iter = 5000;
  const RelaxedProblem p = make_relaxed_problem(
      two_halfspaces(), diag, 1.0, {1.0}, Vec{0.0, 0.0}, stop);
  const SolveTrace trace = solve(p);
  CHECK(trace.converged);
  CHECK(contains(diag, trace.final_x, 1e-10));
  CHECK(trace.in_v_defect < 1e-12);
  CHECK(trace.normal_defect < 1e-9);
  // Stationarity on the diagonal: proj of the mean residual vanishes.
  const ResidualPair res = relaxed_residual(p, trace.final_x);
  CHECK(res.normal_defect < 1e-9);
}

TEST_CASE("single residual atom recovers the offset in two steps") {
  WienerData data;
  data.weights = {1.0};
  data.linops = {LinOp::identity(2)};
  data.t = {ProjectionSpec{ProjectionSpec::Identity{}}};
  data.offsets = {Vec{1.5, -2.0}};
  StopRule stop;
  stop.abs_tol = 1e-14;
  stop.max_iter = 50;
  const RelaxedProblem p =
      wiener_problem(data, full_space(2), {1.0}, Vec{0.0, 0.0}, stop);
  const SolveTrace trace = solve(p);
  CHECK(trace.converged);
  CHECK(trace.iterations <= 2);
  CHECK(trace.final_x == Vec{1.5, -2.0});
}

TEST_CASE("clipped observations are matched on the constraint subspace") {
  Rng rng(117);
  const int dim = 6, n_atoms = 5, obs = 6;
  const Subspace v = make_subspace(
      dim, {rng.normal_vec(dim), rng.normal_vec(dim), rng.normal_vec(dim)});
  Vec truth(dim, 0.0);
  for (const Vec& b : v.basis) axpy(rng.uniform(-2.0, 2.0), b, truth);

  WienerData data;
  std::vector<Atom> probe;
  for (int i = 0; i < n_atoms; ++i) {
    std::vector<Vec> rows;
    for (int r = 0; r < obs; ++r) {
      Vec row = rng.normal_vec(dim);
      for (auto& e : row) e /= std::sqrt(static_cast<double>(dim));
      rows.push_back(std::move(row));
    }
    data.weights.push_back(1.0 / n_atoms);
    data.linops.push_back(LinOp::from_rows(rows));
    probe.push_back(monotone_atom(data.weights.back(), data.linops.back(),
                                  MonotoneOpSpec{ZeroOp{}}));
  }
  MixtureFamily raw;
  raw.x_dim = dim;
  raw.atoms = std::move(probe);
  const MixtureFamily scaled_family = rescale_to_admissible(raw);
  for (int i = 0; i < n_atoms; ++i) {
    data.linops[static_cast<std::size_t>(i)] =
        scaled_family.atoms[static_cast<std::size_t>(i)].linop;
  }
  for (int i = 0; i < n_atoms; ++i) {
    const ProjectionSpec t{
        ProjectionSpec::Box{Vec(obs, -1.0), Vec(obs, 1.0)}};
    data.t.push_back(t);
    data.offsets.push_back(apply_projection(
        t, promix::apply(data.linops[static_cast<std::size_t>(i)], truth)));
  }

  StopRule stop;
  stop.abs_tol = 1e-12;
  stop.max_iter = 10000;
  const RelaxedProblem p =
      wiener_problem(data, v, {1.0}, Vec(dim, 0.0), stop);
  const SolveTrace trace = solve(p);
  CHECK(trace.converged);
  for (int i = 0; i < n_atoms; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const Vec fit = apply_projection(
        data.t[ui], promix::apply(data.linops[ui], trace.final_x));
    CHECK(dist(fit, data.offsets[ui]) <= 1e-6);
  }
  CHECK(trace.in_v_defect <= 1e-10);
}

TEST_CASE("trace bookkeeping") {
  StopRule stop;
  stop.abs_tol = 0.0;
  stop.max_iter = 7;
  const RelaxedProblem p = make_relaxed_problem(
      disk_and_halfspace(), full_space(2), 1.0, {1.0}, Vec{2.0, 2.0}, stop);
  const SolveTrace trace = solve(p);
  CHECK_FALSE(trace.converged);
  CHECK(trace.iterations == 7);
  CHECK(trace.step_norms.size() == 7);

  StopRule longrun;
  longrun.abs_tol = 0.0;
  longrun.max_iter = 12345;
  const RelaxedProblem q = make_relaxed_problem(
      disk_and_halfspace(), full_space(2), 1.0, {1.0}, Vec{2.0, 2.0}, longrun);
  const SolveTrace t2 = solve(q);
  CHECK(t2.step_norms.size() == static_cast<std::size_t>(t2.iterations));
  CHECK(t2.iterates.size() <= 1000);
  CHECK(t2.iterates.back().first == t2.iterations);
  CHECK(t2.iterates.back().second == t2.final_x);
}

TEST_CASE("problem validation") {
  StopRule stop;
  const MixtureFamily f = two_halfspaces();
  CHECK_THROWS_AS(make_relaxed_problem(f, full_space(2), 1.0, {0.0},
                                       Vec{0.0, 0.0}, stop),
                  ValidationError);
  CHECK_THROWS_AS(make_relaxed_problem(f, full_space(2), 1.0, {2.0},
                                       Vec{0.0, 0.0}, stop),
                  ValidationError);
  CHECK_THROWS_AS(make_relaxed_problem(f, full_space(2), 0.0, {1.0},
                                       Vec{0.0, 0.0}, stop),
                  ValidationError);
  CHECK_THROWS_AS(make_relaxed_problem(f, full_space(2), 1.0, {},
                                       Vec{0.0, 0.0}, stop),
                  ValidationError);
  const Subspace diag = make_subspace(2, {Vec{1.0, 1.0}});
  CHECK_THROWS_AS(
      make_relaxed_problem(f, diag, 1.0, {1.0}, Vec{1.0, 0.0}, stop),
      ValidationError);
  CHECK_THROWS_AS(make_relaxed_problem(f, full_space(2), 1.0, {1.0},
                                       Vec{0.0}, stop),
                  ValidationError);

  std::vector<Atom> convex;
  convex.push_back(Atom{0.5, LinOp::identity(1),
                        PayloadSpec{ConvexFnSpec{QuadraticKernelFn{}}}});
  const MixtureFamily cf = make_family(1, std::move(convex));
  CHECK_THROWS_AS(
      make_relaxed_problem(cf, full_space(1), 1.0, {1.0}, Vec{0.0}, stop),
      ValidationError);

  StopRule bad_stop;
  bad_stop.max_iter = 0;
  CHECK_THROWS_AS(make_relaxed_problem(f, full_space(2), 1.0, {1.0},
                                       Vec{0.0, 0.0}, bad_stop),
                  ValidationError);

  WienerData mismatched;
  mismatched.weights = {1.0};
  mismatched.linops = {LinOp::identity(2)};
  mismatched.t = {ProjectionSpec{ProjectionSpec::Identity{}}};
  mismatched.offsets = {};
  CHECK_THROWS_AS(wiener_problem(mismatched, full_space(2), {1.0},
                                 Vec{0.0, 0.0}, StopRule{}),
                  ValidationError);
}
