#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "promix/family.hpp"
#include "promix/subspace.hpp"
#include "promix/vec.hpp"

namespace promix {

struct StopRule {
  double abs_tol = 1e-8;
  double rel_tol = 0.0;
  long max_iter = 100000;
};

// Relaxed subspace-coupled inclusion problem: find x in V with
// 0 in A_i(L_i x) enforced through the gamma-scaled atom resolvents, relaxed
// by projecting the update direction onto V.
struct RelaxedProblem {
  MixtureFamily family;
  Subspace v;
  double gamma = 1.0;
  std::vector<double> lambda_schedule{1.0};  // cycled; each in (0, 2)
  Vec x0;
  StopRule stop;
};

// Validates the pieces (monotone payloads, lambda in (0,2), gamma > 0,
// x0 in V within 1e-10) and assembles the problem.
RelaxedProblem make_relaxed_problem(MixtureFamily family, Subspace v,
                                    double gamma,
                                    std::vector<double> lambda_schedule, Vec x0,
                                    StopRule stop);

// x - lambda * proj_V( sum_i w_i L_i^T (L_i x - J_{gamma A_i}(L_i x)) ).
Vec iterate_once(const RelaxedProblem& p, std::span<const double> x,
                 double lambda);

// The relaxed resolvent proj_V (Id + sum_i w_i L_i^T (J_{gamma A_i} - Id) L_i) proj_V;
// an independent route to the same update: iterate_once(x, lambda) equals
// x + lambda (relaxed_resolvent(x) - x) on V.
Vec relaxed_resolvent(const RelaxedProblem& p, std::span<const double> x);

struct SolveTrace {
  Vec final_x;
  std::vector<double> step_norms;                  // one per iteration
  std::vector<std::pair<long, Vec>> iterates;      // thinned to <= ~1000
  long iterations = 0;
  bool converged = false;
  bool diverged = false;
  double in_v_defect = 0.0;
  double normal_defect = 0.0;
};

// Runs the relaxed iteration until ||x_{n+1} - x_n|| <= abs_tol + rel_tol ||x_n||
// or max_iter; aborts on a non-finite iterate.
SolveTrace solve(const RelaxedProblem& p);

struct ResidualPair {
  double in_v_defect = 0.0;    // || x - proj_V x ||
  double normal_defect = 0.0;  // || proj_V sum_i w_i L_i^T yosida_{gamma A_i}(L_i x) ||
};

ResidualPair relaxed_residual(const RelaxedProblem& p, std::span<const double> x);

// Per-atom residuals || L_i x - J_{gamma A_i}(L_i x) ||.
std::vector<double> exactness_check(const RelaxedProblem& p,
                                    std::span<const double> x);

// Atom data for residual-form problems T_i(L_i x) = r_i with firmly
// nonexpansive T_i.
struct WienerData {
  std::vector<double> weights;
  std::vector<LinOp> linops;
  std::vector<ProjectionSpec> t;
  std::vector<Vec> offsets;
};

// Builds the relaxed problem with residual-operator payloads; gamma is 1 by
// construction (the only value those payloads support).
RelaxedProblem wiener_problem(const WienerData& data, Subspace v,
                              std::vector<double> lambda_schedule, Vec x0,
                              StopRule stop);

}  // namespace promix
