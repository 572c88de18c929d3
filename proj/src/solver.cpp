#include "promix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "promix/errors.hpp"
#include "promix/kernels.hpp"
#include "promix/monotone.hpp"

namespace promix {

namespace {

void require_monotone_family(const MixtureFamily& f) {
  for (const auto& atom : f.atoms) {
    if (!std::holds_alternative<MonotoneOpSpec>(atom.payload)) {
      throw ValidationError("solver family must carry monotone payloads");
    }
  }
}

}  // namespace

RelaxedProblem make_relaxed_problem(MixtureFamily family, Subspace v,
                                    double gamma,
                                    std::vector<double> lambda_schedule, Vec x0,
                                    StopRule stop) {
  require_monotone_family(family);
  if (v.ambient_dim != family.x_dim) {
    throw ValidationError("subspace ambient dim " +
                            std::to_string(v.ambient_dim) +
                            " does not match family dim " +
                            std::to_string(family.x_dim));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("gamma must be finite and positive");
  }
  if (lambda_schedule.empty()) {
    throw ValidationError("lambda schedule must be nonempty");
  }
  for (double lam : lambda_schedule) {
    if (!(lam > 0.0) || !(lam < 2.0)) {
      throw ValidationError("relaxation parameter " + std::to_string(lam) +
                             " outside (0, 2)");
    }
  }
  if (static_cast<int>(x0.size()) != family.x_dim) {
    throw ValidationError("x0 size does not match family dim");
  }
  if (!contains(v, x0, 1e-10)) {
    throw ValidationError("x0 must lie in the constraint subspace");
  }
  if (!(stop.abs_tol >= 0.0) || !(stop.rel_tol >= 0.0)) {
    throw ValidationError("stop tolerances must be nonnegative");
  }
  if (stop.max_iter < 1) {
    throw ValidationError("max_iter must be at least 1");
  }
  RelaxedProblem p;
  p.family = std::move(family);
  p.v = std::move(v);
  p.gamma = gamma;
  p.lambda_schedule = std::move(lambda_schedule);
  p.x0 = std::move(x0);
  p.stop = stop;
  return p;
}

Vec iterate_once(const RelaxedProblem& p, std::span<const double> x,
                 double lambda) {
  const double gamma = p.gamma;
  Vec z = kernels::weighted_adjoint_sum(
      p.family, x, [&](int i, const Vec& y) {
        Vec j = resolvent(monotone_payload(p.family.atoms[i]), gamma, y);
        return sub(y, j);
      });
  Vec step = project(p.v, z);
  Vec out(x.begin(), x.end());
  axpy(-lambda, step, out);
  return out;
}

Vec relaxed_resolvent(const RelaxedProblem& p, std::span<const double> x) {
  const double gamma = p.gamma;
  Vec u = project(p.v, x);
  Vec inner = kernels::weighted_adjoint_sum(
      p.family, u, [&](int i, const Vec& y) {
        Vec j = resolvent(monotone_payload(p.family.atoms[i]), gamma, y);
        return sub(j, y);
      });
  Vec w = add(u, inner);
  return project(p.v, w);
}

SolveTrace solve(const RelaxedProblem& p) {
  SolveTrace trace;
  Vec x = p.x0;
  const long max_iter = p.stop.max_iter;
  // Thinning stride keeps the stored iterate list at 1000 entries or fewer.
  const long stride = std::max<long>(1, (max_iter + 997) / 998);
  trace.iterates.emplace_back(0, x);
  const std::size_t schedule = p.lambda_schedule.size();
  for (long n = 0; n < max_iter; ++n) {
    const double lambda = p.lambda_schedule[n % schedule];
    Vec next = iterate_once(p, x, lambda);
    if (!all_finite(next)) {
      trace.diverged = true;
      break;
    }
    const double step = dist(next, x);
    const double threshold = p.stop.abs_tol + p.stop.rel_tol * norm(x);
    trace.step_norms.push_back(step);
    x = std::move(next);
    trace.iterations = n + 1;
    if ((n + 1) % stride == 0) {
      trace.iterates.emplace_back(n + 1, x);
    }
    if (step <= threshold) {
      trace.converged = true;
      break;
    }
  }
  if (trace.iterates.back().first != trace.iterations) {
    trace.iterates.emplace_back(trace.iterations, x);
  }
  auto res = relaxed_residual(p, x);
  trace.in_v_defect = res.in_v_defect;
  trace.normal_defect = res.normal_defect;
  trace.final_x = std::move(x);
  return trace;
}

ResidualPair relaxed_residual(const RelaxedProblem& p,
                              std::span<const double> x) {
  ResidualPair out;
  Vec pv = project(p.v, x);
  out.in_v_defect = dist(x, pv);
  const double gamma = p.gamma;
  Vec z = kernels::weighted_adjoint_sum(
      p.family, x, [&](int i, const Vec& y) {
        return yosida(monotone_payload(p.family.atoms[i]), gamma, y);
      });
  out.normal_defect = norm(project(p.v, z));
  return out;
}

std::vector<double> exactness_check(const RelaxedProblem& p,
                                    std::span<const double> x) {
  std::vector<double> out;
  out.reserve(p.family.atoms.size());
  for (const auto& atom : p.family.atoms) {
    Vec y = apply(atom.linop, x);
    Vec j = resolvent(monotone_payload(atom), p.gamma, y);
    out.push_back(dist(y, j));
  }
  return out;
}

RelaxedProblem wiener_problem(const WienerData& data, Subspace v,
                              std::vector<double> lambda_schedule, Vec x0,
                              StopRule stop) {
  const std::size_t n = data.weights.size();
  if (data.linops.size() != n || data.t.size() != n ||
      data.offsets.size() != n) {
    throw ValidationError("residual-problem arrays must share one length");
  }
  if (n == 0) {
    throw ValidationError("residual problem needs at least one atom");
  }
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    WienerResidualOp op;
    op.t = data.t[i];
    op.offset = data.offsets[i];
    atoms.push_back(Atom{data.weights[i], data.linops[i],
                         MonotoneOpSpec{std::move(op)}});
  }
  MixtureFamily family = make_family(data.linops[0].cols, std::move(atoms));
  return make_relaxed_problem(std::move(family), std::move(v), 1.0,
                              std::move(lambda_schedule), std::move(x0), stop);
}

}  // namespace promix
