#include "promix/verify.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "promix/errors.hpp"
#include "promix/mixtures.hpp"
#include "promix/monotone.hpp"
#include "promix/oracle.hpp"

namespace promix {

LinOp random_orthogonal(Rng& rng, int n) {
  for (;;) {
    std::vector<Vec> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      rows.push_back(rng.normal_vec(static_cast<std::size_t>(n)));
    }
    const Subspace s = make_subspace(n, rows);
    if (subspace_dim(s) == n) return LinOp::from_rows(s.basis);
  }
}

namespace {

Vec random_box_lower(Rng& rng, int d) {
  Vec lo(static_cast<std::size_t>(d));
  for (auto& e : lo) e = rng.coin(0.15) ? -kInf : rng.uniform(-5.0, 1.0);
  return lo;
}

Vec random_box_upper(Rng& rng, const Vec& lo) {
  Vec hi(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (rng.coin(0.15)) {
      hi[k] = kInf;
    } else {
      const double base = std::isinf(lo[k]) ? rng.uniform(-1.0, 1.0) : lo[k];
      hi[k] = base + rng.uniform(0.2, 4.0);
    }
  }
  return hi;
}

ConvexFnSpec random_convex_fn_base(Rng& rng, int dim) {
  const std::size_t n = static_cast<std::size_t>(dim);
  switch (rng.below(7)) {
    case 0:
      return ConvexFnSpec{
          QuadraticFn{rng.uniform(0.2, 3.0), rng.uniform_vec(n, -2.0, 2.0)}};
    case 1:
      return ConvexFnSpec{QuadraticKernelFn{}};
    case 2:
      return ConvexFnSpec{AbsSumFn{rng.uniform_vec(n, 0.0, 2.0)}};
    case 3: {
      Vec lo = random_box_lower(rng, dim);
      Vec hi = random_box_upper(rng, lo);
      return ConvexFnSpec{IndicatorBoxFn{std::move(lo), std::move(hi)}};
    }
    case 4:
      return ConvexFnSpec{IndicatorBallFn{rng.uniform_vec(n, -2.0, 2.0),
                                          rng.uniform(0.5, 3.0)}};
    case 5:
      return ConvexFnSpec{SupportIntervalFn{rng.uniform_vec(n, -3.0, 0.0),
                                            rng.uniform_vec(n, 0.0, 3.0)}};
    default:
      return ConvexFnSpec{
          LinearFn{rng.uniform_vec(n, -2.0, 2.0), rng.uniform(-2.0, 2.0)}};
  }
}

ProjectionSpec random_projection(Rng& rng, int dim) {
  const std::size_t n = static_cast<std::size_t>(dim);
  switch (rng.below(3)) {
    case 0:
      return ProjectionSpec{ProjectionSpec::Identity{}};
    case 1: {
      Vec lo = rng.uniform_vec(n, -3.0, 0.0);
      Vec hi = rng.uniform_vec(n, 0.0, 3.0);
      return ProjectionSpec{ProjectionSpec::Box{std::move(lo), std::move(hi)}};
    }
    default:
      return ProjectionSpec{ProjectionSpec::Ball{
          rng.uniform_vec(n, -1.0, 1.0), rng.uniform(0.5, 3.0)}};
  }
}

MonotoneOpSpec random_monotone_op_base(Rng& rng, int dim) {
  const std::size_t n = static_cast<std::size_t>(dim);
  const int pick = (dim == 2) ? rng.range(0, 8) : rng.range(0, 7);
  switch (pick) {
    case 0:
      return MonotoneOpSpec{ZeroOp{}};
    case 1:
      return MonotoneOpSpec{ScaledIdentityOp{rng.uniform(0.0, 3.0)}};
    case 2: {
      Vec lo = random_box_lower(rng, dim);
      Vec hi = random_box_upper(rng, lo);
      return MonotoneOpSpec{NormalConeBoxOp{std::move(lo), std::move(hi)}};
    }
    case 3:
      return MonotoneOpSpec{NormalConeBallOp{rng.uniform_vec(n, -2.0, 2.0),
                                             rng.uniform(0.5, 3.0)}};
    case 4: {
      const int k = rng.range(0, dim);
      Subspace dir = zero_space(dim);
      if (k > 0) {
        std::vector<Vec> rows;
        for (int i = 0; i < k; ++i) rows.push_back(rng.normal_vec(n));
        dir = make_subspace(dim, rows);
      }
      return MonotoneOpSpec{
          NormalConeAffineOp{rng.uniform_vec(n, -3.0, 3.0), std::move(dir)}};
    }
    case 5:
      return MonotoneOpSpec{SubdiffSupportIntervalOp{
          rng.uniform_vec(n, -3.0, 0.0), rng.uniform_vec(n, 0.0, 3.0)}};
    case 6: {
      AffineMonotoneOp op;
      op.dim = dim;
      std::vector<double> g(n * n), skew(n * n);
      for (auto& e : g) e = rng.normal();
      for (auto& e : skew) e = rng.uniform(-1.0, 1.0);
      op.m.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double sym = 0.0;
          for (std::size_t k = 0; k < n; ++k) sym += g[k * n + i] * g[k * n + j];
          op.m[i * n + j] = sym / static_cast<double>(dim) +
                            0.5 * (skew[i * n + j] - skew[j * n + i]);
        }
      }
      op.offset = rng.uniform_vec(n, -2.0, 2.0);
      return MonotoneOpSpec{std::move(op)};
    }
    case 7:
      return MonotoneOpSpec{WienerResidualOp{random_projection(rng, dim),
                                             rng.uniform_vec(n, -2.0, 2.0)}};
    default:
      return MonotoneOpSpec{Rotation90Op{}};
  }
}

}  // namespace

ConvexFnSpec random_convex_fn(Rng& rng, int dim) {
  if (rng.coin(0.2)) {
    return conjugate_wrap(random_convex_fn_base(rng, dim));
  }
  return random_convex_fn_base(rng, dim);
}

MonotoneOpSpec random_monotone_op(Rng& rng, int dim) {
  switch (rng.below(5)) {
    case 0:
      return subdiff_of(random_convex_fn(rng, dim));
    case 1: {
      const double factor = rng.uniform(0.3, 2.5);
      MonotoneOpSpec base = random_monotone_op_base(rng, dim);
      // Residual-form payloads only admit unit scaling.
      if (std::holds_alternative<WienerResidualOp>(base.v)) return base;
      return scaled_op(factor, std::move(base));
    }
    case 2:
      return inverse_of(random_monotone_op_base(rng, dim));
    default:
      return random_monotone_op_base(rng, dim);
  }
}

namespace {

MixtureFamily random_family_impl(Rng& rng, int x_dim, int max_atoms,
                                 bool convex) {
  const int n_atoms = rng.range(1, max_atoms);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n_atoms));
  for (int i = 0; i < n_atoms; ++i) {
    Atom a;
    a.weight = rng.uniform(0.2, 1.2);
    const int rows = rng.range(1, 4);
    std::vector<Vec> rr;
    rr.reserve(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
      rr.push_back(rng.normal_vec(static_cast<std::size_t>(x_dim)));
    }
    a.linop = LinOp::from_rows(rr);
    a.payload = convex ? PayloadSpec{random_convex_fn(rng, rows)}
                       : PayloadSpec{random_monotone_op(rng, rows)};
    atoms.push_back(std::move(a));
  }
  MixtureFamily raw;
  raw.x_dim = x_dim;
  raw.atoms = std::move(atoms);
  MixtureFamily f = rescale_to_admissible(raw);
  if (rng.coin()) {
    const double c = rng.uniform(0.5, 0.95);
    for (Atom& a : f.atoms) a.linop = scaled(a.linop, c);
    f = make_family(f.x_dim, std::move(f.atoms));
  }
  return f;
}

std::vector<double> probability_weights(Rng& rng, int n_atoms) {
  std::vector<double> w(static_cast<std::size_t>(n_atoms));
  double s = 0.0;
  for (auto& e : w) {
    e = rng.uniform(0.2, 1.2);
    s += e;
  }
  for (auto& e : w) e /= s;
  return w;
}

}  // namespace

MixtureFamily random_monotone_family(Rng& rng, int x_dim, int max_atoms) {
  return random_family_impl(rng, x_dim, max_atoms, false);
}

MixtureFamily random_convex_family(Rng& rng, int x_dim, int max_atoms) {
  return random_family_impl(rng, x_dim, max_atoms, true);
}

MixtureFamily random_isometry_family(Rng& rng, int x_dim, int max_atoms,
                                     bool convex) {
  const int n_atoms = rng.range(1, max_atoms);
  const std::vector<double> w = probability_weights(rng, n_atoms);
  std::vector<Atom> atoms;
  atoms.reserve(w.size());
  for (int i = 0; i < n_atoms; ++i) {
    Atom a;
    a.weight = w[static_cast<std::size_t>(i)];
    a.linop = random_orthogonal(rng, x_dim);
    a.payload = convex ? PayloadSpec{random_convex_fn(rng, x_dim)}
                       : PayloadSpec{random_monotone_op(rng, x_dim)};
    atoms.push_back(std::move(a));
  }
  return make_family(x_dim, std::move(atoms));
}

MixtureFamily random_expectation_family(Rng& rng, int x_dim, int max_atoms,
                                        bool convex) {
  const int n_atoms = rng.range(1, max_atoms);
  const std::vector<double> w = probability_weights(rng, n_atoms);
  std::vector<Atom> atoms;
  atoms.reserve(w.size());
  for (int i = 0; i < n_atoms; ++i) {
    Atom a;
    a.weight = w[static_cast<std::size_t>(i)];
    a.linop = LinOp::identity(x_dim);
    a.payload = convex ? PayloadSpec{random_convex_fn(rng, x_dim)}
                       : PayloadSpec{random_monotone_op(rng, x_dim)};
    atoms.push_back(std::move(a));
  }
  return make_family(x_dim, std::move(atoms));
}

namespace {

struct RowAccum {
  std::string name;
  double threshold = 0.0;
  double max_residual = 0.0;

  RowAccum(std::string n, double t) : name(std::move(n)), threshold(t) {}
  void add(double r) { max_residual = std::max(max_residual, r); }
  IdentityResidual done() const {
    return IdentityResidual{name, max_residual, threshold,
                            max_residual <= threshold};
  }
};

// max(0, ||Jx - Jy||^2 - <x - y, Jx - Jy>); nonpositive for firmly
// nonexpansive maps up to roundoff.
double fne_slack(const Vec& x, const Vec& y, const Vec& jx, const Vec& jy) {
  const Vec u = sub(jx, jy);
  const Vec d = sub(x, y);
  return std::max(0.0, dot(u, u) - dot(d, u));
}

double snap(double v) { return std::round(v * 100.0) / 100.0; }

std::vector<ConvexFnSpec> oracle_convex_cases(Rng& rng) {
  std::vector<ConvexFnSpec> out;
  const auto base = [&](int k) -> ConvexFnSpec {
    switch (k) {
      case 0:
        return ConvexFnSpec{QuadraticFn{snap(rng.uniform(1.25, 3.0)),
                                        {snap(rng.uniform(-2.0, 2.0))}}};
      case 1:
        return ConvexFnSpec{QuadraticKernelFn{}};
      case 2:
        return ConvexFnSpec{AbsSumFn{{snap(rng.uniform(0.5, 3.0))}}};
      case 3: {
        const double lo = snap(rng.uniform(-5.0, 0.0));
        return ConvexFnSpec{
            IndicatorBoxFn{{lo}, {snap(lo + rng.uniform(0.5, 5.0))}}};
      }
      case 4:
        return ConvexFnSpec{IndicatorBallFn{{snap(rng.uniform(-2.0, 2.0))},
                                            snap(rng.uniform(0.5, 3.0))}};
      case 5:
        return ConvexFnSpec{SupportIntervalFn{{snap(rng.uniform(-3.0, 0.0))},
                                              {snap(rng.uniform(0.2, 3.0))}}};
      default:
        return ConvexFnSpec{LinearFn{{snap(rng.uniform(-3.0, 3.0))},
                                     snap(rng.uniform(-2.0, 2.0))}};
    }
  };
  for (int k = 0; k < 7; ++k) out.push_back(base(k));
  out.push_back(conjugate_wrap(base(static_cast<int>(rng.below(7)))));
  return out;
}

struct OracleOpCase {
  MonotoneOpSpec op;
  bool gamma_one_only = false;
};

std::vector<OracleOpCase> oracle_monotone_cases(Rng& rng) {
  std::vector<OracleOpCase> out;
  const auto base = [&](int k) -> MonotoneOpSpec {
    switch (k) {
      case 0:
        return MonotoneOpSpec{ZeroOp{}};
      case 1:
        return MonotoneOpSpec{ScaledIdentityOp{rng.uniform(0.0, 3.0)}};
      case 2: {
        const double lo = rng.uniform(-5.0, 0.0);
        return MonotoneOpSpec{
            NormalConeBoxOp{{lo}, {lo + rng.uniform(0.2, 5.0)}}};
      }
      case 3:
        return MonotoneOpSpec{NormalConeBallOp{{rng.uniform(-2.0, 2.0)},
                                               rng.uniform(0.5, 3.0)}};
      case 4: {
        Subspace dir = rng.coin() ? full_space(1) : zero_space(1);
        return MonotoneOpSpec{
            NormalConeAffineOp{{rng.uniform(-3.0, 3.0)}, std::move(dir)}};
      }
      case 5:
        return MonotoneOpSpec{SubdiffSupportIntervalOp{
            {rng.uniform(-3.0, 0.0)}, {rng.uniform(0.0, 3.0)}}};
      default: {
        AffineMonotoneOp op;
        op.dim = 1;
        op.m = {rng.uniform(0.0, 3.0)};
        op.offset = {rng.uniform(-2.0, 2.0)};
        return MonotoneOpSpec{std::move(op)};
      }
    }
  };
  const auto wiener = [&](int kind) -> MonotoneOpSpec {
    ProjectionSpec t;
    if (kind == 0) {
      t = ProjectionSpec{ProjectionSpec::Identity{}};
    } else if (kind == 1) {
      t = ProjectionSpec{ProjectionSpec::Box{{rng.uniform(-3.0, 0.0)},
                                             {rng.uniform(0.0, 3.0)}}};
    } else {
      t = ProjectionSpec{ProjectionSpec::Ball{{rng.uniform(-1.0, 1.0)},
                                              rng.uniform(0.5, 3.0)}};
    }
    return MonotoneOpSpec{WienerResidualOp{std::move(t),
                                           {rng.uniform(-2.0, 2.0)}}};
  };
  for (int k = 0; k <= 6; ++k) out.push_back({base(k), false});
  for (int kind = 0; kind < 3; ++kind) out.push_back({wiener(kind), true});
  out.push_back(
      {scaled_op(rng.uniform(0.3, 2.5), base(rng.range(0, 6))), false});
  out.push_back({inverse_of(base(rng.range(0, 6))), false});
  out.push_back({inverse_of(wiener(1)), true});
  for (const ConvexFnSpec& f : oracle_convex_cases(rng)) {
    out.push_back({subdiff_of(f), false});
  }
  return out;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opt) {
  if (opt.families < 1 || opt.max_dim < 1 || opt.max_atoms < 1 ||
      opt.sample_points < 1 || opt.collapse_families < 1 ||
      opt.collapse_points < 1 || opt.fne_pairs < 1 || opt.oracle_inputs < 1) {
    throw InvalidParameter("verify options must all be positive");
  }
  const Rng root(opt.seed);

  // Test hook: additively corrupts the mixture resolvent so every identity
  // route that consumes it reports a named failure.
  const auto jw_eval = [&](const MixtureFamily& f, const Vec& x) {
    Vec r = resolvent_mixture(f, x);
    if (opt.inject_fault) r[0] += 1e-3;
    return r;
  };

  RowAccum duality_mix("resolvent_duality_mixture", 1e-11);
  RowAccum duality_comix("resolvent_duality_comixture", 1e-11);
  RowAccum yosida_mix("yosida_mixture_identity", 1e-11);
  RowAccum yosida_comix("yosida_comixture_identity", 1e-11);
  RowAccum involution("inverse_involution", 1e-12);
  RowAccum fne_mix("firm_nonexpansiveness_mixture", 1e-10);
  RowAccum fne_comix("firm_nonexpansiveness_comixture", 1e-10);
  RowAccum env_partition("envelope_partition", 1e-9);
  RowAccum prox_subdiff("prox_subdifferential_agreement", 1e-12);
  RowAccum moreau_mix("moreau_decomposition_mixture", 1e-11);
  RowAccum prox_duality("prox_duality_comixture", 1e-11);
  RowAccum moreau_catalog("moreau_identity_catalog", 1e-12);
  RowAccum collapse_res("isometry_collapse_resolvent", 1e-11);
  RowAccum collapse_prox("isometry_collapse_prox", 1e-11);
  RowAccum expect_res("resolvent_expectation_agreement", 1e-12);
  RowAccum expect_prox("proximal_expectation_agreement", 1e-12);
  RowAccum fne_expect("firm_nonexpansiveness_expectation", 1e-10);
  RowAccum res_bisect("resolvent_vs_bisection", 1e-8);
  RowAccum prox_grid("prox_vs_grid", 0.02);
  RowAccum conj_grid("conjugate_vs_grid", 0.02);
  RowAccum env_grid("envelope_vs_grid", 0.02);

  const int pairs_per_family = std::max(1, opt.fne_pairs / opt.families);

  {  // Monotone-family identities.
    Rng rng = root.child(1);
    for (int fi = 0; fi < opt.families; ++fi) {
      const int x_dim = rng.range(1, opt.max_dim);
      const MixtureFamily f =
          random_monotone_family(rng, x_dim, opt.max_atoms);
      const MixtureFamily finv = inverse_payload_family(f);
      const std::size_t n = static_cast<std::size_t>(x_dim);
      for (int s = 0; s < opt.sample_points; ++s) {
        const Vec x = rng.uniform_vec(n, -5.0, 5.0);
        const Vec jw = jw_eval(f, x);
        const Vec jc = resolvent_comixture(f, x);
        duality_mix.add(dist(sub(x, jw), resolvent_comixture(finv, x)));
        duality_comix.add(dist(jc, sub(x, jw_eval(finv, x))));
        yosida_mix.add(
            dist(yosida_mixture(f, MixtureKind::Mixture, x), sub(x, jw)));
        yosida_comix.add(
            dist(yosida_mixture(f, MixtureKind::Comixture, x), sub(x, jc)));
      }
      for (const Atom& a : f.atoms) {
        const Vec y =
            rng.uniform_vec(static_cast<std::size_t>(a.linop.rows), -5.0, 5.0);
        const MonotoneOpSpec& op = monotone_payload(a);
        involution.add(dist(resolvent(inverse_of(inverse_of(op)), 1.0, y),
                            resolvent(op, 1.0, y)));
      }
      for (int p = 0; p < pairs_per_family; ++p) {
        const Vec x = rng.uniform_vec(n, -5.0, 5.0);
        const Vec y = rng.uniform_vec(n, -5.0, 5.0);
        fne_mix.add(fne_slack(x, y, jw_eval(f, x), jw_eval(f, y)));
        fne_comix.add(fne_slack(x, y, resolvent_comixture(f, x),
                                resolvent_comixture(f, y)));
      }
    }
  }

  {  // Convex-family identities.
    Rng rng = root.child(2);
    for (int fi = 0; fi < opt.families; ++fi) {
      const int x_dim = rng.range(1, opt.max_dim);
      const MixtureFamily f = random_convex_family(rng, x_dim, opt.max_atoms);
      const MixtureFamily fstar = conjugate_payload_family(f);
      const MixtureFamily fsub = subdiff_payload_family(f);
      const std::size_t n = static_cast<std::size_t>(x_dim);
      for (int s = 0; s < opt.sample_points; ++s) {
        const Vec x = rng.uniform_vec(n, -5.0, 5.0);
        const Vec pm = prox_mixture(f, x);
        env_partition.add(std::abs(envelope_mixture(f, x) +
                                   envelope_comixture(fstar, x) -
                                   half_sqnorm(x)));
        prox_subdiff.add(dist(pm, jw_eval(fsub, x)));
        moreau_mix.add(dist(add(pm, prox_comixture(fstar, x)), x));
        prox_duality.add(
            dist(prox_comixture(f, x), sub(x, prox_mixture(fstar, x))));
      }
      for (const Atom& a : f.atoms) {
        const Vec y =
            rng.uniform_vec(static_cast<std::size_t>(a.linop.rows), -5.0, 5.0);
        const ConvexFnSpec& fn = convex_payload(a);
        moreau_catalog.add(
            dist(add(prox(fn, 1.0, y), prox(conjugate_spec(fn), 1.0, y)), y));
      }
    }
  }

  {  // Probability weights + orthogonal linops: mixture equals comixture.
    Rng rng = root.child(3);
    for (int fi = 0; fi < opt.collapse_families; ++fi) {
      const int x_dim = rng.range(1, opt.max_dim);
      const MixtureFamily fm =
          random_isometry_family(rng, x_dim, opt.max_atoms, false);
      const MixtureFamily fc =
          random_isometry_family(rng, x_dim, opt.max_atoms, true);
      const std::size_t n = static_cast<std::size_t>(x_dim);
      for (int p = 0; p < opt.collapse_points; ++p) {
        const Vec x = rng.uniform_vec(n, -5.0, 5.0);
        collapse_res.add(dist(jw_eval(fm, x), resolvent_comixture(fm, x)));
        collapse_prox.add(dist(prox_mixture(fc, x), prox_comixture(fc, x)));
      }
    }
  }

  {  // Expectation form: probability weights, identity linops.
    Rng rng = root.child(4);
    for (int fi = 0; fi < opt.families; ++fi) {
      const int x_dim = rng.range(1, opt.max_dim);
      const MixtureFamily fm =
          random_expectation_family(rng, x_dim, opt.max_atoms, false);
      const MixtureFamily fc =
          random_expectation_family(rng, x_dim, opt.max_atoms, true);
      const std::size_t n = static_cast<std::size_t>(x_dim);
      for (int s = 0; s < opt.sample_points; ++s) {
        const Vec x = rng.uniform_vec(n, -5.0, 5.0);
        expect_res.add(dist(resolvent_expectation(fm, x), jw_eval(fm, x)));
        expect_prox.add(
            dist(proximal_expectation_prox(fc, x), prox_mixture(fc, x)));
      }
      for (int p = 0; p < pairs_per_family; ++p) {
        const Vec x = rng.uniform_vec(n, -5.0, 5.0);
        const Vec y = rng.uniform_vec(n, -5.0, 5.0);
        fne_expect.add(fne_slack(x, y, resolvent_expectation(fm, x),
                                 resolvent_expectation(fm, y)));
      }
    }
  }

  {  // Closed forms against the bisection / grid oracles.
    Rng rng = root.child(5);
    const oracle::GridSpec conj_box{{-40.0}, {40.0}, 8001};   // step 0.01
    const oracle::GridSpec value_box{{-16.0}, {16.0}, 3201};  // step 0.01
    for (int i = 0; i < opt.oracle_inputs; ++i) {
      for (const OracleOpCase& c : oracle_monotone_cases(rng)) {
        const double x = rng.uniform(-10.0, 10.0);
        const double gamma =
            (c.gamma_one_only || rng.coin()) ? 1.0 : rng.uniform(0.5, 2.0);
        const Vec j = resolvent(c.op, gamma, Vec{x});
        res_bisect.add(
            std::abs(j[0] - oracle::bisect_resolvent_1d(c.op, gamma, x)));
      }
      for (const ConvexFnSpec& f : oracle_convex_cases(rng)) {
        const double x = rng.uniform(-10.0, 10.0);
        const auto fv = [&](const Vec& y) { return fn_value(f, y); };
        prox_grid.add(
            std::abs(prox(f, 1.0, Vec{x})[0] -
                     oracle::grid_prox(fv, value_box, Vec{x})[0]));
        env_grid.add(std::abs(envelope(f, Vec{x}) -
                              oracle::grid_envelope(fv, value_box, Vec{x})));
        const double closed = conjugate_value(f, Vec{x});
        const oracle::ConjugateResult r =
            oracle::grid_conjugate(fv, conj_box, Vec{x});
        if (closed == kInf) {
          // Unbounded conjugate: the grid supremum must sit on the box edge.
          conj_grid.add(r.boundary ? 0.0 : kInf);
        } else {
          conj_grid.add(std::abs(closed - r.value));
        }
      }
    }
  }

  VerifyReport report;
  report.seed = opt.seed;
  report.rows = {duality_mix.done(),    duality_comix.done(),
                 yosida_mix.done(),     yosida_comix.done(),
                 involution.done(),     fne_mix.done(),
                 fne_comix.done(),      env_partition.done(),
                 prox_subdiff.done(),   moreau_mix.done(),
                 prox_duality.done(),   moreau_catalog.done(),
                 collapse_res.done(),   collapse_prox.done(),
                 expect_res.done(),     expect_prox.done(),
                 fne_expect.done(),     res_bisect.done(),
                 prox_grid.done(),      conj_grid.done(),
                 env_grid.done()};
  report.pass = true;
  for (const IdentityResidual& row : report.rows) {
    report.pass = report.pass && row.pass;
  }
  return report;
}

}  // namespace promix
