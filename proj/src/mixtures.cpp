#include <algorithm>
#include <cmath>
#include <string>

#include "promix/errors.hpp"
#include "promix/kernels.hpp"
#include "promix/mixtures.hpp"

namespace promix {

namespace {

void require_monotone(const MixtureFamily& f, const char* what) {
  if (!monotone_payloads(f)) {
    throw ValidationError(std::string(what) +
                          ": family must carry monotone operator payloads");
  }
}

void require_convex(const MixtureFamily& f, const char* what) {
  if (!convex_payloads(f)) {
    throw ValidationError(std::string(what) +
                          ": family must carry convex function payloads");
  }
}

void require_expectation_form(const MixtureFamily& f, const char* what) {
  if (!f.probability) {
    throw ValidationError(std::string(what) +
                          ": weights must sum to 1 (probability family)");
  }
  for (const Atom& a : f.atoms) {
    if (!is_identity_op(a.linop)) {
      throw ValidationError(std::string(what) +
                            ": every linop must be the identity");
    }
  }
}

}  // namespace

Vec resolvent_mixture(const MixtureFamily& f, std::span<const double> x) {
  require_monotone(f, "resolvent_mixture");
  return kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        return resolvent(monotone_payload(f.atoms[static_cast<std::size_t>(i)]),
                         1.0, y);
      });
}

Vec resolvent_comixture(const MixtureFamily& f, std::span<const double> x) {
  require_monotone(f, "resolvent_comixture");
  Vec out = kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        const Vec j = resolvent(
            monotone_payload(f.atoms[static_cast<std::size_t>(i)]), 1.0, y);
        return sub(j, y);
      });
  axpy(1.0, x, out);
  return out;
}

Vec yosida_mixture(const MixtureFamily& f, MixtureKind kind,
                   std::span<const double> x) {
  require_monotone(f, "yosida_mixture");
  if (kind == MixtureKind::Mixture) {
    // x - sum_i w_i L_i^T (y_i - J_{A_i^{-1}} y_i), y_i = L_i x.
    Vec s = kernels::weighted_adjoint_sum(
        f, x, [&](int i, const Vec& y) {
          const Vec j = resolvent_of_inverse(
              monotone_payload(f.atoms[static_cast<std::size_t>(i)]), 1.0, y);
          return sub(y, j);
        });
    Vec out(x.begin(), x.end());
    axpy(-1.0, s, out);
    return out;
  }
  // sum_i w_i L_i^T (y_i - J_{A_i} y_i).
  return kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        const Vec j = resolvent(
            monotone_payload(f.atoms[static_cast<std::size_t>(i)]), 1.0, y);
        return sub(y, j);
      });
}

double zeros_residual(const MixtureFamily& f, std::span<const double> x) {
  return norm(yosida_mixture(f, MixtureKind::Comixture, x));
}

Vec prox_mixture(const MixtureFamily& f, std::span<const double> x) {
  require_convex(f, "prox_mixture");
  return kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        return prox(convex_payload(f.atoms[static_cast<std::size_t>(i)]), 1.0, y);
      });
}

Vec prox_comixture(const MixtureFamily& f, std::span<const double> x) {
  require_convex(f, "prox_comixture");
  Vec s = kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        const Vec p = prox(convex_payload(f.atoms[static_cast<std::size_t>(i)]),
                           1.0, y);
        return sub(y, p);
      });
  Vec out(x.begin(), x.end());
  axpy(-1.0, s, out);
  return out;
}

double envelope_comixture(const MixtureFamily& f, std::span<const double> x) {
  require_convex(f, "envelope_comixture");
  return kernels::weighted_scalar_sum(
      f, x, [&](int i, const Vec& y) {
        return envelope(convex_payload(f.atoms[static_cast<std::size_t>(i)]), y);
      });
}

double envelope_mixture(const MixtureFamily& f, std::span<const double> x) {
  require_convex(f, "envelope_mixture");
  const double s = kernels::weighted_scalar_sum(
      f, x, [&](int i, const Vec& y) {
        return half_sqnorm(y) -
               envelope(convex_payload(f.atoms[static_cast<std::size_t>(i)]), y);
      });
  return half_sqnorm(x) - s;
}

MixtureValueResult mixture_value(const MixtureFamily& f,
                                 std::span<const double> x,
                                 const oracle::GridSpec& g) {
  require_convex(f, "mixture_value");
  if (f.x_dim > 2) {
    throw UnsupportedParameter(
        "mixture_value: available in 1 or 2 dimensions only");
  }
  oracle::validate_grid(g);
  const auto phi = [&](const Vec& y) {
    // (f* box Q) = Q - (f box Q) per atom.
    return kernels::weighted_scalar_sum_serial(
        f, y, [&](int i, const Vec& z) {
          return half_sqnorm(z) -
                 envelope(convex_payload(f.atoms[static_cast<std::size_t>(i)]),
                          z);
        });
  };
  const oracle::ConjugateResult c = oracle::grid_conjugate(phi, g, x);
  return MixtureValueResult{c.value - half_sqnorm(x), c.boundary};
}

oracle::GridSpec default_value_grid(const std::vector<Vec>& points) {
  if (points.empty()) {
    throw InvalidParameter("default_value_grid: no sample points");
  }
  const std::size_t d = points.front().size();
  oracle::GridSpec g;
  g.lower.assign(d, kInf);
  g.upper.assign(d, -kInf);
  for (const Vec& p : points) {
    if (p.size() != d) throw DimensionMismatch("default_value_grid: ragged points");
    for (std::size_t k = 0; k < d; ++k) {
      g.lower[k] = std::min(g.lower[k], p[k]);
      g.upper[k] = std::max(g.upper[k], p[k]);
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    const double radius = std::max(0.5 * (g.upper[k] - g.lower[k]), 1.0);
    g.lower[k] -= 2.0 * radius;
    g.upper[k] += 2.0 * radius;
  }
  g.points_per_axis = 2001;
  return g;
}

Vec resolvent_expectation(const MixtureFamily& f, std::span<const double> x) {
  require_monotone(f, "resolvent_expectation");
  require_expectation_form(f, "resolvent_expectation");
  return kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        return resolvent(monotone_payload(f.atoms[static_cast<std::size_t>(i)]),
                         1.0, y);
      });
}

Vec proximal_expectation_prox(const MixtureFamily& f,
                              std::span<const double> x) {
  require_convex(f, "proximal_expectation_prox");
  require_expectation_form(f, "proximal_expectation_prox");
  return kernels::weighted_adjoint_sum(
      f, x, [&](int i, const Vec& y) {
        return prox(convex_payload(f.atoms[static_cast<std::size_t>(i)]), 1.0, y);
      });
}

CompositeConstants cocoercivity_constant(const MixtureFamily& f, double tau,
                                         std::span<const double> beta) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidParameter("cocoercivity_constant: tau must be positive");
  }
  if (!beta.empty() && beta.size() != f.atoms.size()) {
    throw DimensionMismatch(
        "cocoercivity_constant: beta must have one entry per atom");
  }
  CompositeConstants c;
  c.delta = (tau + 1.0) / f.mass - 1.0;
  for (std::size_t i = 0; i < f.atoms.size(); ++i) {
    const double n = operator_norm(f.atoms[i].linop);
    const double b = beta.empty() ? 1.0 / tau : beta[i];
    c.lipschitz += f.atoms[i].weight * n * n * b;
  }
  return c;
}

}  // namespace promix
