#include <algorithm>
#include <cmath>
#include <string>

#include "promix/errors.hpp"
#include "promix/linop.hpp"
#include "promix/monotone.hpp"

namespace promix {

namespace {

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

void require_finite(const Vec& v, const char* what) {
  if (!all_finite(v)) {
    throw InvalidParameter(std::string(what) + ": non-finite entry");
  }
}

void validate_interval_bounds(const Vec& lower, const Vec& upper,
                              const char* what) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw DimensionMismatch(std::string(what) + ": bound sizes");
  }
  for (std::size_t k = 0; k < lower.size(); ++k) {
    const double lo = lower[k], hi = upper[k];
    if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf ||
        hi == -kInf) {
      throw InvalidParameter(std::string(what) + ": empty interval");
    }
  }
}

void check_dim(const MonotoneOpSpec& a, std::span<const double> x,
               const char* what) {
  const auto d = op_dim(a);
  if (d && *d != static_cast<int>(x.size())) {
    throw DimensionMismatch(std::string(what) + ": spec dimension " +
                            std::to_string(*d) + ", vector dimension " +
                            std::to_string(x.size()));
  }
}

Vec project_ball(const Vec& center, double radius, std::span<const double> x) {
  Vec d = sub(x, center);
  const double n = norm(d);
  if (n <= radius) return Vec(x.begin(), x.end());
  Vec p = center;
  axpy(radius / n, d, p);
  return p;
}

// prox_{gamma f} implemented from the subdifferential side. Never calls the
// convex catalog's prox: closed forms are re-derived per variant, and the
// conjugate case goes through the inverse-resolvent identity.
Vec subdiff_resolvent(const ConvexFnSpec& f, double gamma,
                      std::span<const double> x);

}  // namespace

std::optional<int> projection_dim(const ProjectionSpec& t) {
  return std::visit(
      [](const auto& s) -> std::optional<int> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ProjectionSpec::Identity>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ProjectionSpec::Box>) {
          return static_cast<int>(s.lower.size());
        } else {
          return static_cast<int>(s.center.size());
        }
      },
      t.v);
}

Vec apply_projection(const ProjectionSpec& t, std::span<const double> x) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ProjectionSpec::Identity>) {
          return Vec(x.begin(), x.end());
        } else if constexpr (std::is_same_v<T, ProjectionSpec::Box>) {
          if (s.lower.size() != x.size()) {
            throw DimensionMismatch("projection box: dimension");
          }
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = clamp(x[k], s.lower[k], s.upper[k]);
          }
          return p;
        } else {
          if (s.center.size() != x.size()) {
            throw DimensionMismatch("projection ball: dimension");
          }
          return project_ball(s.center, s.radius, x);
        }
      },
      t.v);
}

std::optional<int> op_dim(const MonotoneOpSpec& a) {
  return std::visit(
      [](const auto& s) -> std::optional<int> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroOp> ||
                      std::is_same_v<T, ScaledIdentityOp>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, NormalConeBoxOp> ||
                             std::is_same_v<T, SubdiffSupportIntervalOp>) {
          return static_cast<int>(s.lower.size());
        } else if constexpr (std::is_same_v<T, NormalConeBallOp>) {
          return static_cast<int>(s.center.size());
        } else if constexpr (std::is_same_v<T, NormalConeAffineOp>) {
          return static_cast<int>(s.translate.size());
        } else if constexpr (std::is_same_v<T, AffineMonotoneOp>) {
          return s.dim;
        } else if constexpr (std::is_same_v<T, Rotation90Op>) {
          return 2;
        } else if constexpr (std::is_same_v<T, WienerResidualOp>) {
          return static_cast<int>(s.offset.size());
        } else if constexpr (std::is_same_v<T, InverseOp> ||
                             std::is_same_v<T, ScaledOp>) {
          return op_dim(*s.inner);
        } else {
          return fn_dim(*s.fn);
        }
      },
      a.v);
}

void validate_op(const MonotoneOpSpec& a) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScaledIdentityOp>) {
          if (!(s.alpha >= 0.0) || !std::isfinite(s.alpha)) {
            throw InvalidParameter("scaled_identity: alpha must be >= 0");
          }
        } else if constexpr (std::is_same_v<T, NormalConeBoxOp>) {
          validate_interval_bounds(s.lower, s.upper, "normal_cone_box");
        } else if constexpr (std::is_same_v<T, NormalConeBallOp>) {
          if (s.center.empty()) {
            throw InvalidParameter("normal_cone_ball: empty center");
          }
          require_finite(s.center, "normal_cone_ball center");
          if (!(s.radius >= 0.0) || !std::isfinite(s.radius)) {
            throw InvalidParameter("normal_cone_ball: radius must be >= 0");
          }
        } else if constexpr (std::is_same_v<T, NormalConeAffineOp>) {
          require_finite(s.translate, "normal_cone_affine translate");
          if (s.direction.ambient_dim !=
              static_cast<int>(s.translate.size())) {
            throw DimensionMismatch(
                "normal_cone_affine: direction ambient dimension");
          }
        } else if constexpr (std::is_same_v<T, SubdiffSupportIntervalOp>) {
          validate_interval_bounds(s.lower, s.upper, "subdiff_support_interval");
          require_finite(s.lower, "subdiff_support_interval lower");
          require_finite(s.upper, "subdiff_support_interval upper");
          for (std::size_t k = 0; k < s.lower.size(); ++k) {
            if (!(s.lower[k] <= 0.0 && 0.0 <= s.upper[k])) {
              throw InvalidParameter(
                  "subdiff_support_interval: interval must contain 0");
            }
          }
        } else if constexpr (std::is_same_v<T, AffineMonotoneOp>) {
          if (s.dim <= 0 ||
              s.m.size() != static_cast<std::size_t>(s.dim) * s.dim ||
              s.offset.size() != static_cast<std::size_t>(s.dim)) {
            throw DimensionMismatch("affine_monotone: sizes");
          }
          require_finite(s.offset, "affine_monotone offset");
          if (!all_finite(s.m)) {
            throw InvalidParameter("affine_monotone: non-finite matrix entry");
          }
          std::vector<double> sym(s.m.size());
          for (int i = 0; i < s.dim; ++i) {
            for (int j = 0; j < s.dim; ++j) {
              sym[static_cast<std::size_t>(i) * s.dim + j] =
                  0.5 * (s.m[static_cast<std::size_t>(i) * s.dim + j] +
                         s.m[static_cast<std::size_t>(j) * s.dim + i]);
            }
          }
          const Vec ev = symmetric_eigenvalues(s.dim, sym);
          if (ev.front() < -1e-10) {
            throw InvalidParameter(
                "affine_monotone: symmetric part not positive semidefinite "
                "(min eigenvalue " +
                std::to_string(ev.front()) + ")");
          }
        } else if constexpr (std::is_same_v<T, WienerResidualOp>) {
          if (s.offset.empty()) {
            throw InvalidParameter("wiener_residual: empty offset");
          }
          require_finite(s.offset, "wiener_residual offset");
          std::visit(
              [&](const auto& p) {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, ProjectionSpec::Box>) {
                  validate_interval_bounds(p.lower, p.upper,
                                           "wiener_residual projection box");
                } else if constexpr (std::is_same_v<P, ProjectionSpec::Ball>) {
                  require_finite(p.center, "wiener_residual projection center");
                  if (!(p.radius >= 0.0) || !std::isfinite(p.radius)) {
                    throw InvalidParameter(
                        "wiener_residual: projection radius must be >= 0");
                  }
                }
              },
              s.t.v);
          const auto pd = projection_dim(s.t);
          if (pd && *pd != static_cast<int>(s.offset.size())) {
            throw DimensionMismatch(
                "wiener_residual: projection/offset dimensions");
          }
        } else if constexpr (std::is_same_v<T, InverseOp>) {
          if (!s.inner) throw InvalidParameter("inverse: missing inner spec");
          validate_op(*s.inner);
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          if (!s.fn) throw InvalidParameter("subdifferential: missing spec");
          validate_fn(*s.fn);
        } else if constexpr (std::is_same_v<T, ScaledOp>) {
          if (!s.inner) throw InvalidParameter("scaled: missing inner spec");
          if (!(s.factor > 0.0) || !std::isfinite(s.factor)) {
            throw InvalidParameter("scaled: factor must be positive");
          }
          validate_op(*s.inner);
        }
      },
      a.v);
}

namespace {

Vec subdiff_resolvent(const ConvexFnSpec& f, double gamma,
                      std::span<const double> x) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          const double ga = gamma * s.alpha;
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = (x[k] + ga * s.center[k]) / (1.0 + ga);
          }
          return p;
        } else if constexpr (std::is_same_v<T, QuadraticKernelFn>) {
          return scaled(x, 1.0 / (1.0 + gamma));
        } else if constexpr (std::is_same_v<T, AbsSumFn>) {
          // Moreau against the conjugate box indicator.
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = x[k] - gamma * clamp(x[k] / gamma, -s.weights[k], s.weights[k]);
          }
          return p;
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = clamp(x[k], s.lower[k], s.upper[k]);
          }
          return p;
        } else if constexpr (std::is_same_v<T, IndicatorBallFn>) {
          return project_ball(s.center, s.radius, x);
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = x[k] - gamma * clamp(x[k] / gamma, s.lower[k], s.upper[k]);
          }
          return p;
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          Vec p(x.begin(), x.end());
          axpy(-gamma, s.slope, p);
          return p;
        } else {
          // d(g*) = (dg)^{-1}: inverse-resolvent identity on the inner spec.
          return resolvent_of_inverse(subdiff_of(*s.inner), gamma, x);
        }
      },
      f.v);
}

}  // namespace

Vec resolvent(const MonotoneOpSpec& a, double gamma,
              std::span<const double> x) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidParameter("resolvent: gamma must be positive");
  }
  check_dim(a, x, "resolvent");
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroOp>) {
          return Vec(x.begin(), x.end());
        } else if constexpr (std::is_same_v<T, ScaledIdentityOp>) {
          return scaled(x, 1.0 / (1.0 + gamma * s.alpha));
        } else if constexpr (std::is_same_v<T, NormalConeBoxOp>) {
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = clamp(x[k], s.lower[k], s.upper[k]);
          }
          return p;
        } else if constexpr (std::is_same_v<T, NormalConeBallOp>) {
          return project_ball(s.center, s.radius, x);
        } else if constexpr (std::is_same_v<T, NormalConeAffineOp>) {
          const Vec d = sub(x, s.translate);
          Vec p = s.translate;
          const Vec pd = project(s.direction, d);
          axpy(1.0, pd, p);
          return p;
        } else if constexpr (std::is_same_v<T, SubdiffSupportIntervalOp>) {
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = x[k] - gamma * clamp(x[k] / gamma, s.lower[k], s.upper[k]);
          }
          return p;
        } else if constexpr (std::is_same_v<T, AffineMonotoneOp>) {
          std::vector<double> sys(s.m.size());
          for (int i = 0; i < s.dim; ++i) {
            for (int j = 0; j < s.dim; ++j) {
              sys[static_cast<std::size_t>(i) * s.dim + j] =
                  gamma * s.m[static_cast<std::size_t>(i) * s.dim + j] +
                  (i == j ? 1.0 : 0.0);
            }
          }
          Vec rhs(x.begin(), x.end());
          axpy(-gamma, s.offset, rhs);
          return solve_dense(s.dim, sys, rhs);
        } else if constexpr (std::is_same_v<T, Rotation90Op>) {
          const double den = 1.0 + gamma * gamma;
          return Vec{(x[0] + gamma * x[1]) / den, (x[1] - gamma * x[0]) / den};
        } else if constexpr (std::is_same_v<T, WienerResidualOp>) {
          if (gamma != 1.0) {
            throw UnsupportedParameter(
                "wiener_residual: resolvent available at gamma = 1 only");
          }
          const Vec tx = apply_projection(s.t, x);
          Vec p = sub(x, tx);
          axpy(1.0, s.offset, p);
          return p;
        } else if constexpr (std::is_same_v<T, InverseOp>) {
          Vec inner = resolvent(*s.inner, 1.0 / gamma, scaled(x, 1.0 / gamma));
          Vec p(x.begin(), x.end());
          axpy(-gamma, inner, p);
          return p;
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          return subdiff_resolvent(*s.fn, gamma, x);
        } else {
          return resolvent(*s.inner, gamma * s.factor, x);
        }
      },
      a.v);
}

Vec resolvent_of_inverse(const MonotoneOpSpec& a, double gamma,
                         std::span<const double> x) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidParameter("resolvent_of_inverse: gamma must be positive");
  }
  check_dim(a, x, "resolvent_of_inverse");
  Vec inner = resolvent(a, 1.0 / gamma, scaled(x, 1.0 / gamma));
  Vec p(x.begin(), x.end());
  axpy(-gamma, inner, p);
  return p;
}

Vec yosida(const MonotoneOpSpec& a, double gamma, std::span<const double> x) {
  const Vec j = resolvent(a, gamma, x);
  Vec y = sub(x, j);
  for (auto& e : y) e /= gamma;
  return y;
}

MonotoneOpSpec inverse_of(MonotoneOpSpec a) {
  return MonotoneOpSpec{
      InverseOp{std::make_shared<const MonotoneOpSpec>(std::move(a))}};
}

MonotoneOpSpec subdiff_of(ConvexFnSpec f) {
  return MonotoneOpSpec{
      SubdiffOp{std::make_shared<const ConvexFnSpec>(std::move(f))}};
}

MonotoneOpSpec scaled_op(double factor, MonotoneOpSpec a) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidParameter("scaling factor must be finite and positive");
  }
  return MonotoneOpSpec{
      ScaledOp{factor, std::make_shared<const MonotoneOpSpec>(std::move(a))}};
}

}  // namespace promix
