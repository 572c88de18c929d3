#include <cmath>
#include <optional>
#include <string>

#include "promix/errors.hpp"
#include "promix/kernels.hpp"
#include "promix/oracle.hpp"

namespace promix::oracle {

namespace {

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

}  // namespace

void validate_grid(const GridSpec& g) {
  const std::size_t d = g.lower.size();
  if (d < 1 || d > 2 || g.upper.size() != d) {
    throw InvalidParameter("grid: 1 or 2 axes required");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (!std::isfinite(g.lower[k]) || !std::isfinite(g.upper[k]) ||
        !(g.lower[k] < g.upper[k])) {
      throw InvalidParameter("grid: lower bound must be below upper bound");
    }
  }
  if (g.points_per_axis < 3 || g.points_per_axis % 2 == 0) {
    throw InvalidParameter("grid: points_per_axis must be odd and >= 3");
  }
}

std::int64_t grid_size(const GridSpec& g) {
  std::int64_t n = 1;
  for (std::size_t k = 0; k < g.lower.size(); ++k) n *= g.points_per_axis;
  return n;
}

Vec grid_point(const GridSpec& g, std::int64_t flat) {
  const int pts = g.points_per_axis;
  const std::size_t d = g.lower.size();
  Vec y(d);
  std::int64_t rest = flat;
  for (std::size_t k = d; k-- > 0;) {
    const std::int64_t idx = rest % pts;
    rest /= pts;
    y[k] = g.lower[k] +
           (g.upper[k] - g.lower[k]) * static_cast<double>(idx) /
               static_cast<double>(pts - 1);
  }
  return y;
}

namespace {

bool on_boundary(const GridSpec& g, std::int64_t flat) {
  const int pts = g.points_per_axis;
  std::int64_t rest = flat;
  for (std::size_t k = g.lower.size(); k-- > 0;) {
    const std::int64_t idx = rest % pts;
    rest /= pts;
    if (idx == 0 || idx == pts - 1) return true;
  }
  return false;
}

}  // namespace

ConjugateResult grid_conjugate(const std::function<double(const Vec&)>& f,
                               const GridSpec& g,
                               std::span<const double> xstar) {
  validate_grid(g);
  if (xstar.size() != g.lower.size()) {
    throw DimensionMismatch("grid_conjugate: dimension");
  }
  const auto h = [&](std::int64_t flat) {
    const Vec y = grid_point(g, flat);
    const double fy = f(y);
    return fy == kInf ? -kInf : dot(y, xstar) - fy;
  };
  const kernels::GridBest best = kernels::grid_max(grid_size(g), h);
  if (best.index < 0 || best.value == -kInf) {
    throw ValidationError("grid_conjugate: f is +infinity on the whole grid");
  }
  return ConjugateResult{best.value, on_boundary(g, best.index),
                         grid_point(g, best.index)};
}

Vec grid_prox(const std::function<double(const Vec&)>& f, const GridSpec& g,
              std::span<const double> x) {
  validate_grid(g);
  if (x.size() != g.lower.size()) {
    throw DimensionMismatch("grid_prox: dimension");
  }
  const auto h = [&](std::int64_t flat) {
    const Vec y = grid_point(g, flat);
    const double fy = f(y);
    if (fy == kInf) return kInf;
    const double d = dist(x, y);
    return fy + 0.5 * d * d;
  };
  const kernels::GridBest best = kernels::grid_min(grid_size(g), h);
  if (best.index < 0 || best.value == kInf) {
    throw ValidationError("grid_prox: f is +infinity on the whole grid");
  }
  return grid_point(g, best.index);
}

double grid_envelope(const std::function<double(const Vec&)>& f,
                     const GridSpec& g, std::span<const double> x) {
  validate_grid(g);
  if (x.size() != g.lower.size()) {
    throw DimensionMismatch("grid_envelope: dimension");
  }
  const auto h = [&](std::int64_t flat) {
    const Vec y = grid_point(g, flat);
    const double fy = f(y);
    if (fy == kInf) return kInf;
    const double d = dist(x, y);
    return fy + 0.5 * d * d;
  };
  const kernels::GridBest best = kernels::grid_min(grid_size(g), h);
  if (best.index < 0 || best.value == kInf) {
    throw ValidationError("grid_envelope: f is +infinity on the whole grid");
  }
  return best.value;
}

namespace {

// Scalar view of a maximally monotone variant: domain interval plus a
// minimal-norm selection evaluable on it.
struct ScalarModel {
  double dom_lo = -kInf;
  double dom_hi = kInf;
  std::function<double(double)> sel;
};

std::optional<ScalarModel> scalar_model(const MonotoneOpSpec& a);

std::optional<ScalarModel> scalar_model_fn(const ConvexFnSpec& f) {
  using R = std::optional<ScalarModel>;
  return std::visit(
      [&](const auto& s) -> R {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          if (s.center.size() != 1) return std::nullopt;
          const double alpha = s.alpha, c = s.center[0];
          return ScalarModel{-kInf, kInf,
                             [alpha, c](double y) { return alpha * (y - c); }};
        } else if constexpr (std::is_same_v<T, QuadraticKernelFn>) {
          return ScalarModel{-kInf, kInf, [](double y) { return y; }};
        } else if constexpr (std::is_same_v<T, AbsSumFn>) {
          if (s.weights.size() != 1) return std::nullopt;
          const double w = s.weights[0];
          return ScalarModel{-kInf, kInf, [w](double y) {
                               return y > 0.0 ? w : (y < 0.0 ? -w : 0.0);
                             }};
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          if (s.lower.size() != 1) return std::nullopt;
          return ScalarModel{s.lower[0], s.upper[0], [](double) { return 0.0; }};
        } else if constexpr (std::is_same_v<T, IndicatorBallFn>) {
          if (s.center.size() != 1) return std::nullopt;
          return ScalarModel{s.center[0] - s.radius, s.center[0] + s.radius,
                             [](double) { return 0.0; }};
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          if (s.lower.size() != 1) return std::nullopt;
          const double lo = s.lower[0], hi = s.upper[0];
          return ScalarModel{-kInf, kInf, [lo, hi](double y) {
                               return y > 0.0 ? hi : (y < 0.0 ? lo : 0.0);
                             }};
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          if (s.slope.size() != 1) return std::nullopt;
          const double a0 = s.slope[0];
          return ScalarModel{-kInf, kInf, [a0](double) { return a0; }};
        } else {
          return std::nullopt;  // conjugate handled via the inverse route
        }
      },
      f.v);
}

std::optional<ScalarModel> scalar_model(const MonotoneOpSpec& a) {
  using R = std::optional<ScalarModel>;
  return std::visit(
      [&](const auto& s) -> R {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroOp>) {
          return ScalarModel{-kInf, kInf, [](double) { return 0.0; }};
        } else if constexpr (std::is_same_v<T, ScaledIdentityOp>) {
          const double alpha = s.alpha;
          return ScalarModel{-kInf, kInf,
                             [alpha](double y) { return alpha * y; }};
        } else if constexpr (std::is_same_v<T, NormalConeBoxOp>) {
          if (s.lower.size() != 1) return std::nullopt;
          return ScalarModel{s.lower[0], s.upper[0], [](double) { return 0.0; }};
        } else if constexpr (std::is_same_v<T, NormalConeBallOp>) {
          if (s.center.size() != 1) return std::nullopt;
          return ScalarModel{s.center[0] - s.radius, s.center[0] + s.radius,
                             [](double) { return 0.0; }};
        } else if constexpr (std::is_same_v<T, NormalConeAffineOp>) {
          if (s.translate.size() != 1) return std::nullopt;
          if (subspace_dim(s.direction) == 1) {
            return ScalarModel{-kInf, kInf, [](double) { return 0.0; }};
          }
          const double t = s.translate[0];
          return ScalarModel{t, t, [](double) { return 0.0; }};
        } else if constexpr (std::is_same_v<T, SubdiffSupportIntervalOp>) {
          if (s.lower.size() != 1) return std::nullopt;
          const double lo = s.lower[0], hi = s.upper[0];
          return ScalarModel{-kInf, kInf, [lo, hi](double y) {
                               return y > 0.0 ? hi : (y < 0.0 ? lo : 0.0);
                             }};
        } else if constexpr (std::is_same_v<T, AffineMonotoneOp>) {
          if (s.dim != 1) return std::nullopt;
          const double m = s.m[0], b = s.offset[0];
          return ScalarModel{-kInf, kInf,
                             [m, b](double y) { return m * y + b; }};
        } else if constexpr (std::is_same_v<T, WienerResidualOp>) {
          if (s.offset.size() != 1) return std::nullopt;
          // T clips to [a, b] (identity: a = -inf, b = +inf). The residual
          // operator's graph is m^{-1} - Id with m = Id - T + r, so its
          // domain is clipped at r on any side where T saturates nowhere.
          double a0 = -kInf, b0 = kInf;
          if (const auto* box = std::get_if<ProjectionSpec::Box>(&s.t.v)) {
            a0 = box->lower[0];
            b0 = box->upper[0];
          } else if (const auto* ball =
                         std::get_if<ProjectionSpec::Ball>(&s.t.v)) {
            a0 = ball->center[0] - ball->radius;
            b0 = ball->center[0] + ball->radius;
          }
          const double r = s.offset[0];
          ScalarModel sm;
          sm.dom_lo = (a0 == -kInf) ? r : -kInf;
          sm.dom_hi = (b0 == kInf) ? r : kInf;
          sm.sel = [a0, b0, r](double y) {
            if (y > r) return b0 - r;
            if (y < r) return a0 - r;
            return clamp(0.0, a0 - r, b0 - r);
          };
          return sm;
        } else if constexpr (std::is_same_v<T, ScaledOp>) {
          auto inner = scalar_model(*s.inner);
          if (!inner) return std::nullopt;
          const double c = s.factor;
          auto base = inner->sel;
          return ScalarModel{inner->dom_lo, inner->dom_hi,
                             [c, base](double y) { return c * base(y); }};
        } else {
          return std::nullopt;  // Rotation90 (2-D), Inverse, Subdiff at top
        }
      },
      a.v);
}

// Bisection of the increasing function h over [lo, hi] down to width tol;
// domain endpoints absorb normal-cone jumps.
double bisect_increasing(const std::function<double(double)>& h, double lo,
                         double hi, double tol) {
  if (h(lo) >= 0.0) return lo;
  if (h(hi) <= 0.0) return hi;
  for (int it = 0; it < 300 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double bisect_direct(const ScalarModel& m, double gamma, double x) {
  const double b = 10.0 * (1.0 + std::abs(x));
  const double lo = std::max(x - b, m.dom_lo);
  const double hi = std::min(x + b, m.dom_hi);
  if (lo >= hi) return clamp(m.dom_lo, x - b, x + b);
  const auto h = [&](double y) { return y + gamma * m.sel(y) - x; };
  return bisect_increasing(h, lo, hi, 1e-11);
}

// J_{gamma B^{-1}}(x): with t = (x - y)/gamma the defining inclusion becomes
// gamma t + b(t) = x over dom(B), increasing in t.
double bisect_through_inverse(const ScalarModel& m, double gamma, double x) {
  const double b = 10.0 * (1.0 + std::abs(x));
  const double lo = std::max((x - (x + b)) / gamma, m.dom_lo);
  const double hi = std::min((x - (x - b)) / gamma, m.dom_hi);
  if (lo >= hi) {
    const double t = clamp(m.dom_lo, (x - (x + b)) / gamma, (x - (x - b)) / gamma);
    return x - gamma * t;
  }
  const auto h = [&](double t) { return gamma * t + m.sel(t) - x; };
  const double t = bisect_increasing(h, lo, hi, 1e-11 / std::max(1.0, gamma));
  return x - gamma * t;
}

}  // namespace

double bisect_resolvent_1d(const MonotoneOpSpec& a, double gamma, double x) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidParameter("bisect_resolvent_1d: gamma must be positive");
  }
  if (const auto* inv = std::get_if<InverseOp>(&a.v)) {
    if (const auto* inner_inv = std::get_if<InverseOp>(&inv->inner->v)) {
      return bisect_resolvent_1d(*inner_inv->inner, gamma, x);
    }
    const auto m = scalar_model(*inv->inner);
    if (!m) {
      throw UnsupportedParameter(
          "bisect_resolvent_1d: inner variant has no scalar selection");
    }
    return bisect_through_inverse(*m, gamma, x);
  }
  if (const auto* sd = std::get_if<SubdiffOp>(&a.v)) {
    if (const auto* conj = std::get_if<ConjugateFn>(&sd->fn->v)) {
      // d(g*) = (dg)^{-1}.
      const auto m = scalar_model_fn(*conj->inner);
      if (!m) {
        throw UnsupportedParameter(
            "bisect_resolvent_1d: conjugate inner has no scalar selection");
      }
      return bisect_through_inverse(*m, gamma, x);
    }
    const auto m = scalar_model_fn(*sd->fn);
    if (!m) {
      throw UnsupportedParameter(
          "bisect_resolvent_1d: function has no scalar selection");
    }
    return bisect_direct(*m, gamma, x);
  }
  const auto m = scalar_model(a);
  if (!m) {
    throw UnsupportedParameter(
        "bisect_resolvent_1d: variant has no scalar selection");
  }
  return bisect_direct(*m, gamma, x);
}

}  // namespace promix::oracle
