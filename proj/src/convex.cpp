#include <algorithm>
#include <cmath>
#include <string>

#include "promix/convex.hpp"
#include "promix/errors.hpp"

namespace promix {

namespace {

// Membership slack for indicator sets: prox outputs land on set boundaries up
// to rounding and must evaluate as feasible.
double slack(double bound) {
  return std::isfinite(bound) ? 1e-9 * (1.0 + std::abs(bound)) : 0.0;
}

bool in_interval(double x, double lo, double hi) {
  if (std::isfinite(lo) && x < lo - slack(lo)) return false;
  if (std::isfinite(hi) && x > hi + slack(hi)) return false;
  return true;
}

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

double soft(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

void require_finite(const Vec& v, const char* what) {
  if (!all_finite(v)) {
    throw InvalidParameter(std::string(what) + ": non-finite entry");
  }
}

void check_dim(const ConvexFnSpec& f, std::span<const double> x,
               const char* what) {
  const auto d = fn_dim(f);
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

}  // namespace

ConvexFnSpec conjugate_wrap(ConvexFnSpec f) {
  return ConvexFnSpec{ConjugateFn{std::make_shared<const ConvexFnSpec>(std::move(f))}};
}

std::optional<int> fn_dim(const ConvexFnSpec& f) {
  return std::visit(
      [](const auto& s) -> std::optional<int> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          return static_cast<int>(s.center.size());
        } else if constexpr (std::is_same_v<T, QuadraticKernelFn>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, AbsSumFn>) {
          return static_cast<int>(s.weights.size());
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          return static_cast<int>(s.lower.size());
        } else if constexpr (std::is_same_v<T, IndicatorBallFn>) {
          return static_cast<int>(s.center.size());
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          return static_cast<int>(s.lower.size());
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          return static_cast<int>(s.slope.size());
        } else {
          return fn_dim(*s.inner);
        }
      },
      f.v);
}

void validate_fn(const ConvexFnSpec& f) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) {
            throw InvalidParameter("quadratic: alpha must be positive");
          }
          if (s.center.empty()) throw InvalidParameter("quadratic: empty center");
          require_finite(s.center, "quadratic center");
        } else if constexpr (std::is_same_v<T, AbsSumFn>) {
          if (s.weights.empty()) throw InvalidParameter("abs_sum: empty weights");
          require_finite(s.weights, "abs_sum weights");
          for (double w : s.weights) {
            if (w < 0.0) throw InvalidParameter("abs_sum: negative weight");
          }
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          if (s.lower.empty() || s.lower.size() != s.upper.size()) {
            throw DimensionMismatch("indicator_box: bound sizes");
          }
          for (std::size_t k = 0; k < s.lower.size(); ++k) {
            const double lo = s.lower[k], hi = s.upper[k];
            if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf ||
                hi == -kInf) {
              throw InvalidParameter("indicator_box: empty interval");
            }
          }
        } else if constexpr (std::is_same_v<T, IndicatorBallFn>) {
          if (s.center.empty()) throw InvalidParameter("indicator_ball: empty center");
          require_finite(s.center, "indicator_ball center");
          if (!(s.radius >= 0.0) || !std::isfinite(s.radius)) {
            throw InvalidParameter("indicator_ball: radius must be >= 0");
          }
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          if (s.lower.empty() || s.lower.size() != s.upper.size()) {
            throw DimensionMismatch("support_interval: bound sizes");
          }
          require_finite(s.lower, "support_interval lower");
          require_finite(s.upper, "support_interval upper");
          for (std::size_t k = 0; k < s.lower.size(); ++k) {
            if (!(s.lower[k] <= 0.0 && 0.0 <= s.upper[k])) {
              throw InvalidParameter(
                  "support_interval: interval must contain 0");
            }
          }
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          if (s.slope.empty()) throw InvalidParameter("linear: empty slope");
          require_finite(s.slope, "linear slope");
          if (!std::isfinite(s.offset)) {
            throw InvalidParameter("linear: non-finite offset");
          }
        } else if constexpr (std::is_same_v<T, ConjugateFn>) {
          if (!s.inner) throw InvalidParameter("conjugate: missing inner spec");
          validate_fn(*s.inner);
        }
      },
      f.v);
}

ConvexFnSpec conjugate_spec(const ConvexFnSpec& f) {
  return std::visit(
      [&](const auto& s) -> ConvexFnSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AbsSumFn>) {
          Vec lo = scaled(s.weights, -1.0);
          return ConvexFnSpec{IndicatorBoxFn{std::move(lo), s.weights}};
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          return ConvexFnSpec{IndicatorBoxFn{s.lower, s.upper}};
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          bool support_form = true;
          for (std::size_t k = 0; k < s.lower.size(); ++k) {
            support_form = support_form && std::isfinite(s.lower[k]) &&
                           std::isfinite(s.upper[k]) && s.lower[k] <= 0.0 &&
                           0.0 <= s.upper[k];
          }
          if (support_form) {
            return ConvexFnSpec{SupportIntervalFn{s.lower, s.upper}};
          }
          return conjugate_wrap(f);
        } else if constexpr (std::is_same_v<T, QuadraticKernelFn>) {
          return ConvexFnSpec{QuadraticKernelFn{}};
        } else if constexpr (std::is_same_v<T, QuadraticFn>) {
          if (norm(s.center) == 0.0) {
            return ConvexFnSpec{QuadraticFn{1.0 / s.alpha, s.center}};
          }
          return conjugate_wrap(f);
        } else if constexpr (std::is_same_v<T, ConjugateFn>) {
          return *s.inner;  // f** = f on this catalog
        } else {
          return conjugate_wrap(f);
        }
      },
      f.v);
}

double fn_value(const ConvexFnSpec& f, std::span<const double> x) {
  check_dim(f, x, "fn_value");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          const Vec d = sub(x, s.center);
          return 0.5 * s.alpha * dot(d, d);
        } else if constexpr (std::is_same_v<T, QuadraticKernelFn>) {
          return half_sqnorm(x);
        } else if constexpr (std::is_same_v<T, AbsSumFn>) {
          double v = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k) {
            v += s.weights[k] * std::abs(x[k]);
          }
          return v;
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          for (std::size_t k = 0; k < x.size(); ++k) {
            if (!in_interval(x[k], s.lower[k], s.upper[k])) return kInf;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, IndicatorBallFn>) {
          const Vec d = sub(x, s.center);
          return norm(d) <= s.radius + slack(s.radius) ? 0.0 : kInf;
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          double v = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k) {
            v += std::max(s.lower[k] * x[k], s.upper[k] * x[k]);
          }
          return v;
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          return dot(s.slope, x) + s.offset;
        } else {
          return conjugate_value(*s.inner, x);
        }
      },
      f.v);
}

Vec prox(const ConvexFnSpec& f, double gamma, std::span<const double> x) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidParameter("prox: gamma must be positive");
  }
  check_dim(f, x, "prox");
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
          Vec p(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) {
            p[k] = soft(x[k], gamma * s.weights[k]);
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
          // Moreau: prox_{gamma f*}(x) = x - gamma prox_{f / gamma}(x / gamma).
          const Vec inner = prox(*s.inner, 1.0 / gamma, scaled(x, 1.0 / gamma));
          Vec p(x.begin(), x.end());
          axpy(-gamma, inner, p);
          return p;
        }
      },
      f.v);
}

double conjugate_value(const ConvexFnSpec& f, std::span<const double> xstar) {
  check_dim(f, xstar, "conjugate_value");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          return dot(xstar, s.center) + dot(xstar, xstar) / (2.0 * s.alpha);
        } else if constexpr (std::is_same_v<T, QuadraticKernelFn>) {
          return half_sqnorm(xstar);
        } else if constexpr (std::is_same_v<T, AbsSumFn>) {
          for (std::size_t k = 0; k < xstar.size(); ++k) {
            if (!in_interval(xstar[k], -s.weights[k], s.weights[k])) return kInf;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          double v = 0.0;
          for (std::size_t k = 0; k < xstar.size(); ++k) {
            const double y = xstar[k];
            if (y > 0.0) {
              if (s.upper[k] == kInf) return kInf;
              v += y * s.upper[k];
            } else if (y < 0.0) {
              if (s.lower[k] == -kInf) return kInf;
              v += y * s.lower[k];
            }
          }
          return v;
        } else if constexpr (std::is_same_v<T, IndicatorBallFn>) {
          return dot(xstar, s.center) + s.radius * norm(xstar);
        } else if constexpr (std::is_same_v<T, SupportIntervalFn>) {
          for (std::size_t k = 0; k < xstar.size(); ++k) {
            if (!in_interval(xstar[k], s.lower[k], s.upper[k])) return kInf;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          for (std::size_t k = 0; k < xstar.size(); ++k) {
            const double a = s.slope[k];
            if (std::abs(xstar[k] - a) > 1e-9 * (1.0 + std::abs(a))) return kInf;
          }
          return -s.offset;
        } else {
          return fn_value(*s.inner, xstar);  // f** = f
        }
      },
      f.v);
}

double envelope(const ConvexFnSpec& f, std::span<const double> x) {
  check_dim(f, x, "envelope");
  const Vec p = prox(f, 1.0, x);
  const double d = dist(x, p);
  return fn_value(f, p) + 0.5 * d * d;
}

}  // namespace promix
