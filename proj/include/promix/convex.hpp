#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>

#include "promix/vec.hpp"

namespace promix {

struct ConvexFnSpec;

// f(x) = alpha/2 ||x - center||^2, alpha > 0.
struct QuadraticFn {
  double alpha = 1.0;
  Vec center;
};

// The quadratic kernel Q = ||.||^2 / 2, any dimension.
struct QuadraticKernelFn {};

// f(x) = sum_k weights[k] |x_k|, weights[k] >= 0.
struct AbsSumFn {
  Vec weights;
};

// Indicator of the box prod_k [lower_k, upper_k]; +-infinity bounds allowed.
struct IndicatorBoxFn {
  Vec lower, upper;
};

// Indicator of the closed ball B(center, radius), radius >= 0.
struct IndicatorBallFn {
  Vec center;
  double radius = 1.0;
};

// Support function of the box prod_k [lower_k, upper_k] with
// lower_k <= 0 <= upper_k, all bounds finite.
struct SupportIntervalFn {
  Vec lower, upper;
};

// f(x) = <slope, x> + offset.
struct LinearFn {
  Vec slope;
  double offset = 0.0;
};

// Fenchel conjugate of the wrapped spec.
struct ConjugateFn {
  std::shared_ptr<const ConvexFnSpec> inner;
};

struct ConvexFnSpec {
  std::variant<QuadraticFn, QuadraticKernelFn, AbsSumFn, IndicatorBoxFn,
               IndicatorBallFn, SupportIntervalFn, LinearFn, ConjugateFn>
      v;
};

// Intrinsic dimension; nullopt means any dimension.
std::optional<int> fn_dim(const ConvexFnSpec& f);

// Checks parameter ranges; throws InvalidParameter / DimensionMismatch.
void validate_fn(const ConvexFnSpec& f);

// Symbolic conjugate. Uses a closed-form catalog rewrite when one exists
// (abs_sum <-> indicator_box, support_interval <-> indicator_box, centered
// quadratics, the kernel), unwraps conjugate-of-conjugate (f** = f on this
// catalog), and falls back to a ConjugateFn wrapper otherwise.
ConvexFnSpec conjugate_spec(const ConvexFnSpec& f);

// May return +infinity (indicators outside their set). Set membership uses a
// small relative slack so prox outputs landing on a boundary stay feasible.
double fn_value(const ConvexFnSpec& f, std::span<const double> x);

// prox_{gamma f}(x), gamma > 0.
Vec prox(const ConvexFnSpec& f, double gamma, std::span<const double> x);

// f*(xstar) in closed form.
double conjugate_value(const ConvexFnSpec& f, std::span<const double> xstar);

// Moreau envelope (f box Q)(x), computed as f(p) + ||x - p||^2 / 2 with
// p = prox(f, 1, x). Always finite.
double envelope(const ConvexFnSpec& f, std::span<const double> x);

ConvexFnSpec conjugate_wrap(ConvexFnSpec f);

}  // namespace promix
