#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>

#include "promix/convex.hpp"
#include "promix/subspace.hpp"
#include "promix/vec.hpp"

namespace promix {

struct MonotoneOpSpec;

// A = 0.
struct ZeroOp {};

// A = alpha * Id, alpha >= 0.
struct ScaledIdentityOp {
  double alpha = 1.0;
};

// Normal cone of the box prod_k [lower_k, upper_k]; +-infinity bounds allowed.
struct NormalConeBoxOp {
  Vec lower, upper;
};

// Normal cone of the closed ball B(center, radius), radius >= 0.
struct NormalConeBallOp {
  Vec center;
  double radius = 1.0;
};

// Normal cone of the affine set translate + direction.
struct NormalConeAffineOp {
  Vec translate;
  Subspace direction;
};

// Subdifferential of the support function of prod_k [lower_k, upper_k],
// lower_k <= 0 <= upper_k.
struct SubdiffSupportIntervalOp {
  Vec lower, upper;
};

// A(x) = M x + offset with M + M^T positive semidefinite
// (minimum eigenvalue >= -1e-10).
struct AffineMonotoneOp {
  int dim = 0;
  std::vector<double> m;  // row-major dim x dim
  Vec offset;
};

// Rotation by 90 degrees in R^2 (skew, maximally monotone).
struct Rotation90Op {};

// Firmly nonexpansive building block: identity or a projection.
struct ProjectionSpec {
  struct Identity {};
  struct Box {
    Vec lower, upper;
  };
  struct Ball {
    Vec center;
    double radius = 1.0;
  };
  std::variant<Identity, Box, Ball> v;
};

// A = (Id - T + offset)^{-1} - Id with T firmly nonexpansive.
// Resolvent available at gamma = 1 only: J_A = Id - T + offset.
struct WienerResidualOp {
  ProjectionSpec t;
  Vec offset;
};

// A = inner^{-1} (graph inverse).
struct InverseOp {
  std::shared_ptr<const MonotoneOpSpec> inner;
};

// A = subdifferential of the wrapped convex spec. Resolvents are computed in
// this module without calling the convex catalog's prox, so the two routes
// can be cross-checked against each other.
struct SubdiffOp {
  std::shared_ptr<const ConvexFnSpec> fn;
};

// A = factor * inner, factor > 0. Carries a fixed scaling at the atom level;
// mixture formulas themselves always run at gamma = 1.
struct ScaledOp {
  double factor = 1.0;
  std::shared_ptr<const MonotoneOpSpec> inner;
};

struct MonotoneOpSpec {
  std::variant<ZeroOp, ScaledIdentityOp, NormalConeBoxOp, NormalConeBallOp,
               NormalConeAffineOp, SubdiffSupportIntervalOp, AffineMonotoneOp,
               Rotation90Op, WienerResidualOp, InverseOp, SubdiffOp, ScaledOp>
      v;
};

// Intrinsic dimension; nullopt means any dimension.
std::optional<int> op_dim(const MonotoneOpSpec& a);

// Checks parameter ranges (including positive semidefiniteness of the
// symmetric part for AffineMonotoneOp); throws on violation.
void validate_op(const MonotoneOpSpec& a);

Vec apply_projection(const ProjectionSpec& t, std::span<const double> x);
std::optional<int> projection_dim(const ProjectionSpec& t);

// J_{gamma A}(x), gamma > 0.
Vec resolvent(const MonotoneOpSpec& a, double gamma, std::span<const double> x);

// J_{gamma A^{-1}}(x) = x - gamma J_{A/gamma}(x/gamma).
Vec resolvent_of_inverse(const MonotoneOpSpec& a, double gamma,
                         std::span<const double> x);

// Yosida approximation (x - J_{gamma A}(x)) / gamma.
Vec yosida(const MonotoneOpSpec& a, double gamma, std::span<const double> x);

MonotoneOpSpec inverse_of(MonotoneOpSpec a);
MonotoneOpSpec subdiff_of(ConvexFnSpec f);
MonotoneOpSpec scaled_op(double factor, MonotoneOpSpec a);

}  // namespace promix
