#pragma once

#include <span>

#include "promix/family.hpp"
#include "promix/oracle.hpp"
#include "promix/vec.hpp"

namespace promix {

enum class MixtureKind { Mixture, Comixture };

// All mixture formulas run at gamma = 1; fixed scalings enter through
// ScaledOp payloads at the atom level.

// J_W(x) = sum_i w_i L_i^T J_{A_i}(L_i x) for the resolvent mixture W.
Vec resolvent_mixture(const MixtureFamily& f, std::span<const double> x);

// J_C(x) = x + sum_i w_i (L_i^T J_{A_i}(L_i x) - L_i^T L_i x) for the
// resolvent comixture C.
Vec resolvent_comixture(const MixtureFamily& f, std::span<const double> x);

// Yosida approximation of the mixture (via the inverse resolvents of the
// atoms) or of the comixture (via the atom Yosida residuals).
Vec yosida_mixture(const MixtureFamily& f, MixtureKind kind,
                   std::span<const double> x);

// || yosida of the comixture ||; vanishes exactly on its zero set.
double zeros_residual(const MixtureFamily& f, std::span<const double> x);

// prox of the proximal mixture: sum_i w_i L_i^T prox_{f_i}(L_i x).
Vec prox_mixture(const MixtureFamily& f, std::span<const double> x);

// prox of the proximal comixture: x - sum_i w_i L_i^T (L_i x - prox_{f_i}(L_i x)),
// i.e. the conjugate proxes enter through the per-atom Moreau identity.
Vec prox_comixture(const MixtureFamily& f, std::span<const double> x);

// Moreau envelope of the comixture: sum_i w_i (f_i box Q)(L_i x).
double envelope_comixture(const MixtureFamily& f, std::span<const double> x);

// Moreau envelope of the mixture: Q(x) - sum_i w_i (Q(L_i x) - (f_i box Q)(L_i x)),
// the per-atom dual form of Q(x) - envelope_comixture(conjugates, x).
double envelope_mixture(const MixtureFamily& f, std::span<const double> x);

struct MixtureValueResult {
  double value = 0.0;
  bool boundary = false;  // grid supremum attained on the box boundary
};

// Value of the proximal mixture function by numerical conjugation of
// phi(y) = sum_i w_i (f_i* box Q)(L_i y) over the supplied grid (1-2 dims).
MixtureValueResult mixture_value(const MixtureFamily& f,
                                 std::span<const double> x,
                                 const oracle::GridSpec& g);

// Default conjugation box: per-axis hull of the sample points widened by
// twice the hull radius (radius floored at 1), 2001 points per axis.
oracle::GridSpec default_value_grid(const std::vector<Vec>& points);

// sum_i w_i J_{A_i}(x); requires a probability family with every L_i = Id.
Vec resolvent_expectation(const MixtureFamily& f, std::span<const double> x);

// sum_i w_i prox_{f_i}(x); same requirements.
Vec proximal_expectation_prox(const MixtureFamily& f, std::span<const double> x);

struct CompositeConstants {
  double delta = 0.0;      // cocoercivity constant (tau + 1) / mass - 1
  double lipschitz = 0.0;  // sum_i w_i ||L_i||^2 beta_i
};

// tau: common cocoercivity constant of the atoms; beta: per-atom Lipschitz
// constants (defaults to 1/tau for every atom when empty).
CompositeConstants cocoercivity_constant(const MixtureFamily& f, double tau,
                                         std::span<const double> beta = {});

}  // namespace promix
