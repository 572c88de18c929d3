#pragma once

#include <string>
#include <variant>
#include <vector>

#include "promix/convex.hpp"
#include "promix/linop.hpp"
#include "promix/monotone.hpp"

namespace promix {

using PayloadSpec = std::variant<MonotoneOpSpec, ConvexFnSpec>;

struct Atom {
  double weight = 1.0;
  LinOp linop;
  PayloadSpec payload;
};

// Finite atom family (w_i, L_i, payload_i) over X = R^x_dim. Admissibility:
// 0 < mass <= 1 + 1e-12 with mass = sum_i w_i ||L_i||^2. The probability flag
// records sum_i w_i = 1 within 1e-12. Instances from make_family carry the
// validated mass; operations rely on it.
struct MixtureFamily {
  int x_dim = 0;
  std::vector<Atom> atoms;
  bool probability = false;
  double mass = 0.0;
};

struct FamilyDiagnostics {
  bool ok = false;
  std::string message;
  double mass = 0.0;
  double weight_sum = 0.0;
  bool probability = false;
};

FamilyDiagnostics validate_family(int x_dim, const std::vector<Atom>& atoms);

// Validates and fills mass / probability; throws ValidationError with the
// diagnostic message on failure.
MixtureFamily make_family(int x_dim, std::vector<Atom> atoms);

// Divides every L_i by sqrt(mass) when mass exceeds 1; otherwise returns the
// family unchanged. Always returns a fresh family.
MixtureFamily rescale_to_admissible(const MixtureFamily& f);

bool monotone_payloads(const MixtureFamily& f);
bool convex_payloads(const MixtureFamily& f);
const MonotoneOpSpec& monotone_payload(const Atom& a);
const ConvexFnSpec& convex_payload(const Atom& a);

// Payload transforms; weights and linops are kept.
MixtureFamily conjugate_payload_family(const MixtureFamily& f);  // f -> f*
MixtureFamily inverse_payload_family(const MixtureFamily& f);    // A -> A^{-1}
MixtureFamily subdiff_payload_family(const MixtureFamily& f);    // f -> df

}  // namespace promix
