#include <cmath>
#include <string>

#include "promix/errors.hpp"
#include "promix/family.hpp"

namespace promix {

namespace {

std::string atom_tag(std::size_t i) {
  return "atom " + std::to_string(i) + ": ";
}

}  // namespace

FamilyDiagnostics validate_family(int x_dim, const std::vector<Atom>& atoms) {
  FamilyDiagnostics d;
  if (x_dim <= 0) {
    d.message = "x_dim must be positive";
    return d;
  }
  if (atoms.empty()) {
    d.message = "family has no atoms";
    return d;
  }
  double mass = 0.0;
  double wsum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      d.message = atom_tag(i) + "weight must be positive and finite";
      return d;
    }
    if (a.linop.cols != x_dim) {
      d.message = atom_tag(i) + "linop has " + std::to_string(a.linop.cols) +
                  " columns, x_dim is " + std::to_string(x_dim);
      return d;
    }
    if (a.linop.rows <= 0) {
      d.message = atom_tag(i) + "linop has no rows";
      return d;
    }
    if (!all_finite(a.linop.a)) {
      d.message = atom_tag(i) + "linop has a non-finite entry";
      return d;
    }
    try {
      std::visit([](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MonotoneOpSpec>) {
          validate_op(p);
        } else {
          validate_fn(p);
        }
      }, a.payload);
    } catch (const std::exception& e) {
      d.message = atom_tag(i) + e.what();
      return d;
    }
    const auto pd = std::visit([](const auto& p) {
      using T = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<T, MonotoneOpSpec>) {
        return op_dim(p);
      } else {
        return fn_dim(p);
      }
    }, a.payload);
    if (pd && *pd != a.linop.rows) {
      d.message = atom_tag(i) + "payload dimension " + std::to_string(*pd) +
                  " does not match linop rows " + std::to_string(a.linop.rows);
      return d;
    }
    const double n = operator_norm(a.linop);
    mass += a.weight * n * n;
    wsum += a.weight;
  }
  d.mass = mass;
  d.weight_sum = wsum;
  d.probability = std::abs(wsum - 1.0) <= 1e-12;
  if (!(mass > 0.0)) {
    d.message = "family mass sum_i w_i ||L_i||^2 = 0 violates admissibility "
                "0 < mass <= 1 (all linops are zero)";
    return d;
  }
  if (mass > 1.0 + 1e-12) {
    d.message = "family mass sum_i w_i ||L_i||^2 = " + std::to_string(mass) +
                " violates admissibility 0 < mass <= 1";
    return d;
  }
  d.ok = true;
  return d;
}

MixtureFamily make_family(int x_dim, std::vector<Atom> atoms) {
  const FamilyDiagnostics d = validate_family(x_dim, atoms);
  if (!d.ok) throw ValidationError(d.message);
  return MixtureFamily{x_dim, std::move(atoms), d.probability, d.mass};
}

MixtureFamily rescale_to_admissible(const MixtureFamily& f) {
  double mass = 0.0;
  for (const Atom& a : f.atoms) {
    const double n = operator_norm(a.linop);
    mass += a.weight * n * n;
  }
  if (!(mass > 0.0)) {
    throw ValidationError("rescale_to_admissible: family mass is zero");
  }
  std::vector<Atom> atoms = f.atoms;
  if (mass > 1.0 + 1e-12) {
    const double c = 1.0 / std::sqrt(mass);
    for (Atom& a : atoms) a.linop = scaled(a.linop, c);
  }
  return make_family(f.x_dim, std::move(atoms));
}

bool monotone_payloads(const MixtureFamily& f) {
  for (const Atom& a : f.atoms) {
    if (!std::holds_alternative<MonotoneOpSpec>(a.payload)) return false;
  }
  return true;
}

bool convex_payloads(const MixtureFamily& f) {
  for (const Atom& a : f.atoms) {
    if (!std::holds_alternative<ConvexFnSpec>(a.payload)) return false;
  }
  return true;
}

const MonotoneOpSpec& monotone_payload(const Atom& a) {
  const auto* p = std::get_if<MonotoneOpSpec>(&a.payload);
  if (!p) throw ValidationError("atom payload is not a monotone operator");
  return *p;
}

const ConvexFnSpec& convex_payload(const Atom& a) {
  const auto* p = std::get_if<ConvexFnSpec>(&a.payload);
  if (!p) throw ValidationError("atom payload is not a convex function");
  return *p;
}

MixtureFamily conjugate_payload_family(const MixtureFamily& f) {
  MixtureFamily g = f;
  for (Atom& a : g.atoms) {
    a.payload = conjugate_spec(convex_payload(a));
  }
  return g;
}

MixtureFamily inverse_payload_family(const MixtureFamily& f) {
  MixtureFamily g = f;
  for (Atom& a : g.atoms) {
    a.payload = inverse_of(monotone_payload(a));
  }
  return g;
}

MixtureFamily subdiff_payload_family(const MixtureFamily& f) {
  MixtureFamily g = f;
  for (Atom& a : g.atoms) {
    a.payload = subdiff_of(convex_payload(a));
  }
  return g;
}

}  // namespace promix
