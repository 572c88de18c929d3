#pragma once

#include <span>
#include <vector>

#include "promix/vec.hpp"

namespace promix {

// Linear subspace of R^n carried by an orthonormal basis. An empty basis is
// the zero subspace.
struct Subspace {
  int ambient_dim = 0;
  std::vector<Vec> basis;
};

// Orthonormalizes the spanning set by modified Gram-Schmidt with one
// reorthogonalization pass. Inputs are normalized before orthogonalization;
// residuals with norm <= 1e-10 are dropped as dependent. Rejects spanning
// sets that are entirely numerically zero.
Subspace make_subspace(int ambient_dim, const std::vector<Vec>& spanning);

Subspace full_space(int n);
Subspace zero_space(int n);

int subspace_dim(const Subspace& v);
Vec project(const Subspace& v, std::span<const double> x);
bool contains(const Subspace& v, std::span<const double> x, double tol);
bool is_full(const Subspace& v);

}  // namespace promix
