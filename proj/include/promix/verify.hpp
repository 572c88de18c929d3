#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "promix/family.hpp"
#include "promix/rng.hpp"

namespace promix {

struct VerifyOptions {
  std::uint64_t seed = 0;
  int families = 50;           // random families per identity block
  int max_dim = 8;
  int max_atoms = 6;
  int sample_points = 5;       // evaluation points per family
  int collapse_families = 20;  // probability + orthogonal-linop families
  int collapse_points = 100;
  int fne_pairs = 500;         // firm-nonexpansiveness pairs per operator kind
  int oracle_inputs = 50;      // oracle-agreement inputs per catalog variant
  bool inject_fault = false;   // test hook: corrupts the mixture resolvent
};

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  bool pass = false;
  std::vector<IdentityResidual> rows;
};

// Runs every identity row on seeded random families and returns the residual
// table; report.pass is the conjunction of the rows.
VerifyReport run_verify(const VerifyOptions& opt);

// Seeded generators, shared with the test suites.
LinOp random_orthogonal(Rng& rng, int n);
MonotoneOpSpec random_monotone_op(Rng& rng, int dim);
ConvexFnSpec random_convex_fn(Rng& rng, int dim);

// General admissible family: random rectangular linops rescaled to mass <= 1.
MixtureFamily random_monotone_family(Rng& rng, int x_dim, int max_atoms);
MixtureFamily random_convex_family(Rng& rng, int x_dim, int max_atoms);

// Probability weights with orthogonal square linops (mass exactly 1).
MixtureFamily random_isometry_family(Rng& rng, int x_dim, int max_atoms,
                                     bool convex);

// Probability weights with identity linops (expectation form).
MixtureFamily random_expectation_family(Rng& rng, int x_dim, int max_atoms,
                                        bool convex);

}  // namespace promix
