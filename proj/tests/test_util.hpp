#pragma once

#include <algorithm>
#include <cmath>

#include "promix/family.hpp"
#include "promix/vec.hpp"

namespace promix::testutil {

inline double max_abs_diff(const Vec& a, const Vec& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

// Violation of <x - y, u> >= ||u||^2 with u the operator difference;
// nonnegative, zero when firm nonexpansiveness holds at the pair.
inline double fne_slack(const Vec& x, const Vec& y, const Vec& fx,
                        const Vec& fy) {
  const Vec u = sub(fx, fy);
  return std::max(0.0, dot(u, u) - dot(sub(x, y), u));
}

inline Atom monotone_atom(double w, LinOp l, MonotoneOpSpec a) {
  return Atom{w, std::move(l), PayloadSpec{std::move(a)}};
}

inline Atom convex_atom(double w, LinOp l, ConvexFnSpec f) {
  return Atom{w, std::move(l), PayloadSpec{std::move(f)}};
}

}  // namespace promix::testutil
