#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "promix/errors.hpp"
#include "promix/linop.hpp"
#include "promix/subspace.hpp"
#include "promix/vec.hpp"

namespace promix {

namespace {

void check_same_size(std::span<const double> a, std::span<const double> b,
                     const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": sizes " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " differ");
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double e : a) m = std::max(m, std::abs(e));
  return m;
}

double dist(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "dist");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(std::span<const double> a) {
  for (double e : a) {
    if (!std::isfinite(e)) return false;
  }
  return true;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "add");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "sub");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scaled(std::span<const double> a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

void axpy(double alpha, std::span<const double> x, Vec& y) {
  check_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec zeros(std::size_t n) { return Vec(n, 0.0); }

double half_sqnorm(std::span<const double> x) { return 0.5 * dot(x, x); }

// ---------------------------------------------------------------------------
// LinOp

LinOp LinOp::identity(int n) {
  LinOp l{n, n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  for (int i = 0; i < n; ++i) l.at(i, i) = 1.0;
  return l;
}

LinOp LinOp::zero(int rows, int cols) {
  return LinOp{rows, cols,
               std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
}

LinOp LinOp::scaled_identity(int n, double c) {
  LinOp l = identity(n);
  for (int i = 0; i < n; ++i) l.at(i, i) = c;
  return l;
}

LinOp LinOp::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) throw InvalidParameter("LinOp::from_rows: no rows");
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.front().size());
  LinOp l = zero(m, n);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw DimensionMismatch("LinOp::from_rows: ragged rows");
    }
    for (int j = 0; j < n; ++j) l.at(i, j) = rows[i][j];
  }
  return l;
}

LinOp LinOp::single_row(const Vec& row) { return from_rows({row}); }

Vec apply(const LinOp& l, std::span<const double> x) {
  if (static_cast<int>(x.size()) != l.cols) {
    throw DimensionMismatch("apply: operator has " + std::to_string(l.cols) +
                            " columns, vector has " + std::to_string(x.size()));
  }
  Vec y(static_cast<std::size_t>(l.rows), 0.0);
  for (int i = 0; i < l.rows; ++i) {
    double s = 0.0;
    const double* row = l.a.data() + static_cast<std::size_t>(i) * l.cols;
    for (int j = 0; j < l.cols; ++j) s += row[j] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

Vec apply_adjoint(const LinOp& l, std::span<const double> y) {
  if (static_cast<int>(y.size()) != l.rows) {
    throw DimensionMismatch("apply_adjoint: operator has " +
                            std::to_string(l.rows) + " rows, vector has " +
                            std::to_string(y.size()));
  }
  Vec x(static_cast<std::size_t>(l.cols), 0.0);
  for (int i = 0; i < l.rows; ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    const double* row = l.a.data() + static_cast<std::size_t>(i) * l.cols;
    for (int j = 0; j < l.cols; ++j) x[static_cast<std::size_t>(j)] += row[j] * yi;
  }
  return x;
}

LinOp scaled(const LinOp& l, double c) {
  LinOp r = l;
  for (auto& e : r.a) e *= c;
  return r;
}

bool is_zero_op(const LinOp& l) {
  for (double e : l.a) {
    if (e != 0.0) return false;
  }
  return true;
}

bool is_identity_op(const LinOp& l) {
  if (l.rows != l.cols) return false;
  for (int i = 0; i < l.rows; ++i) {
    for (int j = 0; j < l.cols; ++j) {
      if (l.at(i, j) != (i == j ? 1.0 : 0.0)) return false;
    }
  }
  return true;
}

namespace {

}  // namespace

double operator_norm(const LinOp& l) {
  if (l.rows == 0 || l.cols == 0 || is_zero_op(l)) return 0.0;
  // Largest eigenvalue of the Gram matrix on the smaller side. At the dense
  // sizes this library handles the Jacobi sweep is cheap, and unlike power
  // iteration it has no unlucky-start failure mode.
  const bool tall = l.rows >= l.cols;
  const int n = tall ? l.cols : l.rows;
  const int m = tall ? l.rows : l.cols;
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> g(un * un, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        s += tall ? l.at(k, i) * l.at(k, j) : l.at(i, k) * l.at(j, k);
      }
      g[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = s;
      g[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = s;
    }
  }
  const Vec ev = symmetric_eigenvalues(n, g);
  return std::sqrt(std::max(0.0, ev.back()));
}

Vec solve_dense(int n, std::span<const double> a, std::span<const double> b) {
  if (static_cast<int>(a.size()) != n * n || static_cast<int>(b.size()) != n) {
    throw DimensionMismatch("solve_dense: bad sizes");
  }
  std::vector<double> lu(a.begin(), a.end());
  Vec x(b.begin(), b.end());
  std::vector<int> piv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) piv[static_cast<std::size_t>(i)] = i;

  auto at = [&](int i, int j) -> double& {
    return lu[static_cast<std::size_t>(i) * n + j];
  };

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw ValidationError("solve_dense: singular matrix");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(p)]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = at(i, k) / at(k, k);
      at(i, k) = f;
      for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
      x[static_cast<std::size_t>(i)] -= f * x[static_cast<std::size_t>(k)];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / at(i, i);
  }
  return x;
}

Vec symmetric_eigenvalues(int n, std::span<const double> s) {
  if (static_cast<int>(s.size()) != n * n) {
    throw DimensionMismatch("symmetric_eigenvalues: bad size");
  }
  std::vector<double> m(s.begin(), s.end());
  auto at = [&](int i, int j) -> double& {
    return m[static_cast<std::size_t>(i) * n + j];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-30) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - sn * akq;
          at(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - sn * aqk;
          at(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  Vec ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// ---------------------------------------------------------------------------
// Subspace

Subspace make_subspace(int ambient_dim, const std::vector<Vec>& spanning) {
  if (ambient_dim <= 0) throw InvalidParameter("make_subspace: ambient_dim <= 0");
  if (spanning.empty()) {
    throw ValidationError("make_subspace: empty spanning set");
  }
  Subspace v{ambient_dim, {}};
  for (const Vec& raw : spanning) {
    if (static_cast<int>(raw.size()) != ambient_dim) {
      throw DimensionMismatch("make_subspace: vector size " +
                              std::to_string(raw.size()) + " != ambient " +
                              std::to_string(ambient_dim));
    }
    if (!all_finite(raw)) {
      throw InvalidParameter("make_subspace: non-finite entry");
    }
    const double n0 = norm(raw);
    if (n0 <= 1e-10) continue;
    Vec u = scaled(raw, 1.0 / n0);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : v.basis) axpy(-dot(u, b), b, u);
    }
    const double nu = norm(u);
    if (nu > 1e-10) v.basis.push_back(scaled(u, 1.0 / nu));
  }
  if (v.basis.empty()) {
    throw ValidationError("make_subspace: spanning set is numerically zero");
  }
  return v;
}

Subspace full_space(int n) {
  Subspace v{n, {}};
  for (int i = 0; i < n; ++i) {
    Vec e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    v.basis.push_back(std::move(e));
  }
  return v;
}

Subspace zero_space(int n) { return Subspace{n, {}}; }

int subspace_dim(const Subspace& v) { return static_cast<int>(v.basis.size()); }

Vec project(const Subspace& v, std::span<const double> x) {
  if (static_cast<int>(x.size()) != v.ambient_dim) {
    throw DimensionMismatch("project: vector size " + std::to_string(x.size()) +
                            " != ambient " + std::to_string(v.ambient_dim));
  }
  Vec p(x.size(), 0.0);
  for (const Vec& b : v.basis) axpy(dot(x, b), b, p);
  return p;
}

bool contains(const Subspace& v, std::span<const double> x, double tol) {
  const Vec p = project(v, x);
  return dist(x, p) <= tol;
}

bool is_full(const Subspace& v) {
  return subspace_dim(v) == v.ambient_dim;
}

}  // namespace promix
