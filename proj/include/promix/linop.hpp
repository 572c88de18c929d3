#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "promix/vec.hpp"

namespace promix {

// Dense linear operator X -> H stored row-major (rows x cols).
struct LinOp {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  static LinOp identity(int n);
  static LinOp zero(int rows, int cols);
  static LinOp scaled_identity(int n, double c);
  static LinOp from_rows(const std::vector<Vec>& rows);
  static LinOp single_row(const Vec& row);

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

Vec apply(const LinOp& l, std::span<const double> x);          // L x
Vec apply_adjoint(const LinOp& l, std::span<const double> y);  // L^T y
LinOp scaled(const LinOp& l, double c);
bool is_zero_op(const LinOp& l);
bool is_identity_op(const LinOp& l);

// Spectral norm: sqrt of the largest eigenvalue of the smaller Gram matrix
// (L^T L or L L^T), computed by the cyclic Jacobi sweep. Deterministic.
double operator_norm(const LinOp& l);

// Solves A y = b for square dense A (row-major) by LU with partial pivoting.
Vec solve_dense(int n, std::span<const double> a, std::span<const double> b);

// Eigenvalues of a symmetric matrix (row-major) by cyclic Jacobi, ascending.
Vec symmetric_eigenvalues(int n, std::span<const double> s);

}  // namespace promix
