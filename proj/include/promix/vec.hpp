#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace promix {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_inf(std::span<const double> a);
double dist(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

Vec add(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec scaled(std::span<const double> a, double c);
void axpy(double alpha, std::span<const double> x, Vec& y);  // y += alpha * x
Vec zeros(std::size_t n);

// Value of the quadratic kernel ||x||^2 / 2.
double half_sqnorm(std::span<const double> x);

}  // namespace promix
