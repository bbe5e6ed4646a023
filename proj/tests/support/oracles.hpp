#pragma once

// Test-only reference routes. Each one reaches its answer by a path that
// shares no code with the library implementation it checks.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

/// E1(x) by exp-sinh quadrature of int_x^inf e^-t / t dt.
inline double e1_quadrature(double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([x](double s) { return std::exp(-(x + s)) / (x + s); }, 0.0,
                              std::numeric_limits<double>::infinity());
}

struct ArenaParams {
  double b = 6.0;
  double lambda = 0.1;
  double k = 3.5;
  double c() const { return k * k * lambda * lambda / (4.0 * b * b); }
  double h_min() const { return lambda * lambda / (2.0 * b * b); }
};

/// E[H|h_i] straight from its defining integral over the gain support:
/// C int_{h_min}^{1} h_i / (h (h_i + h gamma)) e^{-C/h} dh.
inline double cond_mean_gain_quadrature(const ArenaParams& a, double gamma, double own) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double c = a.c();
  return c * integrator.integrate(
                 [&](double h) { return own / (h * (own + h * gamma)) * std::exp(-c / h); },
                 a.h_min(), 1.0);
}

/// E_H = int h f_H(h) dh over the support.
inline double mean_gain_quadrature(const ArenaParams& a) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double c = a.c();
  return integrator.integrate([&](double h) { return c / h * std::exp(-c / h); }, a.h_min(), 1.0);
}

/// All-pairs hop distances by Floyd-Warshall; nullopt when some pair is
/// unreachable.
inline std::optional<int> floyd_warshall_diameter(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  constexpr int kFar = 1 << 20;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kFar));
  for (std::size_t i = 0; i < n; ++i) {
    dist[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && adj[i][j]) dist[i][j] = 1;
    }
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i][m] + dist[m][j] < dist[i][j]) dist[i][j] = dist[i][m] + dist[m][j];
  int diameter = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] >= kFar) return std::nullopt;
      diameter = std::max(diameter, dist[i][j]);
    }
  return diameter;
}

}  // namespace oracle
