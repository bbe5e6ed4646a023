#include "adhoccap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "adhoccap/errors.hpp"

namespace adhoccap::numerics {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// Below this argument the power series converges fastest; above it the
// continued fraction does.
constexpr double kSeriesCrossover = 1.0;
constexpr int kMaxTerms = 500;

void check_e1_domain(double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "exp_integral_e1: argument must be positive, got " << x;
    throw DomainError(msg.str());
  }
}

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term *= -x / k;
    const double delta = term / k;
    sum += delta;
    if (std::abs(delta) <= kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// e^x E1(x) by modified Lentz on the even contraction of the continued
// fraction 1/(x+1- 1/(x+3- 4/(x+5- ...))).
double e1_scaled_fraction(double x) {
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("exp_integral_e1: continued fraction did not converge", h);
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
    std::ostringstream msg;
    msg << "Tolerance requires abs_tol > 0, rel_tol > 0, max_iter >= 1 (got "
        << abs_tol << ", " << rel_tol << ", " << max_iter << ")";
    throw DomainError(msg.str());
  }
}

double exp_integral_e1(double x) {
  check_e1_domain(x);
  if (std::isinf(x)) return 0.0;
  if (x <= kSeriesCrossover) return e1_series(x);
  return e1_scaled_fraction(x) * std::exp(-x);
}

double exp_integral_e1_scaled(double x) {
  check_e1_domain(x);
  if (std::isinf(x)) return 0.0;
  if (x <= kSeriesCrossover) return std::exp(x) * e1_series(x);
  return e1_scaled_fraction(x);
}

Quadrature integrate_unit_with_error(const std::function<double(double)>& f,
                                     const Tolerance& tol) {
  tol.validate();
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

  // Boost stops on an error relative to the integral; translate the
  // combined target max(abs_tol, rel_tol |I|) using a single-panel estimate
  // of the L1 norm.
  double l1 = 0.0;
  double error = 0.0;
  Rule::integrate(f, 0.0, 1.0, 0, 1.0, &error, &l1);
  const double target = std::max(tol.abs_tol, tol.rel_tol * l1);
  const double rel_target = l1 > 0.0 ? std::max(target / l1, 4.0 * kEps) : tol.rel_tol;

  // Boost's error estimate is not monotone in depth: subpanels whose local
  // value is near zero keep splitting and add roundoff-level disagreements.
  // Try increasing depths and keep the first certified result.
  const unsigned max_depth = static_cast<unsigned>(std::min(tol.max_iter, 30));
  Quadrature best{0.0, std::numeric_limits<double>::infinity()};
  for (unsigned depth = std::min(8u, max_depth);; depth = std::min(depth + 6, max_depth)) {
    const double value = Rule::integrate(f, 0.0, 1.0, depth, rel_target, &error, &l1);
    if (!std::isfinite(value)) {
      throw ConvergenceError("integrate_unit: integrand produced a non-finite value", value);
    }
    if (error < best.error_estimate) best = {value, error};
    const double allowed =
        std::max({tol.abs_tol, tol.rel_tol * std::abs(value), 4.0 * kEps * l1});
    if (error <= allowed) return {value, error};
    if (depth == max_depth) break;
  }
  std::ostringstream msg;
  msg << "integrate_unit: error estimate " << best.error_estimate << " above tolerance (abs "
      << tol.abs_tol << ", rel " << tol.rel_tol << ") up to depth " << max_depth;
  throw ConvergenceError(msg.str(), best.value);
}

double integrate_unit(const std::function<double(double)>& f, const Tolerance& tol) {
  return integrate_unit_with_error(f, tol).value;
}

double solve_monotone(const std::function<double(double)>& f, double lo, double hi,
                      const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) {
    throw DomainError("solve_monotone: function is NaN at a bracket end");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg << "solve_monotone: no sign change on [" << lo << ", " << hi << "] (f = " << flo
        << ", " << fhi << ")";
    throw BracketError(msg.str());
  }

  // Illinois weights: halve the stale end's value when the same end survives
  // twice in a row.
  double wlo = flo;
  double whi = fhi;
  int last_kept = 0;  // -1: lo moved, +1: hi moved
  bool force_bisect = false;
  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double best_f = std::min(std::abs(flo), std::abs(fhi));

  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double width = hi - lo;
    double x = 0.5 * (lo + hi);
    if (!force_bisect) {
      const double candidate = (lo * whi - hi * wlo) / (whi - wlo);
      if (candidate > lo && candidate < hi) x = candidate;
    }
    if (x <= lo || x >= hi) {
      // No representable interior point left.
      return best;
    }

    const double fx = f(x);
    if (std::isnan(fx)) throw DomainError("solve_monotone: function is NaN inside bracket");
    if (std::abs(fx) < best_f) {
      best_f = std::abs(fx);
      best = x;
    }
    if (std::abs(fx) <= tol.abs_tol) return x;

    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = wlo = fx;
      if (last_kept == -1) whi *= 0.5;
      last_kept = -1;
    } else {
      hi = x;
      fhi = whi = fx;
      if (last_kept == 1) wlo *= 0.5;
      last_kept = 1;
    }

    force_bisect = (hi - lo) > 0.5 * width;
    if (hi - lo <= tol.rel_tol * std::abs(x)) return best;
  }

  std::ostringstream msg;
  msg << "solve_monotone: no convergence after " << tol.max_iter << " iterations";
  throw ConvergenceError(msg.str(), best);
}

}  // namespace adhoccap::numerics
