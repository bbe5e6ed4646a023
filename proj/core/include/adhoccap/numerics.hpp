#pragma once

#include <functional>

namespace adhoccap::numerics {

/// Stopping rule shared by the iterative kernels.
struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 200;

  /// Throws DomainError unless abs_tol > 0, rel_tol > 0 and max_iter >= 1.
  void validate() const;
};

/// Exponential integral E1(x) = int_x^inf e^-t / t dt for x > 0.
///
/// Power series below x = 1, modified-Lentz continued fraction above.
/// Relative error is at the 1e-15 level on [1e-6, 50]; the result underflows
/// to 0 beyond x ~ 700. Throws DomainError for x <= 0 or NaN.
double exp_integral_e1(double x);

/// e^x * E1(x), finite for every x > 0 (tends to 1/x as x grows).
///
/// Needed wherever E1 of a large argument is multiplied by a large
/// exponential; the naive product over/underflows long before the true
/// value leaves double range.
double exp_integral_e1_scaled(double x);

/// Integral of `f` over [0, 1] by adaptive 15-point Gauss-Kronrod.
///
/// Deterministic for a fixed integrand. Throws ConvergenceError carrying the
/// best estimate when the error estimate stays above
/// max(tol.abs_tol, tol.rel_tol * |value|) after tol.max_iter bisection
/// levels (capped at 30).
double integrate_unit(const std::function<double(double)>& f,
                      const Tolerance& tol = {});

/// Like integrate_unit, also reports the estimated absolute error.
struct Quadrature {
  double value;
  double error_estimate;
};
Quadrature integrate_unit_with_error(const std::function<double(double)>& f,
                                     const Tolerance& tol = {});

/// Root of a monotone function on [lo, hi].
///
/// Illinois-style regula falsi with a bisection step whenever the
/// interpolated point fails to halve the bracket, so convergence is never
/// slower than bisection. Stops when |f(x)| <= abs_tol or the bracket width
/// drops below rel_tol * |x|. Throws BracketError when f(lo) and f(hi) have
/// the same strict sign.
double solve_monotone(const std::function<double(double)>& f, double lo,
                      double hi, const Tolerance& tol = {});

}  // namespace adhoccap::numerics
