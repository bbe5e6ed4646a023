#include "adhoccap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "adhoccap/errors.hpp"
#include "adhoccap/numerics.hpp"

namespace adhoccap::geometry {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << what << " must be positive, got " << value;
    throw DomainError(msg.str());
  }
}

// C [e^{-lo} S(lo + a) - e^{-hi} S(hi + a)] with S(x) = e^x E1(x), i.e.
// C e^{a} [E1(lo + a) - E1(hi + a)] without forming e^{a}.
double shifted_e1_difference(const Arena& arena, double shift) {
  const double lo = arena.lower_support_arg();
  const double hi = arena.upper_support_arg();
  if (shift == 0.0) {
    return numerics::exp_integral_e1(lo) - numerics::exp_integral_e1(hi);
  }
  return std::exp(-lo) * numerics::exp_integral_e1_scaled(lo + shift) -
         std::exp(-hi) * numerics::exp_integral_e1_scaled(hi + shift);
}

double interference_shift(const Arena& arena, double gamma, double own_gain) {
  if (!(gamma >= 0.0)) {
    std::ostringstream msg;
    msg << "target SIR must be non-negative, got " << gamma;
    throw DomainError(msg.str());
  }
  require_positive(own_gain, "own link gain");
  return std::isinf(own_gain) ? 0.0 : arena.c() * gamma / own_gain;
}

}  // namespace

Arena::Arena(double side, double wavelength, double shape)
    : side_(side), wavelength_(wavelength), shape_(shape) {
  require_positive(side, "arena side b");
  require_positive(wavelength, "wavelength lambda");
  require_positive(shape, "shape constant k");
  if (!(wavelength < std::numbers::sqrt2 * side)) {
    throw DomainError("arena requires d_min = lambda < d_max = sqrt(2) b");
  }
  c_ = shape * shape * wavelength * wavelength / (4.0 * side * side);
}

double Arena::d_max() const noexcept { return std::numbers::sqrt2 * side_; }

double Arena::min_gain() const noexcept {
  return wavelength_ * wavelength_ / (2.0 * side_ * side_);
}

PropagationZones near_field_boundary(const PathLossModel& model, const Arena& arena) {
  require_positive(model.antenna_max_dim, "antenna dimension D_max");
  require_positive(model.tx_height, "transmitter height");
  require_positive(model.rx_height, "receiver height");
  const double lambda = arena.wavelength();
  return {2.0 * model.antenna_max_dim * model.antenna_max_dim / lambda,
          4.0 * model.tx_height * model.rx_height / lambda};
}

LinkGain gain_from_distance(const Arena& arena, double distance) {
  require_positive(distance, "distance");
  const double lambda = arena.wavelength();
  return {lambda * lambda / (distance * distance), distance >= arena.d_min()};
}

double distance_cdf(const Arena& arena, DistanceModel model, double distance) {
  if (!(distance > 0.0)) return 0.0;
  const double b = arena.side();
  switch (model) {
    case DistanceModel::GaussianApprox: {
      const double k = arena.shape();
      return -std::expm1(-k * k * distance * distance / (4.0 * b * b));
    }
    case DistanceModel::ExactUniformSquare: {
      const double x = distance / b;
      if (x >= std::numbers::sqrt2) return 1.0;
      const double x2 = x * x;
      if (x <= 1.0) {
        return x2 * (0.5 * x2 - 8.0 / 3.0 * x + std::numbers::pi);
      }
      const double inv = 1.0 / x;
      const double value = 4.0 / 3.0 * std::sqrt(x2 - 1.0) * (2.0 * x2 + 1.0) -
                           (0.5 * x2 * x2 + 2.0 * x2 - 1.0 / 3.0) +
                           2.0 * x2 * (std::asin(inv) - std::acos(inv));
      return std::clamp(value, 0.0, 1.0);
    }
  }
  return 0.0;
}

double gain_cdf(const Arena& arena, double gain) {
  require_positive(gain, "link gain");
  return std::exp(-arena.c() / gain);
}

double gain_pdf(const Arena& arena, double gain) {
  require_positive(gain, "link gain");
  const double c = arena.c();
  if (std::isinf(gain)) return 0.0;
  return c / (gain * gain) * std::exp(-c / gain);
}

double mean_gain(const Arena& arena) {
  return arena.c() * shifted_e1_difference(arena, 0.0);
}

double cond_mean_gain(const Arena& arena, double gamma, double own_gain) {
  const double shift = interference_shift(arena, gamma, own_gain);
  return arena.c() * shifted_e1_difference(arena, shift);
}

double cond_mean_gain_ratio(const Arena& arena, double gamma, double own_gain) {
  const double shift = interference_shift(arena, gamma, own_gain);
  if (std::isinf(own_gain)) return 0.0;
  return arena.c() / own_gain * shifted_e1_difference(arena, shift);
}

double async_cond_mean_gain(const Arena& arena, double gamma, double own_gain,
                            const DelayDensity& delay) {
  interference_shift(arena, gamma, own_gain);
  const double mean = mean_gain(arena);

  // tau * E[H | h_i / tau]; the tau -> 0 limit is 0 * E_H.
  auto weighted = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    return tau * cond_mean_gain(arena, gamma, own_gain / tau);
  };
  auto integrand = [&](double tau) {
    const double w = delay ? delay(tau) : 1.0;
    return w * (weighted(tau) + weighted(1.0 - tau));
  };

  numerics::Tolerance tol;
  tol.abs_tol = 1e-11 * mean;
  tol.rel_tol = 1e-11;
  tol.max_iter = 20;
  return numerics::integrate_unit(integrand, tol);
}

double async_cond_mean_gain_ratio(const Arena& arena, double gamma, double own_gain,
                                  const DelayDensity& delay) {
  interference_shift(arena, gamma, own_gain);
  if (std::isinf(own_gain)) return 0.0;

  // tau E[H | h_i/tau] / h_i = E[H | h_i/tau] / (h_i/tau); 0 at tau = 0.
  auto ratio = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    return cond_mean_gain_ratio(arena, gamma, own_gain / tau);
  };
  auto integrand = [&](double tau) {
    const double w = delay ? delay(tau) : 1.0;
    return w * (ratio(tau) + ratio(1.0 - tau));
  };

  numerics::Tolerance tol;
  tol.abs_tol = 1e-13;
  tol.rel_tol = 1e-11;
  tol.max_iter = 30;
  return numerics::integrate_unit(integrand, tol);
}

double prob_from_threshold(const Arena& arena, double threshold) {
  require_positive(threshold, "gain threshold");
  return -std::expm1(-arena.c() / threshold);
}

double threshold_from_prob(const Arena& arena, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    std::ostringstream msg;
    msg << "link probability must lie in (0, 1), got " << prob;
    throw DomainError(msg.str());
  }
  return arena.c() / -std::log1p(-prob);
}

double prob_from_range(const Arena& arena, double range) {
  require_positive(range, "transmission range");
  return distance_cdf(arena, DistanceModel::GaussianApprox, range);
}

}  // namespace adhoccap::geometry
