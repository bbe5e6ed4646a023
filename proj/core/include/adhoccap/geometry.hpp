#pragma once

#include <functional>

namespace adhoccap::geometry {

/// Square deployment area of side b with free-space propagation at
/// wavelength lambda.
///
/// Node separation d is normalized by lambda (delta = d / lambda) and the
/// link gain is h = lambda^2 / d^2 = 1 / delta^2, so the analytic support
/// of h is [1/delta_max^2, 1/delta_min^2]. Distances follow the Gaussian
/// approximation F_d(y) = 1 - exp(-k^2 y^2 / (4 b^2)), which gives the gain
/// law F_H(h) = exp(-C / h) with C = k^2 lambda^2 / (4 b^2).
///
/// Immutable after construction.
class Arena {
 public:
  static constexpr double kDefaultShape = 3.5;

  /// Throws DomainError unless b > 0, lambda > 0, k > 0 and lambda < sqrt(2) b.
  Arena(double side, double wavelength, double shape = kDefaultShape);

  double side() const noexcept { return side_; }
  double wavelength() const noexcept { return wavelength_; }
  double shape() const noexcept { return shape_; }

  /// d_m: no direct reception below this distance (equals lambda).
  double d_min() const noexcept { return wavelength_; }
  /// d_M: the square's diagonal, sqrt(2) b.
  double d_max() const noexcept;
  double delta_min() const noexcept { return 1.0; }
  double delta_max() const noexcept { return d_max() / wavelength_; }
  /// sigma_1 = b / k of the Gaussian placement model.
  double sigma() const noexcept { return side_ / shape_; }

  /// C = k^2 lambda^2 / (4 b^2).
  double c() const noexcept { return c_; }
  /// delta_min^2 C, lower E1 argument of the truncated-support integrals.
  double lower_support_arg() const noexcept { return c_; }
  /// delta_max^2 C, which reduces to k^2 / 2 independent of b and lambda.
  double upper_support_arg() const noexcept { return 0.5 * shape_ * shape_; }

  /// Gain at the support ends: 1/delta_max^2 and 1/delta_min^2 = 1.
  double min_gain() const noexcept;
  double max_gain() const noexcept { return 1.0; }

 private:
  double side_;
  double wavelength_;
  double shape_;
  double c_;
};

/// Antenna and mast parameters for the propagation-zone boundaries.
struct PathLossModel {
  double antenna_max_dim;  // D_max, meters
  double tx_height;        // meters
  double rx_height;        // meters
};

struct PropagationZones {
  double near_field;       // d1 = 2 D_max^2 / lambda
  double free_space_end;   // d2 = 4 h_t h_r / lambda
};

PropagationZones near_field_boundary(const PathLossModel& model, const Arena& arena);

enum class DistanceModel { ExactUniformSquare, GaussianApprox };

/// Free-space gain lambda^2 / d^2 and whether a direct link at d is
/// receivable (d >= d_min).
struct LinkGain {
  double gain;
  bool receivable;
};

/// Throws DomainError for d <= 0.
LinkGain gain_from_distance(const Arena& arena, double distance);

/// P(d <= distance) for two uniform nodes in the square, under either the
/// exact four-branch law or the Gaussian approximation.
double distance_cdf(const Arena& arena, DistanceModel model, double distance);

/// F_H(h) = exp(-C/h). Throws DomainError for h <= 0.
double gain_cdf(const Arena& arena, double gain);
/// f_H(h) = (C/h^2) exp(-C/h). Throws DomainError for h <= 0.
double gain_pdf(const Arena& arena, double gain);

/// E_H = C [E1(delta_min^2 C) - E1(delta_max^2 C)].
double mean_gain(const Arena& arena);

/// Normalized conditional interference seen by an MMSE receiver whose own
/// link has gain `own_gain`:
///   E[H|h_i] = C e^{C gamma / h_i} [E1(delta_min^2 C + C gamma / h_i)
///                                   - E1(delta_max^2 C + C gamma / h_i)].
/// Evaluated with scaled E1 so that tiny h_i stays finite. Passing
/// own_gain = +infinity or gamma = 0 yields mean_gain.
double cond_mean_gain(const Arena& arena, double gamma, double own_gain);

/// E[H|h_i] / h_i, the dimensionless interference-to-signal ratio used when
/// solving the MMSE threshold equation; well conditioned as h_i -> 0.
double cond_mean_gain_ratio(const Arena& arena, double gamma, double own_gain);

/// Density of the relative chip delay tau on [0, 1]. Must be symmetric about
/// 1/2 for the asynchronous bound to apply. An empty function means uniform.
using DelayDensity = std::function<double(double)>;

/// Delay-averaged conditional interference for chip-synchronous
/// asynchronous MMSE:
///   E_tau{ tau E[H | h_i / tau] + (1 - tau) E[H | h_i / (1 - tau)] },
/// integrated numerically over tau in [0, 1].
double async_cond_mean_gain(const Arena& arena, double gamma, double own_gain,
                            const DelayDensity& delay = {});

/// async_cond_mean_gain / h_i, integrated directly in ratio form so that the
/// quadrature tolerance stays meaningful as h_i -> 0.
double async_cond_mean_gain_ratio(const Arena& arena, double gamma, double own_gain,
                                  const DelayDensity& delay = {});

/// p = 1 - F_H(T) = 1 - exp(-C/T). Throws DomainError for T <= 0.
double prob_from_threshold(const Arena& arena, double threshold);
/// T = C / ln(1/(1-p)). Throws DomainError unless 0 < p < 1.
double threshold_from_prob(const Arena& arena, double prob);

/// Gaussian-model probability that a pair lies within range d_r.
double prob_from_range(const Arena& arena, double range);

}  // namespace adhoccap::geometry
