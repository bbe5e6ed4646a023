#include "adhoccap/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "adhoccap/errors.hpp"
#include "adhoccap/numerics.hpp"

namespace adhoccap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Thresholds below this multiple of C count as zero (saturated links).
constexpr double kSaturationFloor = 1e-200;
constexpr double kBracketStep = 4.0;

using geometry::Arena;

// Normalized interference per unit load at own-link gain h: E_H for the
// matched filter, the (delay-averaged) conditional mean for MMSE.
double interference_mean(const SystemConfig& cfg, double gain) {
  switch (cfg.receiver) {
    case ReceiverKind::MatchedFilter:
      return geometry::mean_gain(cfg.arena);
    case ReceiverKind::Decorrelator:
      return 0.0;
    case ReceiverKind::MMSE:
      if (cfg.timing == TimingMode::Synchronous) {
        return geometry::cond_mean_gain(cfg.arena, cfg.gamma, gain);
      }
      return geometry::async_cond_mean_gain(cfg.arena, cfg.gamma, gain, cfg.delay);
  }
  return 0.0;
}

// Interference-to-signal ratio E[...] / h, bounded as h -> 0.
double interference_ratio(const SystemConfig& cfg, double gain) {
  if (cfg.receiver == ReceiverKind::MMSE) {
    if (cfg.timing == TimingMode::Synchronous) {
      return geometry::cond_mean_gain_ratio(cfg.arena, cfg.gamma, gain);
    }
    return geometry::async_cond_mean_gain_ratio(cfg.arena, cfg.gamma, gain, cfg.delay);
  }
  return interference_mean(cfg, gain) / gain;
}

// Limit of interference_ratio as h -> 0 for MMSE: (e^{-C} - e^{-k^2/2}) / gamma
// per overlapping symbol, and an asynchronous interferer overlaps two.
double mmse_ratio_at_zero(const SystemConfig& cfg) {
  const Arena& a = cfg.arena;
  const double mass = std::exp(-a.lower_support_arg()) - std::exp(-a.upper_support_arg());
  const double symbols = cfg.timing == TimingMode::Synchronous ? 1.0 : 2.0;
  return symbols * mass / cfg.gamma;
}

// Smallest T with T >= gamma/SNR + alpha gamma E[H|h=T]. The residual
// 1 - gamma/(SNR h) - alpha gamma E[H|h]/h is strictly increasing in h, so
// it changes sign at most once. Returns 0 when it is non-negative all the
// way down to the saturation floor.
double solve_mmse_threshold(const SystemConfig& cfg, double alpha) {
  const double inv_snr = cfg.power.inverse_snr();
  auto residual = [&](double h) {
    return 1.0 - cfg.gamma * inv_snr / h - alpha * cfg.gamma * interference_ratio(cfg, h);
  };

  // Without noise the residual tends to 1 - alpha gamma ratio(0+); a
  // positive limit means every link clears the target.
  if (cfg.power.is_unlimited() && 1.0 - alpha * cfg.gamma * mmse_ratio_at_zero(cfg) > 0.0) {
    return 0.0;
  }

  const double c = cfg.arena.c();
  double hi = c;
  double r_hi = residual(hi);
  double lo = hi;
  double r_lo = r_hi;
  if (r_hi <= 0.0) {
    while (r_hi <= 0.0) {
      lo = hi;
      r_lo = r_hi;
      hi *= kBracketStep;
      r_hi = residual(hi);
      if (!std::isfinite(hi)) throw ConvergenceError("MMSE threshold bracket diverged", lo);
    }
  } else {
    while (r_lo > 0.0) {
      hi = lo;
      lo /= kBracketStep;
      if (lo < kSaturationFloor * c) return 0.0;
      r_lo = residual(lo);
    }
  }
  if (r_lo == 0.0) return lo;

  numerics::Tolerance tol;
  tol.abs_tol = 1e-14;
  tol.rel_tol = 1e-14;
  tol.max_iter = 400;
  return numerics::solve_monotone(residual, lo, hi, tol);
}

void require_probability(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    std::ostringstream msg;
    msg << "link probability must lie in (0, 1), got " << prob;
    throw DomainError(msg.str());
  }
}

LinkResult interior(const Arena& arena, double threshold) {
  return {geometry::prob_from_threshold(arena, threshold), threshold, LinkStatus::Interior};
}

}  // namespace

std::string_view to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::MatchedFilter: return "mf";
    case ReceiverKind::Decorrelator: return "decorrelator";
    case ReceiverKind::MMSE: return "mmse";
  }
  return "unknown";
}

std::string_view to_string(TimingMode mode) {
  return mode == TimingMode::Synchronous ? "sync" : "async";
}

PowerBudget PowerBudget::max_snr(double snr_c) {
  if (!(snr_c > 0.0)) {
    std::ostringstream msg;
    msg << "SNR_c must be positive, got " << snr_c;
    throw DomainError(msg.str());
  }
  if (std::isinf(snr_c)) return unlimited();
  return PowerBudget{snr_c};
}

double PowerBudget::snr() const noexcept { return snr_c_ ? *snr_c_ : kInf; }

double PowerBudget::inverse_snr() const noexcept { return snr_c_ ? 1.0 / *snr_c_ : 0.0; }

void SystemConfig::validate() const {
  if (!(gamma > 0.0)) {
    std::ostringstream msg;
    msg << "target SIR gamma must be positive, got " << gamma;
    throw DomainError(msg.str());
  }
}

double load_limit(const SystemConfig& cfg) {
  if (cfg.receiver != ReceiverKind::Decorrelator) return kInf;
  return cfg.timing == TimingMode::Synchronous ? 1.0 : 0.5;
}

CapacityResult max_load(const SystemConfig& cfg, double prob) {
  cfg.validate();
  require_probability(prob);
  const double threshold = geometry::threshold_from_prob(cfg.arena, prob);
  const double inv_snr = cfg.power.inverse_snr();

  double bound = 0.0;
  if (cfg.receiver == ReceiverKind::Decorrelator) {
    bound = load_limit(cfg) * (1.0 - cfg.gamma * inv_snr / threshold);
  } else {
    // Also covers MF in asynchronous mode, which keeps its synchronous form.
    const double mean = interference_mean(cfg, threshold);
    bound = threshold / (cfg.gamma * mean) - inv_snr / mean;
  }

  CapacityResult result;
  result.threshold = threshold;
  result.link_prob = prob;
  result.feasible = bound > 0.0;
  result.alpha_max = std::max(bound, 0.0);
  if (!cfg.power.is_unlimited()) result.required_snr = cfg.power.snr();
  return result;
}

LinkResult achievable_prob(const SystemConfig& cfg, double alpha) {
  cfg.validate();
  if (!(alpha > 0.0)) {
    std::ostringstream msg;
    msg << "load alpha must be positive, got " << alpha;
    throw DomainError(msg.str());
  }
  const double inv_snr = cfg.power.inverse_snr();

  switch (cfg.receiver) {
    case ReceiverKind::MatchedFilter: {
      const double threshold =
          cfg.gamma * inv_snr + alpha * cfg.gamma * geometry::mean_gain(cfg.arena);
      return interior(cfg.arena, threshold);
    }
    case ReceiverKind::Decorrelator: {
      const double limit = load_limit(cfg);
      if (alpha >= limit) return {0.0, kInf, LinkStatus::Infeasible};
      if (cfg.power.is_unlimited()) return {1.0, 0.0, LinkStatus::Saturated};
      return interior(cfg.arena, cfg.gamma * inv_snr / (1.0 - alpha / limit));
    }
    case ReceiverKind::MMSE: {
      const double threshold = solve_mmse_threshold(cfg, alpha);
      if (threshold == 0.0) return {1.0, 0.0, LinkStatus::Saturated};
      return interior(cfg.arena, threshold);
    }
  }
  return {};
}

double interference_floor(const SystemConfig& cfg, double alpha, double threshold) {
  if (cfg.receiver == ReceiverKind::Decorrelator) return 0.0;
  return alpha * cfg.gamma * interference_mean(cfg, threshold);
}

double required_snr(const SystemConfig& cfg, double alpha, double prob) {
  cfg.validate();
  require_probability(prob);
  if (!(alpha >= 0.0)) {
    std::ostringstream msg;
    msg << "load alpha must be non-negative, got " << alpha;
    throw DomainError(msg.str());
  }
  const double threshold = geometry::threshold_from_prob(cfg.arena, prob);

  double margin = 0.0;
  if (cfg.receiver == ReceiverKind::Decorrelator) {
    margin = threshold * (1.0 - alpha / load_limit(cfg));
  } else {
    margin = threshold - interference_floor(cfg, alpha, threshold);
  }
  if (!(margin > 0.0)) return kInf;
  return cfg.gamma / margin;
}

DiameterMapping diameter_map(const Arena& arena, int diameter) {
  if (diameter < 1) {
    std::ostringstream msg;
    msg << "network diameter must be at least 1 hop, got " << diameter;
    throw DomainError(msg.str());
  }
  const double d = diameter;
  const double b = arena.side();
  const double k = arena.shape();
  const double lambda = arena.wavelength();
  return {std::numbers::sqrt2 * b / d, -std::expm1(-k * k / (2.0 * d * d)),
          lambda * lambda * d * d / (2.0 * b * b)};
}

CapacityResult capacity_for_diameter(const SystemConfig& cfg, int diameter) {
  return max_load(cfg, diameter_map(cfg.arena, diameter).link_prob);
}

DiameterEstimate achievable_diameter(const SystemConfig& cfg, double alpha) {
  const LinkResult link = achievable_prob(cfg, alpha);
  switch (link.status) {
    case LinkStatus::Infeasible:
      return {kInf, 0, false};
    case LinkStatus::Saturated:
      return {0.0, 1, true};
    case LinkStatus::Interior:
      break;
  }
  const double scale = cfg.arena.side() / cfg.arena.wavelength();
  const double continuous = scale * std::sqrt(2.0 * link.threshold);
  const int hops = std::max(1, static_cast<int>(std::ceil(continuous)));
  return {continuous, hops, true};
}

std::vector<ThroughputPoint> throughput_curves(const SystemConfig& cfg,
                                               std::span<const int> nodes,
                                               int spreading_gain, double rate) {
  if (spreading_gain < 1) {
    throw DomainError("spreading gain L must be at least 1");
  }
  SystemConfig sync_cfg = cfg;
  sync_cfg.timing = TimingMode::Synchronous;
  SystemConfig async_cfg = cfg;
  async_cfg.timing = TimingMode::Asynchronous;

  auto per_node = [rate](const DiameterEstimate& d) {
    return d.reachable ? rate / d.hops : 0.0;
  };

  std::vector<ThroughputPoint> curve;
  curve.reserve(nodes.size());
  for (const int n : nodes) {
    if (n < 2) {
      std::ostringstream msg;
      msg << "throughput curve needs N >= 2 (ln N > 0), got " << n;
      throw DomainError(msg.str());
    }
    const double alpha = static_cast<double>(n) / spreading_gain;
    ThroughputPoint point;
    point.nodes = n;
    point.rate = rate;
    point.sync_diameter = achievable_diameter(sync_cfg, alpha);
    point.async_diameter = achievable_diameter(async_cfg, alpha);
    point.cdma_sync = per_node(point.sync_diameter);
    point.cdma_async = per_node(point.async_diameter);
    point.gupta_kumar = rate / std::sqrt(n * std::log(static_cast<double>(n)));
    curve.push_back(point);
  }
  return curve;
}

}  // namespace adhoccap
