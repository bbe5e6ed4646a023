#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "adhoccap/geometry.hpp"

namespace adhoccap {

enum class ReceiverKind { MatchedFilter, Decorrelator, MMSE };
enum class TimingMode { Synchronous, Asynchronous };

std::string_view to_string(ReceiverKind kind);
std::string_view to_string(TimingMode mode);

/// Transmit power cap, expressed as SNR_c = P_max / sigma^2.
class PowerBudget {
 public:
  static PowerBudget unlimited() { return PowerBudget{}; }
  /// Throws DomainError unless snr_c > 0.
  static PowerBudget max_snr(double snr_c);

  bool is_unlimited() const noexcept { return !snr_c_; }
  /// SNR_c; +infinity when unlimited.
  double snr() const noexcept;
  /// 1 / SNR_c; exactly 0 when unlimited.
  double inverse_snr() const noexcept;

 private:
  PowerBudget() = default;
  explicit PowerBudget(double snr_c) : snr_c_(snr_c) {}

  std::optional<double> snr_c_;
};

struct SystemConfig {
  geometry::Arena arena{6.0, 0.1};
  ReceiverKind receiver = ReceiverKind::MMSE;
  TimingMode timing = TimingMode::Synchronous;
  PowerBudget power = PowerBudget::unlimited();
  double gamma = 5.0;
  /// Relative-delay density for asynchronous MMSE; empty means uniform.
  geometry::DelayDensity delay;

  /// Throws DomainError unless gamma > 0.
  void validate() const;
};

struct CapacityResult {
  double alpha_max = 0.0;  // users per dimension, N / L
  bool feasible = false;
  double threshold = 0.0;  // gain threshold T at the requested link probability
  double link_prob = 0.0;
  /// Transmit SNR needed at alpha_max: SNR_c when power is capped, empty
  /// when unlimited (the bound is approached as SNR -> infinity).
  std::optional<double> required_snr;
};

enum class LinkStatus {
  Interior,    // 0 < p < 1 with a finite positive threshold
  Saturated,   // every link meets the target asymptotically: p = 1, T = 0
  Infeasible,  // load at or beyond the receiver's hard limit: p = 0
};

struct LinkResult {
  double link_prob = 0.0;
  double threshold = 0.0;
  LinkStatus status = LinkStatus::Infeasible;
};

/// Hard load limit of the receiver, or +infinity when the receiver has none
/// (decorrelator: 1 synchronous, 1/2 asynchronous).
double load_limit(const SystemConfig& cfg);

/// Largest load alpha = N/L such that a link meets gamma with probability p.
/// Throws DomainError unless 0 < p < 1. A non-positive bound is reported as
/// feasible = false with alpha_max = 0.
CapacityResult max_load(const SystemConfig& cfg, double prob);

/// Largest link probability sustainable at load alpha. Throws DomainError
/// for alpha <= 0.
LinkResult achievable_prob(const SystemConfig& cfg, double alpha);

/// Interference term alpha * gamma * E[...] at threshold T for the
/// configured receiver (0 for the decorrelator).
double interference_floor(const SystemConfig& cfg, double alpha, double threshold);

/// Smallest transmit SNR meeting link probability p at load alpha;
/// +infinity when no finite power suffices.
double required_snr(const SystemConfig& cfg, double alpha, double prob);

struct DiameterMapping {
  double range;      // d_r = sqrt(2) b / D, meters
  double link_prob;  // 1 - exp(-k^2 / (2 D^2))
  double threshold;  // T = lambda^2 D^2 / (2 b^2)
};

/// Per-hop range, link probability and gain threshold that make a D-hop
/// route span the arena diagonal. Throws DomainError for D < 1.
DiameterMapping diameter_map(const geometry::Arena& arena, int diameter);

/// max_load at the link probability demanded by a D-hop diameter.
CapacityResult capacity_for_diameter(const SystemConfig& cfg, int diameter);

struct DiameterEstimate {
  double continuous = 0.0;  // (b / lambda) sqrt(2 T); +inf when unreachable
  int hops = 0;             // max(1, ceil(continuous)); 0 when unreachable
  bool reachable = false;
};

/// Diameter sustainable at load alpha. Loads past the receiver's limit
/// yield reachable = false.
DiameterEstimate achievable_diameter(const SystemConfig& cfg, double alpha);

struct ThroughputPoint {
  int nodes = 0;
  DiameterEstimate sync_diameter;
  DiameterEstimate async_diameter;
  double cdma_sync = 0.0;
  double cdma_async = 0.0;
  double gupta_kumar = 0.0;
  double rate = 1.0;
};

/// Normalized per-node throughput R / D(N) for synchronous and asynchronous
/// CDMA at alpha = N / L, next to the unit-constant random-access reference
/// R / sqrt(N ln N). Throws DomainError for L < 1 or any N < 2.
std::vector<ThroughputPoint> throughput_curves(const SystemConfig& cfg,
                                               std::span<const int> nodes,
                                               int spreading_gain, double rate = 1.0);

}  // namespace adhoccap
