#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "adhoccap/asymptotic.hpp"
#include "adhoccap/geometry.hpp"

namespace adhoccap::sim {

/// Which nodes interfere with transmission i -> r.
enum class InterfererPolicy {
  IncludeReceiver,  // every j != i
  ExcludeReceiver,  // every j != i, j != r
};

struct SimConfig {
  geometry::Arena arena{6.0, 0.1};
  ReceiverKind receiver = ReceiverKind::MMSE;
  double gamma = 5.0;
  PowerBudget power = PowerBudget::unlimited();
  int spreading_gain = 32;  // L
  int nodes = 2;            // N
  int trials = 100;
  std::uint64_t master_seed = 1;
  InterfererPolicy interferers = InterfererPolicy::ExcludeReceiver;

  /// Throws DomainError unless N >= 2, L >= 1, trials >= 1, gamma > 0.
  void validate() const;
  double load() const noexcept { return static_cast<double>(nodes) / spreading_gain; }
};

struct Point {
  double x;
  double y;
};

struct Placement {
  std::vector<Point> positions;
};

/// Dense row-major N x N matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using GainMatrix = Matrix<double>;
using SirMatrix = Matrix<double>;
/// adjacency(i, r) is true when i can transmit directly to r.
using Adjacency = Matrix<char>;

/// Hop diameter; std::nullopt means some ordered pair is unreachable.
using Diameter = std::optional<int>;

/// Per-trial seed, a SplitMix64 mix of (master_seed, trial_index).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

/// N independent uniform positions in [0, b]^2, a pure function of
/// (master_seed, trial_index).
Placement place_nodes(const SimConfig& cfg, int trial_index);

/// h_ij = min(lambda^2 / d_ij^2, 1): pairs closer than d_min (including
/// coincident nodes) interfere at the support cap. Diagonal is 0.
GainMatrix gain_matrix(const geometry::Arena& arena, const Placement& placement);

/// SIR of every transmission i -> r, entry (i, r). Unlimited power gives
/// +infinity wherever no interferer remains. Throws ConvergenceError naming
/// the pair if an MMSE fixed point cannot be resolved.
SirMatrix sir_matrix(const SimConfig& cfg, const GainMatrix& gains);

/// Solution of x = h / (1/SNR + (1/L) sum_j h h_j / (h + h_j x)) for a
/// single link with own gain h and interferer gains h_j; +infinity when the
/// interferers can be fully suppressed.
double mmse_sir(double own_gain, const std::vector<double>& interferer_gains,
                int spreading_gain, double inverse_snr);

/// |x - rhs(x)| / x for the MMSE fixed-point map at x.
double mmse_residual(double sir, double own_gain, const std::vector<double>& interferer_gains,
                     int spreading_gain, double inverse_snr);

/// Directed link graph: i -> r iff SIR >= gamma and d_ir >= d_min.
Adjacency feasibility_graph(const SirMatrix& sirs, double gamma, const geometry::Arena& arena,
                            const Placement& placement);

/// Longest shortest path in hops over ordered pairs (BFS, unit weights).
Diameter hop_diameter(const Adjacency& adjacency);

/// Keeps only edges present in both directions.
Adjacency mutual_edges(const Adjacency& adjacency);

struct TrialOutcome {
  double link_prob_hat = 0.0;    // feasible ordered pairs / (N (N - 1))
  Diameter diameter;             // directed graph
  Diameter mutual_diameter;      // graph of two-way links
  std::size_t feasible_links = 0;
};

TrialOutcome run_trial(const SimConfig& cfg, int trial_index);

struct SimSummary {
  double mean_link_prob = 0.0;
  /// Empirical diameter distribution; key std::nullopt is "disconnected".
  std::map<Diameter, double> diameter_histogram;
  std::map<Diameter, double> mutual_diameter_histogram;
  int trials_run = 0;
  std::vector<TrialOutcome> trials;

  /// Most frequent diameter (ties go to the smaller hop count).
  Diameter modal_diameter() const;
};

/// Runs cfg.trials independent trials on up to `workers` threads (0 picks
/// the hardware concurrency). The summary depends only on cfg.
SimSummary run_monte_carlo(const SimConfig& cfg, unsigned workers = 0);

}  // namespace adhoccap::sim
