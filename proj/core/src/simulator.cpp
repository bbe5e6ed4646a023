#include "adhoccap/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>

#include "adhoccap/errors.hpp"
#include "adhoccap/numerics.hpp"

namespace adhoccap::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualLimit = 1e-9;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// sum_j h h_j x / (h + h_j x) / L + x / SNR: the interference-plus-noise of
// the MMSE fixed point multiplied through by x. Strictly increasing in x.
double mmse_load(double x, double own_gain, const std::vector<double>& interferers,
                 int spreading_gain, double inverse_snr) {
  double sum = 0.0;
  for (const double hj : interferers) {
    sum += own_gain * hj * x / (own_gain + hj * x);
  }
  return x * inverse_snr + sum / spreading_gain;
}

}  // namespace

void SimConfig::validate() const {
  std::ostringstream msg;
  if (nodes < 2) msg << "simulation needs N >= 2 nodes, got " << nodes;
  else if (spreading_gain < 1) msg << "spreading gain L must be >= 1, got " << spreading_gain;
  else if (trials < 1) msg << "trial count must be >= 1, got " << trials;
  else if (!(gamma > 0.0)) msg << "target SIR gamma must be positive, got " << gamma;
  else return;
  throw DomainError(msg.str());
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(~trial_index));
}

Placement place_nodes(const SimConfig& cfg, int trial_index) {
  cfg.validate();
  if (trial_index < 0 || trial_index >= cfg.trials) {
    std::ostringstream msg;
    msg << "trial index " << trial_index << " outside [0, " << cfg.trials << ")";
    throw DomainError(msg.str());
  }
  std::uint64_t state = trial_seed(cfg.master_seed, static_cast<std::uint64_t>(trial_index));
  const double side = cfg.arena.side();
  Placement placement;
  placement.positions.reserve(static_cast<std::size_t>(cfg.nodes));
  for (int n = 0; n < cfg.nodes; ++n) {
    const double x = side * unit_uniform(splitmix64(state++));
    const double y = side * unit_uniform(splitmix64(state++));
    placement.positions.push_back({x, y});
  }
  return placement;
}

GainMatrix gain_matrix(const geometry::Arena& arena, const Placement& placement) {
  const auto& pos = placement.positions;
  const std::size_t n = pos.size();
  const double lambda2 = arena.wavelength() * arena.wavelength();
  GainMatrix gains(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(pos[i], pos[j]);
      const double h = d < arena.d_min() ? arena.max_gain() : lambda2 / (d * d);
      gains(i, j) = h;
      gains(j, i) = h;
    }
  }
  return gains;
}

double mmse_sir(double own_gain, const std::vector<double>& interferer_gains,
                int spreading_gain, double inverse_snr) {
  const double h = own_gain;
  if (inverse_snr == 0.0) {
    // Without noise the interference term saturates at (|I| / L) h, so a
    // finite fixed point needs more active interferers than dimensions.
    const auto active = std::count_if(interferer_gains.begin(), interferer_gains.end(),
                                      [](double g) { return g > 0.0; });
    if (active <= spreading_gain) return kInf;
  }

  auto excess = [&](double x) {
    return mmse_load(x, h, interferer_gains, spreading_gain, inverse_snr) / h - 1.0;
  };

  double hi = 0.0;
  if (inverse_snr > 0.0) {
    hi = h / inverse_snr;  // interference-free SIR
  } else {
    hi = 1.0;
    while (excess(hi) < 0.0) hi *= 2.0;
  }

  numerics::Tolerance tol;
  tol.abs_tol = 1e-13;
  tol.rel_tol = 1e-14;
  tol.max_iter = 500;
  return numerics::solve_monotone(excess, 0.0, hi, tol);
}

double mmse_residual(double sir, double own_gain, const std::vector<double>& interferer_gains,
                     int spreading_gain, double inverse_snr) {
  if (std::isinf(sir)) return 0.0;
  double sum = 0.0;
  for (const double hj : interferer_gains) {
    sum += own_gain * hj / (own_gain + hj * sir);
  }
  const double rhs = own_gain / (inverse_snr + sum / spreading_gain);
  return std::abs(sir - rhs) / sir;
}

SirMatrix sir_matrix(const SimConfig& cfg, const GainMatrix& gains) {
  const std::size_t n = gains.size();
  const double inv_snr = cfg.power.inverse_snr();
  const int spreading = cfg.spreading_gain;
  SirMatrix sirs(n, 0.0);

  if (cfg.receiver == ReceiverKind::Decorrelator) {
    const double alpha = static_cast<double>(n) / spreading;
    if (alpha >= 1.0) return sirs;
    const double snr = cfg.power.snr();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t r = 0; r < n; ++r) {
        if (i != r) sirs(i, r) = std::isinf(snr) ? kInf : snr * gains(i, r) * (1.0 - alpha);
      }
    }
    return sirs;
  }

  const bool include_receiver = cfg.interferers == InterfererPolicy::IncludeReceiver;
  std::vector<double> interferers;
  interferers.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      interferers.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        // The receiver's own transmission is a coincident source, clamped
        // to the near-field cap.
        if (j == r) {
          if (include_receiver) interferers.push_back(cfg.arena.max_gain());
          continue;
        }
        interferers.push_back(gains(j, r));
      }
      const double own = gains(i, r);

      if (cfg.receiver == ReceiverKind::MatchedFilter) {
        double sum = 0.0;
        for (const double hj : interferers) sum += hj;
        const double denom = inv_snr + sum / spreading;
        sirs(i, r) = denom > 0.0 ? own / denom : kInf;
        continue;
      }

      double sir = 0.0;
      try {
        sir = mmse_sir(own, interferers, spreading, inv_snr);
      } catch (const ConvergenceError& e) {
        std::ostringstream msg;
        msg << "MMSE fixed point for link " << i << " -> " << r << ": " << e.what();
        throw ConvergenceError(msg.str(), e.best_estimate());
      }
      const double residual = mmse_residual(sir, own, interferers, spreading, inv_snr);
      if (residual > kResidualLimit) {
        std::ostringstream msg;
        msg << "MMSE fixed point for link " << i << " -> " << r << " has residual " << residual;
        throw ConvergenceError(msg.str(), sir);
      }
      sirs(i, r) = sir;
    }
  }
  return sirs;
}

Adjacency feasibility_graph(const SirMatrix& sirs, double gamma, const geometry::Arena& arena,
                            const Placement& placement) {
  const std::size_t n = sirs.size();
  const auto& pos = placement.positions;
  Adjacency adjacency(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      if (i == r) continue;
      adjacency(i, r) = sirs(i, r) >= gamma && distance(pos[i], pos[r]) >= arena.d_min();
    }
  }
  return adjacency;
}

Diameter hop_diameter(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  if (n < 2) throw DomainError("hop_diameter needs at least two nodes");
  std::vector<int> hops(n);
  std::queue<std::size_t> frontier;
  int diameter = 0;
  for (std::size_t source = 0; source < n; ++source) {
    std::fill(hops.begin(), hops.end(), -1);
    hops[source] = 0;
    frontier.push(source);
    std::size_t reached = 1;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (adjacency(u, v) && hops[v] < 0) {
          hops[v] = hops[u] + 1;
          diameter = std::max(diameter, hops[v]);
          ++reached;
          frontier.push(v);
        }
      }
    }
    if (reached < n) return std::nullopt;
  }
  return diameter;
}

Adjacency mutual_edges(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  Adjacency mutual(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mutual(i, j) = adjacency(i, j) && adjacency(j, i);
    }
  }
  return mutual;
}

TrialOutcome run_trial(const SimConfig& cfg, int trial_index) {
  const Placement placement = place_nodes(cfg, trial_index);
  const GainMatrix gains = gain_matrix(cfg.arena, placement);
  const SirMatrix sirs = sir_matrix(cfg, gains);
  const Adjacency graph = feasibility_graph(sirs, cfg.gamma, cfg.arena, placement);

  TrialOutcome outcome;
  const std::size_t n = graph.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) outcome.feasible_links += graph(i, r) ? 1 : 0;
  }
  outcome.link_prob_hat = static_cast<double>(outcome.feasible_links) / (n * (n - 1));
  outcome.diameter = hop_diameter(graph);
  outcome.mutual_diameter = hop_diameter(mutual_edges(graph));
  return outcome;
}

Diameter SimSummary::modal_diameter() const {
  Diameter mode;
  double best = -1.0;
  // Finite hop counts in ascending order first, disconnected last.
  for (const auto& [d, prob] : diameter_histogram) {
    if (d && prob > best) {
      best = prob;
      mode = d;
    }
  }
  if (auto it = diameter_histogram.find(std::nullopt);
      it != diameter_histogram.end() && it->second > best) {
    mode = std::nullopt;
  }
  return mode;
}

SimSummary run_monte_carlo(const SimConfig& cfg, unsigned workers) {
  cfg.validate();
  const int trials = cfg.trials;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  int failed_trial = trials;
  std::exception_ptr failure;

  auto work = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (t < failed_trial) {
          failed_trial = t;
          failure = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "trial " << failed_trial << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  }

  SimSummary summary;
  summary.trials_run = trials;
  double prob_sum = 0.0;
  for (const TrialOutcome& outcome : outcomes) {
    prob_sum += outcome.link_prob_hat;
    summary.diameter_histogram[outcome.diameter] += 1.0;
    summary.mutual_diameter_histogram[outcome.mutual_diameter] += 1.0;
  }
  summary.mean_link_prob = prob_sum / trials;
  for (auto& [d, weight] : summary.diameter_histogram) weight /= trials;
  for (auto& [d, weight] : summary.mutual_diameter_histogram) weight /= trials;
  summary.trials = std::move(outcomes);
  return summary;
}

}  // namespace adhoccap::sim
