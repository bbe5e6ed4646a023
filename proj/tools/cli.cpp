#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adhoccap/asymptotic.hpp"
#include "adhoccap/errors.hpp"
#include "adhoccap/geometry.hpp"
#include "adhoccap/simulator.hpp"

#ifndef ADHOCCAP_VERSION
#define ADHOCCAP_VERSION "unknown"
#endif

namespace adhoccap::cli {
namespace {

using nlohmann::json;

constexpr const char* kGuptaKumarNote =
    "thr_gk = R / sqrt(N ln N) with proportionality constant 1: the random-access result is an "
    "order-of-growth statement, so only its shape is comparable, not its level";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string hops(const sim::Diameter& d) { return d ? std::to_string(*d) : "inf"; }

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> trailer;  // '#'-prefixed summary lines

  std::string str() const {
    std::ostringstream s;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) s << (i ? "," : "") << cells[i];
      s << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
    for (const auto& t : trailer) s << "# " << t << '\n';
    return s.str();
  }
};

// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Settings shared by every subcommand; all overridable.
struct Common {
  std::string receiver = "mmse";
  std::string timing = "sync";
  std::string power = "inf";
  double gamma = 5.0;
  double b = 6.0;
  double lambda = 0.1;
  double k = 3.5;
  std::string out;
  std::uint64_t seed = 2024;
  int trials = 100;
  unsigned workers = 0;
};

ReceiverKind parse_receiver(const std::string& s) {
  if (s == "mf") return ReceiverKind::MatchedFilter;
  if (s == "decorrelator") return ReceiverKind::Decorrelator;
  if (s == "mmse") return ReceiverKind::MMSE;
  throw UsageError("unknown receiver '" + s + "' (expected mf, decorrelator or mmse)");
}

TimingMode parse_timing(const std::string& s) {
  if (s == "sync") return TimingMode::Synchronous;
  if (s == "async") return TimingMode::Asynchronous;
  throw UsageError("unknown timing '" + s + "' (expected sync or async)");
}

PowerBudget parse_power(const std::string& s) {
  if (s == "inf") return PowerBudget::unlimited();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw UsageError("--power expects 'inf' or a positive number, got '" + s + "'");
  return PowerBudget::max_snr(v);
}

std::string power_label(const PowerBudget& p) {
  return p.is_unlimited() ? "inf" : num(p.snr());
}

SystemConfig system_config(const Common& c) {
  SystemConfig cfg;
  cfg.arena = geometry::Arena(c.b, c.lambda, c.k);
  cfg.receiver = parse_receiver(c.receiver);
  cfg.timing = parse_timing(c.timing);
  cfg.power = parse_power(c.power);
  cfg.gamma = c.gamma;
  cfg.validate();
  return cfg;
}

json common_json(const Common& c) {
  return {{"receiver", c.receiver}, {"timing", c.timing}, {"power", c.power},
          {"gamma", c.gamma},       {"b", c.b},           {"lambda", c.lambda},
          {"k", c.k}};
}

void add_arena(CLI::App* app, Common& c) {
  app->add_option("--gamma", c.gamma, "target SIR (linear)")->capture_default_str();
  app->add_option("--b", c.b, "half side of the square arena, meters")->capture_default_str();
  app->add_option("--lambda", c.lambda, "wavelength, meters")->capture_default_str();
  app->add_option("--k", c.k, "distance-distribution shape constant")->capture_default_str();
  app->add_option("--out", c.out, "CSV path (default: standard output)");
}

void add_receiver(CLI::App* app, Common& c, bool with_power = true) {
  app->add_option("--receiver", c.receiver, "mf | decorrelator | mmse")->capture_default_str();
  app->add_option("--timing", c.timing, "sync | async")->capture_default_str();
  if (with_power) {
    app->add_option("--power", c.power, "inf or SNR_c = P_max / sigma^2")->capture_default_str();
  }
}

void add_sim(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads (0: hardware concurrency)");
}

// Writes the CSV and its manifest record.
struct Emitter {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> argv;

  void operator()(const std::string& command, const Common& c, json params, const Csv& csv,
                  bool seeded, const std::vector<std::string>& notes = {}) const {
    json manifest = {{"command", command},
                     {"argv", argv},
                     {"parameters", std::move(params)},
                     {"artifact_version", ADHOCCAP_VERSION},
                     {"outputs", json::array()}};
    manifest["master_seed"] = seeded ? json(c.seed) : json(nullptr);
    if (!notes.empty()) manifest["notes"] = notes;

    if (c.out.empty()) {
      out << csv.str();
      out.flush();
      manifest["outputs"].push_back("<stdout>");
      err << manifest.dump() << '\n';
      return;
    }
    std::ofstream file(c.out);
    if (!file) throw std::runtime_error("cannot open " + c.out + " for writing");
    file << csv.str();
    const std::string manifest_path = c.out + ".manifest.json";
    manifest["outputs"].push_back(c.out);
    manifest["manifest"] = manifest_path;
    std::ofstream mfile(manifest_path);
    if (!mfile) throw std::runtime_error("cannot open " + manifest_path + " for writing");
    mfile << manifest.dump(2) << '\n';
  }
};

std::string limit_diagnostic(const SystemConfig& cfg, double alpha) {
  std::ostringstream msg;
  msg << "alpha " << num(alpha) << " exceeds decorrelator " << to_string(cfg.timing)
      << " limit " << num(load_limit(cfg));
  return msg.str();
}

std::string power_diagnostic(const SystemConfig& cfg, double threshold) {
  std::ostringstream msg;
  msg << "noise floor gamma/SNR_c = " << num(cfg.gamma * cfg.power.inverse_snr())
      << " is not below the gain threshold T = " << num(threshold)
      << ", so no load is feasible";
  return msg.str();
}

// ---- capacity ------------------------------------------------------------

struct CapacityArgs {
  Common c;
  std::vector<double> p;
  std::vector<int> diameters;
  std::vector<std::string> powers;
};

const std::vector<std::string> kCapacityHeader = {
    "sweep_var", "sweep_value", "snr_c", "alpha_max(users/dim)", "p", "T(gain)",
    "required_snr", "feasible"};

std::vector<std::string> capacity_row(const std::string& var, double value,
                                      const PowerBudget& power, const CapacityResult& r) {
  return {var,
          num(value),
          power_label(power),
          num(r.alpha_max),
          num(r.link_prob),
          num(r.threshold),
          r.required_snr ? num(*r.required_snr) : "inf",
          r.feasible ? "1" : "0"};
}

int run_capacity(const CapacityArgs& a, const Emitter& emit) {
  if (a.p.empty() == a.diameters.empty()) {
    throw UsageError("capacity needs exactly one of --p or --D");
  }
  SystemConfig cfg = system_config(a.c);
  std::vector<std::string> powers = a.powers.empty() ? std::vector<std::string>{a.c.power}
                                                     : a.powers;
  const bool by_diameter = !a.diameters.empty();
  const std::size_t points = by_diameter ? a.diameters.size() : a.p.size();
  const std::string var = points == 1 && powers.size() > 1 ? "snr_c" : by_diameter ? "D" : "p";

  Csv csv{kCapacityHeader, {}, {}};
  std::optional<std::string> infeasible;
  for (const auto& spelled : powers) {
    cfg.power = parse_power(spelled);
    for (std::size_t i = 0; i < points; ++i) {
      const CapacityResult r = by_diameter ? capacity_for_diameter(cfg, a.diameters[i])
                                           : max_load(cfg, a.p[i]);
      if (!r.feasible && !infeasible) infeasible = power_diagnostic(cfg, r.threshold);
      const double value = var == "snr_c" ? cfg.power.snr()
                           : by_diameter  ? static_cast<double>(a.diameters[i])
                                          : a.p[i];
      csv.rows.push_back(capacity_row(var, value, cfg.power, r));
    }
  }
  if (csv.rows.size() == 1 && infeasible) {
    emit.err << "infeasible: " << *infeasible << '\n';
    return kInfeasible;
  }
  json params = common_json(a.c);
  params["p"] = a.p;
  params["D"] = a.diameters;
  params["power"] = powers;
  emit("capacity", a.c, params, csv, false);
  return kOk;
}

// ---- link-prob -----------------------------------------------------------

struct LinkArgs {
  Common c;
  std::vector<double> alpha;
  std::vector<int> nodes;
  int spreading = 0;
};

std::string status_name(LinkStatus s) {
  switch (s) {
    case LinkStatus::Interior: return "interior";
    case LinkStatus::Saturated: return "saturated";
    case LinkStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

int run_link_prob(const LinkArgs& a, const Emitter& emit) {
  std::vector<double> loads = a.alpha;
  if (!a.nodes.empty()) {
    if (!a.alpha.empty() || a.spreading < 1) {
      throw UsageError("link-prob takes either --alpha or --N with --L >= 1");
    }
    for (const int n : a.nodes) loads.push_back(static_cast<double>(n) / a.spreading);
  }
  if (loads.empty()) throw UsageError("link-prob needs --alpha or --N with --L");
  const SystemConfig cfg = system_config(a.c);

  Csv csv{{"alpha(users/dim)", "p", "T(gain)", "status"}, {}, {}};
  for (const double alpha : loads) {
    const LinkResult r = achievable_prob(cfg, alpha);
    if (r.status == LinkStatus::Infeasible && loads.size() == 1) {
      emit.err << "infeasible: " << limit_diagnostic(cfg, alpha) << '\n';
      return kInfeasible;
    }
    csv.rows.push_back({num(alpha), num(r.link_prob), num(r.threshold), status_name(r.status)});
  }
  json params = common_json(a.c);
  params["alpha"] = loads;
  emit("link-prob", a.c, params, csv, false);
  return kOk;
}

// ---- diameter-map --------------------------------------------------------

struct DiameterArgs {
  Common c;
  std::vector<int> diameters;
  std::string model = "gaussian";
};

Csv diameter_csv(const geometry::Arena& arena, const std::vector<int>& diameters,
                 geometry::DistanceModel model) {
  Csv csv{{"D(hops)", "d_r(m)", "p", "T(gain)", "p_model"}, {}, {}};
  for (const int d : diameters) {
    const DiameterMapping m = diameter_map(arena, d);
    csv.rows.push_back({std::to_string(d), num(m.range), num(m.link_prob), num(m.threshold),
                        num(geometry::distance_cdf(arena, model, m.range))});
  }
  return csv;
}

geometry::DistanceModel parse_model(const std::string& s) {
  if (s == "exact") return geometry::DistanceModel::ExactUniformSquare;
  if (s == "gaussian") return geometry::DistanceModel::GaussianApprox;
  throw UsageError("unknown --model '" + s + "' (expected exact or gaussian)");
}

int run_diameter_map(const DiameterArgs& a, const Emitter& emit) {
  if (a.diameters.empty()) throw UsageError("diameter-map needs --D");
  const geometry::Arena arena(a.c.b, a.c.lambda, a.c.k);
  const Csv csv = diameter_csv(arena, a.diameters, parse_model(a.model));
  json params = {{"b", a.c.b}, {"lambda", a.c.lambda}, {"k", a.c.k},
                 {"D", a.diameters}, {"model", a.model}};
  emit("diameter-map", a.c, params, csv, false);
  return kOk;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  Common c;
  int spreading = 32;
  int nodes = 2;
  std::string interferers = "exclude";
};

sim::SimConfig sim_config(const Common& c, ReceiverKind receiver, const PowerBudget& power,
                          int spreading, int nodes) {
  sim::SimConfig cfg;
  cfg.arena = geometry::Arena(c.b, c.lambda, c.k);
  cfg.receiver = receiver;
  cfg.gamma = c.gamma;
  cfg.power = power;
  cfg.spreading_gain = spreading;
  cfg.nodes = nodes;
  cfg.trials = c.trials;
  cfg.master_seed = c.seed;
  cfg.validate();
  return cfg;
}

std::string histogram(const std::map<sim::Diameter, double>& h) {
  std::string s;
  for (const auto& [d, w] : h) s += (s.empty() ? "" : ";") + hops(d) + ":" + num(w);
  return s;
}

int run_simulate(const SimulateArgs& a, const Emitter& emit) {
  sim::SimConfig cfg =
      sim_config(a.c, parse_receiver(a.c.receiver), parse_power(a.c.power), a.spreading, a.nodes);
  if (a.interferers == "include") {
    cfg.interferers = sim::InterfererPolicy::IncludeReceiver;
  } else if (a.interferers != "exclude") {
    throw UsageError("--interferers expects include or exclude");
  }
  if (cfg.receiver == ReceiverKind::Decorrelator && cfg.load() >= 1.0) {
    SystemConfig sys;
    sys.receiver = ReceiverKind::Decorrelator;
    emit.err << "infeasible: " << limit_diagnostic(sys, cfg.load()) << '\n';
    return kInfeasible;
  }

  const sim::SimSummary s = sim::run_monte_carlo(cfg, a.c.workers);
  Csv csv{{"trial", "link_prob_hat", "diameter(hops)", "mutual_diameter(hops)"}, {}, {}};
  for (std::size_t t = 0; t < s.trials.size(); ++t) {
    const auto& o = s.trials[t];
    csv.rows.push_back({std::to_string(t), num(o.link_prob_hat), hops(o.diameter),
                        hops(o.mutual_diameter)});
  }
  csv.trailer = {"summary",
                 "mean_link_prob," + num(s.mean_link_prob),
                 "modal_diameter," + hops(s.modal_diameter()),
                 "diameter_histogram," + histogram(s.diameter_histogram),
                 "mutual_diameter_histogram," + histogram(s.mutual_diameter_histogram)};

  json params = common_json(a.c);
  params.erase("timing");
  params["L"] = a.spreading;
  params["N"] = a.nodes;
  params["trials"] = a.c.trials;
  params["interferers"] = a.interferers;
  emit("simulate", a.c, params, csv, true);
  return kOk;
}

// ---- throughput ----------------------------------------------------------

struct ThroughputArgs {
  Common c;
  int spreading = 32;
  int n_min = 2;
  int n_max = 100;
  double rate = 1.0;
};

Csv throughput_csv(const SystemConfig& cfg, int spreading, int n_min, int n_max, double rate) {
  if (n_min < 2 || n_max < n_min) throw UsageError("throughput needs 2 <= --N-min <= --N-max");
  std::vector<int> nodes;
  for (int n = n_min; n <= n_max; ++n) nodes.push_back(n);
  Csv csv{{"N", "D_cont_sync(hops)", "D_ceil_sync(hops)", "D_cont_async(hops)",
           "D_ceil_async(hops)", "thr_cdma_sync(R)", "thr_cdma_async(R)", "thr_gk(R)"},
          {},
          {kGuptaKumarNote}};
  for (const auto& pt : throughput_curves(cfg, nodes, spreading, rate)) {
    csv.rows.push_back({std::to_string(pt.nodes), num(pt.sync_diameter.continuous),
                        pt.sync_diameter.reachable ? std::to_string(pt.sync_diameter.hops) : "inf",
                        num(pt.async_diameter.continuous),
                        pt.async_diameter.reachable ? std::to_string(pt.async_diameter.hops)
                                                    : "inf",
                        num(pt.cdma_sync), num(pt.cdma_async), num(pt.gupta_kumar)});
  }
  return csv;
}

int run_throughput(const ThroughputArgs& a, const Emitter& emit) {
  const SystemConfig cfg = system_config(a.c);
  const Csv csv = throughput_csv(cfg, a.spreading, a.n_min, a.n_max, a.rate);
  emit.err << "note: " << kGuptaKumarNote << '\n';
  json params = common_json(a.c);
  params.erase("timing");
  params["L"] = a.spreading;
  params["N_min"] = a.n_min;
  params["N_max"] = a.n_max;
  params["rate"] = a.rate;
  emit("throughput", a.c, params, csv, false, {kGuptaKumarNote});
  return kOk;
}

// ---- reproduce -----------------------------------------------------------

struct TableRow {
  int spreading;
  int nodes;
};

PowerBudget table_power(ReceiverKind receiver) {
  // Decorrelator rows are power limited; MMSE and MF rows use unlimited power.
  return receiver == ReceiverKind::Decorrelator ? PowerBudget::max_snr(1e4)
                                                : PowerBudget::unlimited();
}

Csv reproduce_table(const Common& c, ReceiverKind receiver, const std::vector<TableRow>& rows) {
  Csv csv{{"receiver", "L", "N", "alpha(users/dim)", "p_analysis", "p_sim", "D_cont(hops)",
           "D_ceil(hops)", "D_sim_mode(hops)", "D_sim_mode_mutual(hops)"},
          {},
          {}};
  SystemConfig sys;
  sys.arena = geometry::Arena(c.b, c.lambda, c.k);
  sys.receiver = receiver;
  sys.power = table_power(receiver);
  sys.gamma = c.gamma;
  for (const TableRow& row : rows) {
    const double alpha = static_cast<double>(row.nodes) / row.spreading;
    const LinkResult link = achievable_prob(sys, alpha);
    const DiameterEstimate d = achievable_diameter(sys, alpha);
    const auto summary = sim::run_monte_carlo(
        sim_config(c, receiver, sys.power, row.spreading, row.nodes), c.workers);

    sim::SimSummary mutual;
    mutual.diameter_histogram = summary.mutual_diameter_histogram;
    csv.rows.push_back({std::string(to_string(receiver)), std::to_string(row.spreading),
                        std::to_string(row.nodes), num(alpha), num(link.link_prob),
                        num(summary.mean_link_prob), num(d.continuous),
                        d.reachable ? std::to_string(d.hops) : "inf",
                        hops(summary.modal_diameter()), hops(mutual.modal_diameter())});
  }
  return csv;
}

Csv reproduce_fig6(const Common& c) {
  std::vector<std::string> header = {"receiver", "timing"};
  header.insert(header.end(), kCapacityHeader.begin(), kCapacityHeader.end());
  Csv csv{header, {}, {}};
  SystemConfig cfg;
  cfg.arena = geometry::Arena(c.b, c.lambda, c.k);
  cfg.gamma = c.gamma;
  for (auto receiver : {ReceiverKind::MatchedFilter, ReceiverKind::Decorrelator,
                        ReceiverKind::MMSE}) {
    cfg.receiver = receiver;
    for (auto power : {PowerBudget::unlimited(), PowerBudget::max_snr(1e4)}) {
      cfg.power = power;
      for (int i = 1; i <= 19; ++i) {
        const double p = 0.05 * i;
        auto row = capacity_row("p", p, power, max_load(cfg, p));
        row.insert(row.begin(), {std::string(to_string(receiver)), "sync"});
        csv.rows.push_back(std::move(row));
      }
    }
  }
  return csv;
}

Csv reproduce_fig9(const Common& c, int diameter) {
  std::vector<std::string> header = {"receiver", "timing", "D(hops)"};
  header.insert(header.end(), kCapacityHeader.begin(), kCapacityHeader.end());
  Csv csv{header, {}, {}};
  SystemConfig cfg;
  cfg.arena = geometry::Arena(c.b, c.lambda, c.k);
  cfg.gamma = c.gamma;
  for (auto receiver : {ReceiverKind::MatchedFilter, ReceiverKind::Decorrelator,
                        ReceiverKind::MMSE}) {
    cfg.receiver = receiver;
    for (int i = 0; i <= 50; ++i) {
      const double snr = std::pow(10.0, 2.0 + 5.0 * i / 50.0);
      cfg.power = PowerBudget::max_snr(snr);
      auto row = capacity_row("snr_c", snr, cfg.power, capacity_for_diameter(cfg, diameter));
      row.insert(row.begin(), {std::string(to_string(receiver)), "sync", std::to_string(diameter)});
      csv.rows.push_back(std::move(row));
    }
  }
  return csv;
}

const std::vector<TableRow> kTable1 = {{512, 60}, {1024, 120}, {64, 28}, {128, 92},
                                       {128, 96}, {128, 100},  {64, 57}};
const std::vector<TableRow> kTable2 = {{32, 38}, {32, 39}, {32, 42}, {32, 45}, {32, 46},
                                       {32, 48}, {32, 57}, {64, 78}, {64, 74}};
const std::vector<TableRow> kTable3 = {{1024, 44}, {256, 31}, {512, 144}};

int run_reproduce(const std::string& target, const Common& c, const Emitter& emit) {
  json params = {{"target", target}, {"gamma", c.gamma}, {"b", c.b},
                 {"lambda", c.lambda}, {"k", c.k}};
  const geometry::Arena arena(c.b, c.lambda, c.k);
  bool seeded = false;
  std::vector<std::string> notes;
  Csv csv;
  if (target == "table1" || target == "table2" || target == "table3") {
    seeded = true;
    params["trials"] = c.trials;
    if (target == "table1") csv = reproduce_table(c, ReceiverKind::Decorrelator, kTable1);
    if (target == "table2") csv = reproduce_table(c, ReceiverKind::MMSE, kTable2);
    if (target == "table3") csv = reproduce_table(c, ReceiverKind::MatchedFilter, kTable3);
    notes.push_back("decorrelator rows use SNR_c = 1e4; MMSE and MF rows use unlimited power");
  } else if (target == "fig6") {
    csv = reproduce_fig6(c);
  } else if (target == "fig8") {
    csv = diameter_csv(arena, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                       geometry::DistanceModel::GaussianApprox);
  } else if (target == "fig9a" || target == "fig9b") {
    csv = reproduce_fig9(c, target == "fig9a" ? 2 : 3);
  } else if (target == "fig10") {
    SystemConfig cfg;
    cfg.arena = arena;
    cfg.gamma = c.gamma;
    csv = throughput_csv(cfg, 32, 2, 100, 1.0);
    notes.push_back(kGuptaKumarNote);
    emit.err << "note: " << kGuptaKumarNote << '\n';
  }
  emit("reproduce " + target, c, params, csv, seeded, notes);
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity analysis and Monte Carlo simulation of CDMA ad hoc networks",
               "adhoccap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ADHOCCAP_VERSION);

  std::function<int(const Emitter&)> action;

  CapacityArgs cap;
  auto* capacity = app.add_subcommand("capacity", "largest load alpha = N/L for a link probability");
  add_receiver(capacity, cap.c, false);
  add_arena(capacity, cap.c);
  capacity->add_option("--power", cap.powers, "inf or SNR_c; several values sweep SNR_c");
  capacity->add_option("--p", cap.p, "link probability (one or more)");
  capacity->add_option("--D", cap.diameters, "network diameter in hops (one or more)");
  capacity->callback([&] { action = [&](const Emitter& e) { return run_capacity(cap, e); }; });

  LinkArgs link;
  auto* link_prob = app.add_subcommand("link-prob", "achievable link probability at a load");
  add_receiver(link_prob, link.c);
  add_arena(link_prob, link.c);
  link_prob->add_option("--alpha", link.alpha, "load N/L (one or more)");
  link_prob->add_option("--N", link.nodes, "node count (one or more), with --L");
  link_prob->add_option("--L", link.spreading, "spreading gain");
  link_prob->callback([&] { action = [&](const Emitter& e) { return run_link_prob(link, e); }; });

  DiameterArgs dia;
  auto* diameter = app.add_subcommand("diameter-map", "range, link probability and threshold per diameter");
  add_arena(diameter, dia.c);
  diameter->add_option("--D", dia.diameters, "network diameter in hops (one or more)");
  diameter->add_option("--model", dia.model, "distance CDF for p_model: exact | gaussian")
      ->capture_default_str();
  diameter->callback([&] { action = [&](const Emitter& e) { return run_diameter_map(dia, e); }; });

  SimulateArgs simargs;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo network simulation");
  add_receiver(simulate, simargs.c);
  add_arena(simulate, simargs.c);
  add_sim(simulate, simargs.c);
  simulate->add_option("--L", simargs.spreading, "spreading gain")->capture_default_str();
  simulate->add_option("--N", simargs.nodes, "node count")->capture_default_str();
  simulate->add_option("--interferers", simargs.interferers,
                       "exclude | include the receiver's own transmission")
      ->capture_default_str();
  simulate->callback([&] { action = [&](const Emitter& e) { return run_simulate(simargs, e); }; });

  ThroughputArgs thr;
  auto* throughput = app.add_subcommand("throughput", "per-node throughput against node count");
  add_receiver(throughput, thr.c);
  add_arena(throughput, thr.c);
  throughput->add_option("--L", thr.spreading, "spreading gain")->capture_default_str();
  throughput->add_option("--N-min", thr.n_min, "smallest node count")->capture_default_str();
  throughput->add_option("--N-max", thr.n_max, "largest node count")->capture_default_str();
  throughput->add_option("--rate", thr.rate, "per-link rate R")->capture_default_str();
  throughput->callback([&] { action = [&](const Emitter& e) { return run_throughput(thr, e); }; });

  Common rep;
  auto* reproduce = app.add_subcommand("reproduce", "regenerate a table or figure data set");
  reproduce->require_subcommand(1);
  for (const char* target :
       {"table1", "table2", "table3", "fig6", "fig8", "fig9a", "fig9b", "fig10"}) {
    auto* sub = reproduce->add_subcommand(target, std::string("data for ") + target);
    add_arena(sub, rep);
    add_sim(sub, rep);
    const std::string name = target;
    sub->callback([&, name] {
      action = [&, name](const Emitter& e) { return run_reproduce(name, rep, e); };
    });
  }

  std::vector<const char*> argv = {"adhoccap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << ADHOCCAP_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nrun 'adhoccap --help' for usage\n";
    return kUsage;
  }

  const Emitter emitter{out, err, args};
  try {
    return action(emitter);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  }
}

}  // namespace adhoccap::cli
