#include "spoofalloc/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "spoofalloc/montecarlo.hpp"

namespace spoofalloc::sweep {

const char* const kCsvHeader =
    "modulation,P_linear,Q_db,scheme,sser_analytic,sser_empirical,ci3sigma,"
    "A,B_mean,B_lo,B_hi,gamma,CR_mean,CI,tau1,tau2";

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scheme_token(allocator::Scheme s) {
  switch (s) {
    case allocator::Scheme::OptimalSymbolLevel:
      return "optimal";
    case allocator::Scheme::BlockLevel:
      return "block";
    case allocator::Scheme::HeuristicSymbolLevel:
      return "heuristic";
  }
  return "?";
}

std::string modulation_token(Modulation m) {
  return m == Modulation::Bpsk ? "bpsk" : "qpsk";
}

std::vector<double> q_grid_db(double start_db, double stop_db, double step_db) {
  if (!(step_db > 0.0)) throw std::invalid_argument("step must be > 0");
  if (!(stop_db >= start_db)) throw std::invalid_argument("stop must be >= start");
  const int n = static_cast<int>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = start_db + i * step_db;
  return grid;
}

SweepRow row_from_plan(const allocator::AllocationPlan& plan, double q_db) {
  SweepRow row;
  row.modulation = plan.modulation;
  row.p_linear = plan.alice_power;
  row.q_db = q_db;
  row.scheme = plan.scheme;
  row.sser_analytic = plan.avg_sser;
  row.a = plan.per_type.at(SymbolType::Aligned).power.mean();
  const auto& opposed = plan.per_type.at(SymbolType::Opposed).power;
  row.b_mean = opposed.mean();
  if (opposed.kind == allocator::PowerPolicy::Kind::TwoPointTimeShare) {
    row.b_lo = opposed.p_lo;
    row.b_hi = opposed.p_hi;
    row.gamma = opposed.frac_lo;
  }
  if (plan.modulation == Modulation::Qpsk) {
    const auto& neighbor = plan.per_type.at(SymbolType::Neighbor);
    row.cr_mean = neighbor.power.mean();
    row.ci = neighbor.imag_power->mean();
  }
  row.tau1 = plan.tau1;
  row.tau2 = plan.tau2;
  return row;
}

namespace {

allocator::AllocationPlan make_plan(Modulation m, allocator::Scheme scheme,
                                    double p, double q) {
  switch (scheme) {
    case allocator::Scheme::OptimalSymbolLevel:
      return m == Modulation::Bpsk ? allocator::solve_bpsk(p, q)
                                   : allocator::solve_qpsk(p, q);
    case allocator::Scheme::BlockLevel:
      return allocator::block_level(p, q, m);
    case allocator::Scheme::HeuristicSymbolLevel:
      return allocator::heuristic_symbol_level(p, q, m);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (!(spec.alice_power > 0.0)) {
    throw std::invalid_argument("alice power must be > 0");
  }
  const std::vector<double> grid =
      q_grid_db(spec.q_start_db, spec.q_stop_db, spec.q_step_db);

  // Canonical emission order, independent of how schemes were requested.
  std::vector<allocator::Scheme> order;
  for (allocator::Scheme s :
       {allocator::Scheme::OptimalSymbolLevel, allocator::Scheme::BlockLevel,
        allocator::Scheme::HeuristicSymbolLevel}) {
    for (allocator::Scheme requested : spec.schemes) {
      if (requested == s) {
        order.push_back(s);
        break;
      }
    }
  }

  struct Task {
    std::size_t scheme_idx;
    std::size_t q_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < order.size(); ++si) {
    for (std::size_t qi = 0; qi < grid.size(); ++qi) tasks.push_back({si, qi});
  }
  std::vector<SweepRow> rows(tasks.size());

  const auto compute = [&](const Task& task, std::size_t out_idx) {
    const double q_db = grid[task.q_idx];
    const double q = std::pow(10.0, q_db / 10.0);
    const allocator::Scheme scheme = order[task.scheme_idx];
    const auto plan = make_plan(spec.modulation, scheme, spec.alice_power, q);
    SweepRow row = row_from_plan(plan, q_db);
    if (spec.trials > 0) {
      montecarlo::SimConfig config;
      config.params = {spec.alice_power, q, spec.modulation};
      config.plan = plan;
      config.trials = spec.trials;
      config.seed = montecarlo::mix64(
          spec.seed ^ montecarlo::mix64((task.scheme_idx + 1) * 1000003 +
                                        task.q_idx));
      const auto sim = montecarlo::run(config, 1);
      row.sser_empirical = sim.overall_sser;
      row.ci3sigma = sim.ci_half_width;
    }
    rows[out_idx] = row;
  };

  unsigned threads = spec.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, tasks.size() ? tasks.size() : 1));

  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) compute(tasks[i], i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          compute(tasks[i], i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

namespace {

void append_field(std::string& line, const std::optional<double>& v) {
  line.push_back(',');
  if (v) line += format_g17(*v);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    std::string line = modulation_token(row.modulation);
    line.push_back(',');
    line += format_g17(row.p_linear);
    line.push_back(',');
    line += format_g17(row.q_db);
    line.push_back(',');
    line += scheme_token(row.scheme);
    line.push_back(',');
    line += format_g17(row.sser_analytic);
    append_field(line, row.sser_empirical);
    append_field(line, row.ci3sigma);
    append_field(line, row.a);
    append_field(line, row.b_mean);
    append_field(line, row.b_lo);
    append_field(line, row.b_hi);
    append_field(line, row.gamma);
    append_field(line, row.cr_mean);
    append_field(line, row.ci);
    append_field(line, row.tau1);
    append_field(line, row.tau2);
    out << line << '\n';
  }
}

}  // namespace spoofalloc::sweep
