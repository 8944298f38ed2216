#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spoofalloc/allocator.hpp"
#include "spoofalloc/model.hpp"

namespace spoofalloc::sweep {

struct SweepSpec {
  Modulation modulation = Modulation::Bpsk;
  double alice_power = 0.0;  // linear
  double q_start_db = 0.0;
  double q_stop_db = 0.0;
  double q_step_db = 0.0;
  std::vector<allocator::Scheme> schemes;  // emitted in canonical order
  std::uint64_t trials = 0;                // 0 = analytic only
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SweepRow {
  Modulation modulation;
  double p_linear = 0.0;
  double q_db = 0.0;
  allocator::Scheme scheme;
  double sser_analytic = 0.0;
  std::optional<double> sser_empirical, ci3sigma;
  std::optional<double> a, b_mean, b_lo, b_hi, gamma;
  std::optional<double> cr_mean, ci;
  std::optional<double> tau1, tau2;
};

std::vector<double> q_grid_db(double start_db, double stop_db, double step_db);

// Rows grouped by scheme (optimal, block, heuristic), q ascending within.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

SweepRow row_from_plan(const allocator::AllocationPlan& plan, double q_db);

// 17-significant-digit serialization; round-trips to the identical double.
std::string format_g17(double v);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string scheme_token(allocator::Scheme s);
std::string modulation_token(Modulation m);

}  // namespace spoofalloc::sweep
