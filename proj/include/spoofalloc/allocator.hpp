#pragma once

#include <map>
#include <optional>

#include "spoofalloc/model.hpp"

namespace spoofalloc::allocator {

enum class Scheme { OptimalSymbolLevel, BlockLevel, HeuristicSymbolLevel };

struct PowerPolicy {
  enum class Kind { Constant, TwoPointTimeShare };
  Kind kind = Kind::Constant;
  double p_lo = 0.0;
  double p_hi = 0.0;
  double frac_lo = 1.0;  // probability of drawing p_lo

  static PowerPolicy constant(double value);
  static PowerPolicy time_share(double lo, double hi, double frac_lo);
  double mean() const;
};

// Powers assigned to one symbol type. Neighbor symbols carry a second policy
// for the component shared with the sent symbol; that one is always constant.
struct TypeAllocation {
  PowerPolicy power;
  std::optional<PowerPolicy> imag_power;
  double mean_power() const;
};

struct AllocationPlan {
  Scheme scheme = Scheme::OptimalSymbolLevel;
  Modulation modulation = Modulation::Bpsk;
  double alice_power = 0.0;
  double spoof_budget = 0.0;
  std::map<SymbolType, TypeAllocation> per_type;
  double avg_sser = 0.0;
  double avg_power = 0.0;
  // Tangent points of the opposed-curve envelope when one exists.
  std::optional<double> tau1, tau2;
  // Objective of the auxiliary (envelope-convexified) problem; must equal
  // avg_sser to 1e-9 for optimal plans.
  std::optional<double> envelope_objective;
};

// Equalizes marginal error reductions between the aligned power and the
// envelope of the opposed curve under a + b = 2q, then maps the opposed
// power to a two-point time share when it lands inside the chord.
AllocationPlan solve_bpsk(double p, double q);

// Outer scan + golden-section over the neighbor real-component power; inner
// dual bisection on the budget multiplier for the remaining three powers.
AllocationPlan solve_qpsk(double p, double q);

// Baseline: the spoof signal is the target point at full budget power.
AllocationPlan block_level(double p, double q, Modulation m);

// Baseline: skips aligned symbols, splits the budget equally over the rest.
AllocationPlan heuristic_symbol_level(double p, double q, Modulation m);

// Smallest swept q (dB) at which the optimal BPSK plan stops time-sharing.
// Requires the sweep to show one clean active -> inactive transition;
// returns NaN otherwise.
double find_timeshare_boundary_db(double p, double start_db, double stop_db,
                                  double step_db);

}  // namespace spoofalloc::allocator
