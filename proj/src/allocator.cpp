#include "spoofalloc/allocator.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spoofalloc/curves.hpp"
#include "spoofalloc/envelope.hpp"

namespace spoofalloc::allocator {

namespace c = spoofalloc::curves;
namespace e = spoofalloc::envelope;

PowerPolicy PowerPolicy::constant(double value) {
  return {Kind::Constant, value, value, 1.0};
}

PowerPolicy PowerPolicy::time_share(double lo, double hi, double frac_lo) {
  return {Kind::TwoPointTimeShare, lo, hi, frac_lo};
}

double PowerPolicy::mean() const {
  if (kind == Kind::Constant) return p_lo;
  return frac_lo * p_lo + (1.0 - frac_lo) * p_hi;
}

double TypeAllocation::mean_power() const {
  return power.mean() + (imag_power ? imag_power->mean() : 0.0);
}

namespace {

void check_pq(double p, double q) {
  if (!(p > 0.0)) throw std::domain_error("alice power must be > 0");
  if (!(q >= 0.0)) throw std::domain_error("spoof budget must be >= 0");
}

double plan_power(const AllocationPlan& plan) {
  double total = 0.0;
  for (const auto& [type, alloc] : plan.per_type) {
    total += type_prior(plan.modulation, type) * alloc.mean_power();
  }
  return total;
}

AllocationPlan zero_plan(Scheme scheme, Modulation m, double p) {
  AllocationPlan plan;
  plan.scheme = scheme;
  plan.modulation = m;
  plan.alice_power = p;
  plan.spoof_budget = 0.0;
  for (SymbolType t : symbol_types(m)) {
    TypeAllocation alloc{PowerPolicy::constant(0.0), std::nullopt};
    if (m == Modulation::Qpsk && t == SymbolType::Neighbor) {
      alloc.imag_power = PowerPolicy::constant(0.0);
    }
    plan.per_type[t] = alloc;
  }
  plan.avg_sser = (m == Modulation::Bpsk) ? 0.5 : 0.75;
  plan.avg_power = 0.0;
  plan.envelope_objective = plan.avg_sser;
  return plan;
}

}  // namespace

AllocationPlan solve_bpsk(double p, double q) {
  check_pq(p, q);
  if (q == 0.0) return zero_plan(Scheme::OptimalSymbolLevel, Modulation::Bpsk, p);

  std::optional<e::ConvexEnvelope> env;
  if (p > 2.0) {
    env = e::tangent_points(c::bpsk_opposed(p), e::bpsk_opposed_regimes(p));
  }
  const double tq = 2.0 * q;
  const auto opposed_slope = [&](double b) {
    return env ? env->deriv1(b) : c::bpsk_opposed_deriv1(b, p);
  };
  // Marginal balance f1'(a) = fbar'(2q - a): both sides diverge at their
  // domain edges, so the crossing is interior and unique.
  const auto h = [&](double a) {
    return c::bpsk_aligned_deriv1(a, p) - opposed_slope(tq - a);
  };
  double lo = 0.0, hi = tq;
  for (int i = 0; i < 200 && (hi - lo) > 1e-10 * (1.0 + tq); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double a_star = 0.5 * (lo + hi);
  const double b_star = tq - a_star;

  AllocationPlan plan;
  plan.scheme = Scheme::OptimalSymbolLevel;
  plan.modulation = Modulation::Bpsk;
  plan.alice_power = p;
  plan.spoof_budget = q;
  plan.per_type[SymbolType::Aligned] = {PowerPolicy::constant(a_star), std::nullopt};

  double expected_opposed = 0.0;
  if (env && env->tau1 < b_star && b_star < env->tau2) {
    const double gamma = (env->tau2 - b_star) / (env->tau2 - env->tau1);
    plan.per_type[SymbolType::Opposed] = {
        PowerPolicy::time_share(env->tau1, env->tau2, gamma), std::nullopt};
    expected_opposed = gamma * c::bpsk_opposed_sser(env->tau1, p) +
                       (1.0 - gamma) * c::bpsk_opposed_sser(env->tau2, p);
  } else {
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::constant(b_star),
                                          std::nullopt};
    expected_opposed = c::bpsk_opposed_sser(b_star, p);
  }
  plan.avg_sser = 0.5 * c::bpsk_aligned_sser(a_star, p) + 0.5 * expected_opposed;
  plan.envelope_objective =
      0.5 * c::bpsk_aligned_sser(a_star, p) +
      0.5 * (env ? env->eval(b_star) : c::bpsk_opposed_sser(b_star, p));
  if (env) {
    plan.tau1 = env->tau1;
    plan.tau2 = env->tau2;
  }
  plan.avg_power = plan_power(plan);
  return plan;
}

namespace {

// Envelope-convexified curve bundle for one alice power.
struct QpskContext {
  double p;
  std::optional<e::ConvexEnvelope> opposed_env;        // over the sser curve
  std::optional<e::ConvexEnvelope> neighbor_real_env;  // over the negated factor

  explicit QpskContext(double p_in) : p(p_in) {
    const auto opp = e::qpsk_opposed_regimes(p);
    if (opp.kind == e::RegimeKind::ConvexConcaveConvex) {
      opposed_env = e::tangent_points(c::qpsk_opposed(p), opp);
    }
    const auto nr = e::qpsk_neighbor_real_regimes(p);
    if (nr.kind == e::RegimeKind::ConvexConcaveConvex) {
      neighbor_real_env =
          e::tangent_points(c::negated(c::qpsk_neighbor_real(p)), nr);
    }
  }

  double opposed_bar(double b) const {
    return opposed_env ? opposed_env->eval(b) : c::qpsk_opposed_sser(b, p);
  }
  double opposed_bar_deriv(double b) const {
    return opposed_env ? opposed_env->deriv1(b) : c::qpsk_opposed_deriv1(b, p);
  }
  // Concave upper envelope of the increasing success factor.
  double neighbor_real_bar(double cr) const {
    return neighbor_real_env ? -neighbor_real_env->eval(cr)
                             : c::qpsk_neighbor_real_success(cr, p);
  }
  double neighbor_real_bar_deriv(double cr) const {
    return neighbor_real_env ? -neighbor_real_env->deriv1(cr)
                             : c::qpsk_neighbor_real_deriv1(cr, p);
  }
};

// Largest power whose marginal value still reaches lam; marg is decreasing
// with marg(0+) = +inf.
double invert_decreasing(const std::function<double(double)>& marg, double lam) {
  double hi = 1.0;
  while (marg(hi) > lam) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  double lo = 0.0;
  for (int i = 0; i < 90; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (marg(mid) > lam) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct InnerSolution {
  double value = 0.0;
  double a = 0.0, b = 0.0, c_imag = 0.0;
};

// min  1/4 g1(a) + 1/4 g2bar(b) + 1/2 (1 - g3rbar(cr) * g3i(ci))
// s.t. 1/4 a + 1/4 b + 1/2 ci <= budget
// via bisection on the budget multiplier; every marginal diverges at zero
// power, so all three powers stay positive and the budget binds.
InnerSolution qpsk_inner(const QpskContext& ctx, double cr, double budget) {
  const double p = ctx.p;
  const double k_real = ctx.neighbor_real_bar(cr);
  if (budget <= 0.0) {
    InnerSolution s;
    s.value = 0.25 * c::qpsk_aligned_sser(0.0, p) + 0.25 * ctx.opposed_bar(0.0) +
              0.5 * (1.0 - k_real * c::qpsk_neighbor_imag_success(0.0, p));
    return s;
  }
  const std::function<double(double)> marg_a = [&](double a) {
    return -c::qpsk_aligned_deriv1(a, p);
  };
  const std::function<double(double)> marg_b = [&](double b) {
    return -ctx.opposed_bar_deriv(b);
  };
  const std::function<double(double)> marg_c = [&](double ci) {
    return k_real * c::qpsk_neighbor_imag_deriv1(ci, p);
  };
  const auto spend = [&](double lam, InnerSolution& s) {
    s.a = invert_decreasing(marg_a, lam);
    s.b = invert_decreasing(marg_b, lam);
    s.c_imag = invert_decreasing(marg_c, lam);
    return 0.25 * s.a + 0.25 * s.b + 0.5 * s.c_imag;
  };

  InnerSolution s;
  double lo = 1e-18, hi = 1.0;
  while (spend(hi, s) > budget) hi *= 2.0;
  while (spend(lo, s) < budget) {
    lo /= 2.0;
    if (lo < 1e-300) break;
  }
  for (int i = 0; i < 100; ++i) {
    const double lam = 0.5 * (lo + hi);
    if (spend(lam, s) > budget) {
      lo = lam;
    } else {
      hi = lam;
    }
  }
  spend(0.5 * (lo + hi), s);
  // On a chord segment the multiplier pins only the segment, not the point;
  // closing the budget through b recovers the exact optimum.
  const double b_residual = 4.0 * (budget - 0.25 * s.a - 0.5 * s.c_imag);
  if (b_residual > 0.0) s.b = b_residual;
  s.value = 0.25 * c::qpsk_aligned_sser(s.a, p) + 0.25 * ctx.opposed_bar(s.b) +
            0.5 * (1.0 - k_real * c::qpsk_neighbor_imag_success(s.c_imag, p));
  return s;
}

}  // namespace

AllocationPlan solve_qpsk(double p, double q) {
  check_pq(p, q);
  if (q == 0.0) return zero_plan(Scheme::OptimalSymbolLevel, Modulation::Qpsk, p);

  const QpskContext ctx(p);
  const double cr_max = 2.0 * q;
  const auto objective = [&](double cr) {
    return qpsk_inner(ctx, cr, q - 0.5 * cr).value;
  };

  // Coarse scan guards against the outer objective's multimodality.
  const int n_grid = 512;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> crs(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    crs[i] = cr_max * i / (n_grid - 1);
    const double v = objective(crs[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = crs[best > 0 ? best - 1 : 0];
  double b = crs[best + 1 < n_grid ? best + 1 : n_grid - 1];
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - golden * (b - a);
  double c2 = a + golden * (b - a);
  double f1v = objective(c1);
  double f2v = objective(c2);
  while (b - a > 1e-8 * (1.0 + cr_max)) {
    if (f1v < f2v) {
      b = c2;
      c2 = c1;
      f2v = f1v;
      c1 = b - golden * (b - a);
      f1v = objective(c1);
    } else {
      a = c1;
      c1 = c2;
      f1v = f2v;
      c2 = a + golden * (b - a);
      f2v = objective(c2);
    }
  }
  const double cr_star = 0.5 * (a + b);
  const InnerSolution inner = qpsk_inner(ctx, cr_star, q - 0.5 * cr_star);

  AllocationPlan plan;
  plan.scheme = Scheme::OptimalSymbolLevel;
  plan.modulation = Modulation::Qpsk;
  plan.alice_power = p;
  plan.spoof_budget = q;
  plan.per_type[SymbolType::Aligned] = {PowerPolicy::constant(inner.a),
                                        std::nullopt};

  double expected_opposed = 0.0;
  if (ctx.opposed_env && ctx.opposed_env->tau1 < inner.b &&
      inner.b < ctx.opposed_env->tau2) {
    const double t1 = ctx.opposed_env->tau1, t2 = ctx.opposed_env->tau2;
    const double gamma = (t2 - inner.b) / (t2 - t1);
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::time_share(t1, t2, gamma),
                                          std::nullopt};
    expected_opposed = gamma * c::qpsk_opposed_sser(t1, p) +
                       (1.0 - gamma) * c::qpsk_opposed_sser(t2, p);
  } else {
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::constant(inner.b),
                                          std::nullopt};
    expected_opposed = c::qpsk_opposed_sser(inner.b, p);
  }

  double expected_real_success = 0.0;
  TypeAllocation neighbor;
  if (ctx.neighbor_real_env && ctx.neighbor_real_env->tau1 < cr_star &&
      cr_star < ctx.neighbor_real_env->tau2) {
    const double t1 = ctx.neighbor_real_env->tau1;
    const double t2 = ctx.neighbor_real_env->tau2;
    const double gamma = (t2 - cr_star) / (t2 - t1);
    neighbor.power = PowerPolicy::time_share(t1, t2, gamma);
    expected_real_success = gamma * c::qpsk_neighbor_real_success(t1, p) +
                            (1.0 - gamma) * c::qpsk_neighbor_real_success(t2, p);
  } else {
    neighbor.power = PowerPolicy::constant(cr_star);
    expected_real_success = c::qpsk_neighbor_real_success(cr_star, p);
  }
  neighbor.imag_power = PowerPolicy::constant(inner.c_imag);
  plan.per_type[SymbolType::Neighbor] = neighbor;

  plan.avg_sser =
      0.25 * c::qpsk_aligned_sser(inner.a, p) + 0.25 * expected_opposed +
      0.5 * (1.0 - expected_real_success *
                       c::qpsk_neighbor_imag_success(inner.c_imag, p));
  plan.envelope_objective = inner.value;
  if (ctx.opposed_env) {
    plan.tau1 = ctx.opposed_env->tau1;
    plan.tau2 = ctx.opposed_env->tau2;
  }
  plan.avg_power = plan_power(plan);
  return plan;
}

AllocationPlan block_level(double p, double q, Modulation m) {
  check_pq(p, q);
  AllocationPlan plan;
  plan.scheme = Scheme::BlockLevel;
  plan.modulation = m;
  plan.alice_power = p;
  plan.spoof_budget = q;
  if (m == Modulation::Bpsk) {
    plan.per_type[SymbolType::Aligned] = {PowerPolicy::constant(q), std::nullopt};
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::constant(q), std::nullopt};
    plan.avg_sser =
        0.5 * c::bpsk_aligned_sser(q, p) + 0.5 * c::bpsk_opposed_sser(q, p);
  } else {
    plan.per_type[SymbolType::Aligned] = {PowerPolicy::constant(q), std::nullopt};
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::constant(q), std::nullopt};
    plan.per_type[SymbolType::Neighbor] = {PowerPolicy::constant(q / 2.0),
                                           PowerPolicy::constant(q / 2.0)};
    plan.avg_sser = 0.25 * c::qpsk_aligned_sser(q, p) +
                    0.25 * c::qpsk_opposed_sser(q, p) +
                    0.5 * c::qpsk_neighbor_sser(q / 2.0, q / 2.0, p);
  }
  plan.avg_power = plan_power(plan);
  return plan;
}

AllocationPlan heuristic_symbol_level(double p, double q, Modulation m) {
  check_pq(p, q);
  AllocationPlan plan;
  plan.scheme = Scheme::HeuristicSymbolLevel;
  plan.modulation = m;
  plan.alice_power = p;
  plan.spoof_budget = q;
  if (m == Modulation::Bpsk) {
    plan.per_type[SymbolType::Aligned] = {PowerPolicy::constant(0.0), std::nullopt};
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::constant(2.0 * q),
                                          std::nullopt};
    plan.avg_sser = 0.5 * c::bpsk_aligned_sser(0.0, p) +
                    0.5 * c::bpsk_opposed_sser(2.0 * q, p);
  } else {
    const double share = 4.0 * q / 3.0;
    plan.per_type[SymbolType::Aligned] = {PowerPolicy::constant(0.0), std::nullopt};
    plan.per_type[SymbolType::Opposed] = {PowerPolicy::constant(share),
                                          std::nullopt};
    plan.per_type[SymbolType::Neighbor] = {PowerPolicy::constant(share),
                                           PowerPolicy::constant(0.0)};
    plan.avg_sser = 0.25 * c::qpsk_aligned_sser(0.0, p) +
                    0.25 * c::qpsk_opposed_sser(share, p) +
                    0.5 * c::qpsk_neighbor_sser(share, 0.0, p);
  }
  plan.avg_power = plan_power(plan);
  return plan;
}

double find_timeshare_boundary_db(double p, double start_db, double stop_db,
                                  double step_db) {
  if (!(step_db > 0.0) || !(stop_db >= start_db)) {
    throw std::invalid_argument("bad sweep range");
  }
  const int n = static_cast<int>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
  bool seen_active = false;
  double boundary = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < n; ++i) {
    const double q_db = start_db + i * step_db;
    const auto plan = solve_bpsk(p, std::pow(10.0, q_db / 10.0));
    const bool active = plan.per_type.at(SymbolType::Opposed).power.kind ==
                        PowerPolicy::Kind::TwoPointTimeShare;
    if (active) {
      if (!std::isnan(boundary)) return std::numeric_limits<double>::quiet_NaN();
      seen_active = true;
    } else if (seen_active && std::isnan(boundary)) {
      boundary = q_db;
    } else if (!seen_active) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  return boundary;
}

}  // namespace spoofalloc::allocator
