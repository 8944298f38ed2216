#include "spoofalloc/envelope.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace spoofalloc::envelope {

namespace {

void check_p(double p) {
  if (!(p > 0.0)) throw std::domain_error("alice power must be > 0");
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ConvexityRegimes bpsk_opposed_regimes(double p) {
  check_p(p);
  ConvexityRegimes r;
  r.alice_power = p;
  if (p <= 2.0) return r;
  const double root = std::sqrt(p - 2.0);
  const double sp = std::sqrt(p);
  r.kind = RegimeKind::ConvexConcaveConvex;
  r.zeta1 = std::pow((sp - root) / 2.0, 2);
  r.zeta2 = std::pow((sp + root) / 2.0, 2);
  return r;
}

ConvexityRegimes qpsk_opposed_regimes(double p) {
  check_p(p);
  ConvexityRegimes r;
  r.alice_power = p;
  r.xi = 1.146;
  // Convexity is guaranteed beyond chi2, so the scan stops there.
  const double s = std::sqrt(p) + std::sqrt(M_PI / 2.0);
  r.chi2 = std::max(p, std::pow((s + std::sqrt(s * s - 2.0)) / 2.0, 2));
  if (p <= r.xi) return r;

  const int n = 10000;
  const double lg0 = -8.0;
  const double lg1 = std::log10(r.chi2);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = std::pow(10.0, lg0 + (lg1 - lg0) * i / (n - 1));
  }
  std::vector<int> sg(n);
  for (int i = 0; i < n; ++i) sg[i] = sign_of(curves::qpsk_opposed_deriv2(xs[i], p));

  std::vector<double> roots;
  for (int i = 0; i + 1 < n; ++i) {
    if (sg[i] * sg[i + 1] < 0) {
      double lo = xs[i], hi = xs[i + 1];
      const int s_lo = sg[i];
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (sign_of(curves::qpsk_opposed_deriv2(mid, p)) == s_lo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
  }
  if (roots.empty()) return r;  // convex at scan resolution
  if (roots.size() != 2) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "curvature scan found %zu sign changes (expected 2) at p=%.17g",
                  roots.size(), p);
    throw std::runtime_error(msg);
  }
  r.kind = RegimeKind::ConvexConcaveConvex;
  r.zeta1 = roots[0];
  r.zeta2 = roots[1];
  r.chi1 = roots[0];
  return r;
}

ConvexityRegimes qpsk_neighbor_real_regimes(double p) {
  check_p(p);
  ConvexityRegimes r;
  r.alice_power = p;
  if (p <= 4.0) return r;  // the negated success factor is globally convex
  const double half = p / 2.0;
  const double root = std::sqrt(half - 2.0);
  const double sh = std::sqrt(half);
  r.kind = RegimeKind::ConvexConcaveConvex;
  r.zeta1 = std::pow((sh - root) / 2.0, 2);
  r.zeta2 = std::pow((sh + root) / 2.0, 2);
  return r;
}

double ConvexEnvelope::eval(double b) const {
  if (b > tau1 && b < tau2) return slope * b + intercept;
  return base.eval(b);
}

double ConvexEnvelope::deriv1(double b) const {
  if (b > tau1 && b < tau2) return slope;
  return base.deriv1(b);
}

double envelope_eval(const ConvexEnvelope& env, double b) { return env.eval(b); }

ConvexEnvelope tangent_points(const curves::SserCurve& curve,
                              const ConvexityRegimes& regimes) {
  if (regimes.kind != RegimeKind::ConvexConcaveConvex) {
    throw std::invalid_argument("curve has no concave segment to bridge");
  }
  const auto& f = curve.eval;
  const auto& fp = curve.deriv1;
  const auto theta = [&](double a, double b) { return (f(b) - f(a)) / (b - a); };

  constexpr double kEps = 1e-12;
  constexpr double kTol = 1e-9;
  double t1 = regimes.zeta1;
  double t2 = regimes.zeta2;
  double prev_theta = 0.0;

  for (int it = 0; it < 200; ++it) {
    // Lower tangency: deriv1 runs to -inf at 0, so the bracket (eps, t1]
    // always holds the crossing when the endpoint slope exceeds the chord.
    if (fp(t1) - theta(t1, t2) > 0.0) {
      double lo = kEps, hi = t1;
      for (int i = 0; i < 128; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (fp(mid) - theta(mid, t2) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      t1 = 0.5 * (lo + hi);
    }
    // Upper tangency: expand until the curve slope beats the chord slope.
    double bmax = std::max(4.0 * regimes.alice_power, 4.0 * regimes.zeta2);
    while (fp(bmax) <= theta(t1, bmax)) {
      bmax *= 2.0;
      if (!(bmax < 1e300)) {
        throw std::runtime_error("no upper tangent bracket found");
      }
    }
    if (theta(t1, t2) - fp(t2) > 0.0) {
      double lo = t2, hi = bmax;
      for (int i = 0; i < 128; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (theta(t1, mid) - fp(mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      t2 = 0.5 * (lo + hi);
    }
    const double th = theta(t1, t2);
    assert(it == 0 || th <= prev_theta + 1e-12);
    prev_theta = th;
    if (std::abs(fp(t1) - th) < kTol && std::abs(fp(t2) - th) < kTol) {
      ConvexEnvelope env;
      env.tau1 = t1;
      env.tau2 = t2;
      env.slope = th;
      env.intercept = f(t2) - th * t2;
      env.base = curve;
      return env;
    }
  }
  char msg[200];
  std::snprintf(msg, sizeof msg,
                "tangent search did not converge: tau1=%.17g tau2=%.17g theta=%.17g",
                t1, t2, prev_theta);
  throw std::runtime_error(msg);
}

}  // namespace spoofalloc::envelope
