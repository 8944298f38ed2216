#pragma once

#include "spoofalloc/curves.hpp"

namespace spoofalloc::envelope {

enum class RegimeKind { GloballyConvex, ConvexConcaveConvex };

// Second-derivative sign pattern of an error curve over [0, inf).
// For ConvexConcaveConvex the curve is concave exactly on (zeta1, zeta2).
struct ConvexityRegimes {
  RegimeKind kind = RegimeKind::GloballyConvex;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double alice_power = 0.0;
  // Diagnostics (populated by the numeric scan only; never load-bearing):
  double chi1 = 0.0;  // first scanned abscissa where the sign flips
  double chi2 = 0.0;  // scan upper bound; the curve is convex beyond it
  double xi = 0.0;    // power threshold below which the scan is skipped
};

// Closed form: concave on (zeta1, zeta2) iff p > 2, with zeta1*zeta2 = 1/4.
ConvexityRegimes bpsk_opposed_regimes(double p);

// No closed form: dense log-spaced scan of the analytic second derivative on
// (1e-8, chi2], refined by bisection. Convex everywhere for p <= 1.146.
ConvexityRegimes qpsk_opposed_regimes(double p);

// Regimes of the *negated* neighbor real-component success factor, which is
// convex-concave-convex iff p > 4; closed form with zeta1*zeta2 = 1/4.
ConvexityRegimes qpsk_neighbor_real_regimes(double p);

// Convex lower envelope: the curve with its non-convex middle replaced by the
// common tangent chord between tau1 and tau2.
struct ConvexEnvelope {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  curves::SserCurve base;

  double eval(double b) const;
  double deriv1(double b) const;
};

// Common tangent of a convex-concave-convex curve via alternating bisection:
// tau1 moves down from zeta1, tau2 up from zeta2, until both endpoint slopes
// match the chord slope to 1e-9. Throws after 200 outer iterations.
ConvexEnvelope tangent_points(const curves::SserCurve& curve,
                              const ConvexityRegimes& regimes);

double envelope_eval(const ConvexEnvelope& env, double b);

}  // namespace spoofalloc::envelope
