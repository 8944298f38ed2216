#pragma once

#include <functional>

namespace spoofalloc::curves {

// Error probabilities for one spoofed symbol as a function of the spoofing
// power aimed at it, with the legitimate transmitter at power p. All formulas
// are evaluated through erfc tails so values far below 1e-16 stay nonzero.
//
// Derivatives at power 0 diverge; deriv1 returns an explicit signed infinity
// there (the envelope construction relies on that qualitatively).

// Target equals the sent BPSK symbol; spoofing power a reinforces it.
double bpsk_aligned_sser(double a, double p);
double bpsk_aligned_deriv1(double a, double p);
double bpsk_aligned_deriv2(double a, double p);

// Target is the antipodal BPSK symbol; power b pushes against the sent one.
double bpsk_opposed_sser(double b, double p);
double bpsk_opposed_deriv1(double b, double p);
double bpsk_opposed_deriv2(double b, double p);

// QPSK, target equals the sent symbol (power split equally per component).
double qpsk_aligned_sser(double a, double p);
double qpsk_aligned_deriv1(double a, double p);
double qpsk_aligned_deriv2(double a, double p);

// QPSK, target antipodal to the sent symbol.
double qpsk_opposed_sser(double b, double p);
double qpsk_opposed_deriv1(double b, double p);
double qpsk_opposed_deriv2(double b, double p);

// QPSK, target a neighboring point: per-component success factors. The
// "real" factor covers the component where target and sent symbol differ,
// the "imag" factor the component they share. Both are increasing in their
// power argument; the error probability is 1 - real_success * imag_success.
double qpsk_neighbor_real_success(double c, double p);
double qpsk_neighbor_real_deriv1(double c, double p);
double qpsk_neighbor_real_deriv2(double c, double p);
double qpsk_neighbor_imag_success(double c, double p);
double qpsk_neighbor_imag_deriv1(double c, double p);
double qpsk_neighbor_imag_deriv2(double c, double p);
double qpsk_neighbor_sser(double c_real, double c_imag, double p);

// One curve with its first two derivatives, power bound to a shared p.
struct SserCurve {
  std::function<double(double)> eval;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;
};

SserCurve bpsk_aligned(double p);
SserCurve bpsk_opposed(double p);
SserCurve qpsk_aligned(double p);
SserCurve qpsk_opposed(double p);
SserCurve qpsk_neighbor_real(double p);
SserCurve qpsk_neighbor_imag(double p);

// Pointwise negation; turns a concave-convex-concave curve into a
// convex-concave-convex one so the same envelope machinery applies.
SserCurve negated(const SserCurve& curve);

}  // namespace spoofalloc::curves
