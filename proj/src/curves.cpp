#include "spoofalloc/curves.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spoofalloc::curves {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrtPi = std::sqrt(M_PI);
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);

void check_domain(double power, double p) {
  if (!(power >= 0.0)) throw std::domain_error("spoofing power must be >= 0");
  if (!(p > 0.0)) throw std::domain_error("alice power must be > 0");
}

// 0.5*erfc keeps tail probabilities representable far below 1e-16, where the
// equivalent 1/2 - 1/2*erf form rounds to zero.
double half_erfc(double x) { return 0.5 * std::erfc(x); }

}  // namespace

double bpsk_aligned_sser(double a, double p) {
  check_domain(a, p);
  return half_erfc(std::sqrt(a) + std::sqrt(p));
}

double bpsk_aligned_deriv1(double a, double p) {
  check_domain(a, p);
  if (a == 0.0) return -kInf;
  const double s = std::sqrt(a) + std::sqrt(p);
  return -std::exp(-s * s) / (2.0 * std::sqrt(M_PI * a));
}

double bpsk_aligned_deriv2(double a, double p) {
  check_domain(a, p);
  if (a == 0.0) return kInf;
  const double s = std::sqrt(a) + std::sqrt(p);
  return std::pow(a, -1.5) / (4.0 * kSqrtPi) * std::exp(-s * s) *
         (2.0 * a + 2.0 * std::sqrt(p * a) + 1.0);
}

double bpsk_opposed_sser(double b, double p) {
  check_domain(b, p);
  return half_erfc(std::sqrt(b) - std::sqrt(p));
}

double bpsk_opposed_deriv1(double b, double p) {
  check_domain(b, p);
  if (b == 0.0) return -kInf;
  const double s = std::sqrt(b) - std::sqrt(p);
  return -std::exp(-s * s) / (2.0 * std::sqrt(M_PI * b));
}

double bpsk_opposed_deriv2(double b, double p) {
  check_domain(b, p);
  if (b == 0.0) return kInf;
  const double s = std::sqrt(b) - std::sqrt(p);
  return std::pow(b, -1.5) / (4.0 * kSqrtPi) * std::exp(-s * s) *
         (2.0 * b - 2.0 * std::sqrt(p * b) + 1.0);
}

namespace {

// Shared shape for the two QPSK per-symbol curves: 1 - (1-u)^2 = u(2-u)
// with u the tail beyond s; aligned uses s = sqrt(a/2) + sqrt(p/2),
// opposed s = sqrt(b/2) - sqrt(p/2).
double qpsk_pair_sser(double s) {
  const double u = half_erfc(s);
  return u * (2.0 - u);
}

double qpsk_pair_deriv1(double power, double s) {
  if (power == 0.0) return -kInf;
  const double head = half_erfc(-s);  // 1/2 + 1/2*erf(s)
  return -head * std::exp(-s * s) / std::sqrt(2.0 * M_PI * power);
}

// inner = sqrt(power) +- sqrt(p) + 1/sqrt(power), sign matching s.
double qpsk_pair_deriv2(double power, double s, double inner) {
  if (power == 0.0) return kInf;
  const double e = std::exp(-s * s);
  const double head2 = std::erfc(-s);  // 1 + erf(s)
  return (1.0 / power) * e *
         (-e / (4.0 * M_PI) + head2 / (4.0 * kSqrt2Pi) * inner);
}

}  // namespace

double qpsk_aligned_sser(double a, double p) {
  check_domain(a, p);
  return qpsk_pair_sser(std::sqrt(a / 2.0) + std::sqrt(p / 2.0));
}

double qpsk_aligned_deriv1(double a, double p) {
  check_domain(a, p);
  return qpsk_pair_deriv1(a, std::sqrt(a / 2.0) + std::sqrt(p / 2.0));
}

double qpsk_aligned_deriv2(double a, double p) {
  check_domain(a, p);
  if (a == 0.0) return kInf;
  const double s = std::sqrt(a / 2.0) + std::sqrt(p / 2.0);
  return qpsk_pair_deriv2(a, s, std::sqrt(a) + std::sqrt(p) + 1.0 / std::sqrt(a));
}

double qpsk_opposed_sser(double b, double p) {
  check_domain(b, p);
  return qpsk_pair_sser(std::sqrt(b / 2.0) - std::sqrt(p / 2.0));
}

double qpsk_opposed_deriv1(double b, double p) {
  check_domain(b, p);
  return qpsk_pair_deriv1(b, std::sqrt(b / 2.0) - std::sqrt(p / 2.0));
}

double qpsk_opposed_deriv2(double b, double p) {
  check_domain(b, p);
  if (b == 0.0) return kInf;
  const double s = std::sqrt(b / 2.0) - std::sqrt(p / 2.0);
  return qpsk_pair_deriv2(b, s, std::sqrt(b) - std::sqrt(p) + 1.0 / std::sqrt(b));
}

double qpsk_neighbor_real_success(double c, double p) {
  check_domain(c, p);
  return half_erfc(std::sqrt(p / 2.0) - std::sqrt(c));
}

double qpsk_neighbor_real_deriv1(double c, double p) {
  check_domain(c, p);
  if (c == 0.0) return kInf;
  const double t = std::sqrt(c) - std::sqrt(p / 2.0);
  return std::exp(-t * t) / (2.0 * std::sqrt(M_PI * c));
}

double qpsk_neighbor_real_deriv2(double c, double p) {
  check_domain(c, p);
  if (c == 0.0) return -kInf;
  const double t = std::sqrt(c) - std::sqrt(p / 2.0);
  return -std::pow(c, -1.5) / (4.0 * kSqrtPi) * std::exp(-t * t) *
         (2.0 * c - std::sqrt(2.0 * p * c) + 1.0);
}

double qpsk_neighbor_imag_success(double c, double p) {
  check_domain(c, p);
  return half_erfc(-std::sqrt(c) - std::sqrt(p / 2.0));
}

double qpsk_neighbor_imag_deriv1(double c, double p) {
  check_domain(c, p);
  if (c == 0.0) return kInf;
  const double t = std::sqrt(c) + std::sqrt(p / 2.0);
  return std::exp(-t * t) / (2.0 * std::sqrt(M_PI * c));
}

double qpsk_neighbor_imag_deriv2(double c, double p) {
  check_domain(c, p);
  if (c == 0.0) return -kInf;
  const double t = std::sqrt(c) + std::sqrt(p / 2.0);
  return -std::pow(c, -1.5) / (4.0 * kSqrtPi) * std::exp(-t * t) *
         (2.0 * c + std::sqrt(2.0 * p * c) + 1.0);
}

double qpsk_neighbor_sser(double c_real, double c_imag, double p) {
  check_domain(c_real, p);
  check_domain(c_imag, p);
  // 1 - RI computed as r + i - ri with r, i the per-component failure tails,
  // so deep-tail values survive in double precision.
  const double r = half_erfc(std::sqrt(c_real) - std::sqrt(p / 2.0));
  const double i = half_erfc(std::sqrt(c_imag) + std::sqrt(p / 2.0));
  return r + i - r * i;
}

namespace {

SserCurve bind(double p, double (*v)(double, double),
               double (*d1)(double, double), double (*d2)(double, double)) {
  SserCurve c;
  c.eval = [p, v](double x) { return v(x, p); };
  c.deriv1 = [p, d1](double x) { return d1(x, p); };
  c.deriv2 = [p, d2](double x) { return d2(x, p); };
  return c;
}

}  // namespace

SserCurve bpsk_aligned(double p) {
  return bind(p, bpsk_aligned_sser, bpsk_aligned_deriv1, bpsk_aligned_deriv2);
}
SserCurve bpsk_opposed(double p) {
  return bind(p, bpsk_opposed_sser, bpsk_opposed_deriv1, bpsk_opposed_deriv2);
}
SserCurve qpsk_aligned(double p) {
  return bind(p, qpsk_aligned_sser, qpsk_aligned_deriv1, qpsk_aligned_deriv2);
}
SserCurve qpsk_opposed(double p) {
  return bind(p, qpsk_opposed_sser, qpsk_opposed_deriv1, qpsk_opposed_deriv2);
}
SserCurve qpsk_neighbor_real(double p) {
  return bind(p, qpsk_neighbor_real_success, qpsk_neighbor_real_deriv1,
              qpsk_neighbor_real_deriv2);
}
SserCurve qpsk_neighbor_imag(double p) {
  return bind(p, qpsk_neighbor_imag_success, qpsk_neighbor_imag_deriv1,
              qpsk_neighbor_imag_deriv2);
}

SserCurve negated(const SserCurve& curve) {
  SserCurve c;
  c.eval = [f = curve.eval](double x) { return -f(x); };
  c.deriv1 = [f = curve.deriv1](double x) { return -f(x); };
  c.deriv2 = [f = curve.deriv2](double x) { return -f(x); };
  return c;
}

}  // namespace spoofalloc::curves
