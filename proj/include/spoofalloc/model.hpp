#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spoofalloc {

enum class Modulation { Bpsk, Qpsk };

// Additive noise is circularly symmetric complex Gaussian with total unit
// variance: each component has variance 1/2. Model constant, not a knob.
inline constexpr double kNoiseComponentVariance = 0.5;

struct LinkParams {
  double alice_power = 0.0;   // linear watts, > 0
  double spoof_budget = 0.0;  // linear watts, >= 0 (average power constraint)
  Modulation modulation = Modulation::Bpsk;
};

void validate(const LinkParams& params);

struct Constellation {
  std::vector<std::complex<double>> points;  // unit modulus
  static Constellation make(Modulation m);
};

// Classification of a (sent symbol, spoof target) pair:
//   Aligned  - target equals the sent symbol
//   Opposed  - target is the antipodal point
//   Neighbor - QPSK only: target differs in exactly one component
enum class SymbolType { Aligned, Opposed, Neighbor };

// Aligned/Opposed occur w.p. 1/2 each (BPSK); 1/4, 1/4, 1/2 with Neighbor (QPSK).
double type_prior(Modulation m, SymbolType t);
std::vector<SymbolType> symbol_types(Modulation m);

SymbolType classify_pair(std::complex<double> x, std::complex<double> xbar,
                         const Constellation& constellation);

// Minimum-distance detection: argmin over s in the constellation of
// |y - sqrt(alice_power) * s|^2. Ties resolve to the lowest index.
std::size_t ml_detect(std::complex<double> y, const Constellation& constellation,
                      double alice_power);

}  // namespace spoofalloc
