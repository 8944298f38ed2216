#include "spoofalloc/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spoofalloc {

void validate(const LinkParams& params) {
  if (!(params.alice_power > 0.0)) {
    throw std::domain_error("alice_power must be positive");
  }
  if (!(params.spoof_budget >= 0.0)) {
    throw std::domain_error("spoof_budget must be non-negative");
  }
}

Constellation Constellation::make(Modulation m) {
  Constellation c;
  if (m == Modulation::Bpsk) {
    c.points = {{1.0, 0.0}, {-1.0, 0.0}};
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    c.points = {{r, r}, {-r, r}, {-r, -r}, {r, -r}};
  }
  return c;
}

double type_prior(Modulation m, SymbolType t) {
  if (m == Modulation::Bpsk) {
    switch (t) {
      case SymbolType::Aligned:
      case SymbolType::Opposed:
        return 0.5;
      case SymbolType::Neighbor:
        return 0.0;
    }
  } else {
    switch (t) {
      case SymbolType::Aligned:
      case SymbolType::Opposed:
        return 0.25;
      case SymbolType::Neighbor:
        return 0.5;
    }
  }
  return 0.0;
}

std::vector<SymbolType> symbol_types(Modulation m) {
  if (m == Modulation::Bpsk) {
    return {SymbolType::Aligned, SymbolType::Opposed};
  }
  return {SymbolType::Aligned, SymbolType::Opposed, SymbolType::Neighbor};
}

namespace {

std::size_t index_of(std::complex<double> v, const Constellation& c) {
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (c.points[i] == v) return i;
  }
  throw std::invalid_argument("point is not in the constellation");
}

}  // namespace

SymbolType classify_pair(std::complex<double> x, std::complex<double> xbar,
                         const Constellation& constellation) {
  index_of(x, constellation);
  index_of(xbar, constellation);
  if (x == xbar) return SymbolType::Aligned;
  if (x == -xbar) return SymbolType::Opposed;
  return SymbolType::Neighbor;
}

std::size_t ml_detect(std::complex<double> y, const Constellation& constellation,
                      double alice_power) {
  const double amp = std::sqrt(alice_power);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < constellation.points.size(); ++i) {
    const double d = std::norm(y - amp * constellation.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace spoofalloc
