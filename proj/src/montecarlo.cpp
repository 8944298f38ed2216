#include "spoofalloc/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace spoofalloc::montecarlo {

std::complex<double> SplitMix64::complex_noise() {
  const double u1 = uniform01_pos();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  const double scale = std::sqrt(kNoiseComponentVariance);
  return {r * std::cos(ang) * scale, r * std::sin(ang) * scale};
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk_index) {
  return mix64(seed ^ mix64(0x9E3779B97F4A7C15ull * (chunk_index + 1)));
}

namespace {

double draw_power(const allocator::PowerPolicy& policy, SplitMix64& rng) {
  if (policy.kind == allocator::PowerPolicy::Kind::Constant) return policy.p_lo;
  return rng.uniform01() < policy.frac_lo ? policy.p_lo : policy.p_hi;
}

double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Precomputed per-type policy with amplitudes instead of powers.
struct FastPolicy {
  bool time_share = false;
  double amp_lo = 0.0, amp_hi = 0.0, frac_lo = 1.0;

  static FastPolicy from(const allocator::PowerPolicy& p) {
    FastPolicy f;
    f.time_share = p.kind == allocator::PowerPolicy::Kind::TwoPointTimeShare;
    f.amp_lo = std::sqrt(p.p_lo);
    f.amp_hi = std::sqrt(p.p_hi);
    f.frac_lo = p.frac_lo;
    return f;
  }

  double draw_amp(SplitMix64& rng) const {
    if (!time_share) return amp_lo;
    return rng.uniform01() < frac_lo ? amp_lo : amp_hi;
  }
};

constexpr int kMaxTypes = 3;

int type_index(SymbolType t) {
  switch (t) {
    case SymbolType::Aligned:
      return 0;
    case SymbolType::Opposed:
      return 1;
    case SymbolType::Neighbor:
      return 2;
  }
  return 2;
}

}  // namespace

std::complex<double> spoof_signal(std::complex<double> x,
                                  std::complex<double> xbar,
                                  const allocator::AllocationPlan& plan,
                                  SplitMix64& rng) {
  const Constellation constellation = Constellation::make(plan.modulation);
  const SymbolType type = classify_pair(x, xbar, constellation);
  const allocator::TypeAllocation& alloc = plan.per_type.at(type);
  switch (type) {
    case SymbolType::Aligned:
      return std::sqrt(draw_power(alloc.power, rng)) * x;
    case SymbolType::Opposed:
      return std::sqrt(draw_power(alloc.power, rng)) * xbar;
    case SymbolType::Neighbor: {
      // The component where target and sent symbol differ gets the primary
      // power, pushed toward the target; the shared component is reinforced.
      const double amp_diff = std::sqrt(draw_power(alloc.power, rng));
      const double amp_same = std::sqrt(draw_power(*alloc.imag_power, rng));
      const bool real_differs = sgn(x.real()) != sgn(xbar.real());
      if (real_differs) {
        return {sgn(xbar.real()) * amp_diff, sgn(xbar.imag()) * amp_same};
      }
      return {sgn(xbar.real()) * amp_same, sgn(xbar.imag()) * amp_diff};
    }
  }
  throw std::logic_error("unreachable");
}

SimResult run(const SimConfig& config, unsigned threads) {
  validate(config.params);
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.chunk_size < 1) throw std::invalid_argument("chunk_size must be >= 1");
  if (config.params.modulation != config.plan.modulation) {
    throw std::invalid_argument("plan modulation does not match link params");
  }

  const Modulation m = config.params.modulation;
  const Constellation constellation = Constellation::make(m);
  const std::size_t n_points = constellation.points.size();
  const double amp = std::sqrt(config.params.alice_power);

  std::vector<std::size_t> opposite(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t j = 0; j < n_points; ++j) {
      if (constellation.points[j] == -constellation.points[i]) opposite[i] = j;
    }
  }

  FastPolicy policies[kMaxTypes];
  FastPolicy neighbor_imag;
  for (SymbolType t : symbol_types(m)) {
    const auto& alloc = config.plan.per_type.at(t);
    policies[type_index(t)] = FastPolicy::from(alloc.power);
    if (t == SymbolType::Neighbor) {
      neighbor_imag = FastPolicy::from(*alloc.imag_power);
    }
  }

  const std::uint64_t n_chunks =
      (config.trials + config.chunk_size - 1) / config.chunk_size;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  const unsigned n_workers = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, n_chunks));

  std::atomic<std::uint64_t> next_chunk{0};
  std::mutex merge_mutex;
  std::uint64_t fails[kMaxTypes] = {0, 0, 0};
  std::uint64_t counts[kMaxTypes] = {0, 0, 0};

  const auto worker = [&]() {
    std::uint64_t local_fails[kMaxTypes] = {0, 0, 0};
    std::uint64_t local_counts[kMaxTypes] = {0, 0, 0};
    const std::complex<double>* pts = constellation.points.data();
    for (;;) {
      const std::uint64_t k = next_chunk.fetch_add(1);
      if (k >= n_chunks) break;
      const std::uint64_t begin = k * config.chunk_size;
      const std::uint64_t count =
          std::min<std::uint64_t>(config.chunk_size, config.trials - begin);
      SplitMix64 rng(chunk_seed(config.seed, k));
      for (std::uint64_t t = 0; t < count; ++t) {
        const std::size_t ix = rng.uniform_index(n_points);
        const std::size_t ixbar = rng.uniform_index(n_points);
        int type;
        if (m == Modulation::Bpsk) {
          type = ix == ixbar ? 0 : 1;
        } else if (ix == ixbar) {
          type = 0;
        } else if (ixbar == opposite[ix]) {
          type = 1;
        } else {
          type = 2;
        }
        std::complex<double> z;
        if (type == 2) {
          const double amp_diff = policies[2].draw_amp(rng);
          const double amp_same = neighbor_imag.draw_amp(rng);
          const std::complex<double> x = pts[ix];
          const std::complex<double> xb = pts[ixbar];
          const bool real_differs = sgn(x.real()) != sgn(xb.real());
          if (real_differs) {
            z = {sgn(xb.real()) * amp_diff, sgn(xb.imag()) * amp_same};
          } else {
            z = {sgn(xb.real()) * amp_same, sgn(xb.imag()) * amp_diff};
          }
        } else {
          const double a = policies[type].draw_amp(rng);
          z = a * pts[type == 0 ? ix : ixbar];
        }
        const std::complex<double> y = amp * pts[ix] + z + rng.complex_noise();
        std::size_t det = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_points; ++i) {
          const double d = std::norm(y - amp * pts[i]);
          if (d < best) {
            best = d;
            det = i;
          }
        }
        ++local_counts[type];
        if (det != ixbar) ++local_fails[type];
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (int i = 0; i < kMaxTypes; ++i) {
      fails[i] += local_fails[i];
      counts[i] += local_counts[i];
    }
  };

  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SimResult result;
  double overall = 0.0;
  for (SymbolType t : symbol_types(m)) {
    const int i = type_index(t);
    result.per_type_failures[t] = {fails[i], counts[i]};
    if (counts[i] > 0) {
      overall += type_prior(m, t) *
                 (static_cast<double>(fails[i]) / static_cast<double>(counts[i]));
    }
  }
  result.overall_sser = overall;
  result.ci_half_width =
      3.0 * std::sqrt(overall * (1.0 - overall) /
                      static_cast<double>(config.trials));
  return result;
}

}  // namespace spoofalloc::montecarlo
