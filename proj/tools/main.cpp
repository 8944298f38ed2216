#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spoofalloc/allocator.hpp"
#include "spoofalloc/curves.hpp"
#include "spoofalloc/envelope.hpp"
#include "spoofalloc/sweep.hpp"

namespace {

using namespace spoofalloc;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct Range {
  double start = 0.0, stop = 0.0, step = 0.0;
};

bool parse_range(const std::string& text, Range& out) {
  char extra = 0;
  const int n = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &out.start, &out.stop,
                            &out.step, &extra);
  return n == 3 && out.step > 0.0 && out.stop >= out.start;
}

struct OutFile {
  std::ofstream file;
  std::ostream* stream = nullptr;

  // "-" selects stdout.
  bool open(const std::string& path) {
    if (path == "-") {
      stream = &std::cout;
      return true;
    }
    file.open(path, std::ios::binary);
    if (!file) return false;
    stream = &file;
    return true;
  }
};

struct SweepArgs {
  std::string modulation;
  double alice_power = 0.0;
  bool power_in_db = false;
  std::string q_range;
  std::string schemes = "optimal,block,heuristic";
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out = "-";
};

int run_sweep_cmd(const SweepArgs& args) {
  sweep::SweepSpec spec;
  spec.modulation = args.modulation == "bpsk" ? Modulation::Bpsk : Modulation::Qpsk;
  spec.alice_power =
      args.power_in_db ? std::pow(10.0, args.alice_power / 10.0) : args.alice_power;
  if (!(spec.alice_power > 0.0)) {
    std::cerr << "error: alice power must be positive\n";
    return kExitUsage;
  }
  Range range;
  if (!parse_range(args.q_range, range)) {
    std::cerr << "error: --q-db expects start:stop:step with step > 0\n";
    return kExitUsage;
  }
  spec.q_start_db = range.start;
  spec.q_stop_db = range.stop;
  spec.q_step_db = range.step;

  std::stringstream names(args.schemes);
  std::string token;
  while (std::getline(names, token, ',')) {
    if (token == "optimal") {
      spec.schemes.push_back(allocator::Scheme::OptimalSymbolLevel);
    } else if (token == "block") {
      spec.schemes.push_back(allocator::Scheme::BlockLevel);
    } else if (token == "heuristic") {
      spec.schemes.push_back(allocator::Scheme::HeuristicSymbolLevel);
    } else {
      std::cerr << "error: unknown scheme '" << token << "'\n";
      return kExitUsage;
    }
  }
  if (spec.schemes.empty()) {
    std::cerr << "error: no schemes requested\n";
    return kExitUsage;
  }
  spec.trials = args.trials;
  spec.seed = args.seed;
  spec.threads = args.threads;

  OutFile out;
  if (!out.open(args.out)) {
    std::cerr << "error: cannot open output file '" << args.out << "'\n";
    return kExitComputation;
  }
  const auto rows = sweep::run_sweep(spec);
  sweep::write_csv(*out.stream, rows);
  return out.stream->good() ? kExitOk : kExitComputation;
}

struct EnvelopeArgs {
  std::string curve;
  double alice_power = 0.0;
  bool power_in_db = false;
  std::string p_range;
  double b_max = 0.0;
  int samples = 400;
  std::string out = "-";
};

struct CurveBundle {
  curves::SserCurve curve;                 // curve as published in the CSV
  envelope::ConvexityRegimes regimes;
  bool enveloped = false;
  double tau1 = 0.0, tau2 = 0.0;
  std::function<double(double)> envelope_value;
};

CurveBundle make_bundle(const std::string& name, double p) {
  CurveBundle b;
  if (name == "f2") {
    b.curve = curves::bpsk_opposed(p);
    b.regimes = envelope::bpsk_opposed_regimes(p);
    if (b.regimes.kind == envelope::RegimeKind::ConvexConcaveConvex) {
      const auto env = envelope::tangent_points(b.curve, b.regimes);
      b.enveloped = true;
      b.tau1 = env.tau1;
      b.tau2 = env.tau2;
      b.envelope_value = [env](double x) { return env.eval(x); };
    }
  } else if (name == "g2") {
    b.curve = curves::qpsk_opposed(p);
    b.regimes = envelope::qpsk_opposed_regimes(p);
    if (b.regimes.kind == envelope::RegimeKind::ConvexConcaveConvex) {
      const auto env = envelope::tangent_points(b.curve, b.regimes);
      b.enveloped = true;
      b.tau1 = env.tau1;
      b.tau2 = env.tau2;
      b.envelope_value = [env](double x) { return env.eval(x); };
    }
  } else {  // g3r: concave-convex-concave, bridged on the negated curve
    b.curve = curves::qpsk_neighbor_real(p);
    b.regimes = envelope::qpsk_neighbor_real_regimes(p);
    if (b.regimes.kind == envelope::RegimeKind::ConvexConcaveConvex) {
      const auto env =
          envelope::tangent_points(curves::negated(b.curve), b.regimes);
      b.enveloped = true;
      b.tau1 = env.tau1;
      b.tau2 = env.tau2;
      b.envelope_value = [env](double x) { return -env.eval(x); };
    }
  }
  return b;
}

int run_envelope_cmd(const EnvelopeArgs& args) {
  const bool have_range = !args.p_range.empty();
  OutFile out;
  if (!out.open(args.out)) {
    std::cerr << "error: cannot open output file '" << args.out << "'\n";
    return kExitComputation;
  }
  std::ostream& os = *out.stream;

  if (have_range) {
    Range range;
    if (!parse_range(args.p_range, range)) {
      std::cerr << "error: --p-range expects start:stop:step with step > 0\n";
      return kExitUsage;
    }
    os << "P,zeta1,zeta2,tau1,tau2\n";
    const int n =
        static_cast<int>(std::floor((range.stop - range.start) / range.step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) {
      const double p = range.start + i * range.step;
      const CurveBundle b = make_bundle(args.curve, p);
      os << sweep::format_g17(p) << ',';
      if (b.enveloped) {
        os << sweep::format_g17(b.regimes.zeta1) << ','
           << sweep::format_g17(b.regimes.zeta2) << ','
           << sweep::format_g17(b.tau1) << ',' << sweep::format_g17(b.tau2);
      } else {
        os << ",,,";
      }
      os << '\n';
    }
    return os.good() ? kExitOk : kExitComputation;
  }

  const double p =
      args.power_in_db ? std::pow(10.0, args.alice_power / 10.0) : args.alice_power;
  if (!(p > 0.0)) {
    std::cerr << "error: alice power must be positive\n";
    return kExitUsage;
  }
  if (args.samples < 2) {
    std::cerr << "error: --samples must be at least 2\n";
    return kExitUsage;
  }
  const CurveBundle b = make_bundle(args.curve, p);
  const double b_max = args.b_max > 0.0 ? args.b_max : 4.0 * p;
  os << "B,curve,envelope\n";
  for (int i = 0; i < args.samples; ++i) {
    const double x = b_max * i / (args.samples - 1);
    os << sweep::format_g17(x) << ',' << sweep::format_g17(b.curve.eval(x)) << ',';
    if (b.enveloped) os << sweep::format_g17(b.envelope_value(x));
    os << '\n';
  }
  return os.good() ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spoofing power allocation: optimal and baseline schemes over AWGN"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Sweep the spoofing budget and emit per-scheme SSER rows as CSV");
  sweep_cmd->add_option("--modulation", sweep_args.modulation, "bpsk or qpsk")
      ->required()
      ->check(CLI::IsMember({"bpsk", "qpsk"}));
  sweep_cmd
      ->add_option("--alice-power", sweep_args.alice_power,
                   "Transmitter power (linear watts unless --db)")
      ->required();
  sweep_cmd->add_flag("--db", sweep_args.power_in_db,
                      "Interpret --alice-power in dB");
  sweep_cmd
      ->add_option("--q-db", sweep_args.q_range,
                   "Spoofing budget range in dB as start:stop:step")
      ->required();
  sweep_cmd->add_option(
      "--schemes", sweep_args.schemes,
      "Comma-separated subset of optimal,block,heuristic");
  sweep_cmd->add_option("--trials", sweep_args.trials,
                        "Monte Carlo trials per row (0 = analytic only)");
  sweep_cmd->add_option("--seed", sweep_args.seed, "Simulation seed");
  sweep_cmd->add_option("--threads", sweep_args.threads,
                        "Worker threads (0 = hardware)");
  sweep_cmd->add_option("--out", sweep_args.out, "Output CSV path ('-' = stdout)");

  EnvelopeArgs env_args;
  CLI::App* env_cmd = app.add_subcommand(
      "envelope",
      "Tabulate an error curve with its convexified envelope, or the "
      "concavity boundaries and tangent points across a power range");
  env_cmd
      ->add_option("--curve", env_args.curve,
                   "f2 = BPSK opposed-symbol error curve, g2 = QPSK "
                   "opposed-symbol error curve, g3r = QPSK neighbor "
                   "real-component success factor")
      ->required()
      ->check(CLI::IsMember({"f2", "g2", "g3r"}));
  env_cmd->add_option("--alice-power", env_args.alice_power,
                      "Transmitter power for sample mode (linear unless --db)");
  env_cmd->add_flag("--db", env_args.power_in_db,
                    "Interpret --alice-power in dB");
  env_cmd->add_option("--p-range", env_args.p_range,
                      "Transmitter power range start:stop:step (table mode)");
  env_cmd->add_option("--b-max", env_args.b_max,
                      "Largest sampled spoofing power (default 4x alice power)");
  env_cmd->add_option("--samples", env_args.samples, "Sample count");
  env_cmd->add_option("--out", env_args.out, "Output CSV path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_args);
    if (env_cmd->parsed()) {
      if (env_args.p_range.empty() && !(env_args.alice_power > 0.0)) {
        std::cerr << "error: provide --alice-power or --p-range\n";
        return kExitUsage;
      }
      return run_envelope_cmd(env_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}
