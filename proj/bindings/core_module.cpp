#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spoofalloc/allocator.hpp"
#include "spoofalloc/curves.hpp"
#include "spoofalloc/envelope.hpp"
#include "spoofalloc/model.hpp"
#include "spoofalloc/montecarlo.hpp"

namespace py = pybind11;
using namespace spoofalloc;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spoofing power allocation: error curves, convex envelopes, "
            "optimal and baseline allocators, Monte Carlo validation";

  py::enum_<Modulation>(m, "Modulation")
      .value("Bpsk", Modulation::Bpsk)
      .value("Qpsk", Modulation::Qpsk);

  py::enum_<SymbolType>(m, "SymbolType")
      .value("Aligned", SymbolType::Aligned)
      .value("Opposed", SymbolType::Opposed)
      .value("Neighbor", SymbolType::Neighbor);

  py::enum_<allocator::Scheme>(m, "Scheme")
      .value("OptimalSymbolLevel", allocator::Scheme::OptimalSymbolLevel)
      .value("BlockLevel", allocator::Scheme::BlockLevel)
      .value("HeuristicSymbolLevel", allocator::Scheme::HeuristicSymbolLevel);

  py::class_<LinkParams>(m, "LinkParams")
      .def(py::init<>())
      .def_readwrite("alice_power", &LinkParams::alice_power)
      .def_readwrite("spoof_budget", &LinkParams::spoof_budget)
      .def_readwrite("modulation", &LinkParams::modulation);

  py::class_<Constellation>(m, "Constellation")
      .def_static("make", &Constellation::make)
      .def_readonly("points", &Constellation::points);

  m.def("type_prior", &type_prior, py::arg("modulation"), py::arg("type"),
        "Prior probability of a (sent, target) pair type");
  m.def("symbol_types", &symbol_types, py::arg("modulation"));
  m.def("classify_pair", &classify_pair, py::arg("x"), py::arg("xbar"),
        py::arg("constellation"));
  m.def("ml_detect", &ml_detect, py::arg("y"), py::arg("constellation"),
        py::arg("alice_power"),
        "Index of the minimum-distance constellation point");

  auto curves_mod = m.def_submodule("curves", "Per-type symbol error curves");
  curves_mod.def("bpsk_aligned_sser", &curves::bpsk_aligned_sser);
  curves_mod.def("bpsk_opposed_sser", &curves::bpsk_opposed_sser);
  curves_mod.def("qpsk_aligned_sser", &curves::qpsk_aligned_sser);
  curves_mod.def("qpsk_opposed_sser", &curves::qpsk_opposed_sser);
  curves_mod.def("qpsk_neighbor_real_success", &curves::qpsk_neighbor_real_success);
  curves_mod.def("qpsk_neighbor_imag_success", &curves::qpsk_neighbor_imag_success);
  curves_mod.def("qpsk_neighbor_sser", &curves::qpsk_neighbor_sser);

  py::class_<curves::SserCurve>(curves_mod, "SserCurve")
      .def("eval", [](const curves::SserCurve& c, double x) { return c.eval(x); })
      .def("deriv1",
           [](const curves::SserCurve& c, double x) { return c.deriv1(x); })
      .def("deriv2",
           [](const curves::SserCurve& c, double x) { return c.deriv2(x); });
  curves_mod.def("bpsk_aligned", &curves::bpsk_aligned);
  curves_mod.def("bpsk_opposed", &curves::bpsk_opposed);
  curves_mod.def("qpsk_aligned", &curves::qpsk_aligned);
  curves_mod.def("qpsk_opposed", &curves::qpsk_opposed);
  curves_mod.def("qpsk_neighbor_real", &curves::qpsk_neighbor_real);
  curves_mod.def("qpsk_neighbor_imag", &curves::qpsk_neighbor_imag);
  curves_mod.def("negated", &curves::negated);

  auto env_mod = m.def_submodule("envelope", "Convexity regimes and envelopes");
  py::enum_<envelope::RegimeKind>(env_mod, "RegimeKind")
      .value("GloballyConvex", envelope::RegimeKind::GloballyConvex)
      .value("ConvexConcaveConvex", envelope::RegimeKind::ConvexConcaveConvex);
  py::class_<envelope::ConvexityRegimes>(env_mod, "ConvexityRegimes")
      .def_readonly("kind", &envelope::ConvexityRegimes::kind)
      .def_readonly("zeta1", &envelope::ConvexityRegimes::zeta1)
      .def_readonly("zeta2", &envelope::ConvexityRegimes::zeta2)
      .def_readonly("alice_power", &envelope::ConvexityRegimes::alice_power)
      .def_readonly("chi1", &envelope::ConvexityRegimes::chi1)
      .def_readonly("chi2", &envelope::ConvexityRegimes::chi2)
      .def_readonly("xi", &envelope::ConvexityRegimes::xi);
  env_mod.def("bpsk_opposed_regimes", &envelope::bpsk_opposed_regimes);
  env_mod.def("qpsk_opposed_regimes", &envelope::qpsk_opposed_regimes);
  env_mod.def("qpsk_neighbor_real_regimes", &envelope::qpsk_neighbor_real_regimes);
  py::class_<envelope::ConvexEnvelope>(env_mod, "ConvexEnvelope")
      .def_readonly("tau1", &envelope::ConvexEnvelope::tau1)
      .def_readonly("tau2", &envelope::ConvexEnvelope::tau2)
      .def_readonly("slope", &envelope::ConvexEnvelope::slope)
      .def_readonly("intercept", &envelope::ConvexEnvelope::intercept)
      .def("eval", &envelope::ConvexEnvelope::eval)
      .def("deriv1", &envelope::ConvexEnvelope::deriv1);
  env_mod.def("tangent_points", &envelope::tangent_points, py::arg("curve"),
              py::arg("regimes"),
              "Common tangent of a convex-concave-convex curve; throws if the "
              "search cannot converge");

  py::class_<allocator::PowerPolicy> policy(m, "PowerPolicy");
  py::enum_<allocator::PowerPolicy::Kind>(policy, "Kind")
      .value("Constant", allocator::PowerPolicy::Kind::Constant)
      .value("TwoPointTimeShare", allocator::PowerPolicy::Kind::TwoPointTimeShare);
  policy.def_readonly("kind", &allocator::PowerPolicy::kind)
      .def_readonly("p_lo", &allocator::PowerPolicy::p_lo)
      .def_readonly("p_hi", &allocator::PowerPolicy::p_hi)
      .def_readonly("frac_lo", &allocator::PowerPolicy::frac_lo)
      .def("mean", &allocator::PowerPolicy::mean)
      .def_static("constant", &allocator::PowerPolicy::constant)
      .def_static("time_share", &allocator::PowerPolicy::time_share);

  py::class_<allocator::TypeAllocation>(m, "TypeAllocation")
      .def_readonly("power", &allocator::TypeAllocation::power)
      .def_readonly("imag_power", &allocator::TypeAllocation::imag_power)
      .def("mean_power", &allocator::TypeAllocation::mean_power);

  py::class_<allocator::AllocationPlan>(m, "AllocationPlan")
      .def_readonly("scheme", &allocator::AllocationPlan::scheme)
      .def_readonly("modulation", &allocator::AllocationPlan::modulation)
      .def_readonly("alice_power", &allocator::AllocationPlan::alice_power)
      .def_readonly("spoof_budget", &allocator::AllocationPlan::spoof_budget)
      .def_readonly("per_type", &allocator::AllocationPlan::per_type)
      .def_readonly("avg_sser", &allocator::AllocationPlan::avg_sser)
      .def_readonly("avg_power", &allocator::AllocationPlan::avg_power)
      .def_readonly("tau1", &allocator::AllocationPlan::tau1)
      .def_readonly("tau2", &allocator::AllocationPlan::tau2)
      .def_readonly("envelope_objective",
                    &allocator::AllocationPlan::envelope_objective);

  m.def("solve_bpsk", &allocator::solve_bpsk, py::arg("p"), py::arg("q"),
        "Optimal BPSK allocation under an average power budget");
  m.def("solve_qpsk", &allocator::solve_qpsk, py::arg("p"), py::arg("q"),
        "Optimal QPSK allocation under an average power budget");
  m.def("block_level", &allocator::block_level, py::arg("p"), py::arg("q"),
        py::arg("modulation"), "Baseline: full budget on the target point");
  m.def("heuristic_symbol_level", &allocator::heuristic_symbol_level,
        py::arg("p"), py::arg("q"), py::arg("modulation"),
        "Baseline: skip aligned symbols, split the budget over the rest");
  m.def("find_timeshare_boundary_db", &allocator::find_timeshare_boundary_db,
        py::arg("p"), py::arg("start_db"), py::arg("stop_db"),
        py::arg("step_db"),
        "Smallest swept budget (dB) where the optimal BPSK plan stops "
        "time-sharing; NaN unless one clean transition");

  auto mc_mod = m.def_submodule("montecarlo", "Plan validation by simulation");
  py::class_<montecarlo::SimConfig>(mc_mod, "SimConfig")
      .def(py::init<>())
      .def_readwrite("params", &montecarlo::SimConfig::params)
      .def_readwrite("plan", &montecarlo::SimConfig::plan)
      .def_readwrite("trials", &montecarlo::SimConfig::trials)
      .def_readwrite("seed", &montecarlo::SimConfig::seed)
      .def_readwrite("chunk_size", &montecarlo::SimConfig::chunk_size);
  py::class_<montecarlo::TypeTally>(mc_mod, "TypeTally")
      .def_readonly("failures", &montecarlo::TypeTally::failures)
      .def_readonly("trials", &montecarlo::TypeTally::trials);
  py::class_<montecarlo::SimResult>(mc_mod, "SimResult")
      .def_readonly("per_type_failures", &montecarlo::SimResult::per_type_failures)
      .def_readonly("overall_sser", &montecarlo::SimResult::overall_sser)
      .def_readonly("ci_half_width", &montecarlo::SimResult::ci_half_width);
  mc_mod.def("run", &montecarlo::run, py::arg("config"), py::arg("threads") = 0,
             py::call_guard<py::gil_scoped_release>(),
             "Simulate the plan; bit-identical for any thread count");
}
