/*
 * Microbenchmarks for the library's hot paths: labelled tensor algebra, loop
 * composition, network contraction, signalling analysis, and the switch
 * constructions.  Inputs are drawn once per benchmark from a fixed seed so
 * runs are comparable across machines and revisions.
 */

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "qcnet/analysis.hpp"
#include "qcnet/random.hpp"

namespace {

using namespace qcnet;

/** Closed switch network at d = 2 with fixed local operations. */
QuantumNetwork closed_switch_network() {
  const SwitchParams sp = canonical_switch_params(2);
  return process_network(
      quantum_switch(2),
      {switch_prep(sys("C^I", 1), sys("C^O", 4), sp.alpha, sp.beta, sp.psi),
       CPM::from_unitary({sys("A^I", 2)}, {sys("A^O", 2)}, sp.u),
       CPM::from_unitary({sys("B^I", 2)}, {sys("B^O", 2)}, sp.v),
       switch_readout(sys("D^I", 4), sys("D^O", 1), sys("kept", 4))});
}

void BM_TensorProduct(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(11);
  const CPM a = random_cptp({sys("x", d)}, {sys("y", d)}, rng);
  const CPM b = random_cptp({sys("u", d)}, {sys("v", d)}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensor(a, b));
  }
}
BENCHMARK(BM_TensorProduct)->Arg(2)->Arg(3)->Arg(4);

void BM_LoopCompose(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(13);
  const CPM pair = tensor(random_cptp({sys("x", d)}, {sys("mid_a", d)}, rng),
                          random_cptp({sys("mid_b", d)}, {sys("z", d)}, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(loop_compose(pair, "mid_a", "mid_b"));
  }
}
BENCHMARK(BM_LoopCompose)->Arg(2)->Arg(3)->Arg(4);

void BM_SequentialCompose(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(17);
  const CPM before = random_cptp({sys("x", d)}, {sys("m", d)}, rng);
  const CPM after = random_cptp({sys("m", d)}, {sys("z", d)}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose_sequential(after, before));
  }
}
BENCHMARK(BM_SequentialCompose)->Arg(2)->Arg(3)->Arg(4);

void BM_InducedSwitchNetwork(benchmark::State& state) {
  const QuantumNetwork net = closed_switch_network();
  const SubNetwork sub = full_subnetwork(net);
  for (auto _ : state) {
    benchmark::DoNotOptimize(induced_map(net, sub));
  }
}
BENCHMARK(BM_InducedSwitchNetwork);

void BM_SignallingResidual(benchmark::State& state) {
  Rng rng(19);
  const CPM m = random_cptp({sys("a", 2), sys("b", 2)}, {sys("c", 2), sys("d", 2)}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(signalling_residual(m, {"a"}, {"c"}));
  }
}
BENCHMARK(BM_SignallingResidual);

void BM_NetworkSignalling(benchmark::State& state) {
  const QuantumNetwork net = closed_switch_network();
  for (auto _ : state) {
    benchmark::DoNotOptimize(network_signalling_structure(net, kDefaultTol));
  }
}
BENCHMARK(BM_NetworkSignalling);

void BM_QuantumSwitch(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantum_switch(d));
  }
}
BENCHMARK(BM_QuantumSwitch)->Arg(2)->Arg(3);

void BM_FineSwitchProcess(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fine_switch_process(d));
  }
}
BENCHMARK(BM_FineSwitchProcess)->Arg(2)->Arg(3);

void BM_ValidateSwitch(benchmark::State& state) {
  const ProcessMatrix p = quantum_switch(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate_process(p, kDefaultTol, 10, 7));
  }
}
BENCHMARK(BM_ValidateSwitch);

void BM_CoarseFixedOrderSearch(benchmark::State& state) {
  const ProcessMatrix p = quantum_switch(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_fixed_order(p));
  }
}
BENCHMARK(BM_CoarseFixedOrderSearch);

void BM_PointlikeCycleSearch(benchmark::State& state) {
  const Realisation r = pointlike_switch_realisation();
  const SigGraph sig = signalling_structure(process_to_map(quantum_switch(2)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exhaustive_acyclic_search(sig, r.embedding));
  }
}
BENCHMARK(BM_PointlikeCycleSearch);

}  // namespace

BENCHMARK_MAIN();
