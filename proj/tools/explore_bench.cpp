// Parallel frontier expansion against the serial reference explorer.

#include <benchmark/benchmark.h>

#include "piterm/parser.hpp"
#include "piterm/semantics.hpp"

using namespace piterm;

namespace {

// n distinct requests forwarded through a chain of relays: every request is
// at one of four stages, so the state space has 4^n states.
Process fan_out(int n) {
  std::string text = "!s(x).r1<x> | !r1(y).r2<y> | !r2(z).d<z>";
  for (int i = 0; i < n; ++i) text += " | s<c" + std::to_string(i) + ">";
  return parse_process(text);
}

void BM_ExploreParallel(benchmark::State& state) {
  Process p = fan_out(static_cast<int>(state.range(0)));
  std::size_t states = 0;
  for (auto _ : state) states = explore(p, Bounds{1000000, 100000}).states;
  state.counters["states"] = static_cast<double>(states);
}

void BM_ExploreSerial(benchmark::State& state) {
  Process p = fan_out(static_cast<int>(state.range(0)));
  std::size_t states = 0;
  for (auto _ : state) states = explore_serial(p, Bounds{1000000, 100000}).states;
  state.counters["states"] = static_cast<double>(states);
}

}  // namespace

BENCHMARK(BM_ExploreParallel)->Arg(3)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExploreSerial)->Arg(3)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
