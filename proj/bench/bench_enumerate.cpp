// Serial reference enumerator vs the OpenMP job-parallel driver. On a single
// core the two should be within noise of each other; the parallel driver only
// pays off when degree-splitting jobs can spread over threads.

#include <benchmark/benchmark.h>

#include "qdeg/correspondence.hpp"

using namespace qdeg;

namespace {

EnumerationRequest request_for(long d) {
  EnumerationRequest req;
  req.markings = 2;
  req.beta = {Int(d), Int(0)};
  req.marking_sides = {1, 2};
  return req;
}

void bench_serial(benchmark::State& state) {
  DegenerationGeometry geom = pn_geometry(2);
  EnumerationRequest req = request_for(state.range(0));
  for (auto _ : state) {
    auto graphs = enumerate_graphs_serial(geom, req);
    benchmark::DoNotOptimize(graphs);
    state.counters["graphs"] = double(graphs.size());
  }
}

void bench_parallel(benchmark::State& state) {
  DegenerationGeometry geom = pn_geometry(2);
  EnumerationRequest req = request_for(state.range(0));
  for (auto _ : state) {
    auto graphs = enumerate_graphs(geom, req);
    benchmark::DoNotOptimize(graphs);
    state.counters["graphs"] = double(graphs.size());
  }
}

void bench_grid(benchmark::State& state) {
  for (auto _ : state) {
    auto cells = correspondence_grid(4, state.range(0));
    benchmark::DoNotOptimize(cells);
  }
}

}  // namespace

BENCHMARK(bench_serial)->DenseRange(4, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_parallel)->DenseRange(4, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_grid)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
