// Microbenchmarks over generated programs of increasing size: graph
// construction, both identification backends, and the engine with and
// without the redundancy filter.

#include <benchmark/benchmark.h>

#include "gen.hpp"
#include "run_helpers.hpp"

#include "vflite/ci.hpp"
#include "vflite/frontend.hpp"
#include "vflite/reach.hpp"

#include <random>
#include <string>
#include <vector>

using namespace vflite;
using namespace vflite::testsupport;

namespace {

// A deterministic batch of programs sized by the benchmark range argument:
// the argument scales the statement budget while the function count stays
// within the language's usual shape.
std::vector<std::string> programBatch(int scale) {
  GenOptions opt;
  opt.maxFunctions = 12;
  opt.maxStatements = scale;
  std::vector<std::string> out;
  for (int seed = 0; seed < 8; ++seed) {
    std::mt19937 rng(7000 + seed);
    out.push_back(generateProgram(rng, opt));
  }
  return out;
}

std::vector<Analysis> analyzedBatch(int scale) {
  std::vector<Analysis> out;
  for (const std::string &text : programBatch(scale))
    out.push_back(analyzeText(text));
  return out;
}

void BM_FrontendAndGraph(benchmark::State &state) {
  auto texts = programBatch(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    for (const std::string &text : texts) {
      Program prog = parseProgram(text);
      Pdg pdg = buildPdg(prog);
      benchmark::DoNotOptimize(pdg.numDataEdges());
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_FrontendAndGraph)->Arg(30)->Arg(60);

void BM_IdentifyWorklist(benchmark::State &state) {
  auto batch = analyzedBatch(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    for (const Analysis &a : batch) {
      auto backend = makeBfsBackend(a.pdg);
      NecessarySet ns = identifyContrib(a.pdg, *backend, false);
      benchmark::DoNotOptimize(ns.vn.count());
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_IdentifyWorklist)->Arg(30)->Arg(60);

void BM_IdentifyCallAware(benchmark::State &state) {
  auto batch = analyzedBatch(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    for (const Analysis &a : batch) {
      auto backend = makeCflBackend(a.pdg);
      NecessarySet ns = identifyContrib(a.pdg, *backend, false);
      benchmark::DoNotOptimize(ns.vn.count());
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_IdentifyCallAware)->Arg(30)->Arg(60);

void BM_EngineExhaustive(benchmark::State &state) {
  auto batch = analyzedBatch(static_cast<int>(state.range(0)));
  EngineConfig cfg;
  cfg.collectTiming = false;
  for (auto _ : state) {
    for (const Analysis &a : batch) {
      EngineRun run = runFusion(a, cfg);
      benchmark::DoNotOptimize(run.result.metrics.solverCalls);
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_EngineExhaustive)->Arg(30)->Arg(60);

void BM_EngineFiltered(benchmark::State &state) {
  auto batch = analyzedBatch(static_cast<int>(state.range(0)));
  EngineConfig cfg;
  cfg.collectTiming = false;
  for (auto _ : state) {
    for (const Analysis &a : batch) {
      EngineRun run = runLight(a, "bfs", cfg);
      benchmark::DoNotOptimize(run.result.metrics.solverCalls);
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_EngineFiltered)->Arg(30)->Arg(60);

} // namespace

BENCHMARK_MAIN();
