#pragma once

#include "vflite/callgraph.hpp"
#include "vflite/ci.hpp"
#include "vflite/solver.hpp"
#include "vflite/summary.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vflite {

struct EngineConfig {
  std::size_t maxPathLen = 64;     // steps per summary path
  std::size_t maxSummaries = 10000; // rows per function
  std::size_t guardDepth = 8;      // nested guard instantiation
  std::size_t sccIters = 3;        // fixpoint rounds per cyclic component
  unsigned jobs = 1;               // worker threads per layer
  bool collectTiming = true;
};

struct EngineMetrics {
  std::size_t sAll = 0;
  std::map<std::string, std::size_t> storedByKind;
  std::size_t discardedUnsat = 0;
  std::uint64_t solverCalls = 0;
  double wallSeconds = 0;

  std::size_t pathLenCapHits = 0;
  std::size_t summaryCapHits = 0;
  std::size_t guardDepthCapHits = 0; // opaque fallbacks
  bool sccNonConverged = false;
  bool soundnessFlag = false;

  std::vector<std::string> notes; // one line per cap event class
};

struct Bug {
  SummaryId row;
  VertexId source;
  VertexId sink;
  std::vector<PathStep> path;
};

struct AnalysisResult {
  SummaryStore store;
  std::vector<Bug> bugs;
  EngineMetrics metrics;
};

/// Bottom-up collection over the call-graph layers. With `filter` null every
/// head and tail is eligible (the exhaustive run); with a filter, params,
/// callsite results, returned uses and guards are gated on membership, while
/// sources and sinks always stay live. Condition chains may pull skipped
/// callee summaries back in on demand — reported flows never change, only
/// the work done to find them.
AnalysisResult runEngine(const Program &prog, const Pdg &pdg,
                         const CallGraph &cg, const NecessarySet *filter,
                         SolverInterface &solver, ContextTable &ctxs,
                         const EngineConfig &config);

} // namespace vflite
