#pragma once

#include "vflite/pdg.hpp"
#include "vflite/reach.hpp"

namespace vflite {

struct CiPhaseCounters {
  ReachCounters fwd;
  ReachCounters bwd;
};

struct CiCounters {
  CiPhaseCounters path;   // source-to-sink corridor phase
  CiPhaseCounters guards; // edge-level phase locating necessary guards
  CiPhaseCounters cond;   // condition-support phase
};

/// Output of the contribution identification pass: the set of vertices whose
/// summaries can matter for some reportable flow, plus the intermediates the
/// tests pin down.
struct NecessarySet {
  DynBitset vn;         // final necessary set
  DynBitset vnPath;     // corridor endpoints only (before guard support)
  DynBitset candidates; // every other vertex either sweep visited
  DynBitset necGuards;  // guards labeling edges on some corridor
  CiCounters counters;
  double wallSeconds = 0;

  bool contains(VertexId v) const { return vn.test(v); }
};

/// Corridor phase: forward from all sources, backward from all sinks; keep
/// head/tail vertices (guards excluded) seen from both sides. `candidates`
/// collects head/tail vertices seen from exactly one side.
void identifyPathContrib(const Pdg &pdg, ReachabilityBackend &backend,
                         NecessarySet &out);

/// Edge phase: edges reachable forward and backward from the corridor set;
/// the guards labeling them are necessary.
void gatherNecGuards(const Pdg &pdg, ReachabilityBackend &backend,
                     NecessarySet &out);

/// Support phase: vertices feeding a necessary guard that a candidate can
/// still reach join the necessary set.
void identifyCondContrib(const Pdg &pdg, ReachabilityBackend &backend,
                         NecessarySet &out);

/// All three phases in order. Timing is wall-clock unless `collectTiming`
/// is false, in which case wallSeconds stays 0.
NecessarySet identifyContrib(const Pdg &pdg, ReachabilityBackend &backend,
                             bool collectTiming = true);

} // namespace vflite
