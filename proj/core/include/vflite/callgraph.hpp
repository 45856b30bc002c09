#pragma once

#include "vflite/ir.hpp"

#include <vector>

namespace vflite {

/// Call graph plus its condensation. Functions inside one strongly connected
/// component share a component id; components are arranged into layers so
/// that every callee's component sits in an earlier layer than its callers'
/// (reverse topological order). Within a layer, functions are ordered by
/// name ascending — the analysis walks them in exactly this order.
struct CallGraph {
  struct Edge {
    FuncId caller;
    FuncId callee;
    int callsite; // statement line
  };

  std::vector<Edge> edges;
  std::vector<std::vector<FuncId>> callees;  // per function, dedup, sorted
  std::vector<std::vector<FuncId>> callers;  // per function, dedup, sorted
  std::vector<std::uint32_t> sccId;          // per function
  std::uint32_t sccCount = 0;
  std::vector<bool> sccHasCycle; // per scc: >1 member or self edge
  std::vector<std::vector<FuncId>> layers;   // bottom-up processing order

  bool inCycle(FuncId f) const { return sccHasCycle[sccId[f]]; }
};

CallGraph buildCallGraph(const Program &prog);

} // namespace vflite
