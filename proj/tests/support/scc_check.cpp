#include "scc_check.hpp"

#include <algorithm>
#include <vector>

namespace vflite::testsupport {
namespace {

/// Kosaraju: finish-order DFS on the graph, then sweeps on the transpose.
std::vector<int> kosaraju(std::size_t n, const std::vector<std::vector<int>> &adj,
                          const std::vector<std::vector<int>> &radj) {
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root])
      continue;
    // Iterative post-order.
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto &[v, i] = stack.back();
      if (i < adj[v].size()) {
        int w = adj[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  int nextComp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0)
      continue;
    std::vector<int> work{*it};
    comp[*it] = nextComp;
    while (!work.empty()) {
      int v = work.back();
      work.pop_back();
      for (int w : radj[v])
        if (comp[w] < 0) {
          comp[w] = nextComp;
          work.push_back(w);
        }
    }
    ++nextComp;
  }
  return comp;
}

} // namespace

std::string checkCallGraphStructure(const CallGraph &cg,
                                    std::size_t numFunctions) {
  std::size_t n = numFunctions;
  std::vector<std::vector<int>> adj(n), radj(n);
  for (const auto &e : cg.edges) {
    adj[e.caller].push_back(static_cast<int>(e.callee));
    radj[e.callee].push_back(static_cast<int>(e.caller));
  }
  std::vector<int> comp = kosaraju(n, adj, radj);

  // Same partition: equal components agree in both labelings.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if ((comp[a] == comp[b]) != (cg.sccId[a] == cg.sccId[b]))
        return "component partition disagrees at functions " +
               std::to_string(a) + " and " + std::to_string(b);

  // Cycle flags: more than one member, or a self edge.
  for (std::size_t f = 0; f < n; ++f) {
    bool cyc = false;
    for (std::size_t g = 0; g < n; ++g)
      if (g != f && comp[g] == comp[f])
        cyc = true;
    for (const auto &e : cg.edges)
      if (e.caller == f && e.callee == f)
        cyc = true;
    if (cyc != cg.inCycle(static_cast<FuncId>(f)))
      return "cycle flag disagrees at function " + std::to_string(f);
  }

  // Layers partition the functions.
  std::vector<int> layerOf(n, -1);
  for (std::size_t li = 0; li < cg.layers.size(); ++li)
    for (FuncId f : cg.layers[li]) {
      if (layerOf[f] != -1)
        return "function " + std::to_string(f) + " appears in two layers";
      layerOf[f] = static_cast<int>(li);
    }
  for (std::size_t f = 0; f < n; ++f)
    if (layerOf[f] == -1)
      return "function " + std::to_string(f) + " missing from layers";

  // Bottom-up order: cross-component callees sit strictly below callers.
  for (const auto &e : cg.edges)
    if (cg.sccId[e.caller] != cg.sccId[e.callee] &&
        layerOf[e.callee] >= layerOf[e.caller])
      return "call edge " + std::to_string(e.caller) + "->" +
             std::to_string(e.callee) + " does not descend a layer";

  // Same component, same layer.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (cg.sccId[a] == cg.sccId[b] && layerOf[a] != layerOf[b])
        return "functions " + std::to_string(a) + " and " + std::to_string(b) +
               " share a component but not a layer";

  return "";
}

} // namespace vflite::testsupport
