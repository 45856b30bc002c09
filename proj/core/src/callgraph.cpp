#include "vflite/callgraph.hpp"

#include <algorithm>
#include <functional>

namespace vflite {
namespace {

// Iterative Tarjan; recursion depth would otherwise track call-chain depth
// in generated inputs.
struct Tarjan {
  const std::vector<std::vector<FuncId>> &succ;
  std::vector<int> index, low;
  std::vector<bool> onStack;
  std::vector<FuncId> stack;
  std::vector<std::uint32_t> comp;
  std::uint32_t nextIndex = 0, nComp = 0;

  explicit Tarjan(const std::vector<std::vector<FuncId>> &s)
      : succ(s), index(s.size(), -1), low(s.size(), 0),
        onStack(s.size(), false), comp(s.size(), 0) {}

  void run() {
    for (FuncId v = 0; v < succ.size(); ++v)
      if (index[v] < 0)
        strongConnect(v);
  }

  void strongConnect(FuncId root) {
    struct Frame {
      FuncId v;
      std::size_t child;
    };
    std::vector<Frame> frames{{root, 0}};
    openVertex(root);
    while (!frames.empty()) {
      Frame &fr = frames.back();
      if (fr.child < succ[fr.v].size()) {
        FuncId w = succ[fr.v][fr.child++];
        if (index[w] < 0) {
          openVertex(w);
          frames.push_back({w, 0});
        } else if (onStack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        if (low[fr.v] == index[fr.v]) {
          FuncId w;
          do {
            w = stack.back();
            stack.pop_back();
            onStack[w] = false;
            comp[w] = nComp;
          } while (w != fr.v);
          ++nComp;
        }
        FuncId finished = fr.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] =
              std::min(low[frames.back().v], low[finished]);
      }
    }
  }

  void openVertex(FuncId v) {
    index[v] = low[v] = static_cast<int>(nextIndex++);
    onStack[v] = true;
    stack.push_back(v);
  }
};

} // namespace

CallGraph buildCallGraph(const Program &prog) {
  CallGraph cg;
  std::size_t n = prog.functions.size();
  cg.callees.assign(n, {});
  cg.callers.assign(n, {});
  for (FuncId f = 0; f < n; ++f)
    for (const auto &s : prog.functions[f].stmts)
      if (s.kind == StmtKind::Call)
        cg.edges.push_back({f, s.calleeId, s.line});

  for (const auto &e : cg.edges) {
    cg.callees[e.caller].push_back(e.callee);
    cg.callers[e.callee].push_back(e.caller);
  }
  auto dedup = [](std::vector<FuncId> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (FuncId f = 0; f < n; ++f) {
    dedup(cg.callees[f]);
    dedup(cg.callers[f]);
  }

  Tarjan tj(cg.callees);
  tj.run();
  cg.sccId = tj.comp;
  cg.sccCount = tj.nComp;

  cg.sccHasCycle.assign(cg.sccCount, false);
  std::vector<std::size_t> sccSize(cg.sccCount, 0);
  for (FuncId f = 0; f < n; ++f)
    ++sccSize[cg.sccId[f]];
  for (FuncId f = 0; f < n; ++f) {
    if (sccSize[cg.sccId[f]] > 1)
      cg.sccHasCycle[cg.sccId[f]] = true;
    for (FuncId c : cg.callees[f])
      if (c == f)
        cg.sccHasCycle[cg.sccId[f]] = true;
  }

  // Layer k holds components whose callees all sit in layers < k; analysis
  // runs layers ascending, so callees are always finished (or in the same
  // cyclic component) when a caller is visited.
  std::vector<std::size_t> depth(cg.sccCount, 0);
  std::function<std::size_t(std::uint32_t)> sccDepth;
  std::vector<char> computed(cg.sccCount, 0);
  sccDepth = [&](std::uint32_t c) -> std::size_t {
    if (computed[c])
      return depth[c];
    computed[c] = 1; // cycles across components cannot occur in a DAG
    std::size_t d = 0;
    for (FuncId f = 0; f < prog.functions.size(); ++f)
      if (cg.sccId[f] == c)
        for (FuncId callee : cg.callees[f])
          if (cg.sccId[callee] != c)
            d = std::max(d, sccDepth(cg.sccId[callee]) + 1);
    depth[c] = d;
    return d;
  };
  std::size_t maxDepth = 0;
  for (std::uint32_t c = 0; c < cg.sccCount; ++c)
    maxDepth = std::max(maxDepth, sccDepth(c));
  cg.layers.assign(cg.sccCount ? maxDepth + 1 : 0, {});
  for (FuncId f = 0; f < n; ++f)
    cg.layers[depth[cg.sccId[f]]].push_back(f);
  for (auto &layer : cg.layers)
    std::sort(layer.begin(), layer.end(), [&](FuncId a, FuncId b) {
      return prog.functions[a].name < prog.functions[b].name;
    });
  return cg;
}

} // namespace vflite
