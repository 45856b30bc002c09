#include "path_oracle.hpp"

#include <deque>
#include <set>
#include <utility>
#include <vector>

namespace vflite::testsupport {
namespace {

struct Explored {
  DynBitset verts;
  DynBitset edges;
  bool overflow = false;
};

Explored explore(const Pdg &pdg, const std::vector<VertexId> &starts,
                 bool fwd, std::size_t maxStates) {
  Explored out{DynBitset(pdg.numVertices()), DynBitset(pdg.numDataEdges())};
  using State = std::pair<VertexId, std::vector<int>>;
  std::set<State> seen;
  std::deque<State> work;

  auto enqueue = [&](VertexId v, std::vector<int> stack) {
    State st{v, std::move(stack)};
    if (seen.insert(st).second) {
      out.verts.set(v);
      work.push_back(std::move(st));
    }
  };
  for (VertexId s : starts)
    enqueue(s, {});

  while (!work.empty()) {
    if (seen.size() > maxStates) {
      out.overflow = true;
      return out;
    }
    auto [v, stack] = std::move(work.front());
    work.pop_front();
    for (EdgeId eid : fwd ? pdg.outEdges(v) : pdg.inEdges(v)) {
      const DataEdge &e = pdg.edge(eid);
      VertexId w = fwd ? e.dst : e.src;
      std::vector<int> next = stack;
      // Forward reads the label string left to right; backward reads it
      // right to left, so the roles of the parentheses swap.
      CallTagKind pushTag = fwd ? CallTagKind::Call : CallTagKind::Return;
      CallTagKind popTag = fwd ? CallTagKind::Return : CallTagKind::Call;
      if (e.tag == pushTag) {
        next.push_back(e.callsite);
      } else if (e.tag == popTag) {
        if (!next.empty()) {
          if (next.back() != e.callsite)
            continue; // mismatched pair: path rejected
          next.pop_back();
        }
        // empty stack: an unmatched parenthesis of the permitted polarity
      }
      out.edges.set(eid);
      enqueue(w, std::move(next));
    }
  }
  return out;
}

} // namespace

std::optional<DynBitset> cflOracleVertices(const Pdg &pdg,
                                           const std::vector<VertexId> &starts,
                                           bool fwd, std::size_t maxStates) {
  Explored ex = explore(pdg, starts, fwd, maxStates);
  if (ex.overflow)
    return std::nullopt;
  return ex.verts;
}

std::optional<DynBitset> cflOracleEdges(const Pdg &pdg,
                                        const std::vector<VertexId> &starts,
                                        bool fwd, std::size_t maxStates) {
  Explored ex = explore(pdg, starts, fwd, maxStates);
  if (ex.overflow)
    return std::nullopt;
  return ex.edges;
}

} // namespace vflite::testsupport
