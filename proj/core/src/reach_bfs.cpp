#include "vflite/reach.hpp"

#include <deque>

namespace vflite {
namespace {

class BfsBackend final : public ReachabilityBackend {
public:
  explicit BfsBackend(const Pdg &pdg) : pdg_(pdg) {}

  const char *name() const override { return "bfs"; }

  DynBitset forward(const std::vector<VertexId> &starts,
                    ReachCounters &c) override {
    return vertexSweep(starts, c, /*fwd=*/true);
  }
  DynBitset backward(const std::vector<VertexId> &starts,
                     ReachCounters &c) override {
    return vertexSweep(starts, c, /*fwd=*/false);
  }
  DynBitset forwardEdges(const std::vector<VertexId> &starts,
                         ReachCounters &c) override {
    return edgeSweep(starts, c, /*fwd=*/true);
  }
  DynBitset backwardEdges(const std::vector<VertexId> &starts,
                          ReachCounters &c) override {
    return edgeSweep(starts, c, /*fwd=*/false);
  }

private:
  const Pdg &pdg_;

  DynBitset vertexSweep(const std::vector<VertexId> &starts, ReachCounters &c,
                        bool fwd) {
    DynBitset seen(pdg_.numVertices());
    std::deque<VertexId> work;
    for (VertexId s : starts)
      if (!seen.test(s)) {
        seen.set(s);
        work.push_back(s);
      }
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      ++c.vertexVisits; // one dequeue per vertex: visits stay <= |V|
      for (EdgeId e : fwd ? pdg_.outEdges(v) : pdg_.inEdges(v)) {
        ++c.edgeVisits;
        VertexId peer = fwd ? pdg_.edge(e).dst : pdg_.edge(e).src;
        if (!seen.test(peer)) {
          seen.set(peer);
          work.push_back(peer);
        }
      }
    }
    return seen;
  }

  // Same sweep, but the result is the set of edges relaxed. Each edge is
  // relaxed exactly once because its origin is dequeued exactly once.
  DynBitset edgeSweep(const std::vector<VertexId> &starts, ReachCounters &c,
                      bool fwd) {
    DynBitset seenV(pdg_.numVertices());
    DynBitset seenE(pdg_.numDataEdges());
    std::deque<VertexId> work;
    for (VertexId s : starts)
      if (!seenV.test(s)) {
        seenV.set(s);
        work.push_back(s);
      }
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      ++c.vertexVisits;
      for (EdgeId e : fwd ? pdg_.outEdges(v) : pdg_.inEdges(v)) {
        ++c.edgeVisits;
        seenE.set(e);
        VertexId peer = fwd ? pdg_.edge(e).dst : pdg_.edge(e).src;
        if (!seenV.test(peer)) {
          seenV.set(peer);
          work.push_back(peer);
        }
      }
    }
    return seenE;
  }
};

} // namespace

std::unique_ptr<ReachabilityBackend> makeBfsBackend(const Pdg &pdg) {
  return std::make_unique<BfsBackend>(pdg);
}

} // namespace vflite
