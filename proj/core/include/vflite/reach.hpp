#pragma once

#include "vflite/pdg.hpp"
#include "vflite/util.hpp"

#include <memory>
#include <vector>

namespace vflite {

/// Work done by one reachability query. For the worklist backend a vertex
/// visit is a dequeue and an edge visit is a relaxation, so single queries
/// are linear; the language-aware backend reports its tuple insertions.
struct ReachCounters {
  std::uint64_t vertexVisits = 0;
  std::uint64_t edgeVisits = 0;

  ReachCounters &operator+=(const ReachCounters &o) {
    vertexVisits += o.vertexVisits;
    edgeVisits += o.edgeVisits;
    return *this;
  }
};

/// Reachability over the data edges of the graph. `forward`/`backward`
/// return vertex sets (starts included); the Edges variants return the set
/// of data edges lying on some admissible path from/into the start set.
class ReachabilityBackend {
public:
  virtual ~ReachabilityBackend() = default;

  virtual DynBitset forward(const std::vector<VertexId> &starts,
                            ReachCounters &c) = 0;
  virtual DynBitset backward(const std::vector<VertexId> &starts,
                             ReachCounters &c) = 0;
  virtual DynBitset forwardEdges(const std::vector<VertexId> &starts,
                                 ReachCounters &c) = 0;
  virtual DynBitset backwardEdges(const std::vector<VertexId> &starts,
                                  ReachCounters &c) = 0;

  virtual const char *name() const = 0;
};

/// Plain FIFO worklist over all data edges; callsite tags are ignored, so
/// flows may pair a call from one site with a return from another. Sound
/// and linear per query.
std::unique_ptr<ReachabilityBackend> makeBfsBackend(const Pdg &pdg);

/// Call-structure-aware backend: flows must read as a run of matched
/// segments with unmatched returns only in the prefix and unmatched calls
/// only in the suffix. Never reaches more than the worklist backend.
std::unique_ptr<ReachabilityBackend> makeCflBackend(const Pdg &pdg);

} // namespace vflite
