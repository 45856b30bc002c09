#include "vflite/ci.hpp"

#include <chrono>

namespace vflite {

void identifyPathContrib(const Pdg &pdg, ReachabilityBackend &backend,
                         NecessarySet &out) {
  DynBitset srcSeen = backend.forward(pdg.sources(), out.counters.path.fwd);
  DynBitset sinkSeen = backend.backward(pdg.sinks(), out.counters.path.bwd);

  out.vn = DynBitset(pdg.numVertices());
  out.candidates = DynBitset(pdg.numVertices());
  for (VertexId v = 0; v < pdg.numVertices(); ++v) {
    bool fromSrc = srcSeen.test(v);
    bool fromSink = sinkSeen.test(v);
    bool endpoint = (pdg.isHead(v) || pdg.isTail(v)) &&
                    pdg.vertex(v).kind != VertexKind::Guard;
    if (fromSrc && fromSink && endpoint)
      out.vn.set(v);
    else if (fromSrc || fromSink)
      out.candidates.set(v);
  }
  out.vnPath = out.vn;
}

void gatherNecGuards(const Pdg &pdg, ReachabilityBackend &backend,
                     NecessarySet &out) {
  std::vector<VertexId> members = out.vnPath.toVector();
  DynBitset fwdE = backend.forwardEdges(members, out.counters.guards.fwd);
  DynBitset bwdE = backend.backwardEdges(members, out.counters.guards.bwd);
  fwdE.andWith(bwdE);

  out.necGuards = DynBitset(pdg.numVertices());
  for (EdgeId e = 0; e < pdg.numDataEdges(); ++e)
    if (fwdE.test(e) && pdg.edge(e).labeled())
      out.necGuards.set(pdg.edge(e).guard);
}

void identifyCondContrib(const Pdg &pdg, ReachabilityBackend &backend,
                         NecessarySet &out) {
  DynBitset fwd =
      backend.forward(out.candidates.toVector(), out.counters.cond.fwd);
  DynBitset bwd =
      backend.backward(out.necGuards.toVector(), out.counters.cond.bwd);
  fwd.andWith(bwd);
  // Head/tail vertices only; guards themselves qualify as tails here.
  for (VertexId v = 0; v < pdg.numVertices(); ++v)
    if (fwd.test(v) && (pdg.isHead(v) || pdg.isTail(v)))
      out.vn.set(v);
}

NecessarySet identifyContrib(const Pdg &pdg, ReachabilityBackend &backend,
                             bool collectTiming) {
  auto t0 = std::chrono::steady_clock::now();
  NecessarySet ns;
  identifyPathContrib(pdg, backend, ns);
  gatherNecGuards(pdg, backend, ns);
  identifyCondContrib(pdg, backend, ns);
  if (collectTiming)
    ns.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  return ns;
}

} // namespace vflite
