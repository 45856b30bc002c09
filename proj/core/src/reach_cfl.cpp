#include "vflite/reach.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace vflite {
namespace {

// Flows must parse as  B (ret B)* (call B)*  read left to right: returns out
// of the starting context first, then calls into new contexts, with B fully
// matched. Matched call/return pairs are folded into derived edges once at
// construction; queries then run plain sweeps over intra + derived edges,
// admitting unmatched returns only before the first unmatched call.
class CflBackend final : public ReachabilityBackend {
public:
  explicit CflBackend(const Pdg &pdg) : pdg_(pdg) {
    std::size_t n = pdg.numVertices();
    eps_.resize(n);
    epsRev_.resize(n);
    derived_.resize(n);
    derivedRev_.resize(n);
    for (const auto &e : pdg.dataEdges()) {
      switch (e.tag) {
      case CallTagKind::None:
        eps_[e.src].push_back(e.dst);
        epsRev_[e.dst].push_back(e.src);
        break;
      case CallTagKind::Call:
        opens_.push_back({e.src, e.dst, e.callsite});
        break;
      case CallTagKind::Return:
        closes_.push_back({e.src, e.dst, e.callsite});
        break;
      }
    }
    buildDerived();
  }

  const char *name() const override { return "cfl"; }

  DynBitset forward(const std::vector<VertexId> &starts,
                    ReachCounters &c) override {
    return reachImage(starts, c, /*fwd=*/true);
  }
  DynBitset backward(const std::vector<VertexId> &starts,
                     ReachCounters &c) override {
    return reachImage(starts, c, /*fwd=*/false);
  }

  DynBitset forwardEdges(const std::vector<VertexId> &starts,
                         ReachCounters &c) override {
    return edgeImage(starts, c, /*fwd=*/true);
  }
  DynBitset backwardEdges(const std::vector<VertexId> &starts,
                          ReachCounters &c) override {
    return edgeImage(starts, c, /*fwd=*/false);
  }

private:
  struct Tagged {
    VertexId src, dst;
    int k;
  };

  const Pdg &pdg_;
  std::vector<std::vector<VertexId>> eps_, epsRev_;
  std::vector<Tagged> opens_, closes_; // forward orientation
  std::vector<std::vector<VertexId>> derived_, derivedRev_;

  // Matched-pair folding: whenever open_k reaches close_k through a fully
  // matched interior, connect the outside endpoints.
  void buildDerived() {
    std::set<std::pair<VertexId, VertexId>> have;
    bool changed = true;
    ReachCounters scratch;
    while (changed) {
      changed = false;
      for (const auto &o : opens_) {
        DynBitset img = balancedImage({o.dst}, scratch, true);
        for (const auto &cl : closes_) {
          if (cl.k != o.k || !img.test(cl.src))
            continue;
          if (have.emplace(o.src, cl.dst).second) {
            derived_[o.src].push_back(cl.dst);
            derivedRev_[cl.dst].push_back(o.src);
            changed = true;
          }
        }
      }
    }
    for (auto &v : derived_)
      std::sort(v.begin(), v.end());
    for (auto &v : derivedRev_)
      std::sort(v.begin(), v.end());
  }

  // Reachability through fully matched strings only.
  DynBitset balancedImage(const std::vector<VertexId> &starts,
                          ReachCounters &c, bool fwd) {
    DynBitset seen(pdg_.numVertices());
    std::deque<VertexId> work;
    auto push = [&](VertexId v) {
      if (!seen.test(v)) {
        seen.set(v);
        ++c.vertexVisits;
        work.push_back(v);
      }
    };
    for (VertexId s : starts)
      push(s);
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      for (VertexId w : fwd ? eps_[v] : epsRev_[v]) {
        ++c.edgeVisits;
        push(w);
      }
      for (VertexId w : fwd ? derived_[v] : derivedRev_[v]) {
        ++c.edgeVisits;
        push(w);
      }
    }
    return seen;
  }

  // Extend a balanced image across unmatched edges of one polarity, closing
  // under balanced steps after each crossing.
  void extend(DynBitset &seen, ReachCounters &c, bool fwd,
              const std::vector<Tagged> &tagged, bool useSrcAsFrom) {
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<VertexId> next;
      for (const auto &t : tagged) {
        VertexId from = useSrcAsFrom ? t.src : t.dst;
        VertexId to = useSrcAsFrom ? t.dst : t.src;
        ++c.edgeVisits;
        if (seen.test(from) && !seen.test(to))
          next.push_back(to);
      }
      if (next.empty())
        break;
      DynBitset add = balancedImage(next, c, fwd);
      grew = seen.orWith(add);
    }
  }

  // Unmatched exits first (the context-ascending stage), then unmatched
  // entries. Walking backward, call edges are the exits and return edges
  // the entries.
  DynBitset reachImage(const std::vector<VertexId> &starts, ReachCounters &c,
                       bool fwd) {
    DynBitset seen = balancedImage(starts, c, fwd);
    extend(seen, c, fwd, fwd ? closes_ : opens_, /*useSrcAsFrom=*/fwd);
    extend(seen, c, fwd, fwd ? opens_ : closes_, /*useSrcAsFrom=*/fwd);
    return seen;
  }

  // The exit stage alone: no unmatched entry crossed yet.
  DynBitset closureImage(const std::vector<VertexId> &starts,
                         ReachCounters &c, bool fwd) {
    DynBitset seen = balancedImage(starts, c, fwd);
    extend(seen, c, fwd, fwd ? closes_ : opens_, fwd);
    return seen;
  }

  DynBitset edgeImage(const std::vector<VertexId> &starts, ReachCounters &c,
                      bool fwd) {
    DynBitset full = reachImage(starts, c, fwd);
    DynBitset noCalls = closureImage(starts, c, fwd);
    DynBitset result(pdg_.numDataEdges());

    // Per callsite: where matched interiors beginning right after one of our
    // reachable unmatched-call crossings can end up.
    std::map<int, DynBitset> matchedInterior;
    const auto &unmatchedIn = fwd ? opens_ : closes_;
    for (const auto &t : unmatchedIn) {
      VertexId from = fwd ? t.src : t.dst;
      VertexId into = fwd ? t.dst : t.src;
      if (!full.test(from))
        continue;
      auto [it, inserted] =
          matchedInterior.emplace(t.k, DynBitset(pdg_.numVertices()));
      DynBitset img = balancedImage({into}, c, fwd);
      it->second.orWith(img);
    }

    for (const auto &e : pdg_.dataEdges()) {
      VertexId from = fwd ? e.src : e.dst;
      bool usable = false;
      switch (e.tag) {
      case CallTagKind::None:
        usable = full.test(from);
        break;
      case CallTagKind::Call:
        usable = fwd ? full.test(from)
                     // backward, a call edge closes a context: legal from the
                     // no-unmatched-entry zone or under a matching entry
                     : (noCalls.test(from) || inMatched(matchedInterior,
                                                        e.callsite, from));
        break;
      case CallTagKind::Return:
        usable = fwd ? (noCalls.test(from) ||
                        inMatched(matchedInterior, e.callsite, from))
                     : full.test(from);
        break;
      }
      if (usable)
        result.set(e.id);
    }
    return result;
  }

  static bool inMatched(const std::map<int, DynBitset> &m, int k,
                        VertexId v) {
    auto it = m.find(k);
    return it != m.end() && it->second.test(v);
  }

};

} // namespace

std::unique_ptr<ReachabilityBackend> makeCflBackend(const Pdg &pdg) {
  return std::make_unique<CflBackend>(pdg);
}

} // namespace vflite
