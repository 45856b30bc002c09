#include "vflite/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <utility>

namespace vflite {
namespace {

/// One way a guard's condition can be established: a backward chain from the
/// condition operand to a terminal definition (parameter, source, or null
/// constant), with callee summaries folded in where the chain crosses calls.
struct GuardVariant {
  std::vector<Atom> atoms;          // chain constraints; the guard's own
                                    // comparison is added by the host row
  std::vector<SummaryId> prov;      // conditions folded into the chain
  std::vector<SummaryId> lineage;   // rows inlined into the chain
  std::vector<PathStep> chain;      // head-first flow into the operand
  int splices = 0;                  // call boundaries crossed
  std::optional<SummaryId> row;     // materialized chain row, if any
};

/// Structural identity of a row. Re-deriving the same flow (e.g. in a later
/// fixpoint round) must not add a row or spend a solver call.
struct RowKey {
  FuncId owner;
  SummaryKind kind;
  std::vector<PathStep> path;
  std::vector<Atom> atoms;

  auto operator<=>(const RowKey &) const = default;
};

class Engine {
public:
  Engine(const Program &prog, const Pdg &pdg, const CallGraph &cg,
         const NecessarySet *filter, SolverInterface &solver,
         ContextTable &ctxs, const EngineConfig &cfg)
      : prog_(prog), pdg_(pdg), cg_(cg), filter_(filter), solver_(solver),
        ctxs_(ctxs), cfg_(cfg), store_(prog.functions.size()) {
    const std::size_t nf = prog.functions.size();
    fullyCollected_.assign(nf, 0);
    inProgress_.assign(nf, 0);
    saturated_.assign(nf, 0);
    rowCount_.assign(nf, 0);
    gatedDone_.resize(nf);
    fullDone_.resize(nf);
    parallel_ = cfg.jobs > 1;
  }

  AnalysisResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t calls0 = solver_.callCount();

    for (const auto &layer : cg_.layers)
      runLayer(layer);

    solveFlows();
    buildBugs();

    metrics_.sAll = store_.size();
    for (const Summary &s : store_.rows())
      ++metrics_.storedByKind[summaryKindName(s.kind)];
    metrics_.solverCalls = solver_.callCount() - calls0;
    writeCapNotes();
    metrics_.soundnessFlag = metrics_.pathLenCapHits > 0 ||
                             metrics_.summaryCapHits > 0 ||
                             metrics_.guardDepthCapHits > 0 ||
                             metrics_.sccNonConverged;
    if (cfg_.collectTiming)
      metrics_.wallSeconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
    return AnalysisResult{std::move(store_), std::move(bugs_),
                          std::move(metrics_)};
  }

private:
  // All shared state is guarded by one recursive lock, engaged only when
  // worker threads exist. Demand collection and guard instantiation re-enter
  // through the same thread, hence recursive.
  struct Locker {
    explicit Locker(Engine &e) : e_(e) {
      if (e_.parallel_)
        e_.mu_.lock();
    }
    ~Locker() {
      if (e_.parallel_)
        e_.mu_.unlock();
    }
    Locker(const Locker &) = delete;
    Locker &operator=(const Locker &) = delete;
    Engine &e_;
  };

  struct DfsState {
    FuncId f = kNoFunc;
    bool srcPass = false; // head is a source (or a cloned one): tails make
                          // Output/SourceSink instead of Transfer/Input
    bool gated = true;    // false during demand collection: every gate lifted
    std::vector<PathStep> steps;
    std::vector<Atom> atoms;
    std::vector<SummaryId> lineage;
    std::vector<VertexId> occ; // guards labeling traversed edges, first-seen
    std::set<VertexId> onPath; // root-level vertices, for simple paths
  };

  struct StackMark {
    std::size_t steps, atoms, lineage, occ;
  };

  /// Backward chain in progress while instantiating one guard. Branching
  /// copies the state, so each completed branch is independent.
  struct ChainState {
    std::vector<Atom> atoms;
    std::vector<SummaryId> prov;
    std::vector<SummaryId> lineage;
    std::vector<PathStep> rchain; // tail-first; reversed on completion
    std::set<VertexId> onChain;
    int splices = 0;
  };

  bool effGated(const DfsState &st) const {
    return st.gated && filter_ != nullptr;
  }
  bool inVn(VertexId v) const { return filter_->vn.test(v); }

  static Atom flowEq(Term a, Term b) {
    return Atom{AtomKind::FlowEq, a, b, ""};
  }

  /// The comparison a guard vertex stands for, over root-context terms.
  Atom guardOwnAtom(VertexId g) const {
    const GuardAtomInfo &ai = *pdg_.vertex(g).guardAtom;
    AtomKind k = ai.op == CmpOp::EqNull ? AtomKind::NullEq : AtomKind::NullNe;
    return Atom{k, {ai.operand, kRootCtx}, {ai.literal, kRootCtx}, ""};
  }

  Atom renameAtom(Atom a, int callsite) {
    if (a.kind == AtomKind::Opaque)
      return a;
    a.a.ctx = ctxs_.composeAtCall(a.a.ctx, callsite);
    a.b.ctx = ctxs_.composeAtCall(a.b.ctx, callsite);
    return a;
  }

  // ---------------------------------------------------------------- layers

  void runLayer(const std::vector<FuncId> &layer) {
    // One task per component: cyclic groups iterate as a unit.
    std::vector<std::vector<FuncId>> tasks;
    std::map<std::uint32_t, std::size_t> slot;
    for (FuncId f : layer) {
      auto [it, fresh] = slot.emplace(cg_.sccId[f], tasks.size());
      if (fresh)
        tasks.emplace_back();
      tasks[it->second].push_back(f);
    }

    if (!parallel_ || tasks.size() < 2) {
      for (const auto &t : tasks)
        runTask(t);
      return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr firstError;
    std::mutex errMu;
    unsigned n = std::min<std::size_t>(cfg_.jobs, tasks.size());
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t t = next.fetch_add(1);
          if (t >= tasks.size())
            return;
          try {
            runTask(tasks[t]);
          } catch (...) {
            std::lock_guard<std::mutex> g(errMu);
            if (!firstError)
              firstError = std::current_exception();
            return;
          }
        }
      });
    for (auto &th : pool)
      th.join();
    if (firstError)
      std::rethrow_exception(firstError);
  }

  void runTask(const std::vector<FuncId> &fns) {
    {
      Locker l(*this);
      activeGroup_.insert(fns.begin(), fns.end());
    }
    bool cyclic = fns.size() > 1 || cg_.inCycle(fns[0]);
    if (!cyclic) {
      collectFunction(fns[0], /*gated=*/true);
    } else {
      bool grew = true;
      for (std::size_t iter = 0; iter < cfg_.sccIters && grew; ++iter) {
        {
          Locker l(*this);
          for (FuncId f : fns) {
            gatedDone_[f].clear();
            fullDone_[f].clear();
          }
          // Chains through this component lengthen as its stores grow.
          guardMemo_.clear();
        }
        grew = false;
        for (FuncId f : fns)
          grew = collectFunction(f, /*gated=*/true) || grew;
      }
      if (grew) {
        Locker l(*this);
        metrics_.sccNonConverged = true;
      }
    }
    {
      Locker l(*this);
      for (FuncId f : fns) {
        activeGroup_.erase(f);
        // With a filter some heads were skipped, so later demand must still
        // be able to lift the gates.
        if (!filter_)
          fullyCollected_[f] = 1;
      }
    }
  }

  // ----------------------------------------------------------- collection

  /// Returns whether anything was appended to the log.
  bool collectFunction(FuncId f, bool gated) {
    std::size_t before;
    {
      Locker l(*this);
      before = store_.size();
      inProgress_[f] = 1;
    }

    for (VertexId fp : pdg_.paramsOf(f)) {
      if (gated && filter_ && !inVn(fp))
        continue;
      if (!claimHead(f, fp, gated))
        continue;
      DfsState st;
      st.f = f;
      st.srcPass = false;
      st.gated = gated;
      st.steps.push_back({fp, kRootCtx});
      st.onPath.insert(fp);
      visit(st, fp);
    }

    // Sources are never gated: a reportable flow always starts at one.
    for (VertexId v : pdg_.verticesOf(f)) {
      if (!pdg_.vertex(v).isSource)
        continue;
      if (!claimHead(f, v, gated))
        continue;
      DfsState st;
      st.f = f;
      st.srcPass = true;
      st.gated = gated;
      st.steps.push_back({v, kRootCtx});
      st.onPath.insert(v);
      visit(st, v);
    }

    // Callsite results: adopt callee source flows and keep walking.
    for (VertexId ar : pdg_.verticesOf(f)) {
      if (pdg_.vertex(ar).kind != VertexKind::ActualRet)
        continue;
      if (gated && filter_ && !inVn(ar))
        continue;
      if (!claimHead(f, ar, gated))
        continue;
      runResultHead(f, ar, gated);
    }

    bool grew;
    {
      Locker l(*this);
      grew = store_.size() > before;
      inProgress_[f] = 0;
    }
    return grew;
  }

  /// Head bookkeeping: an ungated walk covers the gated one, but not the
  /// other way around — demand must be able to re-run a gated head.
  bool claimHead(FuncId f, VertexId head, bool gated) {
    Locker l(*this);
    if (fullDone_[f].count(head))
      return false;
    if (gated && filter_) {
      if (gatedDone_[f].count(head))
        return false;
      gatedDone_[f].insert(head);
    } else {
      fullDone_[f].insert(head);
    }
    return true;
  }

  /// Run every head of `callee` with the gates lifted. No-op once complete;
  /// re-entry during the callee's own collection just uses the rows so far.
  void demandCollect(FuncId callee) {
    Locker l(*this);
    if (fullyCollected_[callee] || inProgress_[callee])
      return;
    collectFunction(callee, /*gated=*/false);
    // Inside a still-iterating component the store keeps growing, so leave
    // the function demandable; the next demand re-runs its heads.
    if (!activeGroup_.count(callee))
      fullyCollected_[callee] = 1;
  }

  void runResultHead(FuncId f, VertexId ar, bool gated) {
    const DataEdge *ret = nullptr;
    for (EdgeId eid : pdg_.inEdges(ar)) {
      const DataEdge &e = pdg_.edge(eid);
      if (e.tag == CallTagKind::Return) {
        ret = &e;
        break;
      }
    }
    if (!ret)
      return;
    FuncId callee = pdg_.vertex(ret->src).func;
    int k = ret->callsite;
    if (filter_ && !gated)
      demandCollect(callee);

    for (const Summary &s :
         storedSnapshot(callee, SummaryKind::Output, ret->src, false)) {
      if (s.path.size() + 1 > cfg_.maxPathLen) {
        notePathCap();
        continue;
      }
      std::optional<SummaryId> clone = getClone(s, k, f);
      if (!clone)
        continue;
      DfsState st;
      st.f = f;
      st.srcPass = true;
      st.gated = gated;
      for (const PathStep &p : s.path)
        st.steps.push_back({p.v, ctxs_.composeAtCall(p.ctx, k)});
      for (const Atom &a : s.cond.atoms())
        st.atoms.push_back(renameAtom(a, k));
      st.atoms.push_back(flowEq(
          {ret->src, ctxs_.composeAtCall(s.path.back().ctx, k)},
          {ar, kRootCtx}));
      st.steps.push_back({ar, kRootCtx});
      st.onPath.insert(ar);
      st.lineage.push_back(*clone);
      visit(st, ar);
    }
  }

  // ------------------------------------------------------------- walking

  void visit(DfsState &st, VertexId v) {
    {
      Locker l(*this);
      if (saturated_[st.f])
        return;
    }
    const Vertex &vx = pdg_.vertex(v);
    if (st.steps.size() > 1) {
      if (vx.kind == VertexKind::FormalRet) {
        if (!(effGated(st) && !inVn(v)))
          materializeRow(st, st.srcPass ? SummaryKind::Output
                                        : SummaryKind::Transfer);
        return;
      }
      if (vx.isSink) {
        materializeRow(st, st.srcPass ? SummaryKind::SourceSink
                                      : SummaryKind::Input);
        return;
      }
    }
    if (st.steps.size() >= cfg_.maxPathLen) {
      notePathCap();
      return;
    }
    for (EdgeId eid : pdg_.outEdges(v)) {
      const DataEdge &e = pdg_.edge(eid);
      if (e.tag == CallTagKind::Return)
        continue; // returned flows complete at the formal return instead
      if (e.tag == CallTagKind::Call) {
        crossCall(st, v, e);
        continue;
      }
      if (pdg_.vertex(e.dst).kind == VertexKind::Guard)
        continue; // condition feeds, not value flow
      if (st.onPath.count(e.dst))
        continue;
      StackMark m = mark(st);
      st.atoms.push_back(flowEq({v, kRootCtx}, {e.dst, kRootCtx}));
      if (e.labeled() &&
          std::find(st.occ.begin(), st.occ.end(), e.guard) == st.occ.end())
        st.occ.push_back(e.guard);
      st.steps.push_back({e.dst, kRootCtx});
      st.onPath.insert(e.dst);
      visit(st, e.dst);
      restore(st, m, e.dst);
    }
  }

  void crossCall(DfsState &st, VertexId ap, const DataEdge &call) {
    if (effGated(st) && !inVn(ap))
      return;
    VertexId fp = call.dst;
    FuncId callee = pdg_.vertex(fp).func;
    int k = call.callsite;
    if (filter_ && !st.gated)
      demandCollect(callee);

    // Pass-through flows: inline and resume at the callsite result.
    for (const Summary &s :
         storedSnapshot(callee, SummaryKind::Transfer, fp, true)) {
      auto retE = pdg_.returnEdgeAt(s.tail(), k);
      if (!retE)
        continue; // result discarded at this callsite
      VertexId ar = pdg_.edge(*retE).dst;
      if (st.onPath.count(ar))
        continue;
      if (st.steps.size() + s.path.size() + 1 > cfg_.maxPathLen) {
        notePathCap();
        continue;
      }
      StackMark m = mark(st);
      st.atoms.push_back(flowEq(
          {ap, kRootCtx},
          {fp, ctxs_.composeAtCall(s.path.front().ctx, k)}));
      appendRenamed(st, s, k);
      st.atoms.push_back(flowEq(
          {s.path.back().v, ctxs_.composeAtCall(s.path.back().ctx, k)},
          {ar, kRootCtx}));
      st.lineage.push_back(s.id);
      st.steps.push_back({ar, kRootCtx});
      st.onPath.insert(ar);
      visit(st, ar);
      restore(st, m, ar);
    }

    // Absorbed flows: the callee already walked the value into a sink.
    for (const Summary &s :
         storedSnapshot(callee, SummaryKind::Input, fp, true)) {
      if (st.steps.size() + s.path.size() > cfg_.maxPathLen) {
        notePathCap();
        continue;
      }
      StackMark m = mark(st);
      st.atoms.push_back(flowEq(
          {ap, kRootCtx},
          {fp, ctxs_.composeAtCall(s.path.front().ctx, k)}));
      appendRenamed(st, s, k);
      st.lineage.push_back(s.id);
      materializeRow(st, st.srcPass ? SummaryKind::SourceSink
                                    : SummaryKind::Input);
      restore(st, m, kNoVertex);
    }
  }

  void appendRenamed(DfsState &st, const Summary &s, int k) {
    for (const PathStep &p : s.path)
      st.steps.push_back({p.v, ctxs_.composeAtCall(p.ctx, k)});
    for (const Atom &a : s.cond.atoms())
      st.atoms.push_back(renameAtom(a, k));
  }

  StackMark mark(const DfsState &st) const {
    return {st.steps.size(), st.atoms.size(), st.lineage.size(),
            st.occ.size()};
  }

  void restore(DfsState &st, const StackMark &m, VertexId pushedRoot) {
    st.steps.resize(m.steps);
    st.atoms.resize(m.atoms);
    st.lineage.resize(m.lineage);
    st.occ.resize(m.occ);
    if (pushedRoot != kNoVertex)
      st.onPath.erase(pushedRoot);
  }

  // -------------------------------------------------------------- guards

  /// Every way the guard's condition operand can get its value. Never gated:
  /// a pruned callee row that only a condition needs is pulled back in here.
  std::vector<GuardVariant> instantiateGuard(FuncId f, VertexId g,
                                             std::size_t depth) {
    {
      Locker l(*this);
      auto it = guardMemo_.find(g);
      if (it != guardMemo_.end())
        return it->second;
      auto &busy = guardBusy_[std::this_thread::get_id()];
      if (depth >= cfg_.guardDepth || busy.count(g)) {
        ++metrics_.guardDepthCapHits;
        GuardVariant v;
        v.atoms.push_back(Atom{AtomKind::Opaque,
                               {},
                               {},
                               "support chain at " + pdg_.display(g) +
                                   " not expanded"});
        return {std::move(v)};
      }
      busy.insert(g);
    }

    std::vector<GuardVariant> out;
    VertexId operand = pdg_.vertex(g).guardAtom->operand;
    ChainState cs;
    cs.rchain.push_back({operand, kRootCtx});
    cs.onChain.insert(operand);
    chainBack(f, operand, depth, cs, out);

    {
      Locker l(*this);
      guardMemo_[g] = out;
      guardBusy_[std::this_thread::get_id()].erase(g);
    }
    return out;
  }

  void chainBack(FuncId f, VertexId v, std::size_t depth, ChainState &cs,
                 std::vector<GuardVariant> &out) {
    const Vertex &vx = pdg_.vertex(v);
    bool terminal = (vx.kind == VertexKind::Param && vx.func == f) ||
                    vx.isSource || vx.kind == VertexKind::NullConst;
    if (terminal) {
      finishVariant(f, cs, out);
      return;
    }
    if (cs.rchain.size() >= cfg_.maxPathLen) {
      notePathCap();
      finishVariant(f, cs, out);
      return;
    }

    bool extended = false;
    for (EdgeId eid : pdg_.inEdges(v)) {
      const DataEdge &e = pdg_.edge(eid);
      if (e.tag == CallTagKind::Call)
        continue;
      if (e.tag == CallTagKind::Return) {
        extended |= chainAcrossReturn(f, v, e, depth, cs, out);
        continue;
      }
      VertexId u = e.src;
      if (cs.onChain.count(u))
        continue;
      if (e.labeled()) {
        // The feeding copy was itself conditional: fold in that guard too.
        for (const GuardVariant &nv : instantiateGuard(f, e.guard, depth + 1)) {
          ChainState c = cs;
          c.atoms.push_back(flowEq({u, kRootCtx}, {v, kRootCtx}));
          c.atoms.push_back(guardOwnAtom(e.guard));
          c.atoms.insert(c.atoms.end(), nv.atoms.begin(), nv.atoms.end());
          absorbProv(c.prov, nv);
          c.rchain.push_back({u, kRootCtx});
          c.onChain.insert(u);
          extended = true;
          chainBack(f, u, depth, c, out);
        }
      } else {
        ChainState c = cs;
        c.atoms.push_back(flowEq({u, kRootCtx}, {v, kRootCtx}));
        c.rchain.push_back({u, kRootCtx});
        c.onChain.insert(u);
        extended = true;
        chainBack(f, u, depth, c, out);
      }
    }
    if (!extended)
      finishVariant(f, cs, out); // dead end: keep the partial constraints
  }

  /// `v` is a callsite result; continue the chain through the callee's
  /// stored rows. Returns whether any branch extended the chain.
  bool chainAcrossReturn(FuncId f, VertexId v, const DataEdge &ret,
                         std::size_t depth, const ChainState &cs,
                         std::vector<GuardVariant> &out) {
    VertexId fr = ret.src;
    FuncId callee = pdg_.vertex(fr).func;
    int k = ret.callsite;
    if (filter_)
      demandCollect(callee);

    bool extended = false;
    for (const Summary &s :
         storedSnapshot(callee, SummaryKind::Transfer, fr, false)) {
      if (cs.rchain.size() + s.path.size() + 1 > cfg_.maxPathLen) {
        notePathCap();
        continue;
      }
      // Locate the actual argument feeding this parameter at callsite k.
      VertexId ap = kNoVertex;
      for (EdgeId ein : pdg_.inEdges(s.head())) {
        const DataEdge &ce = pdg_.edge(ein);
        if (ce.tag == CallTagKind::Call && ce.callsite == k) {
          ap = ce.src;
          break;
        }
      }
      ChainState c = cs;
      c.atoms.push_back(flowEq(
          {fr, ctxs_.composeAtCall(s.path.back().ctx, k)}, {v, kRootCtx}));
      appendRenamedChain(c, s, k);
      c.prov.push_back(s.id);
      c.prov.insert(c.prov.end(), s.cond.provenance().begin(),
                    s.cond.provenance().end());
      c.lineage.push_back(s.id);
      ++c.splices;
      if (ap == kNoVertex || c.onChain.count(ap)) {
        extended = true;
        finishVariant(f, c, out);
        continue;
      }
      c.atoms.push_back(flowEq(
          {ap, kRootCtx},
          {s.head(), ctxs_.composeAtCall(s.path.front().ctx, k)}));
      c.rchain.push_back({ap, kRootCtx});
      c.onChain.insert(ap);
      extended = true;
      chainBack(f, ap, depth, c, out);
    }

    for (const Summary &s :
         storedSnapshot(callee, SummaryKind::Output, fr, false)) {
      if (cs.rchain.size() + s.path.size() > cfg_.maxPathLen) {
        notePathCap();
        continue;
      }
      std::optional<SummaryId> clone = getClone(s, k, f);
      if (!clone)
        continue;
      ChainState c = cs;
      c.atoms.push_back(flowEq(
          {fr, ctxs_.composeAtCall(s.path.back().ctx, k)}, {v, kRootCtx}));
      appendRenamedChain(c, s, k);
      {
        Locker l(*this);
        const PathCondition &cc = store_.row(*clone).cond;
        c.prov.push_back(*clone);
        c.prov.insert(c.prov.end(), cc.provenance().begin(),
                      cc.provenance().end());
      }
      c.lineage.push_back(*clone);
      ++c.splices;
      extended = true;
      finishVariant(f, c, out); // the chain bottomed out at a source
    }
    return extended;
  }

  void appendRenamedChain(ChainState &cs, const Summary &s, int k) {
    for (auto it = s.path.rbegin(); it != s.path.rend(); ++it)
      cs.rchain.push_back({it->v, ctxs_.composeAtCall(it->ctx, k)});
    for (const Atom &a : s.cond.atoms())
      cs.atoms.push_back(renameAtom(a, k));
  }

  void absorbProv(std::vector<SummaryId> &prov, const GuardVariant &gv) {
    if (gv.row) {
      Locker l(*this);
      prov.push_back(*gv.row);
      const auto &p = store_.row(*gv.row).cond.provenance();
      prov.insert(prov.end(), p.begin(), p.end());
    } else {
      prov.insert(prov.end(), gv.prov.begin(), gv.prov.end());
    }
  }

  void finishVariant(FuncId f, const ChainState &cs,
                     std::vector<GuardVariant> &out) {
    GuardVariant v;
    v.atoms = cs.atoms;
    v.prov = cs.prov;
    v.lineage = cs.lineage;
    v.chain.assign(cs.rchain.rbegin(), cs.rchain.rend());
    v.splices = cs.splices;
    // A chain that crossed a call is itself a reusable record: log it so the
    // flows it supports can point at it.
    if (v.splices > 0)
      v.row = emitRow(f, SummaryKind::Guard, v.chain,
                      PathCondition(v.atoms, v.prov), v.lineage);
    out.push_back(std::move(v));
  }

  // ----------------------------------------------------------- emission

  void materializeRow(DfsState &st, SummaryKind kind) {
    std::vector<std::vector<GuardVariant>> vsets;
    vsets.reserve(st.occ.size());
    for (VertexId g : st.occ)
      vsets.push_back(instantiateGuard(st.f, g, 0));

    std::vector<std::size_t> idx(vsets.size(), 0);
    for (;;) {
      emitCombo(st, kind, vsets, idx);
      std::size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < vsets[i].size())
          break;
        idx[i] = 0;
      }
      if (i == idx.size())
        break;
    }
  }

  void emitCombo(DfsState &st, SummaryKind kind,
                 const std::vector<std::vector<GuardVariant>> &vsets,
                 const std::vector<std::size_t> &idx) {
    std::vector<Atom> atoms = st.atoms;
    std::vector<SummaryId> prov;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const GuardVariant &gv = vsets[i][idx[i]];
      atoms.push_back(guardOwnAtom(st.occ[i]));
      atoms.insert(atoms.end(), gv.atoms.begin(), gv.atoms.end());
      absorbProv(prov, gv);
    }
    emitRow(st.f, kind, st.steps, PathCondition(std::move(atoms), prov),
            st.lineage);
  }

  /// Append one row, structurally deduplicated; immediate kinds get their
  /// solver verdict here, flows wait until every layer is done.
  std::optional<SummaryId> emitRow(FuncId f, SummaryKind kind,
                                   const std::vector<PathStep> &path,
                                   PathCondition cond,
                                   const std::vector<SummaryId> &lineage) {
    Locker l(*this);
    if (rowCount_[f] >= cfg_.maxSummaries) {
      saturated_[f] = 1;
      ++metrics_.summaryCapHits;
      return std::nullopt;
    }
    RowKey key{f, kind, path, cond.atoms()};
    if (auto it = structSeen_.find(key); it != structSeen_.end())
      return it->second;

    Summary s;
    s.owner = f;
    s.kind = kind;
    s.path = path;
    s.cond = std::move(cond);
    s.cloneLineage = lineage;
    SummaryId id = store_.append(std::move(s));
    ++rowCount_[f];
    structSeen_.emplace(std::move(key), id);

    if (kind == SummaryKind::SourceSink) {
      flowRows_.push_back(id);
      return id;
    }
    Summary &row = store_.row(id);
    row.solved = true;
    row.sat = solver_.check(row.cond, pdg_) == SatResult::Sat;
    if (!row.sat)
      ++metrics_.discardedUnsat;
    else if (kind != SummaryKind::Guard)
      store_.markStored(id);
    return id;
  }

  std::optional<SummaryId> getClone(const Summary &s, int k, FuncId owner) {
    Locker l(*this);
    auto key = std::make_pair(s.id, k);
    if (auto it = cloneMemo_.find(key); it != cloneMemo_.end())
      return it->second;
    if (rowCount_[owner] >= cfg_.maxSummaries) {
      saturated_[owner] = 1;
      ++metrics_.summaryCapHits;
      return std::nullopt;
    }
    Summary c;
    c.owner = owner;
    c.kind = s.kind;
    for (const PathStep &p : s.path)
      c.path.push_back({p.v, ctxs_.composeAtCall(p.ctx, k)});
    std::vector<Atom> atoms;
    atoms.reserve(s.cond.atoms().size());
    for (const Atom &a : s.cond.atoms())
      atoms.push_back(renameAtom(a, k));
    c.cond = PathCondition(std::move(atoms), s.cond.provenance());
    c.clonedFrom = s.id;
    c.cloneSite = k;
    c.solved = true; // verdict carries over; renaming cannot change it
    c.sat = s.sat;
    SummaryId id = store_.append(std::move(c));
    ++rowCount_[owner];
    cloneMemo_.emplace(key, id);
    return id;
  }

  std::vector<Summary> storedSnapshot(FuncId f, SummaryKind kind, VertexId at,
                                      bool matchHead) {
    Locker l(*this);
    std::vector<Summary> out;
    for (SummaryId id : store_.storedOf(f)) {
      const Summary &s = store_.row(id);
      if (s.kind != kind)
        continue;
      if ((matchHead ? s.head() : s.tail()) != at)
        continue;
      out.push_back(s);
    }
    return out;
  }

  void notePathCap() {
    Locker l(*this);
    ++metrics_.pathLenCapHits;
  }

  // ------------------------------------------------------------- results

  void solveFlows() {
    std::sort(flowRows_.begin(), flowRows_.end());
    for (SummaryId id : flowRows_) {
      Summary &row = store_.row(id);
      row.solved = true;
      row.sat = solver_.check(row.cond, pdg_) == SatResult::Sat;
      if (!row.sat)
        ++metrics_.discardedUnsat;
    }
  }

  void buildBugs() {
    std::set<std::vector<std::pair<VertexId, CtxId>>> seen;
    for (SummaryId id : flowRows_) {
      const Summary &row = store_.row(id);
      if (!row.sat)
        continue;
      std::vector<std::pair<VertexId, CtxId>> key;
      key.reserve(row.path.size());
      for (const PathStep &p : row.path)
        key.emplace_back(p.v, p.ctx);
      if (!seen.insert(std::move(key)).second)
        continue;
      bugs_.push_back(Bug{id, row.head(), row.tail(), row.path});
    }
    std::sort(bugs_.begin(), bugs_.end(), [&](const Bug &a, const Bug &b) {
      int sa = pdg_.vertex(a.source).line, sb = pdg_.vertex(b.source).line;
      if (sa != sb)
        return sa < sb;
      int ka = pdg_.vertex(a.sink).line, kb = pdg_.vertex(b.sink).line;
      if (ka != kb)
        return ka < kb;
      if (a.path.size() != b.path.size())
        return a.path.size() < b.path.size();
      for (std::size_t i = 0; i < a.path.size(); ++i) {
        if (a.path[i].v != b.path[i].v)
          return a.path[i].v < b.path[i].v;
        if (a.path[i].ctx != b.path[i].ctx)
          return a.path[i].ctx < b.path[i].ctx;
      }
      return false;
    });
  }

  void writeCapNotes() {
    auto &notes = metrics_.notes;
    if (metrics_.pathLenCapHits)
      notes.push_back("path length cap (" + std::to_string(cfg_.maxPathLen) +
                      " steps) pruned " +
                      std::to_string(metrics_.pathLenCapHits) + " walks");
    if (metrics_.summaryCapHits)
      notes.push_back("summary cap (" + std::to_string(cfg_.maxSummaries) +
                      " rows per function) suppressed " +
                      std::to_string(metrics_.summaryCapHits) + " rows");
    if (metrics_.guardDepthCapHits)
      notes.push_back("guard support depth cap (" +
                      std::to_string(cfg_.guardDepth) + ") left " +
                      std::to_string(metrics_.guardDepthCapHits) +
                      " conditions opaque");
    if (metrics_.sccNonConverged)
      notes.push_back("recursive component failed to stabilize within " +
                      std::to_string(cfg_.sccIters) + " rounds");
  }

  // ------------------------------------------------------------- members

  const Program &prog_;
  const Pdg &pdg_;
  const CallGraph &cg_;
  const NecessarySet *filter_;
  SolverInterface &solver_;
  ContextTable &ctxs_;
  EngineConfig cfg_;

  SummaryStore store_;
  EngineMetrics metrics_;
  std::vector<Bug> bugs_;

  bool parallel_ = false;
  std::recursive_mutex mu_;

  std::vector<char> fullyCollected_;
  std::vector<char> inProgress_;
  std::vector<char> saturated_;
  std::vector<std::size_t> rowCount_;
  std::vector<std::set<VertexId>> gatedDone_;
  std::vector<std::set<VertexId>> fullDone_;
  std::set<FuncId> activeGroup_;

  std::map<RowKey, SummaryId> structSeen_;
  std::map<std::pair<SummaryId, int>, SummaryId> cloneMemo_;
  std::map<VertexId, std::vector<GuardVariant>> guardMemo_;
  std::map<std::thread::id, std::set<VertexId>> guardBusy_;
  std::vector<SummaryId> flowRows_; // source-to-sink rows, solve-deferred
};

} // namespace

AnalysisResult runEngine(const Program &prog, const Pdg &pdg,
                         const CallGraph &cg, const NecessarySet *filter,
                         SolverInterface &solver, ContextTable &ctxs,
                         const EngineConfig &config) {
  Engine eng(prog, pdg, cg, filter, solver, ctxs, config);
  return eng.run();
}

} // namespace vflite
