#include "run_helpers.hpp"

#include "vflite/reach.hpp"

#include <algorithm>
#include <map>

namespace vflite::testsupport {

Analysis analyzeText(const std::string &text) {
  Analysis a;
  a.prog = parseProgram(text);
  a.pdg = buildPdg(a.prog);
  a.cg = buildCallGraph(a.prog);
  return a;
}

EngineRun runFusion(const Analysis &a, const EngineConfig &cfg) {
  EngineRun run;
  auto solver = makeBuiltinSolver();
  run.result =
      runEngine(a.prog, a.pdg, a.cg, nullptr, *solver, run.ctxs, cfg);
  return run;
}

EngineRun runLight(const Analysis &a, const std::string &backend,
                   const EngineConfig &cfg) {
  EngineRun run;
  auto reach =
      backend == "cfl" ? makeCflBackend(a.pdg) : makeBfsBackend(a.pdg);
  run.ns = identifyContrib(a.pdg, *reach, cfg.collectTiming);
  auto solver = makeBuiltinSolver();
  run.result =
      runEngine(a.prog, a.pdg, a.cg, &*run.ns, *solver, run.ctxs, cfg);
  return run;
}

namespace {

std::string ctxKey(CtxId c, const ContextTable &ctxs) {
  std::string out;
  for (int line : ctxs.stack(c)) {
    out += '#';
    out += std::to_string(line);
  }
  return out;
}

std::string stepKey(const PathStep &st, const ContextTable &ctxs,
                    const Pdg &pdg) {
  return pdg.display(st.v) + ctxKey(st.ctx, ctxs);
}

} // namespace

std::vector<std::string> bugKeys(const EngineRun &run, const Pdg &pdg) {
  std::vector<std::string> keys;
  for (const Bug &b : run.result.bugs) {
    std::string k = pdg.display(b.source) + " -> " + pdg.display(b.sink);
    for (const PathStep &st : b.path) {
      k += " | ";
      k += stepKey(st, run.ctxs, pdg);
    }
    keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::string rowKey(const Summary &s, const ContextTable &ctxs,
                   const Pdg &pdg) {
  std::string k = std::to_string(s.owner);
  k += '|';
  k += summaryKindName(s.kind);
  k += '|';
  for (const PathStep &st : s.path) {
    k += stepKey(st, ctxs, pdg);
    k += '>';
  }
  k += '|';
  for (const Atom &a : s.cond.atoms()) {
    switch (a.kind) {
    case AtomKind::FlowEq:
      k += "eq:";
      break;
    case AtomKind::NullEq:
      k += "null=:";
      break;
    case AtomKind::NullNe:
      k += "null!:";
      break;
    case AtomKind::Opaque:
      k += "opq:";
      k += a.note;
      k += ';';
      continue;
    }
    k += stepKey({a.a.v, a.a.ctx}, ctxs, pdg);
    k += '~';
    k += stepKey({a.b.v, a.b.ctx}, ctxs, pdg);
    k += ';';
  }
  return k;
}

std::vector<SummaryId> prunedRows(const EngineRun &fusion,
                                  const EngineRun &pruned, const Pdg &pdg) {
  std::map<std::string, int> have;
  for (const Summary &s : pruned.result.store.rows())
    ++have[rowKey(s, pruned.ctxs, pdg)];
  std::vector<SummaryId> out;
  for (const Summary &s : fusion.result.store.rows()) {
    auto it = have.find(rowKey(s, fusion.ctxs, pdg));
    if (it != have.end() && it->second > 0)
      --it->second;
    else
      out.push_back(s.id);
  }
  return out;
}

} // namespace vflite::testsupport
