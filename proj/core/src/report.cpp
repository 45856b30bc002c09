#include "vflite/report.hpp"

#include "vflite/diag.hpp"
#include "vflite/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>

namespace vflite {

using Json = nlohmann::ordered_json;

std::string programHash(const std::string &text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return std::string("fnv1a64:") + buf;
}

namespace {

void requireSameHash(std::initializer_list<const RunRecord *> runs) {
  const std::string *first = nullptr;
  for (const RunRecord *r : runs) {
    if (!first) {
      first = &r->hash;
      continue;
    }
    if (r->hash != *first)
      throw AnalysisError("runs consumed different programs: " + *first +
                          " vs " + r->hash);
  }
}

std::string stepStr(const Pdg &pdg, const ContextTable &ctxs,
                    const PathStep &p) {
  return pdg.display(p.v) + ctxs.display(p.ctx);
}

Json bugsJson(const RunRecord &run, const Pdg &pdg) {
  Json arr = Json::array();
  for (const Bug &b : run.result->bugs) {
    Json j;
    j["source"] = pdg.display(b.source);
    j["sink"] = pdg.display(b.sink);
    j["lines"] = {pdg.vertex(b.source).line, pdg.vertex(b.sink).line};
    Json path = Json::array();
    for (const PathStep &p : b.path)
      path.push_back(stepStr(pdg, *run.ctxs, p));
    j["path"] = std::move(path);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json countersJson(const ReachCounters &c) {
  Json j;
  j["vertex_visits"] = c.vertexVisits;
  j["edge_visits"] = c.edgeVisits;
  return j;
}

Json phaseJson(const CiPhaseCounters &p) {
  Json j;
  j["fwd"] = countersJson(p.fwd);
  j["bwd"] = countersJson(p.bwd);
  return j;
}

Json ciCountersJson(const CiCounters &c) {
  Json j;
  j["path"] = phaseJson(c.path);
  j["guards"] = phaseJson(c.guards);
  j["cond"] = phaseJson(c.cond);
  return j;
}

// Every key present in every run so reports stay byte-comparable; timing
// fields render 0.0 when suppressed.
Json metricsJson(const RunRecord &run, bool withTiming) {
  const EngineMetrics &m = run.result->metrics;
  Json j;
  j["s_all"] = m.sAll;
  Json byKind;
  for (const char *k : {"transfer", "input", "output", "source_sink", "guard"}) {
    auto it = m.storedByKind.find(k);
    byKind[k] = it == m.storedByKind.end() ? 0 : it->second;
  }
  j["rows_by_kind"] = std::move(byKind);
  j["discarded_unsat"] = m.discardedUnsat;
  j["solver_calls"] = m.solverCalls;
  j["engine_time_s"] = withTiming ? m.wallSeconds : 0.0;
  j["ci_time_s"] =
      withTiming && run.filter ? run.filter->wallSeconds : 0.0;
  j["vn_size"] = run.filter ? run.filter->vn.count() : 0;
  j["nec_guards_size"] = run.filter ? run.filter->necGuards.count() : 0;
  j["ci_counters"] =
      run.filter ? ciCountersJson(run.filter->counters) : ciCountersJson({});
  Json caps;
  caps["path_len_hits"] = m.pathLenCapHits;
  caps["summary_hits"] = m.summaryCapHits;
  caps["guard_depth_hits"] = m.guardDepthCapHits;
  caps["scc_non_converged"] = m.sccNonConverged;
  j["caps"] = std::move(caps);
  j["notes"] = m.notes;
  return j;
}

Json programJson(const std::string &inputPath, const std::string &hash) {
  Json j;
  j["path"] = inputPath;
  j["hash"] = hash;
  return j;
}

std::vector<std::string> bugKeys(const RunRecord &run, const Pdg &pdg) {
  std::vector<std::string> keys;
  for (const Bug &b : run.result->bugs) {
    std::string k = pdg.display(b.source) + " -> " + pdg.display(b.sink);
    for (const PathStep &p : b.path)
      k += " | " + stepStr(pdg, *run.ctxs, p);
    keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

} // namespace

std::string buildAnalyzeReport(const std::string &inputPath,
                               const RunRecord &run, const Pdg &pdg,
                               bool withTiming) {
  requireSameHash({&run});
  Json j;
  j["schema"] = "vflite-report-v1";
  j["program"] = programJson(inputPath, run.hash);
  j["mode"] = run.mode;
  j["reach"] = run.reach;
  j["bugs"] = bugsJson(run, pdg);
  j["metrics"] = metricsJson(run, withTiming);
  j["soundness_flag"] = run.result->metrics.soundnessFlag;
  return j.dump(2) + "\n";
}

bool bugSetsEqual(const RunRecord &a, const RunRecord &b, const Pdg &pdg) {
  return bugKeys(a, pdg) == bugKeys(b, pdg);
}

DiffOutcome buildDiffReport(const std::string &inputPath,
                            const RunRecord &fusion, const RunRecord &light,
                            const RunRecord &cflLight,
                            const OracleResult &oracle,
                            const IdentificationStats &stats, const Pdg &pdg,
                            bool withTiming) {
  requireSameHash({&fusion, &light, &cflLight});

  auto runJson = [&](const RunRecord &r) {
    Json j;
    j["mode"] = r.mode;
    j["reach"] = r.reach;
    j["bugs"] = bugsJson(r, pdg);
    j["metrics"] = metricsJson(r, withTiming);
    j["soundness_flag"] = r.result->metrics.soundnessFlag;
    return j;
  };

  Json j;
  j["schema"] = "vflite-diff-v1";
  j["program"] = programJson(inputPath, fusion.hash);
  Json runs;
  runs["fusion"] = runJson(fusion);
  runs["light"] = runJson(light);
  runs["cfl_light"] = runJson(cflLight);
  j["runs"] = std::move(runs);

  const EngineMetrics &fm = fusion.result->metrics;
  const EngineMetrics &lm = light.result->metrics;
  double fTime = withTiming ? fm.wallSeconds : 0.0;
  double lTime = withTiming ? lm.wallSeconds : 0.0;
  double ciTime = withTiming && light.filter ? light.filter->wallSeconds : 0.0;
  double savedTime = fTime - lTime;
  double gains = ciTime > 0.0 ? savedTime / ciTime : 0.0;

  Json cmp;
  Json sAll;
  sAll["fusion"] = fm.sAll;
  sAll["light"] = lm.sAll;
  cmp["s_all"] = std::move(sAll);
  cmp["redun"] = stats.redundant;
  cmp["identified"] = stats.identified;
  Json calls;
  calls["fusion"] = fm.solverCalls;
  calls["light"] = lm.solverCalls;
  calls["saved"] = static_cast<std::int64_t>(fm.solverCalls) -
                   static_cast<std::int64_t>(lm.solverCalls);
  cmp["solver_calls"] = std::move(calls);
  cmp["ci_time_s"] = ciTime;
  Json etime;
  etime["fusion"] = fTime;
  etime["light"] = lTime;
  etime["saved"] = savedTime;
  cmp["engine_time_s"] = std::move(etime);
  cmp["gains"] = gains;
  j["comparison"] = std::move(cmp);

  Json contrib;
  contrib["path"] = oracle.pathContributing;
  contrib["condition"] = oracle.condContributing;
  contrib["redundant"] = oracle.redundant;
  contrib["pruned"] = stats.pruned;
  contrib["identified"] = stats.identified;
  contrib["ratio"] = stats.ratio;
  j["contribution"] = std::move(contrib);

  DiffOutcome out;
  out.bugSetsEqual = bugSetsEqual(fusion, light, pdg) &&
                     bugSetsEqual(fusion, cflLight, pdg);
  j["bug_sets_equal"] = out.bugSetsEqual;
  j["soundness_flag"] = fm.soundnessFlag ||
                        light.result->metrics.soundnessFlag ||
                        cflLight.result->metrics.soundnessFlag;
  out.json = j.dump(2) + "\n";
  return out;
}

std::string buildClassifyReport(const std::string &inputPath,
                                const RunRecord &fusion,
                                const OracleResult &oracle,
                                const IdentificationStats &stats,
                                const Pdg &pdg) {
  requireSameHash({&fusion});
  const SummaryStore &store = fusion.result->store;
  const ContextTable &ctxs = *fusion.ctxs;

  Json rows = Json::array();
  for (const Summary &s : store.rows()) {
    Json r;
    r["id"] = s.id;
    r["owner"] = pdg.functionName(s.owner);
    r["kind"] = summaryKindName(s.kind);
    r["head"] = pdg.display(s.head());
    r["tail"] = pdg.display(s.tail());
    Json path = Json::array();
    for (const PathStep &p : s.path)
      path.push_back(stepStr(pdg, ctxs, p));
    r["path"] = std::move(path);
    r["cond"] = s.cond.str(pdg, ctxs);
    if (s.solved)
      r["sat"] = s.sat;
    else
      r["sat"] = nullptr;
    r["stored"] = s.stored;
    if (s.clonedFrom)
      r["cloned_from"] = *s.clonedFrom;
    else
      r["cloned_from"] = nullptr;
    if (s.cloneSite)
      r["clone_site"] = *s.cloneSite;
    else
      r["clone_site"] = nullptr;
    r["lineage"] = s.cloneLineage;
    r["provenance"] = s.cond.provenance();
    const ContributionVerdict &v = oracle.verdicts[s.id];
    r["verdict"] = contributionName(v.verdict);
    if (v.witness)
      r["witness"] = *v.witness;
    else
      r["witness"] = nullptr;
    rows.push_back(std::move(r));
  }

  Json j;
  j["schema"] = "vflite-classify-v1";
  j["program"] = programJson(inputPath, fusion.hash);
  j["rows"] = std::move(rows);
  Json counts;
  counts["path"] = oracle.pathContributing;
  counts["condition"] = oracle.condContributing;
  counts["redundant"] = oracle.redundant;
  j["counts"] = std::move(counts);
  Json ident;
  ident["redundant"] = stats.redundant;
  ident["pruned"] = stats.pruned;
  ident["identified"] = stats.identified;
  ident["ratio"] = stats.ratio;
  j["identification"] = std::move(ident);
  return j.dump(2) + "\n";
}

std::string buildVnDump(const std::string &inputPath, const std::string &hash,
                        const NecessarySet &ns, const std::string &reach,
                        const Pdg &pdg) {
  auto displayAll = [&](const DynBitset &set) {
    Json arr = Json::array();
    for (VertexId v : set.toVector())
      arr.push_back(pdg.display(v));
    return arr;
  };
  Json j;
  j["schema"] = "vflite-vn-v1";
  j["program"] = programJson(inputPath, hash);
  j["reach"] = reach;
  j["vn"] = displayAll(ns.vn);
  j["vn_path"] = displayAll(ns.vnPath);
  j["candidates"] = displayAll(ns.candidates);
  j["nec_guards"] = displayAll(ns.necGuards);
  j["counters"] = ciCountersJson(ns.counters);
  return j.dump(2) + "\n";
}

} // namespace vflite
