#include "vflite/oracle.hpp"

#include "vflite/diag.hpp"

#include <deque>
#include <map>
#include <tuple>

namespace vflite {

const char *contributionName(Contribution c) {
  switch (c) {
  case Contribution::PathContributing:
    return "path";
  case Contribution::CondContributing:
    return "condition";
  case Contribution::Redundant:
    return "redundant";
  }
  return "?";
}

namespace {

// Smaller enum value = stronger verdict; upgrades re-propagate so a row
// first reached through a condition still ends up "path" when some reported
// flow inlines it.
bool stronger(Contribution a, Contribution b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

} // namespace

OracleResult classifyContributions(const SummaryStore &all,
                                   const std::vector<Bug> &bugs) {
  OracleResult out;
  out.verdicts.resize(all.size());
  for (SummaryId id = 0; id < all.size(); ++id)
    out.verdicts[id].id = id;

  auto checkRef = [&](SummaryId from, SummaryId to) {
    if (to >= all.size())
      throw AnalysisError("summary " + std::to_string(from) +
                          " references unknown row " + std::to_string(to));
  };

  std::deque<std::pair<SummaryId, SummaryId>> work; // (row, witness)

  auto mark = [&](SummaryId id, Contribution c, SummaryId witness) {
    ContributionVerdict &v = out.verdicts[id];
    if (!stronger(c, v.verdict))
      return;
    v.verdict = c;
    v.witness = witness;
    work.emplace_back(id, witness);
  };

  for (const Bug &b : bugs)
    mark(b.row, Contribution::PathContributing, b.row);

  while (!work.empty()) {
    auto [id, witness] = work.front();
    work.pop_front();
    const Summary &row = all.row(id);
    Contribution mine = out.verdicts[id].verdict;
    // Inlined rows inherit the verdict; rows that only vouch for
    // feasibility contribute through their condition.
    for (SummaryId dep : row.cloneLineage) {
      checkRef(id, dep);
      mark(dep, mine, witness);
    }
    if (row.clonedFrom) {
      checkRef(id, *row.clonedFrom);
      mark(*row.clonedFrom, mine, witness);
    }
    for (SummaryId dep : row.cond.provenance()) {
      checkRef(id, dep);
      mark(dep, Contribution::CondContributing, witness);
    }
  }

  for (const ContributionVerdict &v : out.verdicts) {
    switch (v.verdict) {
    case Contribution::PathContributing:
      ++out.pathContributing;
      break;
    case Contribution::CondContributing:
      ++out.condContributing;
      break;
    case Contribution::Redundant:
      ++out.redundant;
      break;
    }
  }
  return out;
}

namespace {

// Context ids are interned per run, so serialize each step/term with its
// callsite stack instead of the raw id.
std::string canonKey(const Summary &s, const ContextTable &ctxs) {
  std::string k = std::to_string(s.owner);
  k += '|';
  k += summaryKindName(s.kind);
  k += '|';
  auto term = [&](VertexId v, CtxId c) {
    std::string t = std::to_string(v);
    for (int line : ctxs.stack(c)) {
      t += '#';
      t += std::to_string(line);
    }
    return t;
  };
  for (const PathStep &p : s.path) {
    k += term(p.v, p.ctx);
    k += ',';
  }
  k += '|';
  for (const Atom &a : s.cond.atoms()) {
    k += std::to_string(static_cast<int>(a.kind));
    k += ':';
    if (a.kind != AtomKind::Opaque) {
      k += term(a.a.v, a.a.ctx);
      k += '~';
      k += term(a.b.v, a.b.ctx);
    } else {
      k += a.note;
    }
    k += ';';
  }
  return k;
}

} // namespace

IdentificationStats identificationStats(const OracleResult &oracle,
                                        const SummaryStore &fullLog,
                                        const ContextTable &fullCtxs,
                                        const SummaryStore &prunedLog,
                                        const ContextTable &prunedCtxs) {
  std::map<std::string, std::size_t> prunedHas;
  for (const Summary &s : prunedLog.rows())
    ++prunedHas[canonKey(s, prunedCtxs)];

  IdentificationStats st;
  for (const Summary &s : fullLog.rows()) {
    bool redundant = oracle.isRedundant(s.id);
    if (redundant)
      ++st.redundant;
    std::string k = canonKey(s, fullCtxs);
    auto it = prunedHas.find(k);
    if (it != prunedHas.end() && it->second > 0) {
      --it->second; // present in both logs
      continue;
    }
    ++st.pruned;
    if (redundant)
      ++st.identified;
  }
  st.ratio = st.redundant == 0
                 ? 1.0
                 : static_cast<double>(st.identified) /
                       static_cast<double>(st.redundant);
  return st;
}

} // namespace vflite
