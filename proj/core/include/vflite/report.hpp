#pragma once

#include "vflite/ci.hpp"
#include "vflite/engine.hpp"
#include "vflite/oracle.hpp"

#include <string>

namespace vflite {

/// "fnv1a64:" + 16 hex digits over the exact input bytes.
std::string programHash(const std::string &text);

/// One completed engine run plus everything needed to print it.
struct RunRecord {
  std::string mode;  // "fusion", "light", "cfl-light"
  std::string reach; // "bfs", "cfl", or "" when no filter ran
  const AnalysisResult *result = nullptr;
  const ContextTable *ctxs = nullptr;
  const NecessarySet *filter = nullptr; // null for exhaustive runs
  std::string hash;                     // program hash this run consumed
};

/// Reports are serialized with a stable key order and 2-space indent; with
/// timing suppressed, identical inputs render byte-identical output.
/// All builders throw AnalysisError when the run hashes disagree.
std::string buildAnalyzeReport(const std::string &inputPath,
                               const RunRecord &run, const Pdg &pdg,
                               bool withTiming);

struct DiffOutcome {
  std::string json;
  bool bugSetsEqual = false;
};

/// Three-way comparison: exhaustive vs pruned vs pruned-over-the-precise-
/// backend. Includes the redundancy comparison block and flags unequal bug
/// sets instead of hiding them.
DiffOutcome buildDiffReport(const std::string &inputPath,
                            const RunRecord &fusion, const RunRecord &light,
                            const RunRecord &cflLight,
                            const OracleResult &oracle,
                            const IdentificationStats &stats, const Pdg &pdg,
                            bool withTiming);

/// Per-row contribution verdicts for the exhaustive log.
std::string buildClassifyReport(const std::string &inputPath,
                                const RunRecord &fusion,
                                const OracleResult &oracle,
                                const IdentificationStats &stats,
                                const Pdg &pdg);

/// The necessary-set dump: members, candidates, necessary guards, counters.
std::string buildVnDump(const std::string &inputPath, const std::string &hash,
                        const NecessarySet &ns, const std::string &reach,
                        const Pdg &pdg);

/// True when both runs report the same flows (same endpoint/path displays).
bool bugSetsEqual(const RunRecord &a, const RunRecord &b, const Pdg &pdg);

} // namespace vflite
