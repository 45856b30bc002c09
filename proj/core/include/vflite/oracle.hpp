#pragma once

#include "vflite/engine.hpp"

#include <optional>
#include <vector>

namespace vflite {

enum class Contribution : std::uint8_t {
  PathContributing, // inlined (directly or transitively) into a reported flow
  CondContributing, // its condition supports a reported flow's feasibility
  Redundant,        // neither
};

const char *contributionName(Contribution c);

struct ContributionVerdict {
  SummaryId id;
  Contribution verdict = Contribution::Redundant;
  std::optional<SummaryId> witness; // reported row that established it
};

struct OracleResult {
  std::vector<ContributionVerdict> verdicts; // index == summary id
  std::size_t pathContributing = 0;
  std::size_t condContributing = 0;
  std::size_t redundant = 0;

  bool isRedundant(SummaryId id) const {
    return verdicts[id].verdict == Contribution::Redundant;
  }
};

/// Ground-truth classification of every row in an exhaustive run's log:
/// walk outward from the satisfiable reported flows across clone lineage
/// (path contribution) and condition provenance (condition contribution);
/// whatever stays unreached is redundant. Lineage referencing an unknown
/// row id is an internal error.
OracleResult classifyContributions(const SummaryStore &all,
                                   const std::vector<Bug> &bugs);

struct IdentificationStats {
  std::size_t redundant = 0;  // per the oracle, in the exhaustive log
  std::size_t pruned = 0;     // exhaustive rows missing from the pruned log
  std::size_t identified = 0; // pruned ∩ redundant
  double ratio = 1.0;         // identified / redundant (1.0 when vacuous)
};

/// Compare an exhaustive log against a pruned one. Rows are matched
/// structurally (owner, kind, path, atoms) since ids differ between runs;
/// context ids are run-local, so each log's table canonicalizes them to
/// callsite stacks.
IdentificationStats identificationStats(const OracleResult &oracle,
                                        const SummaryStore &fullLog,
                                        const ContextTable &fullCtxs,
                                        const SummaryStore &prunedLog,
                                        const ContextTable &prunedCtxs);

} // namespace vflite
