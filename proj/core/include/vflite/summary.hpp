#pragma once

#include "vflite/conditions.hpp"

#include <optional>
#include <vector>

namespace vflite {

enum class SummaryKind : std::uint8_t {
  Transfer,   // param flows to the returned value
  Input,      // param flows to a sink
  Output,     // a source flows to the returned value
  SourceSink, // a source flows to a sink (a bug candidate)
  Guard,      // condition-support chain that crossed a call boundary
};

const char *summaryKindName(SummaryKind k);

struct PathStep {
  VertexId v = kNoVertex;
  CtxId ctx = kRootCtx;

  auto operator<=>(const PathStep &) const = default;
};

struct Summary {
  SummaryId id = 0;
  FuncId owner = kNoFunc;
  SummaryKind kind = SummaryKind::Transfer;
  std::vector<PathStep> path; // head first, tail last
  PathCondition cond;

  /// Callee rows inlined into this one while it was built (splices and the
  /// per-callsite clones backing its guard chains).
  std::vector<SummaryId> cloneLineage;

  /// Set on per-callsite clones of a callee row.
  std::optional<SummaryId> clonedFrom;
  std::optional<int> cloneSite;

  bool solved = false; // has a solver verdict
  bool sat = false;    // verdict when solved
  bool stored = false; // kept in the per-function store for reuse

  VertexId head() const { return path.front().v; }
  VertexId tail() const { return path.back().v; }
};

/// Append-only summary log plus the per-function stores the engine reuses
/// while splicing. Row ids are dense and follow materialization order.
class SummaryStore {
public:
  explicit SummaryStore(std::size_t numFunctions)
      : storedByFunc_(numFunctions) {}

  SummaryId append(Summary s); // assigns the id
  Summary &row(SummaryId id) { return rows_[id]; }
  const Summary &row(SummaryId id) const { return rows_[id]; }
  const std::vector<Summary> &rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Mark a row reusable and index it for its owner.
  void markStored(SummaryId id);

  /// Stored rows of a function, id ascending, optionally kind-filtered.
  const std::vector<SummaryId> &storedOf(FuncId f) const {
    return storedByFunc_[f];
  }
  std::vector<SummaryId> storedOf(FuncId f, SummaryKind k) const;

  std::size_t storedCountOf(FuncId f) const { return storedByFunc_[f].size(); }

private:
  std::vector<Summary> rows_;
  std::vector<std::vector<SummaryId>> storedByFunc_;
};

} // namespace vflite
