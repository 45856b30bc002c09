#pragma once

#include "vflite/pdg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vflite {

/// Calling-context id. Contexts are interned stacks of callsite lines,
/// innermost first; id 0 is the empty (root) context.
using CtxId = std::uint32_t;
constexpr CtxId kRootCtx = 0;

class ContextTable {
public:
  ContextTable() { table_.push_back({}); }

  /// Context for entering callsite `line` from `outer`.
  CtxId push(int line, CtxId outer);

  /// Context of a callee-relative occurrence once its summary is inlined at
  /// `line`: the inner stack stacked on top of the callsite.
  CtxId composeAtCall(CtxId inner, int line);

  const std::vector<int> &stack(CtxId c) const { return table_[c]; }

  /// "" for the root context, "#5#2" for innermost callsite 5 under 2.
  std::string display(CtxId c) const;

  std::size_t size() const { return table_.size(); }

private:
  std::vector<std::vector<int>> table_;
  // (outer ctx, line) -> interned id; linear scan is fine at our scale but
  // the map keeps fuzz runs from going quadratic.
  std::vector<std::vector<std::pair<int, CtxId>>> memo_{1};
};

/// A context-qualified vertex occurrence.
struct Term {
  VertexId v = kNoVertex;
  CtxId ctx = kRootCtx;

  auto operator<=>(const Term &) const = default;
};

enum class AtomKind : std::uint8_t {
  FlowEq, // value equality along a traversed data edge
  NullEq, // branch constraint: term == null
  NullNe, // branch constraint: term != null
  Opaque, // placeholder for a constraint the engine declined to expand
};

struct Atom {
  AtomKind kind = AtomKind::FlowEq;
  Term a;           // FlowEq: one side; NullEq/NullNe: the constrained term
  Term b;           // FlowEq: other side; NullEq/NullNe: the null literal
  std::string note; // Opaque only: why the constraint was dropped

  auto operator<=>(const Atom &) const = default;
};

using SummaryId = std::uint32_t;

/// Immutable conjunction of atoms. Atoms stay duplicate-free in first-seen
/// order; provenance records which summaries' conditions were folded in
/// while instantiating guards (closed under nesting).
class PathCondition {
public:
  PathCondition() = default;
  PathCondition(std::vector<Atom> atoms, std::vector<SummaryId> provenance);

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<SummaryId> &provenance() const { return provenance_; }

  PathCondition conjoin(const Atom &atom) const;
  PathCondition conjoin(const PathCondition &other) const;
  PathCondition withProvenance(const std::vector<SummaryId> &ids) const;

  std::string str(const Pdg &pdg, const ContextTable &ctxs) const;

private:
  std::vector<Atom> atoms_;           // dup-free, insertion order
  std::vector<SummaryId> provenance_; // sorted, unique
};

std::string atomStr(const Atom &a, const Pdg &pdg, const ContextTable &ctxs);

} // namespace vflite
