#pragma once

#include "vflite/callgraph.hpp"
#include "vflite/ir.hpp"
#include "vflite/util.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vflite {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
constexpr VertexId kNoVertex = ~VertexId{0};

enum class VertexKind : std::uint8_t {
  NullConst, // `x = null` definition, or the literal in a condition
  Param,     // formal parameter
  Def,       // plain SSA definition (copy / phi result)
  ActualArg, // argument use at a callsite
  ActualRet, // result definition at a callsite
  FormalRet, // the returned use inside the callee
  Guard,     // one side of a branch condition
  Sink,      // deref operand use
};

/// Which side of the branch a guard vertex represents.
enum class GuardSign : std::uint8_t { Then, Else };

struct GuardAtomInfo {
  CmpOp op;           // operator as seen by this side (else flips it)
  VertexId operand;   // reaching definition of the condition variable
  VertexId literal;   // the null literal vertex of the condition
};

struct Vertex {
  VertexId id = kNoVertex;
  FuncId func = kNoFunc;
  int line = 0;
  std::string name; // variable name; empty for literals
  VertexKind kind = VertexKind::Def;

  bool isSource = false; // checker role
  bool isSink = false;   // checker role
  bool conditionLiteral = false; // NullConst used only inside a condition

  // Guard-only payload
  GuardSign sign = GuardSign::Then;
  std::optional<GuardAtomInfo> guardAtom;

  // ActualArg-only: argument position at the callsite
  int argIndex = -1;
};

enum class CallTagKind : std::uint8_t { None, Call, Return };

struct DataEdge {
  EdgeId id = 0;
  VertexId src = kNoVertex;
  VertexId dst = kNoVertex;
  VertexId guard = kNoVertex;            // label, or kNoVertex
  CallTagKind tag = CallTagKind::None;   // callsite tag kind
  int callsite = 0;                      // callsite line when tagged

  bool labeled() const { return guard != kNoVertex; }
  bool tagged() const { return tag != CallTagKind::None; }
};

/// Control-dependence edge: guard vertex -> vertex created in its branch.
struct ControlEdge {
  VertexId guard;
  VertexId dependent;
};

/// Program dependence graph over every function of the program. Vertex and
/// edge ids are dense and assigned in one deterministic creation order, so
/// identical inputs produce identical graphs byte for byte.
class Pdg {
public:
  std::size_t numVertices() const { return vertices_.size(); }
  std::size_t numDataEdges() const { return dataEdges_.size(); }

  const Vertex &vertex(VertexId v) const { return vertices_[v]; }
  const DataEdge &edge(EdgeId e) const { return dataEdges_[e]; }
  const std::vector<DataEdge> &dataEdges() const { return dataEdges_; }
  const std::vector<ControlEdge> &controlEdges() const {
    return controlEdges_;
  }

  /// Outgoing/incoming data edges, sorted ascending by peer vertex id.
  const std::vector<EdgeId> &outEdges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId> &inEdges(VertexId v) const { return in_[v]; }

  const std::vector<VertexId> &verticesOf(FuncId f) const {
    return byFunc_[f];
  }
  std::size_t numFunctions() const { return byFunc_.size(); }
  const std::string &functionName(FuncId f) const { return funcNames_[f]; }

  /// "name@line" (params/defs/args), "null@line", "*name@line" (sinks),
  /// "g+@line" / "g-@line" (guards).
  std::string display(VertexId v) const;

  /// First vertex whose display() equals `name`, if any. Test convenience.
  std::optional<VertexId> findByDisplay(const std::string &name) const;

  /// Head candidates: params, callsite results, sources.
  bool isHead(VertexId v) const;
  /// Tail candidates: argument uses, returned uses, sinks, guards.
  bool isTail(VertexId v) const;

  std::vector<VertexId> sources() const;     // role order: id ascending
  std::vector<VertexId> sinks() const;
  std::vector<VertexId> guardsOf(FuncId f) const;
  std::vector<VertexId> paramsOf(FuncId f) const;

  /// For an ActualArg vertex: its call-tagged edge into the callee param.
  std::optional<EdgeId> callEdgeOf(VertexId ap) const;
  /// For a FormalRet: the return-tagged edge for callsite `line`, if any.
  std::optional<EdgeId> returnEdgeAt(VertexId fr, int line) const;

  /// Reassign source/sink roles from display-name globs. Pass empty pattern
  /// lists to clear that side. Head/tail sets are recomputed.
  void applyRoleGlobs(const std::vector<std::string> &sourceGlobs,
                      const std::vector<std::string> &sinkGlobs);

  // --- serialization (pdg_io.cpp) ---
  std::string toDot() const;
  std::string toJson() const;
  static Pdg fromJson(const std::string &text);

private:
  friend Pdg buildPdg(const Program &prog);
  friend struct PdgBuilder;
  void finalize();

  std::vector<Vertex> vertices_;
  std::vector<DataEdge> dataEdges_;
  std::vector<ControlEdge> controlEdges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::vector<VertexId>> byFunc_;
  std::vector<std::string> funcNames_;
};

/// Build the dependence graph. Default checker roles: every `x = null`
/// definition is a source, every deref operand is a sink.
Pdg buildPdg(const Program &prog);

} // namespace vflite
