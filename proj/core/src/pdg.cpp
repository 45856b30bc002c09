#include "vflite/pdg.hpp"

#include "vflite/diag.hpp"

#include <algorithm>
#include <map>

namespace vflite {

struct PdgBuilder {
  const Program &prog;
  Pdg &g;
  // per function: variable name -> defining vertex
  std::vector<std::map<std::string, VertexId>> defs;
  // per function/statement: innermost enclosing guard vertex
  std::vector<std::vector<VertexId>> encl;
  // per statement extras discovered in the vertex pass
  struct IfVerts {
    VertexId literal = kNoVertex;
    VertexId thenGuard = kNoVertex;
    VertexId elseGuard = kNoVertex;
  };
  std::vector<std::map<int, IfVerts>> ifVerts;       // by stmt index
  std::vector<std::map<int, std::vector<VertexId>>> argVerts;
  std::vector<std::map<int, VertexId>> retVerts;     // ar of calls
  std::vector<std::map<int, VertexId>> useVerts;     // deref/return vertex
  std::vector<std::vector<VertexId>> params;

  PdgBuilder(const Program &p, Pdg &out) : prog(p), g(out) {
    std::size_t n = prog.functions.size();
    defs.resize(n);
    encl.resize(n);
    ifVerts.resize(n);
    argVerts.resize(n);
    retVerts.resize(n);
    useVerts.resize(n);
    params.resize(n);
    g.byFunc_.resize(n);
  }

  VertexId add(Vertex v) {
    v.id = static_cast<VertexId>(g.vertices_.size());
    g.byFunc_[v.func].push_back(v.id);
    g.vertices_.push_back(std::move(v));
    return g.vertices_.back().id;
  }

  void addEdge(VertexId src, VertexId dst, VertexId guard,
               CallTagKind tag = CallTagKind::None, int callsite = 0) {
    DataEdge e;
    e.id = static_cast<EdgeId>(g.dataEdges_.size());
    e.src = src;
    e.dst = dst;
    e.guard = guard;
    e.tag = tag;
    e.callsite = callsite;
    g.dataEdges_.push_back(e);
  }

  void run() {
    for (FuncId f = 0; f < prog.functions.size(); ++f)
      vertexPass(f);
    for (FuncId f = 0; f < prog.functions.size(); ++f)
      edgePass(f);
    g.finalize();
  }

  void vertexPass(FuncId f) {
    const Function &fn = prog.functions[f];
    encl[f].assign(fn.stmts.size(), kNoVertex);
    for (const auto &p : fn.params) {
      Vertex v;
      v.func = f;
      v.line = fn.line;
      v.name = p;
      v.kind = VertexKind::Param;
      params[f].push_back(add(v));
      defs[f][p] = params[f].back();
    }
    walkVertices(f, fn.topLevel, kNoVertex);
  }

  void walkVertices(FuncId f, const std::vector<int> &body,
                    VertexId enclosing) {
    const Function &fn = prog.functions[f];
    for (int idx : body) {
      const Stmt &s = fn.stmts[idx];
      encl[f][static_cast<std::size_t>(idx)] = enclosing;
      switch (s.kind) {
      case StmtKind::AssignNull: {
        Vertex v;
        v.func = f;
        v.line = s.line;
        v.kind = VertexKind::NullConst;
        v.isSource = true; // default checker: every null definition
        defs[f][s.def] = add(v);
        break;
      }
      case StmtKind::Copy:
      case StmtKind::Phi: {
        Vertex v;
        v.func = f;
        v.line = s.line;
        v.name = s.def;
        v.kind = VertexKind::Def;
        defs[f][s.def] = add(v);
        break;
      }
      case StmtKind::Call: {
        auto &aps = argVerts[f][idx];
        for (std::size_t i = 0; i < s.uses.size(); ++i) {
          Vertex v;
          v.func = f;
          v.line = s.line;
          v.name = s.uses[i];
          v.kind = VertexKind::ActualArg;
          v.argIndex = static_cast<int>(i);
          aps.push_back(add(v));
        }
        if (!s.def.empty()) {
          Vertex v;
          v.func = f;
          v.line = s.line;
          v.name = s.def;
          v.kind = VertexKind::ActualRet;
          retVerts[f][idx] = add(v);
          defs[f][s.def] = retVerts[f][idx];
        }
        break;
      }
      case StmtKind::If: {
        IfVerts iv;
        Vertex lit;
        lit.func = f;
        lit.line = s.line;
        lit.kind = VertexKind::NullConst;
        lit.conditionLiteral = true; // not a source; carries no edges
        iv.literal = add(lit);
        auto mkGuard = [&](GuardSign sign) {
          Vertex v;
          v.func = f;
          v.line = s.line;
          v.kind = VertexKind::Guard;
          v.sign = sign;
          CmpOp op = s.cmp;
          if (sign == GuardSign::Else)
            op = op == CmpOp::EqNull ? CmpOp::NeNull : CmpOp::EqNull;
          v.guardAtom = GuardAtomInfo{op, kNoVertex, iv.literal};
          return add(v);
        };
        if (!s.thenBody.empty())
          iv.thenGuard = mkGuard(GuardSign::Then);
        if (!s.elseBody.empty())
          iv.elseGuard = mkGuard(GuardSign::Else);
        ifVerts[f][idx] = iv;
        walkVertices(f, s.thenBody,
                     iv.thenGuard != kNoVertex ? iv.thenGuard : enclosing);
        walkVertices(f, s.elseBody,
                     iv.elseGuard != kNoVertex ? iv.elseGuard : enclosing);
        break;
      }
      case StmtKind::Deref: {
        Vertex v;
        v.func = f;
        v.line = s.line;
        v.name = s.uses[0];
        v.kind = VertexKind::Sink;
        v.isSink = true; // default checker: every deref operand
        useVerts[f][idx] = add(v);
        break;
      }
      case StmtKind::Return: {
        Vertex v;
        v.func = f;
        v.line = s.line;
        v.name = s.uses[0];
        v.kind = VertexKind::FormalRet;
        useVerts[f][idx] = add(v);
        break;
      }
      }
    }
  }

  VertexId defOf(FuncId f, const std::string &name, int line) const {
    auto it = defs[f].find(name);
    if (it == defs[f].end())
      throw AnalysisError("no definition for '" + name + "' at line " +
                          std::to_string(line));
    return it->second;
  }

  void edgePass(FuncId f) {
    const Function &fn = prog.functions[f];
    for (std::size_t idx = 0; idx < fn.stmts.size(); ++idx) {
      const Stmt &s = fn.stmts[idx];
      VertexId label = encl[f][idx];
      switch (s.kind) {
      case StmtKind::AssignNull:
        break; // the constant is the definition; nothing flows in
      case StmtKind::Copy:
        addEdge(defOf(f, s.uses[0], s.line), defs[f].at(s.def), label);
        break;
      case StmtKind::Phi: {
        VertexId dst = defs[f].at(s.def);
        VertexId a = defOf(f, s.uses[0], s.line);
        VertexId b = defOf(f, s.uses[1], s.line);
        addEdge(a, dst, label);
        if (b != a) // phi(x, x) collapses to one edge
          addEdge(b, dst, label);
        break;
      }
      case StmtKind::Call: {
        const auto &aps = argVerts[f].at(static_cast<int>(idx));
        FuncId callee = s.calleeId;
        for (std::size_t i = 0; i < s.uses.size(); ++i) {
          addEdge(defOf(f, s.uses[i], s.line), aps[i], label);
          addEdge(aps[i], params[callee][i], kNoVertex, CallTagKind::Call,
                  s.line);
        }
        if (!s.def.empty()) {
          const Function &cfn = prog.functions[callee];
          if (cfn.returnStmt) {
            VertexId fr = useVerts[callee].at(*cfn.returnStmt);
            addEdge(fr, retVerts[f].at(static_cast<int>(idx)), kNoVertex,
                    CallTagKind::Return, s.line);
          }
        }
        break;
      }
      case StmtKind::If: {
        const IfVerts &iv = ifVerts[f].at(static_cast<int>(idx));
        VertexId op = defOf(f, s.uses[0], s.line);
        for (VertexId gv : {iv.thenGuard, iv.elseGuard}) {
          if (gv == kNoVertex)
            continue;
          g.vertices_[gv].guardAtom->operand = op;
          addEdge(op, gv, label);
          for (int child : (g.vertices_[gv].sign == GuardSign::Then
                                ? s.thenBody
                                : s.elseBody))
            recordControl(f, gv, child);
        }
        break;
      }
      case StmtKind::Deref:
      case StmtKind::Return:
        addEdge(defOf(f, s.uses[0], s.line),
                useVerts[f].at(static_cast<int>(idx)), label);
        break;
      }
    }
  }

  // Control dependence: guard -> every vertex created by a statement
  // directly inside its branch.
  void recordControl(FuncId f, VertexId gv, int idx) {
    const Stmt &s = prog.functions[f].stmts[idx];
    switch (s.kind) {
    case StmtKind::AssignNull:
    case StmtKind::Copy:
    case StmtKind::Phi:
      g.controlEdges_.push_back({gv, defs[f].at(s.def)});
      break;
    case StmtKind::Call: {
      for (VertexId ap : argVerts[f].at(idx))
        g.controlEdges_.push_back({gv, ap});
      auto it = retVerts[f].find(idx);
      if (it != retVerts[f].end())
        g.controlEdges_.push_back({gv, it->second});
      break;
    }
    case StmtKind::If: {
      const IfVerts &iv = ifVerts[f].at(idx);
      if (iv.thenGuard != kNoVertex)
        g.controlEdges_.push_back({gv, iv.thenGuard});
      if (iv.elseGuard != kNoVertex)
        g.controlEdges_.push_back({gv, iv.elseGuard});
      break;
    }
    case StmtKind::Deref:
    case StmtKind::Return:
      g.controlEdges_.push_back({gv, useVerts[f].at(idx)});
      break;
    }
  }
};

void Pdg::finalize() {
  out_.assign(vertices_.size(), {});
  in_.assign(vertices_.size(), {});
  for (const auto &e : dataEdges_) {
    out_[e.src].push_back(e.id);
    in_[e.dst].push_back(e.id);
  }
  for (auto &v : out_)
    std::sort(v.begin(), v.end(), [this](EdgeId a, EdgeId b) {
      return std::pair(dataEdges_[a].dst, a) < std::pair(dataEdges_[b].dst, b);
    });
  for (auto &v : in_)
    std::sort(v.begin(), v.end(), [this](EdgeId a, EdgeId b) {
      return std::pair(dataEdges_[a].src, a) < std::pair(dataEdges_[b].src, b);
    });
}

std::string Pdg::display(VertexId id) const {
  const Vertex &v = vertices_[id];
  std::string at = "@" + std::to_string(v.line);
  switch (v.kind) {
  case VertexKind::NullConst:
    return "null" + at;
  case VertexKind::Sink:
    return "*" + v.name + at;
  case VertexKind::Guard:
    return (v.sign == GuardSign::Then ? "g+" : "g-") + at;
  default:
    return v.name + at;
  }
}

std::optional<VertexId> Pdg::findByDisplay(const std::string &name) const {
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (display(v) == name)
      return v;
  return std::nullopt;
}

bool Pdg::isHead(VertexId v) const {
  const Vertex &x = vertices_[v];
  return x.kind == VertexKind::Param || x.kind == VertexKind::ActualRet ||
         x.isSource;
}

bool Pdg::isTail(VertexId v) const {
  const Vertex &x = vertices_[v];
  return x.kind == VertexKind::ActualArg || x.kind == VertexKind::FormalRet ||
         x.kind == VertexKind::Guard || x.isSink;
}

std::vector<VertexId> Pdg::sources() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].isSource)
      out.push_back(v);
  return out;
}

std::vector<VertexId> Pdg::sinks() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].isSink)
      out.push_back(v);
  return out;
}

std::vector<VertexId> Pdg::guardsOf(FuncId f) const {
  std::vector<VertexId> out;
  for (VertexId v : byFunc_[f])
    if (vertices_[v].kind == VertexKind::Guard)
      out.push_back(v);
  return out;
}

std::vector<VertexId> Pdg::paramsOf(FuncId f) const {
  std::vector<VertexId> out;
  for (VertexId v : byFunc_[f])
    if (vertices_[v].kind == VertexKind::Param)
      out.push_back(v);
  return out;
}

std::optional<EdgeId> Pdg::callEdgeOf(VertexId ap) const {
  for (EdgeId e : out_[ap])
    if (dataEdges_[e].tag == CallTagKind::Call)
      return e;
  return std::nullopt;
}

std::optional<EdgeId> Pdg::returnEdgeAt(VertexId fr, int line) const {
  for (EdgeId e : out_[fr])
    if (dataEdges_[e].tag == CallTagKind::Return &&
        dataEdges_[e].callsite == line)
      return e;
  return std::nullopt;
}

void Pdg::applyRoleGlobs(const std::vector<std::string> &sourceGlobs,
                         const std::vector<std::string> &sinkGlobs) {
  auto matches = [this](const std::vector<std::string> &globs, VertexId v) {
    std::string d = display(v);
    for (const auto &p : globs)
      if (globMatch(p, d))
        return true;
    return false;
  };
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    vertices_[v].isSource =
        !vertices_[v].conditionLiteral && matches(sourceGlobs, v);
    vertices_[v].isSink = matches(sinkGlobs, v);
  }
}

Pdg buildPdg(const Program &prog) {
  Pdg g;
  for (const auto &f : prog.functions)
    g.funcNames_.push_back(f.name);
  PdgBuilder b(prog, g);
  b.run();
  return g;
}

} // namespace vflite
