#include "vflite/diag.hpp"
#include "vflite/pdg.hpp"

#include <json.hpp>

#include <sstream>

namespace vflite {
namespace {

const char *kindName(VertexKind k) {
  switch (k) {
  case VertexKind::NullConst:
    return "null";
  case VertexKind::Param:
    return "param";
  case VertexKind::Def:
    return "def";
  case VertexKind::ActualArg:
    return "arg";
  case VertexKind::ActualRet:
    return "ret";
  case VertexKind::FormalRet:
    return "formal_ret";
  case VertexKind::Guard:
    return "guard";
  case VertexKind::Sink:
    return "sink";
  }
  return "?";
}

VertexKind kindFromName(const std::string &s) {
  if (s == "null")
    return VertexKind::NullConst;
  if (s == "param")
    return VertexKind::Param;
  if (s == "def")
    return VertexKind::Def;
  if (s == "arg")
    return VertexKind::ActualArg;
  if (s == "ret")
    return VertexKind::ActualRet;
  if (s == "formal_ret")
    return VertexKind::FormalRet;
  if (s == "guard")
    return VertexKind::Guard;
  if (s == "sink")
    return VertexKind::Sink;
  throw AnalysisError("unknown vertex kind '" + s + "'");
}

const char *dotShape(VertexKind k) {
  switch (k) {
  case VertexKind::NullConst:
    return "plaintext";
  case VertexKind::Param:
  case VertexKind::FormalRet:
    return "house";
  case VertexKind::ActualArg:
  case VertexKind::ActualRet:
    return "oval";
  case VertexKind::Guard:
    return "diamond";
  case VertexKind::Sink:
    return "doubleoctagon";
  case VertexKind::Def:
    return "box";
  }
  return "box";
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

} // namespace

std::string Pdg::toDot() const {
  std::ostringstream os;
  os << "digraph pdg {\n  rankdir=LR;\n  node [fontname=\"monospace\"];\n";
  for (FuncId f = 0; f < byFunc_.size(); ++f) {
    os << "  subgraph cluster_" << f << " {\n";
    os << "    label=\"" << escape(funcNames_[f]) << "\";\n";
    for (VertexId v : byFunc_[f]) {
      os << "    v" << v << " [label=\"" << escape(display(v)) << "\", shape="
         << dotShape(vertices_[v].kind);
      if (vertices_[v].isSource)
        os << ", color=red";
      else if (vertices_[v].isSink)
        os << ", color=blue";
      os << "];\n";
    }
    os << "  }\n";
  }
  for (const auto &e : dataEdges_) {
    os << "  v" << e.src << " -> v" << e.dst;
    std::vector<std::string> attrs;
    if (e.labeled())
      attrs.push_back("label=\"" + escape(display(e.guard)) + "\"");
    else if (e.tag == CallTagKind::Call)
      attrs.push_back("label=\"call " + std::to_string(e.callsite) +
                      "\", style=dashed");
    else if (e.tag == CallTagKind::Return)
      attrs.push_back("label=\"ret " + std::to_string(e.callsite) +
                      "\", style=dashed");
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i)
        os << (i ? ", " : "") << attrs[i];
      os << "]";
    }
    os << ";\n";
  }
  for (const auto &c : controlEdges_)
    os << "  v" << c.guard << " -> v" << c.dependent
       << " [style=dotted, arrowhead=empty];\n";
  os << "}\n";
  return os.str();
}

std::string Pdg::toJson() const {
  nlohmann::ordered_json j;
  j["functions"] = funcNames_;
  auto &vs = j["vertices"] = nlohmann::ordered_json::array();
  for (const auto &v : vertices_) {
    nlohmann::ordered_json jv;
    jv["id"] = v.id;
    jv["func"] = v.func;
    jv["line"] = v.line;
    jv["name"] = v.name;
    jv["kind"] = kindName(v.kind);
    jv["display"] = display(v.id);
    if (v.isSource)
      jv["source"] = true;
    if (v.isSink)
      jv["sink"] = true;
    if (v.conditionLiteral)
      jv["condition_literal"] = true;
    if (v.kind == VertexKind::Guard) {
      jv["sign"] = v.sign == GuardSign::Then ? "+" : "-";
      jv["atom"] = {{"op", v.guardAtom->op == CmpOp::EqNull ? "==" : "!="},
                    {"operand", v.guardAtom->operand},
                    {"literal", v.guardAtom->literal}};
    }
    if (v.argIndex >= 0)
      jv["arg_index"] = v.argIndex;
    vs.push_back(std::move(jv));
  }
  auto &es = j["data_edges"] = nlohmann::ordered_json::array();
  for (const auto &e : dataEdges_) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["src"] = e.src;
    je["dst"] = e.dst;
    if (e.labeled())
      je["guard"] = e.guard;
    if (e.tag == CallTagKind::Call)
      je["call"] = e.callsite;
    if (e.tag == CallTagKind::Return)
      je["return"] = e.callsite;
    es.push_back(std::move(je));
  }
  auto &cs = j["control_edges"] = nlohmann::ordered_json::array();
  for (const auto &c : controlEdges_)
    cs.push_back({c.guard, c.dependent});
  return j.dump(2) + "\n";
}

Pdg Pdg::fromJson(const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Pdg g;
  g.funcNames_ = j.at("functions").get<std::vector<std::string>>();
  g.byFunc_.resize(g.funcNames_.size());
  for (const auto &jv : j.at("vertices")) {
    Vertex v;
    v.id = jv.at("id").get<VertexId>();
    v.func = jv.at("func").get<FuncId>();
    v.line = jv.at("line").get<int>();
    v.name = jv.at("name").get<std::string>();
    v.kind = kindFromName(jv.at("kind").get<std::string>());
    v.isSource = jv.value("source", false);
    v.isSink = jv.value("sink", false);
    v.conditionLiteral = jv.value("condition_literal", false);
    if (v.kind == VertexKind::Guard) {
      v.sign = jv.at("sign").get<std::string>() == "+" ? GuardSign::Then
                                                       : GuardSign::Else;
      const auto &ja = jv.at("atom");
      v.guardAtom = GuardAtomInfo{
          ja.at("op").get<std::string>() == "==" ? CmpOp::EqNull
                                                 : CmpOp::NeNull,
          ja.at("operand").get<VertexId>(), ja.at("literal").get<VertexId>()};
    }
    v.argIndex = jv.value("arg_index", -1);
    if (v.id != g.vertices_.size())
      throw AnalysisError("vertex ids must be dense and ascending");
    g.byFunc_[v.func].push_back(v.id);
    g.vertices_.push_back(std::move(v));
  }
  for (const auto &je : j.at("data_edges")) {
    DataEdge e;
    e.id = je.at("id").get<EdgeId>();
    e.src = je.at("src").get<VertexId>();
    e.dst = je.at("dst").get<VertexId>();
    e.guard = je.value("guard", kNoVertex);
    if (je.contains("call")) {
      e.tag = CallTagKind::Call;
      e.callsite = je.at("call").get<int>();
    } else if (je.contains("return")) {
      e.tag = CallTagKind::Return;
      e.callsite = je.at("return").get<int>();
    }
    if (e.labeled() && e.tagged())
      throw AnalysisError("edge carries both a guard label and a call tag");
    if (e.id != g.dataEdges_.size())
      throw AnalysisError("edge ids must be dense and ascending");
    g.dataEdges_.push_back(e);
  }
  for (const auto &jc : j.at("control_edges"))
    g.controlEdges_.push_back(
        {jc.at(0).get<VertexId>(), jc.at(1).get<VertexId>()});
  g.finalize();
  return g;
}

} // namespace vflite
