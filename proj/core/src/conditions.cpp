#include "vflite/conditions.hpp"

#include <algorithm>

namespace vflite {

CtxId ContextTable::push(int line, CtxId outer) {
  for (const auto &[l, id] : memo_[outer])
    if (l == line)
      return id;
  std::vector<int> stack;
  stack.reserve(table_[outer].size() + 1);
  stack.push_back(line);
  stack.insert(stack.end(), table_[outer].begin(), table_[outer].end());
  table_.push_back(std::move(stack));
  memo_.emplace_back();
  CtxId id = static_cast<CtxId>(table_.size() - 1);
  memo_[outer].emplace_back(line, id);
  return id;
}

CtxId ContextTable::composeAtCall(CtxId inner, int line) {
  std::vector<int> innerStack = table_[inner]; // push() reallocates table_
  CtxId c = push(line, kRootCtx);
  for (auto it = innerStack.rbegin(); it != innerStack.rend(); ++it)
    c = push(*it, c);
  return c;
}

std::string ContextTable::display(CtxId c) const {
  std::string out;
  for (int line : table_[c]) {
    out += "#";
    out += std::to_string(line);
  }
  return out;
}

PathCondition::PathCondition(std::vector<Atom> atoms,
                             std::vector<SummaryId> provenance) {
  for (auto &a : atoms) {
    if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end())
      atoms_.push_back(std::move(a));
  }
  std::sort(provenance.begin(), provenance.end());
  provenance.erase(std::unique(provenance.begin(), provenance.end()),
                   provenance.end());
  provenance_ = std::move(provenance);
}

PathCondition PathCondition::conjoin(const Atom &atom) const {
  PathCondition out = *this;
  if (std::find(out.atoms_.begin(), out.atoms_.end(), atom) ==
      out.atoms_.end())
    out.atoms_.push_back(atom);
  return out;
}

PathCondition PathCondition::conjoin(const PathCondition &other) const {
  PathCondition out = *this;
  for (const auto &a : other.atoms_)
    if (std::find(out.atoms_.begin(), out.atoms_.end(), a) ==
        out.atoms_.end())
      out.atoms_.push_back(a);
  std::vector<SummaryId> prov = out.provenance_;
  prov.insert(prov.end(), other.provenance_.begin(), other.provenance_.end());
  std::sort(prov.begin(), prov.end());
  prov.erase(std::unique(prov.begin(), prov.end()), prov.end());
  out.provenance_ = std::move(prov);
  return out;
}

PathCondition
PathCondition::withProvenance(const std::vector<SummaryId> &ids) const {
  PathCondition out = *this;
  out.provenance_.insert(out.provenance_.end(), ids.begin(), ids.end());
  std::sort(out.provenance_.begin(), out.provenance_.end());
  out.provenance_.erase(
      std::unique(out.provenance_.begin(), out.provenance_.end()),
      out.provenance_.end());
  return out;
}

std::string atomStr(const Atom &a, const Pdg &pdg, const ContextTable &ctxs) {
  auto term = [&](const Term &t) {
    return pdg.display(t.v) + ctxs.display(t.ctx);
  };
  switch (a.kind) {
  case AtomKind::FlowEq:
    return term(a.a) + " = " + term(a.b);
  case AtomKind::NullEq:
    return term(a.a) + " == " + term(a.b);
  case AtomKind::NullNe:
    return term(a.a) + " != " + term(a.b);
  case AtomKind::Opaque:
    return "opaque(" + a.note + ")";
  }
  return "?";
}

std::string PathCondition::str(const Pdg &pdg,
                               const ContextTable &ctxs) const {
  if (atoms_.empty())
    return "true";
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i)
      out += " && ";
    out += atomStr(atoms_[i], pdg, ctxs);
  }
  return out;
}

} // namespace vflite
