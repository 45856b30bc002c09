#include "vflite/solver.hpp"

#include <map>

namespace vflite {
namespace {

enum class NullState : std::uint8_t { Unknown, MustNull, MustNonNull };

struct UnionFind {
  std::vector<std::uint32_t> parent;

  std::uint32_t make() {
    parent.push_back(static_cast<std::uint32_t>(parent.size()));
    return parent.back();
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent[b] = a;
    return a;
  }
};

} // namespace

SatResult BuiltinSolver::checkImpl(const PathCondition &cond,
                                   const Pdg &pdg) {
  UnionFind uf;
  std::map<Term, std::uint32_t> ids;
  // Null constraints are applied after all equalities so the verdict does
  // not depend on atom order.
  std::vector<std::pair<std::uint32_t, NullState>> constraints;

  auto termId = [&](const Term &t) {
    auto it = ids.find(t);
    if (it != ids.end())
      return it->second;
    std::uint32_t id = uf.make();
    ids.emplace(t, id);
    if (pdg.vertex(t.v).kind == VertexKind::NullConst)
      constraints.emplace_back(id, NullState::MustNull);
    return id;
  };

  for (const auto &a : cond.atoms()) {
    switch (a.kind) {
    case AtomKind::FlowEq:
      uf.merge(termId(a.a), termId(a.b));
      break;
    case AtomKind::NullEq:
      termId(a.b); // the literal seeds its own class must-null
      constraints.emplace_back(termId(a.a), NullState::MustNull);
      break;
    case AtomKind::NullNe:
      termId(a.b);
      constraints.emplace_back(termId(a.a), NullState::MustNonNull);
      break;
    case AtomKind::Opaque:
      break; // unknown constraint: assume satisfiable
    }
  }

  std::map<std::uint32_t, NullState> classState;
  for (auto &[id, st] : constraints) {
    std::uint32_t root = uf.find(id);
    auto [it, inserted] = classState.emplace(root, st);
    if (!inserted && it->second != st)
      return SatResult::Unsat;
  }
  return SatResult::Sat;
}

std::unique_ptr<SolverInterface> makeBuiltinSolver() {
  return std::make_unique<BuiltinSolver>();
}

} // namespace vflite
