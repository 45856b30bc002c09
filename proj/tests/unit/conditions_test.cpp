#include "doctest.h"

#include "test_util.hpp"
#include "vflite/conditions.hpp"
#include "vflite/frontend.hpp"

#include <algorithm>
#include <random>

using namespace vflite;
using namespace vflite::testsupport;

TEST_CASE("context interning: stacks, composition, display") {
  ContextTable t;
  CHECK(t.size() == 1);
  CHECK(t.display(kRootCtx) == "");
  CHECK(t.stack(kRootCtx).empty());

  CtxId c2 = t.push(2, kRootCtx);
  CtxId c52 = t.push(5, c2); // innermost first: [5, 2]
  CHECK(t.stack(c52) == std::vector<int>{5, 2});
  CHECK(t.display(c52) == "#5#2");

  // Interning: identical pushes return the same id.
  CHECK(t.push(2, kRootCtx) == c2);
  CHECK(t.push(5, c2) == c52);

  // Composition stacks a callee-relative context on top of a callsite.
  CtxId c7 = t.push(7, kRootCtx);
  CtxId composed = t.composeAtCall(c7, 3); // [7] on [3] -> [7, 3]
  CHECK(t.stack(composed) == std::vector<int>{7, 3});
  CHECK(t.composeAtCall(kRootCtx, 3) == t.push(3, kRootCtx));

  // Deep composition keeps inner order.
  CtxId deep = t.composeAtCall(c52, 9);
  CHECK(t.stack(deep) == std::vector<int>{5, 2, 9});
  CHECK(t.display(deep) == "#5#2#9");
}

TEST_CASE("composition is safe while the table grows") {
  // Compose repeatedly so the table reallocates mid-operation if the
  // implementation holds references into it.
  ContextTable t;
  CtxId inner = kRootCtx;
  for (int i = 1; i <= 200; ++i)
    inner = t.push(i, inner);
  CtxId out = t.composeAtCall(inner, 999);
  REQUIRE(t.stack(out).size() == 201);
  CHECK(t.stack(out).back() == 999);
  CHECK(t.stack(out)[0] == 200);
}

namespace {

Pdg tinyPdg() {
  return buildPdg(parseProgram("func f(a, b) {\n    x = null\n    deref a\n"
                               "    deref b\n}\n"));
}

Atom mkAtom(AtomKind k, VertexId va, VertexId vb, CtxId ca = kRootCtx,
            CtxId cb = kRootCtx) {
  return Atom{k, Term{va, ca}, Term{vb, cb}, ""};
}

} // namespace

TEST_CASE("conjunction stays duplicate-free in first-seen order") {
  Atom a1 = mkAtom(AtomKind::FlowEq, 0, 1);
  Atom a2 = mkAtom(AtomKind::NullEq, 0, 2);
  PathCondition c;
  c = c.conjoin(a1).conjoin(a2).conjoin(a1).conjoin(a2);
  REQUIRE(c.atoms().size() == 2);
  CHECK(c.atoms()[0] == a1);
  CHECK(c.atoms()[1] == a2);

  PathCondition other;
  other = other.conjoin(a2).conjoin(mkAtom(AtomKind::FlowEq, 1, 3));
  PathCondition merged = c.conjoin(other);
  REQUIRE(merged.atoms().size() == 3);
  CHECK(merged.atoms()[2] == mkAtom(AtomKind::FlowEq, 1, 3));
}

TEST_CASE("conjunction is commutative as a set, on random inputs") {
  std::mt19937 rng(99);
  for (int round = 0; round < 300; ++round) {
    CAPTURE(round);
    std::vector<Atom> pool;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i)
      pool.push_back(mkAtom(static_cast<AtomKind>(rng() % 3), rng() % 5,
                            rng() % 5, rng() % 3, rng() % 3));
    PathCondition ab, ba;
    for (const Atom &a : pool)
      ab = ab.conjoin(a);
    for (auto it = pool.rbegin(); it != pool.rend(); ++it)
      ba = ba.conjoin(*it);
    auto sortedAtoms = [](const PathCondition &c) {
      std::vector<Atom> v = c.atoms();
      std::sort(v.begin(), v.end());
      return v;
    };
    CHECK(sortedAtoms(ab) == sortedAtoms(ba));
  }
}

TEST_CASE("provenance stays sorted and unique") {
  PathCondition c({}, {7, 3, 7, 3, 1});
  CHECK(c.provenance() == std::vector<SummaryId>{1, 3, 7});
  PathCondition d = c.withProvenance({9, 1, 3});
  CHECK(d.provenance() == std::vector<SummaryId>{1, 3, 7, 9});
  CHECK(c.provenance() == std::vector<SummaryId>{1, 3, 7}); // immutable

  // Conjoining whole conditions merges provenance too (sorted, deduped);
  // only the single-atom overload leaves it untouched.
  PathCondition e({}, {5});
  CHECK(c.conjoin(e).provenance() == std::vector<SummaryId>{1, 3, 5, 7});
  CHECK(c.conjoin(mkAtom(AtomKind::Opaque, 0, 0)).provenance() ==
        std::vector<SummaryId>{1, 3, 7});
}

TEST_CASE("atoms and conditions print in the frozen format") {
  Pdg g = tinyPdg();
  ContextTable t;
  CtxId c3 = t.push(3, kRootCtx);

  // Vertex 0 is a@1, vertex 2 is x's null at line 2.
  REQUIRE(g.display(0) == "a@1");
  REQUIRE(g.display(2) == "null@2");

  CHECK(atomStr(mkAtom(AtomKind::FlowEq, 0, 2), g, t) == "a@1 = null@2");
  CHECK(atomStr(mkAtom(AtomKind::NullEq, 0, 2, c3), g, t) ==
        "a@1#3 == null@2");
  CHECK(atomStr(mkAtom(AtomKind::NullNe, 0, 2), g, t) == "a@1 != null@2");
  Atom op{AtomKind::Opaque, {}, {}, "depth"};
  CHECK(atomStr(op, g, t) == "opaque(depth)");

  PathCondition c;
  CHECK(c.str(g, t) == "true");
  c = c.conjoin(mkAtom(AtomKind::FlowEq, 0, 2));
  c = c.conjoin(mkAtom(AtomKind::NullNe, 1, 2));
  CHECK(c.str(g, t) == "a@1 = null@2 && b@1 != null@2");
}
