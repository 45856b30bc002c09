#include "doctest.h"

#include "brute_solver.hpp"
#include "test_util.hpp"
#include "vflite/conditions.hpp"
#include "vflite/frontend.hpp"
#include "vflite/solver.hpp"

#include <memory>
#include <random>

using namespace vflite;
using namespace vflite::testsupport;

namespace {

// A fixed mini-program so atoms can reference real vertices, including null
// constants the solver must pin to the null value.
Pdg solverPdg() {
  return buildPdg(parseProgram("func f(a, b, c) {\n"
                               "    x = null\n"
                               "    y = null\n"
                               "    deref a\n"
                               "}\n"));
}

Atom mkAtom(AtomKind k, VertexId va, VertexId vb, CtxId ca = kRootCtx,
            CtxId cb = kRootCtx) {
  return Atom{k, Term{va, ca}, Term{vb, cb}, ""};
}

} // namespace

TEST_CASE("builtin solver: frozen verdicts on hand-built conjunctions") {
  Pdg g = solverPdg();
  // Vertices: a@1, b@1, c@1 params; null@2 (id 3); null@3 (id 4); *a@4.
  REQUIRE(g.display(3) == "null@2");
  REQUIRE(g.display(4) == "null@3");
  auto solver = makeBuiltinSolver();

  PathCondition empty;
  CHECK(solver->check(empty, g) == SatResult::Sat);

  // a = null && a != null  -> unsat
  PathCondition contra;
  contra = contra.conjoin(mkAtom(AtomKind::NullEq, 0, 3));
  contra = contra.conjoin(mkAtom(AtomKind::NullNe, 0, 3));
  CHECK(solver->check(contra, g) == SatResult::Unsat);

  // a = b && b == null && a != null  -> unsat through equality chain
  PathCondition chain;
  chain = chain.conjoin(mkAtom(AtomKind::FlowEq, 0, 1));
  chain = chain.conjoin(mkAtom(AtomKind::NullEq, 1, 3));
  chain = chain.conjoin(mkAtom(AtomKind::NullNe, 0, 4));
  CHECK(solver->check(chain, g) == SatResult::Unsat);

  // Two distinct null constants are the same value: null@2 != null@3 unsat.
  PathCondition nulls;
  nulls = nulls.conjoin(mkAtom(AtomKind::NullNe, 3, 4));
  CHECK(solver->check(nulls, g) == SatResult::Unsat);
  PathCondition nullsEq;
  nullsEq = nullsEq.conjoin(mkAtom(AtomKind::NullEq, 3, 4));
  CHECK(solver->check(nullsEq, g) == SatResult::Sat);

  // Same vertex in different contexts is a different term.
  ContextTable t;
  CtxId c9 = t.push(9, kRootCtx);
  PathCondition ctxd;
  ctxd = ctxd.conjoin(mkAtom(AtomKind::NullEq, 0, 3, kRootCtx));
  ctxd = ctxd.conjoin(mkAtom(AtomKind::NullNe, 0, 3, c9));
  CHECK(solver->check(ctxd, g) == SatResult::Sat);
  // ...but tying them together makes it contradictory again.
  ctxd = ctxd.conjoin(Atom{AtomKind::FlowEq, Term{0, kRootCtx}, Term{0, c9}, ""});
  CHECK(solver->check(ctxd, g) == SatResult::Unsat);

  // Opaque atoms poison nothing by themselves: treated as unconstrained.
  PathCondition op;
  op = op.conjoin(Atom{AtomKind::Opaque, {}, {}, "depth cap"});
  CHECK(solver->check(op, g) == SatResult::Sat);
  // Opaque in an otherwise-unsat conjunction does not rescue it.
  PathCondition opContra = contra.conjoin(Atom{AtomKind::Opaque, {}, {}, "x"});
  CHECK(solver->check(opContra, g) == SatResult::Unsat);
}

TEST_CASE("builtin solver: call counting resets") {
  Pdg g = solverPdg();
  auto solver = makeBuiltinSolver();
  CHECK(solver->callCount() == 0);
  PathCondition empty;
  (void)solver->check(empty, g);
  (void)solver->check(empty, g);
  CHECK(solver->callCount() == 2);
  solver->resetCallCount();
  CHECK(solver->callCount() == 0);
}

TEST_CASE("builtin solver: monotonicity - adding atoms never gains sat") {
  Pdg g = solverPdg();
  auto solver = makeBuiltinSolver();
  std::mt19937 rng(2024);
  for (int round = 0; round < 500; ++round) {
    CAPTURE(round);
    PathCondition c;
    bool wasUnsat = false;
    for (int i = 0; i < 6; ++i) {
      AtomKind k = static_cast<AtomKind>(rng() % 3);
      VertexId va = rng() % g.numVertices();
      VertexId vb = rng() % g.numVertices();
      c = c.conjoin(mkAtom(k, va, vb, rng() % 2, rng() % 2));
      bool unsat = solver->check(c, g) == SatResult::Unsat;
      if (wasUnsat)
        CHECK(unsat); // once unsat, forever unsat
      wasUnsat = unsat;
    }
  }
}

TEST_CASE("builtin solver: verdict independent of atom insertion order") {
  Pdg g = solverPdg();
  auto solver = makeBuiltinSolver();
  std::mt19937 rng(77);
  for (int round = 0; round < 400; ++round) {
    CAPTURE(round);
    std::vector<Atom> atoms;
    int n = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i)
      atoms.push_back(mkAtom(static_cast<AtomKind>(rng() % 3),
                             rng() % g.numVertices(), rng() % g.numVertices(),
                             rng() % 2, rng() % 2));
    PathCondition fwd, rev;
    for (const Atom &a : atoms)
      fwd = fwd.conjoin(a);
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it)
      rev = rev.conjoin(*it);
    std::shuffle(atoms.begin(), atoms.end(), rng);
    PathCondition shuf;
    for (const Atom &a : atoms)
      shuf = shuf.conjoin(a);
    SatResult r = solver->check(fwd, g);
    CHECK(solver->check(rev, g) == r);
    CHECK(solver->check(shuf, g) == r);
  }
}

TEST_CASE("builtin solver agrees with brute-force enumeration") {
  Pdg g = solverPdg();
  auto solver = makeBuiltinSolver();
  std::mt19937 rng(31337);
  int satCount = 0, unsatCount = 0;
  for (int round = 0; round < 3000; ++round) {
    CAPTURE(round);
    // Keep each conjunction over at most six distinct terms so exhaustive
    // enumeration stays cheap; atoms draw their endpoints from the pool.
    // Null tests always compare against a null literal, matching the only
    // shape the analysis emits (branch conditions test a value against
    // null, never against another variable).
    std::vector<Term> pool;
    for (int i = 0; i < 6; ++i)
      pool.push_back(Term{static_cast<VertexId>(rng() % g.numVertices()),
                          static_cast<CtxId>(rng() % 3)});
    auto pick = [&]() { return pool[rng() % pool.size()]; };
    auto pickNull = [&]() {
      return Term{static_cast<VertexId>(3 + rng() % 2),
                  static_cast<CtxId>(rng() % 3)};
    };
    PathCondition c;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      AtomKind k = static_cast<AtomKind>(rng() % 4);
      if (k == AtomKind::Opaque)
        c = c.conjoin(Atom{AtomKind::Opaque, {}, {}, "fuzz"});
      else if (k == AtomKind::FlowEq)
        c = c.conjoin(Atom{k, pick(), pick(), ""});
      else
        c = c.conjoin(Atom{k, pick(), pickNull(), ""});
    }
    SatResult fast = solver->check(c, g);
    SatResult slow = bruteForceCheck(c, g);
    CHECK(fast == slow);
    (fast == SatResult::Sat ? satCount : unsatCount)++;
  }
  // The fuzz distribution must genuinely exercise both verdicts.
  CHECK(satCount > 100);
  CHECK(unsatCount > 100);
}
