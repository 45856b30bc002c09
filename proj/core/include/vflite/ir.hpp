#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vflite {

using FuncId = std::uint32_t;
constexpr FuncId kNoFunc = ~FuncId{0};

enum class CmpOp : std::uint8_t { EqNull, NeNull };

enum class StmtKind : std::uint8_t {
  AssignNull, // x = null
  Copy,       // x = y
  Phi,        // x = phi(a, b)
  Call,       // x = call f(...)  or  call f(...)
  If,         // if (x ==|!= null) { ... } [else { ... }]
  Deref,      // deref x
  Return,     // return x
};

/// One statement. `line` doubles as the statement id: ids are source line
/// numbers and unique across the whole program.
struct Stmt {
  StmtKind kind;
  int line = 0;

  std::string def;               // defined variable ("" when none)
  std::vector<std::string> uses; // used variables, operand order

  // Call
  std::string callee;
  FuncId calleeId = kNoFunc; // resolved by the parser

  // If
  CmpOp cmp = CmpOp::EqNull;
  std::vector<int> thenBody; // indices into Function::stmts
  std::vector<int> elseBody;
};

struct Function {
  std::string name;
  int line = 0; // line of the `func` header
  std::vector<std::string> params;
  std::vector<Stmt> stmts;   // all statements, flattened
  std::vector<int> topLevel; // indices of statements at function scope
  std::optional<int> returnStmt; // index of the lone return, if any
};

struct Program {
  std::string text; // original source, byte-for-byte
  std::vector<Function> functions;

  const Function *findFunction(const std::string &name) const {
    for (const auto &f : functions)
      if (f.name == name)
        return &f;
    return nullptr;
  }
};

} // namespace vflite
