#include "vflite/frontend.hpp"

#include "vflite/diag.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace vflite {
namespace {

struct Token {
  enum Kind {
    Ident,
    KwFunc,
    KwCall,
    KwPhi,
    KwNull,
    KwIf,
    KwElse,
    KwDeref,
    KwReturn,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Assign,
    EqEq,
    BangEq,
  } kind;
  std::string text;
};

std::vector<Token> lexLine(std::string_view line, int lineNo) {
  std::vector<Token> toks;
  std::size_t i = 0;
  auto isIdent = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < line.size()) {
    char c = line[i];
    if (c == '#')
      break; // comment to end of line
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (isIdent(c)) {
      std::size_t j = i;
      while (j < line.size() && isIdent(line[j]))
        ++j;
      std::string word(line.substr(i, j - i));
      Token::Kind k = Token::Ident;
      if (word == "func")
        k = Token::KwFunc;
      else if (word == "call")
        k = Token::KwCall;
      else if (word == "phi")
        k = Token::KwPhi;
      else if (word == "null")
        k = Token::KwNull;
      else if (word == "if")
        k = Token::KwIf;
      else if (word == "else")
        k = Token::KwElse;
      else if (word == "deref")
        k = Token::KwDeref;
      else if (word == "return")
        k = Token::KwReturn;
      toks.push_back({k, std::move(word)});
      i = j;
      continue;
    }
    switch (c) {
    case '(':
      toks.push_back({Token::LParen, "("});
      ++i;
      break;
    case ')':
      toks.push_back({Token::RParen, ")"});
      ++i;
      break;
    case '{':
      toks.push_back({Token::LBrace, "{"});
      ++i;
      break;
    case '}':
      toks.push_back({Token::RBrace, "}"});
      ++i;
      break;
    case ',':
      toks.push_back({Token::Comma, ","});
      ++i;
      break;
    case '=':
      if (i + 1 < line.size() && line[i + 1] == '=') {
        toks.push_back({Token::EqEq, "=="});
        i += 2;
      } else {
        toks.push_back({Token::Assign, "="});
        ++i;
      }
      break;
    case '!':
      if (i + 1 < line.size() && line[i + 1] == '=') {
        toks.push_back({Token::BangEq, "!="});
        i += 2;
      } else {
        throw ParseError(lineNo, "stray '!'");
      }
      break;
    default:
      throw ParseError(lineNo,
                       std::string("unexpected character '") + c + "'");
    }
  }
  return toks;
}

// One open block. The target statement list is resolved on demand because
// Function::stmts reallocates as statements are appended.
struct BlockCtx {
  int ifStmt = -1; // index into Function::stmts, -1 for the function body
  bool isThen = true;
};

class Parser {
public:
  explicit Parser(std::string_view text) { prog_.text = std::string(text); }

  Program run() {
    std::istringstream in(prog_.text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw)) {
      ++lineNo;
      parseLine(lexLine(raw, lineNo), lineNo);
    }
    if (cur_)
      throw ParseError(lineNo, "unexpected end of input: unclosed '{'");
    resolveCalls();
    for (auto &f : prog_.functions)
      validateFunction(f);
    return std::move(prog_);
  }

private:
  Program prog_;
  Function *cur_ = nullptr;
  std::vector<BlockCtx> blocks_;

  void parseLine(std::vector<Token> toks, int lineNo) {
    std::size_t pos = 0;
    auto peek = [&](std::size_t k = 0) -> const Token * {
      return pos + k < toks.size() ? &toks[pos + k] : nullptr;
    };
    auto done = [&] { return pos >= toks.size(); };

    if (done())
      return;

    // Leading closers: '}' optionally followed by 'else {'.
    while (!done() && peek()->kind == Token::RBrace) {
      ++pos;
      closeBlock(lineNo, peek(), pos, toks);
    }
    if (done())
      return;

    if (peek()->kind == Token::KwFunc) {
      parseHeader(toks, pos, lineNo);
      if (pos != toks.size())
        throw ParseError(lineNo, "one statement per line");
      return;
    }

    if (!cur_)
      throw ParseError(lineNo, "statement outside of a function");

    parseStmt(toks, pos, lineNo);

    // Trailing closers may share the statement's line.
    while (!done() && peek()->kind == Token::RBrace) {
      ++pos;
      closeBlock(lineNo, peek(), pos, toks);
    }
    if (!done())
      throw ParseError(lineNo, "one statement per line");
  }

  void closeBlock(int lineNo, const Token *next, std::size_t &pos,
                  const std::vector<Token> &toks) {
    if (blocks_.empty())
      throw ParseError(lineNo, "unmatched '}'");
    BlockCtx closed = blocks_.back();
    blocks_.pop_back();
    if (blocks_.empty())
      cur_ = nullptr; // function body closed
    // '} else {' reopens the other side of the same if.
    if (next && next->kind == Token::KwElse) {
      if (closed.ifStmt < 0 || !closed.isThen)
        throw ParseError(lineNo, "'else' without a matching 'if'");
      ++pos;
      if (pos >= toks.size() || toks[pos].kind != Token::LBrace)
        throw ParseError(lineNo, "expected '{' after 'else'");
      ++pos;
      blocks_.push_back({closed.ifStmt, false});
    }
  }

  std::vector<int> &blockBody(const BlockCtx &b) {
    if (b.ifStmt < 0)
      return cur_->topLevel;
    return b.isThen ? cur_->stmts[b.ifStmt].thenBody
                    : cur_->stmts[b.ifStmt].elseBody;
  }

  void parseHeader(const std::vector<Token> &toks, std::size_t &pos,
                   int lineNo) {
    if (cur_)
      throw ParseError(lineNo, "nested function definition");
    ++pos; // func
    if (pos >= toks.size() || toks[pos].kind != Token::Ident)
      throw ParseError(lineNo, "expected function name");
    Function f;
    f.name = toks[pos++].text;
    f.line = lineNo;
    expect(toks, pos, Token::LParen, lineNo, "expected '('");
    if (pos < toks.size() && toks[pos].kind == Token::Ident) {
      f.params.push_back(toks[pos++].text);
      while (pos < toks.size() && toks[pos].kind == Token::Comma) {
        ++pos;
        if (pos >= toks.size() || toks[pos].kind != Token::Ident)
          throw ParseError(lineNo, "expected parameter name");
        f.params.push_back(toks[pos++].text);
      }
    }
    expect(toks, pos, Token::RParen, lineNo, "expected ')'");
    expect(toks, pos, Token::LBrace, lineNo, "expected '{'");
    for (const auto &g : prog_.functions)
      if (g.name == f.name)
        throw ParseError(lineNo, "duplicate function '" + f.name + "'");
    prog_.functions.push_back(std::move(f));
    cur_ = &prog_.functions.back();
    blocks_.push_back({-1, true});
  }

  void parseStmt(const std::vector<Token> &toks, std::size_t &pos,
                 int lineNo) {
    const Token &t = toks[pos];
    Stmt s;
    s.line = lineNo;
    switch (t.kind) {
    case Token::KwIf:
      parseIf(toks, pos, lineNo);
      return;
    case Token::KwDeref:
      ++pos;
      s.kind = StmtKind::Deref;
      s.uses.push_back(ident(toks, pos, lineNo, "expected variable"));
      appendStmt(std::move(s), lineNo);
      return;
    case Token::KwReturn:
      ++pos;
      s.kind = StmtKind::Return;
      s.uses.push_back(ident(toks, pos, lineNo, "expected variable"));
      appendStmt(std::move(s), lineNo);
      return;
    case Token::KwCall:
      ++pos;
      s.kind = StmtKind::Call;
      parseCallTail(s, toks, pos, lineNo);
      appendStmt(std::move(s), lineNo);
      return;
    case Token::Ident: {
      s.def = toks[pos++].text;
      expect(toks, pos, Token::Assign, lineNo, "expected '='");
      if (pos >= toks.size())
        throw ParseError(lineNo, "expected right-hand side");
      switch (toks[pos].kind) {
      case Token::KwNull:
        ++pos;
        s.kind = StmtKind::AssignNull;
        break;
      case Token::KwPhi:
        ++pos;
        s.kind = StmtKind::Phi;
        expect(toks, pos, Token::LParen, lineNo, "expected '('");
        s.uses.push_back(ident(toks, pos, lineNo, "expected variable"));
        expect(toks, pos, Token::Comma, lineNo, "expected ','");
        s.uses.push_back(ident(toks, pos, lineNo, "expected variable"));
        expect(toks, pos, Token::RParen, lineNo, "expected ')'");
        break;
      case Token::KwCall:
        ++pos;
        s.kind = StmtKind::Call;
        parseCallTail(s, toks, pos, lineNo);
        break;
      case Token::Ident:
        s.kind = StmtKind::Copy;
        s.uses.push_back(toks[pos++].text);
        if (s.uses[0] == s.def)
          throw ParseError(lineNo, "self-assignment '" + s.def + " = " +
                                       s.def + "'");
        break;
      default:
        throw ParseError(lineNo, "malformed right-hand side");
      }
      appendStmt(std::move(s), lineNo);
      return;
    }
    default:
      throw ParseError(lineNo, "malformed statement");
    }
  }

  void parseIf(const std::vector<Token> &toks, std::size_t &pos, int lineNo) {
    ++pos; // if
    Stmt s;
    s.kind = StmtKind::If;
    s.line = lineNo;
    expect(toks, pos, Token::LParen, lineNo, "expected '('");
    s.uses.push_back(ident(toks, pos, lineNo, "expected variable"));
    if (pos >= toks.size() ||
        (toks[pos].kind != Token::EqEq && toks[pos].kind != Token::BangEq))
      throw ParseError(lineNo, "expected '==' or '!='");
    s.cmp = toks[pos].kind == Token::EqEq ? CmpOp::EqNull : CmpOp::NeNull;
    ++pos;
    if (pos >= toks.size() || toks[pos].kind != Token::KwNull)
      throw ParseError(lineNo, "conditions compare against null");
    ++pos;
    expect(toks, pos, Token::RParen, lineNo, "expected ')'");
    expect(toks, pos, Token::LBrace, lineNo, "expected '{'");
    int idx = appendStmt(std::move(s), lineNo);
    blocks_.push_back({idx, true});
  }

  void parseCallTail(Stmt &s, const std::vector<Token> &toks,
                     std::size_t &pos, int lineNo) {
    s.callee = ident(toks, pos, lineNo, "expected callee name");
    expect(toks, pos, Token::LParen, lineNo, "expected '('");
    if (pos < toks.size() && toks[pos].kind == Token::Ident) {
      s.uses.push_back(toks[pos++].text);
      while (pos < toks.size() && toks[pos].kind == Token::Comma) {
        ++pos;
        s.uses.push_back(ident(toks, pos, lineNo, "expected argument"));
      }
    }
    expect(toks, pos, Token::RParen, lineNo, "expected ')'");
  }

  int appendStmt(Stmt s, int lineNo) {
    if (blocks_.empty())
      throw ParseError(lineNo, "statement outside of a function");
    cur_->stmts.push_back(std::move(s));
    int idx = static_cast<int>(cur_->stmts.size()) - 1;
    blockBody(blocks_.back()).push_back(idx);
    return idx;
  }

  static void expect(const std::vector<Token> &toks, std::size_t &pos,
                     Token::Kind k, int lineNo, const char *msg) {
    if (pos >= toks.size() || toks[pos].kind != k)
      throw ParseError(lineNo, msg);
    ++pos;
  }

  static std::string ident(const std::vector<Token> &toks, std::size_t &pos,
                           int lineNo, const char *msg) {
    if (pos >= toks.size() || toks[pos].kind != Token::Ident)
      throw ParseError(lineNo, msg);
    return toks[pos++].text;
  }

  void resolveCalls() {
    for (auto &f : prog_.functions) {
      for (auto &s : f.stmts) {
        if (s.kind != StmtKind::Call)
          continue;
        const Function *callee = prog_.findFunction(s.callee);
        if (!callee)
          throw ParseError(s.line, "call to undefined function '" +
                                       s.callee + "'");
        if (callee->params.size() != s.uses.size())
          throw ParseError(s.line, "call to '" + s.callee + "' passes " +
                                       std::to_string(s.uses.size()) +
                                       " argument(s), expected " +
                                       std::to_string(callee->params.size()));
        s.calleeId = static_cast<FuncId>(callee - prog_.functions.data());
      }
    }
  }

  void validateFunction(Function &f) {
    std::map<std::string, int> defLine; // name -> defining line
    for (const auto &p : f.params) {
      if (defLine.count(p))
        throw ParseError(f.line, "duplicate parameter '" + p + "'");
      defLine[p] = f.line;
    }
    for (const auto &s : f.stmts) {
      if (s.def.empty())
        continue;
      auto [it, inserted] = defLine.emplace(s.def, s.line);
      if (!inserted)
        throw ParseError(s.line, "'" + s.def + "' is defined more than once");
    }
    int returns = 0;
    for (std::size_t i = 0; i < f.stmts.size(); ++i) {
      const Stmt &s = f.stmts[i];
      for (const auto &u : s.uses) {
        auto it = defLine.find(u);
        if (it == defLine.end())
          throw ParseError(s.line, "use of undefined variable '" + u + "'");
        if (s.kind == StmtKind::Return && it->second >= s.line)
          throw ParseError(s.line,
                           "returned variable '" + u +
                               "' must be defined before the return");
      }
      if (s.kind == StmtKind::Return) {
        if (++returns > 1)
          throw ParseError(s.line, "multiple return statements");
        f.returnStmt = static_cast<int>(i);
      }
    }
    validatePhiPlacement(f, f.topLevel);
    for (const auto &s : f.stmts)
      if (s.kind == StmtKind::If) {
        validatePhiPlacement(f, s.thenBody);
        validatePhiPlacement(f, s.elseBody);
      }
  }

  // A phi must directly follow an if/else in its block, or follow another
  // phi that does.
  void validatePhiPlacement(const Function &f, const std::vector<int> &body) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      const Stmt &s = f.stmts[body[i]];
      if (s.kind != StmtKind::Phi)
        continue;
      bool ok = false;
      if (i > 0) {
        const Stmt &prev = f.stmts[body[i - 1]];
        ok = prev.kind == StmtKind::If || prev.kind == StmtKind::Phi;
      }
      if (!ok)
        throw ParseError(s.line, "phi is only allowed at a join point");
    }
  }
};

void printStmt(std::ostream &os, const Function &f, int idx, int depth);

void printBody(std::ostream &os, const Function &f,
               const std::vector<int> &body, int depth) {
  for (int idx : body)
    printStmt(os, f, idx, depth);
}

void printStmt(std::ostream &os, const Function &f, int idx, int depth) {
  const Stmt &s = f.stmts[idx];
  std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  os << pad;
  switch (s.kind) {
  case StmtKind::AssignNull:
    os << s.def << " = null\n";
    break;
  case StmtKind::Copy:
    os << s.def << " = " << s.uses[0] << "\n";
    break;
  case StmtKind::Phi:
    os << s.def << " = phi(" << s.uses[0] << ", " << s.uses[1] << ")\n";
    break;
  case StmtKind::Call: {
    if (!s.def.empty())
      os << s.def << " = ";
    os << "call " << s.callee << "(";
    for (std::size_t i = 0; i < s.uses.size(); ++i)
      os << (i ? ", " : "") << s.uses[i];
    os << ")\n";
    break;
  }
  case StmtKind::If:
    os << "if (" << s.uses[0]
       << (s.cmp == CmpOp::EqNull ? " == null" : " != null") << ") {\n";
    printBody(os, f, s.thenBody, depth + 1);
    if (!s.elseBody.empty()) {
      os << pad << "} else {\n";
      printBody(os, f, s.elseBody, depth + 1);
    }
    os << pad << "}\n";
    break;
  case StmtKind::Deref:
    os << "deref " << s.uses[0] << "\n";
    break;
  case StmtKind::Return:
    os << "return " << s.uses[0] << "\n";
    break;
  }
}

} // namespace

Program parseProgram(std::string_view text) { return Parser(text).run(); }

std::string printProgram(const Program &prog) {
  std::ostringstream os;
  for (const auto &f : prog.functions) {
    os << "func " << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i)
      os << (i ? ", " : "") << f.params[i];
    os << ") {\n";
    printBody(os, f, f.topLevel, 1);
    os << "}\n";
  }
  return os.str();
}

} // namespace vflite
