//===-- QasmParser.cpp - Lexer and recursive-descent parser ---------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/frontend/Qasm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

namespace qcc::qasm {

namespace {

enum class Tok {
  Ident,
  Integer,
  Float,
  String,
  Semi,
  Comma,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  At,
  Arrow,
  Equal,
  EqualEqual,
  Colon,
  Plus,
  Minus,
  Star,
  Slash,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int64_t intValue = 0;
  double floatValue = 0.0;
  Location loc;
};

class Lexer {
public:
  Lexer(const std::string& text, std::string file, DiagnosticList& diags)
      : text_(text), file_(std::move(file)), diags_(diags) {}

  Token next() {
    skipTrivia();
    Token t;
    t.loc = here();
    if (pos_ >= text_.size())
      return t;
    char c = text_[pos_];
    auto punct = [&](Tok kind) {
      t.kind = kind;
      t.text = c;
      advance();
      return t;
    };
    switch (c) {
    case ';':
      return punct(Tok::Semi);
    case ',':
      return punct(Tok::Comma);
    case '(':
      return punct(Tok::LParen);
    case ')':
      return punct(Tok::RParen);
    case '[':
      return punct(Tok::LBracket);
    case ']':
      return punct(Tok::RBracket);
    case '{':
      return punct(Tok::LBrace);
    case '}':
      return punct(Tok::RBrace);
    case '@':
      return punct(Tok::At);
    case ':':
      return punct(Tok::Colon);
    case '+':
      return punct(Tok::Plus);
    case '*':
      return punct(Tok::Star);
    case '/':
      return punct(Tok::Slash);
    case '-':
      advance();
      if (pos_ < text_.size() && text_[pos_] == '>') {
        advance();
        t.kind = Tok::Arrow;
        return t;
      }
      t.kind = Tok::Minus;
      return t;
    case '=':
      advance();
      if (pos_ < text_.size() && text_[pos_] == '=') {
        advance();
        t.kind = Tok::EqualEqual;
        return t;
      }
      t.kind = Tok::Equal;
      return t;
    case '"': {
      advance();
      t.kind = Tok::String;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        t.text += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size())
        error("unterminated string literal", t.loc);
      else
        advance();
      return t;
    }
    default:
      break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))
      return lexNumber(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        t.text += text_[pos_];
        advance();
      }
      return t;
    }
    error(std::string("unexpected character '") + c + "'", t.loc);
    advance();
    return next();
  }

  void error(const std::string& msg, Location loc) {
    if (!failed_ && !muted_)
      diags_.error(msg, loc);
    failed_ = true;
  }

  [[nodiscard]] bool failed() const { return failed_; }
  Location here() const { return Location{file_, line_, col_}; }

  /// Copy for speculative lookahead; never reports diagnostics.
  [[nodiscard]] Lexer probeCopy() const {
    Lexer probe = *this;
    probe.muted_ = true;
    return probe;
  }

private:
  const std::string& text_;
  std::string file_;
  DiagnosticList& diags_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
  bool failed_ = false;
  bool muted_ = false;

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipTrivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          advance();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
          advance();
        if (pos_ + 1 < text_.size()) {
          advance();
          advance();
        }
      } else {
        break;
      }
    }
  }

  Token lexNumber(Token t) {
    size_t start = pos_;
    bool isFloat = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '.') {
        isFloat = true;
        advance();
      } else if (c == 'e' || c == 'E') {
        isFloat = true;
        advance();
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
          advance();
      } else {
        break;
      }
    }
    t.text = text_.substr(start, pos_ - start);
    if (isFloat) {
      t.kind = Tok::Float;
      t.floatValue = std::strtod(t.text.c_str(), nullptr);
    } else {
      t.kind = Tok::Integer;
      t.intValue = std::strtoll(t.text.c_str(), nullptr, 10);
    }
    return t;
  }
};

/// Names legal in angle expressions.
const std::map<std::string, double>& angleConstants() {
  static const std::map<std::string, double> table = {
      {"pi", std::numbers::pi},
      {"tau", 2 * std::numbers::pi},
      {"euler", std::numbers::e},
  };
  return table;
}

class Parser {
public:
  Parser(const std::string& text, const std::string& file,
         DiagnosticList& diags)
      : lexer_(text, file, diags), diags_(diags) {
    tok_ = lexer_.next();
  }

  std::optional<Program> run() {
    parseHeader();
    Program program;
    while (tok_.kind != Tok::End && !failed()) {
      if (auto stmt = parseStatement(/*inGateBody=*/false))
        program.statements.push_back(std::move(*stmt));
    }
    if (failed())
      return std::nullopt;
    return program;
  }

private:
  Lexer lexer_;
  DiagnosticList& diags_;
  Token tok_;
  std::vector<std::string> currentParams_; // gate-def scope
  std::vector<std::string> loopVars_;

  [[nodiscard]] bool failed() const { return lexer_.failed(); }
  void error(const std::string& msg) { lexer_.error(msg, tok_.loc); }
  void errorAt(const std::string& msg, Location loc) {
    lexer_.error(msg, loc);
  }
  void consume() { tok_ = lexer_.next(); }

  bool expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      error(std::string("expected ") + what + foundText());
      return false;
    }
    consume();
    return true;
  }

  std::string foundText() const {
    if (tok_.kind == Tok::End)
      return ", found the end of input";
    return ", found '" + tok_.text + "'";
  }

  bool isIdent(const char* text) const {
    return tok_.kind == Tok::Ident && tok_.text == text;
  }

  void parseHeader() {
    if (!isIdent("OPENQASM"))
      return; // header is optional
    consume();
    bool ok = false;
    if (tok_.kind == Tok::Integer && tok_.intValue == 3)
      ok = true;
    else if (tok_.kind == Tok::Float && tok_.floatValue == 3.0)
      ok = true;
    else if ((tok_.kind == Tok::Float && tok_.floatValue == 2.0) ||
             (tok_.kind == Tok::Integer && tok_.intValue == 2))
      error("OpenQASM 2 input is not supported; please provide OpenQASM 3");
    if (!ok && !failed())
      error("unsupported OPENQASM version");
    if (!failed()) {
      consume();
      expect(Tok::Semi, "';'");
    }
  }

  std::optional<Stmt> parseStatement(bool inGateBody) {
    Location loc = tok_.loc;
    if (tok_.kind != Tok::Ident) {
      error("expected a statement");
      consume();
      return std::nullopt;
    }
    const std::string head = tok_.text;

    if (!inGateBody) {
      if (head == "include")
        return parseInclude();
      if (head == "qubit" || head == "bit")
        return parseDecl(loc);
      if (head == "measure")
        return parseMeasureArrow(loc);
      if (head == "reset") {
        consume();
        ResetStmt reset{parseOperand()};
        expect(Tok::Semi, "';'");
        return Stmt{loc, std::move(reset)};
      }
      if (head == "if")
        return parseIf(loc);
      if (head == "for")
        return parseFor(loc);
      if (head == "while")
        return parseWhile(loc);
      if (head == "gate")
        return parseGateDef(loc);
      if (head == "def" || head == "delay" || head == "extern" ||
          head == "input" || head == "output" || head == "barrier" ||
          head == "defcal" || head == "cal" || head == "pragma" ||
          head == "const" || head == "int" || head == "uint" ||
          head == "float" || head == "array" || head == "creg" ||
          head == "qreg") {
        error("unsupported feature: '" + head + "'");
        return std::nullopt;
      }
      // `c = measure q;` assignment form.
      if (peekAssignsMeasure())
        return parseMeasureAssign(loc);
    }
    return parseGateApp(loc);
  }

  std::optional<Stmt> parseInclude() {
    consume();
    if (tok_.kind != Tok::String) {
      error("expected a file name after include");
      return std::nullopt;
    }
    if (tok_.text != "stdgates.inc")
      error("unsupported feature: include \"" + tok_.text + "\"");
    consume();
    expect(Tok::Semi, "';'");
    return std::nullopt; // stdgates are always available
  }

  std::optional<Stmt> parseDecl(Location loc) {
    DeclStmt decl;
    decl.isQubit = tok_.text == "qubit";
    consume();
    if (tok_.kind == Tok::LBracket) {
      consume();
      if (tok_.kind != Tok::Integer || tok_.intValue < 1) {
        error("expected a positive register size");
        return std::nullopt;
      }
      decl.size = tok_.intValue;
      consume();
      if (!expect(Tok::RBracket, "']'"))
        return std::nullopt;
    }
    if (tok_.kind != Tok::Ident) {
      error("expected a declaration name");
      return std::nullopt;
    }
    decl.name = tok_.text;
    consume();
    expect(Tok::Semi, "';'");
    return Stmt{loc, std::move(decl)};
  }

  Operand parseOperand() {
    Operand op;
    op.loc = tok_.loc;
    if (tok_.kind != Tok::Ident) {
      error("expected a qubit or bit name");
      return op;
    }
    op.name = tok_.text;
    consume();
    if (tok_.kind == Tok::LBracket) {
      consume();
      if (tok_.kind == Tok::Integer) {
        op.index = tok_.intValue;
        consume();
      } else if (tok_.kind == Tok::Ident &&
                 std::find(loopVars_.begin(), loopVars_.end(), tok_.text) !=
                     loopVars_.end()) {
        error("non-constant register index '" + tok_.text +
              "' (dynamic indexing is not supported)");
        consume();
      } else {
        error("expected a constant register index");
        consume();
      }
      expect(Tok::RBracket, "']'");
    }
    return op;
  }

  std::optional<Stmt> parseMeasureArrow(Location loc) {
    consume(); // measure
    MeasureStmt stmt;
    stmt.qubit = parseOperand();
    if (!expect(Tok::Arrow, "'->'"))
      return std::nullopt;
    stmt.target = parseOperand();
    expect(Tok::Semi, "';'");
    return Stmt{loc, std::move(stmt)};
  }

  bool peekAssignsMeasure() {
    Lexer probe = lexer_.probeCopy();
    Token t1 = probe.next(); // after the identifier
    if (t1.kind == Tok::LBracket) {
      Token idx = probe.next();
      if (idx.kind != Tok::Integer)
        return false;
      if (probe.next().kind != Tok::RBracket)
        return false;
      t1 = probe.next();
    }
    if (t1.kind != Tok::Equal)
      return false;
    Token t2 = probe.next();
    return t2.kind == Tok::Ident && t2.text == "measure";
  }

  std::optional<Stmt> parseMeasureAssign(Location loc) {
    MeasureStmt stmt;
    stmt.target = parseOperand();
    if (!expect(Tok::Equal, "'='"))
      return std::nullopt;
    if (!isIdent("measure")) {
      error("expected 'measure'");
      return std::nullopt;
    }
    consume();
    stmt.qubit = parseOperand();
    expect(Tok::Semi, "';'");
    return Stmt{loc, std::move(stmt)};
  }

  /// Parses `(cond)` where cond is `c`, `c[i]`, `c == 0/1`, returning the
  /// operand and whether the comparison inverts it.
  std::pair<Operand, bool> parseCondition() {
    expect(Tok::LParen, "'('");
    Operand cond = parseOperand();
    bool negated = false;
    if (tok_.kind == Tok::EqualEqual) {
      consume();
      if (tok_.kind != Tok::Integer ||
          (tok_.intValue != 0 && tok_.intValue != 1)) {
        error("conditions compare against 0 or 1");
      } else {
        negated = tok_.intValue == 0;
      }
      consume();
    }
    expect(Tok::RParen, "')'");
    return {cond, negated};
  }

  StmtList parseBlock() {
    StmtList body;
    if (tok_.kind == Tok::LBrace) {
      consume();
      while (tok_.kind != Tok::RBrace && tok_.kind != Tok::End && !failed())
        if (auto stmt = parseStatement(false))
          body.push_back(std::move(*stmt));
      expect(Tok::RBrace, "'}'");
    } else {
      // Single-statement body.
      if (auto stmt = parseStatement(false))
        body.push_back(std::move(*stmt));
    }
    return body;
  }

  std::optional<Stmt> parseIf(Location loc) {
    consume();
    IfStmt stmt;
    auto [cond, negated] = parseCondition();
    stmt.cond = cond;
    stmt.negated = negated;
    stmt.thenBody = parseBlock();
    if (isIdent("else")) {
      consume();
      stmt.elseBody = parseBlock();
    }
    return Stmt{loc, std::move(stmt)};
  }

  ForBound parseForBound() {
    ForBound bound;
    bool negative = false;
    if (tok_.kind == Tok::Minus) {
      negative = true;
      consume();
    }
    if (tok_.kind == Tok::Integer) {
      bound.value = negative ? -tok_.intValue : tok_.intValue;
      consume();
      return bound;
    }
    if (tok_.kind == Tok::Ident && !negative &&
        std::find(loopVars_.begin(), loopVars_.end(), tok_.text) !=
            loopVars_.end()) {
      bound.var = tok_.text;
      consume();
      return bound;
    }
    error("expected an integer loop bound");
    return bound;
  }

  std::optional<Stmt> parseFor(Location loc) {
    consume();
    if (isIdent("uint") || isIdent("int")) {
      consume();
      if (tok_.kind == Tok::LBracket) { // uint[32]
        consume();
        if (tok_.kind == Tok::Integer)
          consume();
        expect(Tok::RBracket, "']'");
      }
    }
    ForStmt stmt;
    if (tok_.kind != Tok::Ident) {
      error("expected a loop variable");
      return std::nullopt;
    }
    stmt.var = tok_.text;
    consume();
    if (!isIdent("in")) {
      error("expected 'in'");
      return std::nullopt;
    }
    consume();
    if (!expect(Tok::LBracket, "'['"))
      return std::nullopt;
    stmt.lb = parseForBound();
    if (!expect(Tok::Colon, "':'"))
      return std::nullopt;
    ForBound second = parseForBound();
    if (tok_.kind == Tok::Colon) {
      consume();
      stmt.step = second;
      stmt.ub = parseForBound();
    } else {
      stmt.step = ForBound{1, ""};
      stmt.ub = second;
    }
    if (!expect(Tok::RBracket, "']'"))
      return std::nullopt;
    loopVars_.push_back(stmt.var);
    stmt.body = parseBlock();
    loopVars_.pop_back();
    return Stmt{loc, std::move(stmt)};
  }

  std::optional<Stmt> parseWhile(Location loc) {
    consume();
    WhileStmt stmt;
    auto [cond, negated] = parseCondition();
    stmt.cond = cond;
    stmt.negated = negated;
    stmt.body = parseBlock();
    return Stmt{loc, std::move(stmt)};
  }

  std::optional<Stmt> parseGateDef(Location loc) {
    consume();
    GateDefStmt def;
    if (tok_.kind != Tok::Ident) {
      error("expected a gate name");
      return std::nullopt;
    }
    def.name = tok_.text;
    consume();
    if (tok_.kind == Tok::LParen) {
      consume();
      while (tok_.kind != Tok::RParen && !failed()) {
        if (tok_.kind != Tok::Ident) {
          error("expected a parameter name");
          return std::nullopt;
        }
        def.params.push_back(tok_.text);
        consume();
        if (tok_.kind == Tok::Comma)
          consume();
      }
      if (!expect(Tok::RParen, "')'"))
        return std::nullopt;
    }
    while (tok_.kind == Tok::Ident && !failed()) {
      def.qubits.push_back(tok_.text);
      consume();
      if (tok_.kind == Tok::Comma) {
        consume();
        continue;
      }
      break;
    }
    if (!expect(Tok::LBrace, "'{'"))
      return std::nullopt;
    currentParams_ = def.params;
    while (tok_.kind != Tok::RBrace && tok_.kind != Tok::End && !failed()) {
      Location stmtLoc = tok_.loc;
      if (auto stmt = parseStatement(/*inGateBody=*/true))
        def.body.push_back(std::move(*stmt));
      else if (!failed())
        errorAt("gate bodies may contain only gate applications", stmtLoc);
    }
    currentParams_.clear();
    expect(Tok::RBrace, "'}'");
    return Stmt{loc, std::move(def)};
  }

  //===--------------------------------------------------------------------===//
  // Gate applications and angle expressions
  //===--------------------------------------------------------------------===//

  std::optional<Stmt> parseGateApp(Location loc) {
    GateApp app;
    // Modifier chain, outermost first.
    while (true) {
      if (isIdent("ctrl") || isIdent("negctrl")) {
        Modifier mod;
        mod.kind = tok_.text == "ctrl" ? Modifier::Kind::Ctrl
                                       : Modifier::Kind::NegCtrl;
        consume();
        if (!expect(Tok::At, "'@'"))
          return std::nullopt;
        app.modifiers.push_back(mod);
        continue;
      }
      if (isIdent("inv")) {
        consume();
        if (!expect(Tok::At, "'@'"))
          return std::nullopt;
        app.modifiers.push_back({Modifier::Kind::Inv, 1});
        continue;
      }
      if (isIdent("pow")) {
        consume();
        if (!expect(Tok::LParen, "'('"))
          return std::nullopt;
        bool negative = false;
        if (tok_.kind == Tok::Minus) {
          negative = true;
          consume();
        }
        if (tok_.kind != Tok::Integer) {
          error("expected an integer power");
          return std::nullopt;
        }
        int64_t exponent = negative ? -tok_.intValue : tok_.intValue;
        consume();
        if (!expect(Tok::RParen, "')'") || !expect(Tok::At, "'@'"))
          return std::nullopt;
        app.modifiers.push_back({Modifier::Kind::Pow, exponent});
        continue;
      }
      break;
    }
    if (tok_.kind != Tok::Ident) {
      error("expected a gate name");
      return std::nullopt;
    }
    app.gate = tok_.text;
    consume();
    if (tok_.kind == Tok::LParen) {
      consume();
      while (tok_.kind != Tok::RParen && !failed()) {
        app.angles.push_back(parseAngleExpr());
        if (tok_.kind == Tok::Comma)
          consume();
      }
      if (!expect(Tok::RParen, "')'"))
        return std::nullopt;
    }
    while (tok_.kind == Tok::Ident && !failed()) {
      app.qubits.push_back(parseOperand());
      if (tok_.kind == Tok::Comma) {
        consume();
        continue;
      }
      break;
    }
    expect(Tok::Semi, "';'");
    if (failed())
      return std::nullopt;
    return Stmt{loc, std::move(app)};
  }

  /// expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
  /// factor := ['-'] primary; primary := number | pi | tau | euler | param
  ///         | '(' expr ')'.
  /// A parameter reference may only appear bare: arithmetic on parameters
  /// is reported as unsupported.
  Angle parseAngleExpr() {
    Angle lhs = parseAngleTerm();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      bool add = tok_.kind == Tok::Plus;
      consume();
      Angle rhs = parseAngleTerm();
      requireConst(lhs);
      requireConst(rhs);
      lhs.value = add ? lhs.value + rhs.value : lhs.value - rhs.value;
    }
    return lhs;
  }

  Angle parseAngleTerm() {
    Angle lhs = parseAngleFactor();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      bool mul = tok_.kind == Tok::Star;
      consume();
      Angle rhs = parseAngleFactor();
      requireConst(lhs);
      requireConst(rhs);
      lhs.value = mul ? lhs.value * rhs.value : lhs.value / rhs.value;
    }
    return lhs;
  }

  Angle parseAngleFactor() {
    if (tok_.kind == Tok::Minus) {
      consume();
      Angle inner = parseAngleFactor();
      requireConst(inner);
      inner.value = -inner.value;
      return inner;
    }
    return parseAnglePrimary();
  }

  Angle parseAnglePrimary() {
    Angle angle;
    switch (tok_.kind) {
    case Tok::Integer:
      angle.value = double(tok_.intValue);
      consume();
      return angle;
    case Tok::Float:
      angle.value = tok_.floatValue;
      consume();
      return angle;
    case Tok::LParen: {
      consume();
      Angle inner = parseAngleExpr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    case Tok::Ident: {
      auto named = angleConstants().find(tok_.text);
      if (named != angleConstants().end()) {
        angle.value = named->second;
        consume();
        return angle;
      }
      for (size_t i = 0; i < currentParams_.size(); ++i)
        if (currentParams_[i] == tok_.text) {
          angle.paramIndex = int(i);
          consume();
          return angle;
        }
      error("unknown name '" + tok_.text + "' in an angle expression");
      consume();
      return angle;
    }
    default:
      error("expected an angle expression");
      return angle;
    }
  }

  void requireConst(const Angle& angle) {
    if (angle.isParam())
      error("unsupported feature: arithmetic on gate parameters");
  }
};

} // namespace

std::optional<Program> parseQasm(const std::string& source,
                                 DiagnosticList& diags,
                                 const std::string& fileName) {
  Parser parser(source, fileName, diags);
  return parser.run();
}

std::optional<IrModule> frontend(const std::string& source,
                                 DiagnosticList& diags,
                                 const std::string& fileName) {
  auto program = parseQasm(source, diags, fileName);
  if (!program)
    return std::nullopt;
  return lowerToQc(*program, diags);
}

} // namespace qcc::qasm
