//===-- TextIrParser.cpp --------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/emit/TextIr.hpp"

#include "qcc/ir/Registry.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <vector>

namespace qcc {

namespace {

enum class Tok {
  Ident,      // qc.h, module, angle, true, index, ...
  ValueName,  // %q0
  Integer,    // 42, -1
  Float,      // 1.5, -0.25e-3
  String,     // "text"
  TypeName,   // !qc.qubit, !qc.qreg  (register size parsed via < >)
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Less,
  Greater,
  Comma,
  Equal,
  Colon,
  Caret,
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
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {}

  Token next() {
    skipTrivia();
    Token t;
    t.loc = here();
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = text_[pos_];
    switch (c) {
    case '(':
      return punct(Tok::LParen, t);
    case ')':
      return punct(Tok::RParen, t);
    case '{':
      return punct(Tok::LBrace, t);
    case '}':
      return punct(Tok::RBrace, t);
    case '[':
      return punct(Tok::LBracket, t);
    case ']':
      return punct(Tok::RBracket, t);
    case '<':
      return punct(Tok::Less, t);
    case '>':
      return punct(Tok::Greater, t);
    case ',':
      return punct(Tok::Comma, t);
    case '=':
      return punct(Tok::Equal, t);
    case ':':
      return punct(Tok::Colon, t);
    case '^':
      return punct(Tok::Caret, t);
    default:
      break;
    }
    if (c == '%') {
      advance();
      t.kind = Tok::ValueName;
      t.text = lexIdentBody();
      if (t.text.empty())
        error("expected a value name after '%'", t.loc);
      return t;
    }
    if (c == '!') {
      advance();
      t.kind = Tok::TypeName;
      t.text = lexIdentBody();
      return t;
    }
    if (c == '"') {
      advance();
      t.kind = Tok::String;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size())
          advance();
        t.text += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size())
        error("unterminated string literal", t.loc);
      else
        advance();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+')
      return lexNumber(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      t.kind = Tok::Ident;
      t.text = lexIdentBody();
      return t;
    }
    error(std::string("unexpected character '") + c + "'", t.loc);
    advance();
    return next();
  }

  void error(const std::string& msg, Location loc) {
    if (!failed_)
      diags_.error(msg, loc);
    failed_ = true;
  }

  [[nodiscard]] bool failed() const { return failed_; }
  [[nodiscard]] const DiagnosticList& diags() const { return diags_; }

  Location here() const { return Location{file_, line_, col_}; }

private:
  const std::string& text_;
  std::string file_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
  bool failed_ = false;
  DiagnosticList diags_;

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
      } else {
        break;
      }
    }
  }

  Token punct(Tok kind, Token t) {
    t.kind = kind;
    t.text = text_[pos_];
    advance();
    return t;
  }

  std::string lexIdentBody() {
    std::string s;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '.' || c == '$') {
        s += c;
        advance();
      } else {
        break;
      }
    }
    return s;
  }

  Token lexNumber(Token t) {
    size_t start = pos_;
    if (text_[pos_] == '-' || text_[pos_] == '+')
      advance();
    bool isFloat = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '.' || c == 'e' || c == 'E') {
        isFloat = true;
        advance();
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+') &&
            (c == 'e' || c == 'E'))
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

class Parser {
public:
  Parser(const std::string& text, const std::string& file)
      : lexer_(text, file) {
    tok_ = lexer_.next();
  }

  std::optional<IrModule> run(DiagnosticList& diags) {
    IrModule m;
    if (tok_.kind != Tok::Ident || tok_.text != "module") {
      error("expected 'module' header");
    } else {
      consume();
      scopes_.emplace_back();
      while (tok_.kind != Tok::End && !failed())
        parseOp(m, m.entryBlock());
    }
    diags.append(lexer_.diags());
    if (failed())
      return std::nullopt;
    return m;
  }

private:
  Lexer lexer_;
  Token tok_;
  std::vector<std::map<std::string, ValueId>> scopes_;

  [[nodiscard]] bool failed() const { return lexer_.failed(); }
  void error(const std::string& msg) { lexer_.error(msg, tok_.loc); }
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

  void bind(const std::string& name, ValueId v) {
    scopes_.back()[name] = v;
  }

  ValueId lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end())
        return found->second;
    }
    return ValueId{};
  }

  TypeDesc parseType() {
    if (tok_.kind == Tok::TypeName) {
      std::string name = tok_.text;
      consume();
      if (name == "qc.qubit")
        return TypeDesc::qubitRef();
      if (name == "qco.qubit")
        return TypeDesc::qubitState();
      if (name == "qc.qreg") {
        if (!expect(Tok::Less, "'<'"))
          return TypeDesc::none();
        if (tok_.kind != Tok::Integer) {
          error("expected a register size");
          return TypeDesc::none();
        }
        auto size = uint32_t(tok_.intValue);
        consume();
        expect(Tok::Greater, "'>'");
        return TypeDesc::qubitReg(size);
      }
      error("unknown type '!" + name + "'");
      return TypeDesc::none();
    }
    if (tok_.kind == Tok::Ident) {
      std::string name = tok_.text;
      consume();
      if (name == "index")
        return TypeDesc::index();
      if (name == "f64")
        return TypeDesc::f64();
      if (name == "none")
        return TypeDesc::none();
      if (name.size() > 1 && name[0] == 'i') {
        bool digits = true;
        for (size_t i = 1; i < name.size(); ++i)
          digits &= bool(std::isdigit(static_cast<unsigned char>(name[i])));
        if (digits) {
          auto width = uint32_t(std::stoul(name.substr(1)));
          return width == 1 ? TypeDesc::bit() : TypeDesc::integer(width);
        }
      }
      error("unknown type '" + name + "'");
      return TypeDesc::none();
    }
    error("expected a type");
    return TypeDesc::none();
  }

  AttributeValue parseAttrValue() {
    switch (tok_.kind) {
    case Tok::Integer: {
      AttributeValue v(tok_.intValue);
      consume();
      return v;
    }
    case Tok::Float: {
      AttributeValue v(tok_.floatValue);
      consume();
      return v;
    }
    case Tok::String: {
      AttributeValue v(tok_.text);
      consume();
      return v;
    }
    case Tok::Ident: {
      if (tok_.text == "true" || tok_.text == "false") {
        AttributeValue v(tok_.text == "true");
        consume();
        return v;
      }
      error("expected an attribute value");
      consume();
      return AttributeValue();
    }
    case Tok::LBracket: {
      consume();
      AttributeValue::Array array;
      if (tok_.kind != Tok::RBracket) {
        while (true) {
          array.push_back(parseAttrValue());
          if (failed())
            break;
          if (tok_.kind == Tok::Comma) {
            consume();
            continue;
          }
          break;
        }
      }
      expect(Tok::RBracket, "']'");
      return AttributeValue(std::move(array));
    }
    default:
      error("expected an attribute value");
      return AttributeValue();
    }
  }

  /// Parses one op into `block`. Grammar:
  ///   [results =] opcode [(operands)] [{ attrs }] [: types] [regions]
  void parseOp(IrModule& m, BlockId block) {
    Location loc = tok_.loc;
    std::vector<std::string> resultNames;
    if (tok_.kind == Tok::ValueName) {
      while (tok_.kind == Tok::ValueName) {
        resultNames.push_back(tok_.text);
        consume();
        if (tok_.kind == Tok::Comma) {
          consume();
          continue;
        }
        break;
      }
      if (!expect(Tok::Equal, "'=' after results"))
        return;
    }
    if (tok_.kind != Tok::Ident) {
      error("expected an opcode");
      consume();
      return;
    }
    std::string opcode = tok_.text;
    consume();
    const OpcodeInfo* info = lookupOpcode(opcode);
    if (!info) {
      error("unknown opcode '" + opcode + "'");
      return;
    }

    std::vector<ValueId> operands;
    if (tok_.kind == Tok::LParen) {
      consume();
      while (tok_.kind != Tok::RParen && !failed()) {
        if (tok_.kind != Tok::ValueName) {
          error("expected an operand value");
          return;
        }
        ValueId v = lookup(tok_.text);
        if (!v.valid()) {
          error("use of undefined value %" + tok_.text);
          return;
        }
        operands.push_back(v);
        consume();
        if (tok_.kind == Tok::Comma)
          consume();
      }
      if (!expect(Tok::RParen, "')'"))
        return;
    }

    AttrMap attrs;
    if (tok_.kind == Tok::LBrace && peekIsAttrDict()) {
      consume();
      while (tok_.kind != Tok::RBrace && !failed()) {
        if (tok_.kind != Tok::Ident) {
          error("expected an attribute name");
          return;
        }
        std::string key = tok_.text;
        consume();
        if (!expect(Tok::Equal, "'='"))
          return;
        attrs[key] = parseAttrValue();
        if (tok_.kind == Tok::Comma)
          consume();
      }
      if (!expect(Tok::RBrace, "'}'"))
        return;
    }

    std::vector<TypeDesc> resultTypes;
    if (tok_.kind == Tok::Colon) {
      consume();
      while (true) {
        resultTypes.push_back(parseType());
        if (failed())
          return;
        if (tok_.kind == Tok::Comma) {
          consume();
          continue;
        }
        break;
      }
    }
    if (resultTypes.size() != resultNames.size()) {
      lexer_.error("result count does not match the type list", loc);
      return;
    }

    // Build the op directly; verify() performs the semantic checking and
    // reports with these source locations.
    OpId id = m.allocateOp();
    {
      OperationNode& node = m.op(id);
      node.opcode = opcode;
      node.operands = operands;
      node.attrs = std::move(attrs);
      node.loc = loc;
    }
    for (size_t i = 0; i < resultTypes.size(); ++i) {
      ValueId r = m.mintResult(id, uint32_t(i), resultTypes[i],
                               resultNames[i]);
      m.op(id).results.push_back(r);
      bind(resultNames[i], r);
    }

    unsigned regionCount = 0;
    while (tok_.kind == Tok::LBrace) {
      RegionId r = m.createRegion(id);
      m.op(id).regions.push_back(r);
      BlockId b = m.createBlock(r);
      parseRegionBody(m, b);
      ++regionCount;
      if (failed())
        return;
    }
    // Missing polarity on a ctrl means all-positive controls.
    if (info->kind == OpKind::Ctrl && !m.op(id).attrs.count("polarity")) {
      size_t controls = info->dialect == Dialect::QC
                            ? m.op(id).operands.size()
                            : m.op(id).operands.size() -
                                  countBodyArgs(m, id);
      AttributeValue::Array polarity(controls, AttributeValue(true));
      m.op(id).attrs.emplace("polarity", AttributeValue(std::move(polarity)));
    }
    if (regionCount != info->regions)
      lexer_.error("'" + opcode + "' needs " + std::to_string(info->regions) +
                       " region(s), found " + std::to_string(regionCount),
                   loc);
    m.insertOp(id, block, m.block(block).ops.size());
  }

  static size_t countBodyArgs(const IrModule& m, OpId op) {
    if (m.op(op).regions.empty())
      return 0;
    return m.block(m.region(m.op(op).regions[0]).front()).args.size();
  }

  /// After '{': an attribute dict starts with `ident =`; anything else is a
  /// region body.
  bool peekIsAttrDict() {
    Lexer probe = lexer_;
    Token first = probe.next();
    if (first.kind != Tok::Ident)
      return false;
    Token second = probe.next();
    return second.kind == Tok::Equal;
  }

  void parseRegionBody(IrModule& m, BlockId block) {
    if (!expect(Tok::LBrace, "'{'"))
      return;
    scopes_.emplace_back();
    if (tok_.kind == Tok::Caret) {
      consume();
      if (!expect(Tok::LParen, "'(' after '^'"))
        return;
      while (tok_.kind != Tok::RParen && !failed()) {
        if (tok_.kind != Tok::ValueName) {
          error("expected a block argument name");
          return;
        }
        std::string name = tok_.text;
        consume();
        if (!expect(Tok::Colon, "':' after block argument"))
          return;
        TypeDesc type = parseType();
        ValueId arg = m.addBlockArg(block, type, name);
        bind(name, arg);
        if (tok_.kind == Tok::Comma)
          consume();
      }
      if (!expect(Tok::RParen, "')'") || !expect(Tok::Colon, "':'"))
        return;
    }
    while (tok_.kind != Tok::RBrace && tok_.kind != Tok::End && !failed())
      parseOp(m, block);
    expect(Tok::RBrace, "'}'");
    scopes_.pop_back();
  }
};

} // namespace

std::optional<IrModule> parseIr(const std::string& text, DiagnosticList& diags,
                                const std::string& fileName) {
  Parser parser(text, fileName);
  return parser.run(diags);
}

} // namespace qcc
