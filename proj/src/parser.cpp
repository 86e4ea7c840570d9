#include "phax/parser.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace phax {

namespace {

enum class Tok {
  Ident,
  Number,
  String,
  Dot,
  Comma,
  Colon,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Equals,
  Tilde,
  Greater,
  DefArrow,     // =>
  StrictArrow,  // ->
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Equals: return "'='";
    case Tok::Tilde: return "'~'";
    case Tok::Greater: return "'>'";
    case Tok::DefArrow: return "'=>'";
    case Tok::StrictArrow: return "'->'";
    case Tok::End: return "end of input";
    case Tok::Bad: return "invalid character";
  }
  return "token";
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (digit(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      // Decimal part only when a digit follows the dot; otherwise the dot ends the statement.
      if (pos_ + 1 < src_.size() && src_[pos_] == '.' && digit(src_[pos_ + 1])) {
        advance();
        while (pos_ < src_.size() && digit(src_[pos_])) advance();
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          advance();
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
          while (pos_ < src_.size() && digit(src_[pos_])) advance();
        }
      }
      t.kind = Tok::Number;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (c == '"') return string_token(t);
    advance();
    switch (c) {
      case '.': t.kind = Tok::Dot; break;
      case ',': t.kind = Tok::Comma; break;
      case ':': t.kind = Tok::Colon; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case '~': t.kind = Tok::Tilde; break;
      case '>': t.kind = Tok::Greater; break;
      case '=':
        if (pos_ < src_.size() && src_[pos_] == '>') {
          advance();
          t.kind = Tok::DefArrow;
        } else {
          t.kind = Tok::Equals;
        }
        break;
      case '-':
        if (pos_ < src_.size() && src_[pos_] == '>') {
          advance();
          t.kind = Tok::StrictArrow;
        } else {
          t.kind = Tok::Bad;
          t.text = "-";
        }
        break;
      default:
        t.kind = Tok::Bad;
        t.text = std::string(1, c);
        // Swallow the rest of a multi-byte sequence so columns stay in code points.
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
    }
    return t;
  }

 private:
  Token string_token(Token t) {
    advance();  // opening quote
    t.kind = Tok::String;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        t.kind = Tok::Bad;
        t.text = "unterminated string";
        return t;
      }
      char c = src_[pos_];
      advance();
      if (c == '"') return t;
      if (c != '\\') {
        t.text += c;
        continue;
      }
      if (pos_ >= src_.size()) continue;
      char e = src_[pos_];
      advance();
      switch (e) {
        case 'n': t.text += '\n'; break;
        case 't': t.text += '\t'; break;
        case '"': t.text += '"'; break;
        case '\\': t.text += '\\'; break;
        case 'u': {
          unsigned cp = 0;
          for (int i = 0; i < 4; ++i) {
            if (pos_ >= src_.size()) break;
            char h = src_[pos_];
            unsigned v;
            if (h >= '0' && h <= '9') v = h - '0';
            else if (h >= 'a' && h <= 'f') v = h - 'a' + 10;
            else if (h >= 'A' && h <= 'F') v = h - 'A' + 10;
            else {
              t.kind = Tok::Bad;
              t.text = "bad \\u escape";
              return t;
            }
            cp = cp * 16 + v;
            advance();
          }
          append_utf8(t.text, cp);
          break;
        }
        default:
          t.kind = Tok::Bad;
          t.text = std::string("unknown escape \\") + e;
          return t;
      }
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++column_;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct SyntaxError {
  Token at;
  std::string message;
};

struct Location {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  ParseResult run() {
    while (cur_.kind != Tok::End) {
      try {
        statement();
      } catch (const SyntaxError& e) {
        diag(e.at.line, e.at.column, e.message);
        recover();
      }
    }
    theory_.collect_constants();
    if (diags_.empty()) {
      for (auto& d : validate_theory(theory_)) {
        Location loc = locate(d);
        d.line = loc.line;
        d.column = loc.column;
        diags_.push_back(std::move(d));
      }
    }
    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.theory = std::move(theory_);
    return result;
  }

  std::optional<Literal> single_literal() {
    try {
      Literal l = literal();
      if (cur_.kind != Tok::End) return std::nullopt;
      return l;
    } catch (const SyntaxError&) {
      return std::nullopt;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError{cur_, msg}; }

  void expect(Tok kind, const char* context) {
    if (cur_.kind != kind) {
      std::string found = cur_.kind == Tok::Bad ? cur_.text : describe(cur_.kind);
      fail(std::string("expected ") + describe(kind) + " " + context + ", found " + found);
    }
    advance();
  }

  void advance() { cur_ = lex_.next(); }

  std::string ident(const char* what) {
    if (cur_.kind != Tok::Ident) fail(std::string("expected ") + what);
    std::string s = std::move(cur_.text);
    advance();
    return s;
  }

  void diag(std::size_t line, std::size_t col, std::string msg) {
    diags_.push_back({Severity::Error, std::move(msg), {}, line, col});
  }

  void recover() {
    while (cur_.kind != Tok::Dot && cur_.kind != Tok::End) advance();
    if (cur_.kind == Tok::Dot) advance();
  }

  void statement() {
    if (cur_.kind != Tok::Ident) fail("expected a statement keyword");
    Token kw = cur_;
    advance();
    if (kw.text == "theory") {
      if (seen_header_) throw SyntaxError{kw, "duplicate theory header"};
      seen_header_ = true;
      theory_.name = ident("theory name");
      expect(Tok::Dot, "after theory name");
    } else if (kw.text == "const") {
      do {
        Token at = cur_;
        std::string name = term_text();
        if (!is_constant_name(name)) throw SyntaxError{at, "invalid constant name '" + name + "'"};
        theory_.constants.insert(name);
      } while (accept(Tok::Comma));
      expect(Tok::Dot, "after constant list");
    } else if (kw.text == "axiom" || kw.text == "premise") {
      premise(kw.text == "axiom" ? PremiseKind::Axiom : PremiseKind::Ordinary);
    } else if (kw.text == "strict" || kw.text == "defeasible") {
      rule(kw.text == "strict" ? RuleKind::Strict : RuleKind::Defeasible);
    } else if (kw.text == "pref") {
      preference();
    } else {
      throw SyntaxError{kw, "unknown statement keyword '" + kw.text + "'"};
    }
  }

  bool accept(Tok kind) {
    if (cur_.kind != kind) return false;
    advance();
    return true;
  }

  std::string declare_id(const char* what) {
    Token at = cur_;
    std::string id = ident(what);
    if (theory_.premises.count(id) || theory_.rules.count(id)) throw SyntaxError{at, "duplicate id " + id};
    locations_[id] = {at.line, at.column};
    return id;
  }

  void premise(PremiseKind kind) {
    Premise p;
    p.kind = kind;
    p.id = declare_id("premise id");
    expect(Tok::Colon, "after premise id");
    p.literal = literal();
    if (accept(Tok::LBracket)) {
      std::set<std::string> seen;
      do {
        Token at = cur_;
        std::string key = ident("attribute name");
        if (key == "text" && accept(Tok::Dot)) key += "." + ident("band name after 'text.'");
        if (!seen.insert(key).second) throw SyntaxError{at, "duplicate attribute " + key};
        expect(Tok::Equals, "after attribute name");
        if (key == "confidence") p.confidence = number();
        else if (key == "jargon") p.jargon = number();
        else if (key == "source") p.source = string_value();
        else if (key.rfind("text.", 0) == 0) p.display_text[key.substr(5)] = string_value();
        else throw SyntaxError{at, "unknown premise attribute '" + key + "'"};
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "to close attributes");
    }
    expect(Tok::Dot, "at end of premise");
    std::string id = p.id;
    theory_.premises.emplace(id, std::move(p));
  }

  void rule(RuleKind kind) {
    Rule r;
    r.kind = kind;
    r.id = declare_id("rule id");
    expect(Tok::Colon, "after rule id");
    if (cur_.kind != Tok::DefArrow && cur_.kind != Tok::StrictArrow) {
      r.body.push_back(literal());
      while (accept(Tok::Comma)) r.body.push_back(literal());
    }
    Tok want = kind == RuleKind::Strict ? Tok::StrictArrow : Tok::DefArrow;
    if (cur_.kind == Tok::DefArrow || cur_.kind == Tok::StrictArrow) {
      if (cur_.kind != want)
        fail(kind == RuleKind::Strict ? "strict rules use '->'" : "defeasible rules use '=>'");
      advance();
    } else {
      fail(std::string("expected ") + describe(want) + " in rule");
    }
    r.head = literal();
    if (accept(Tok::LBracket)) {
      std::set<std::string> seen;
      do {
        Token at = cur_;
        std::string key = ident("attribute name");
        if (!seen.insert(key).second) throw SyntaxError{at, "duplicate attribute " + key};
        expect(Tok::Equals, "after attribute name");
        if (key == "weight") r.weight = number();
        else if (key == "scheme") r.scheme_tag = ident("scheme id");
        else throw SyntaxError{at, "unknown rule attribute '" + key + "'"};
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "to close attributes");
    }
    expect(Tok::Dot, "at end of rule");
    std::string id = r.id;
    theory_.rules.emplace(id, std::move(r));
  }

  void preference() {
    Token at = cur_;
    std::string prev = ident("preference id");
    pref_locations_.try_emplace(prev, Location{at.line, at.column});
    expect(Tok::Greater, "in preference");
    do {
      Token next_at = cur_;
      std::string next = ident("preference id");
      pref_locations_.try_emplace(next, Location{next_at.line, next_at.column});
      theory_.preferences.emplace(prev, next);
      prev = std::move(next);
    } while (accept(Tok::Greater));
    expect(Tok::Dot, "at end of preference");
  }

  std::string term_text() {
    if (cur_.kind != Tok::Ident && cur_.kind != Tok::Number) fail("expected a term");
    std::string s = std::move(cur_.text);
    advance();
    return s;
  }

  Literal literal() {
    bool negated = false;
    while (accept(Tok::Tilde)) negated = !negated;
    Literal l;
    l.negated = negated;
    Token at = cur_;
    l.predicate = ident("predicate name");
    if (is_variable_name(l.predicate)) throw SyntaxError{at, "predicate names start lowercase"};
    if (accept(Tok::LParen)) {
      do {
        Token term_at = cur_;
        std::string name = term_text();
        if (is_variable_name(name)) l.args.push_back(Term::variable(std::move(name)));
        else if (is_constant_name(name)) l.args.push_back(Term::constant(std::move(name)));
        else throw SyntaxError{term_at, "invalid term '" + name + "'"};
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "to close argument list");
    }
    return l;
  }

  double number() {
    if (cur_.kind != Tok::Number) fail("expected a number");
    double v = 0.0;
    const std::string& s = cur_.text;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("malformed number '" + s + "'");
    advance();
    return v;
  }

  std::string string_value() {
    if (cur_.kind != Tok::String) {
      if (cur_.kind == Tok::Bad) fail(cur_.text);
      fail("expected a quoted string");
    }
    std::string s = std::move(cur_.text);
    advance();
    return s;
  }

  Location locate(const Diagnostic& d) const {
    bool about_preferences = d.message.rfind("preference", 0) == 0;
    for (const auto& id : d.ids) {
      if (about_preferences) {
        if (auto it = pref_locations_.find(id); it != pref_locations_.end()) return it->second;
      }
      if (auto it = locations_.find(id); it != locations_.end()) return it->second;
    }
    return {1, 1};
  }

  Lexer lex_;
  Token cur_;
  Theory theory_;
  bool seen_header_ = false;
  std::vector<Diagnostic> diags_;
  std::map<std::string, Location> locations_;
  std::map<std::string, Location> pref_locations_;
};

}  // namespace

std::string ParseResult::format_diagnostics(std::string_view file) const {
  std::string out;
  for (const auto& d : diagnostics) out += d.format(file) + "\n";
  return out;
}

ParseResult parse_theory(std::string_view source) { return Parser(source).run(); }

Theory parse_theory_or_throw(std::string_view source, std::string_view file) {
  ParseResult r = parse_theory(source);
  if (!r.ok()) throw Error(ErrorCode::Parse, r.format_diagnostics(file));
  return std::move(*r.theory);
}

std::optional<Literal> parse_literal(std::string_view text) { return Parser(text).single_literal(); }

}  // namespace phax
