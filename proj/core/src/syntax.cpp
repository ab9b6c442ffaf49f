#include "lbridge/syntax.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace lbridge {

namespace {

enum class Tok {
  atom,
  quoted_atom,
  var,
  integer,
  floating,
  lparen,
  rparen,
  lbracket,
  rbracket,
  bar,
  comma,
  semicolon,
  equals,
  neck,  // :-
  end,   // .
  eof,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::atom: return "atom";
    case Tok::quoted_atom: return "quoted atom";
    case Tok::var: return "variable";
    case Tok::integer: return "integer";
    case Tok::floating: return "float";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::bar: return "'|'";
    case Tok::comma: return "','";
    case Tok::semicolon: return "';'";
    case Tok::equals: return "'='";
    case Tok::neck: return "':-'";
    case Tok::end: return "'.'";
    case Tok::eof: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::eof;
  std::string text;  // atom/var name or numeric literal
  SourceSpan span;
  bool functional = false;  // atom immediately followed by '('
};

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_layout();
    Token tok;
    tok.span = here();
    if (pos_ >= src_.size()) {
      tok.kind = Tok::eof;
      return tok;
    }
    char c = src_[pos_];
    if (is_lower(c)) {
      std::size_t b = pos_;
      while (pos_ < src_.size() && is_alnum(src_[pos_])) advance();
      tok.kind = Tok::atom;
      tok.text = std::string(src_.substr(b, pos_ - b));
    } else if (is_upper(c)) {
      std::size_t b = pos_;
      while (pos_ < src_.size() && is_alnum(src_[pos_])) advance();
      tok.kind = Tok::var;
      tok.text = std::string(src_.substr(b, pos_ - b));
    } else if (is_digit(c) || (c == '-' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
      lex_number(tok);
    } else if (c == '\'') {
      lex_quoted(tok);
    } else if (c == '<' && src_.substr(pos_, 6) == "<jref:") {
      fail("foreign reference terms cannot be written in source text", tok.span);
    } else {
      advance();
      switch (c) {
        case '(': tok.kind = Tok::lparen; break;
        case ')': tok.kind = Tok::rparen; break;
        case '[': tok.kind = Tok::lbracket; break;
        case ']': tok.kind = Tok::rbracket; break;
        case '|': tok.kind = Tok::bar; break;
        case ',': tok.kind = Tok::comma; break;
        case ';': tok.kind = Tok::semicolon; break;
        case '=': tok.kind = Tok::equals; break;
        case '.': tok.kind = Tok::end; break;
        case ':':
          if (pos_ < src_.size() && src_[pos_] == '-') {
            advance();
            tok.kind = Tok::neck;
            break;
          }
          [[fallthrough]];
        default: {
          std::string msg = "unexpected character '";
          msg += c;
          msg += "'";
          fail(msg, tok.span);
        }
      }
    }
    tok.span.end = pos_;
    tok.functional = (tok.kind == Tok::atom || tok.kind == Tok::quoted_atom) && pos_ < src_.size() && src_[pos_] == '(';
    return tok;
  }

  [[noreturn]] static void fail(const std::string& msg, SourceSpan span) { throw SyntaxError(msg, span); }

 private:
  SourceSpan here() const { return SourceSpan{pos_, pos_, line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_layout() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& tok) {
    std::size_t b = pos_;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    tok.kind = Tok::integer;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      tok.kind = Tok::floating;
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        std::size_t save_line = line_, save_col = col_;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
        if (pos_ < src_.size() && is_digit(src_[pos_])) {
          while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
        } else {
          pos_ = save;
          line_ = save_line;
          col_ = save_col;
        }
      }
    }
    tok.text = std::string(src_.substr(b, pos_ - b));
  }

  void lex_quoted(Token& tok) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated quoted atom", tok.span);
      char c = src_[pos_];
      if (c == '\'') {
        advance();
        if (pos_ < src_.size() && src_[pos_] == '\'') {
          out += '\'';
          advance();
          continue;
        }
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail("unterminated escape sequence", tok.span);
        char e = src_[pos_];
        advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          case 'x': {
            unsigned value = 0;
            std::size_t digits = 0;
            while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
              char h = src_[pos_];
              value = value * 16 + static_cast<unsigned>(is_digit(h) ? h - '0' : (std::tolower(h) - 'a' + 10));
              advance();
              ++digits;
            }
            if (digits == 0 || value > 0xff || pos_ >= src_.size() || src_[pos_] != '\\')
              fail("malformed \\x escape", tok.span);
            advance();
            out += static_cast<char>(value);
            break;
          }
          default: fail(std::string("unknown escape sequence \\") + e, tok.span);
        }
        continue;
      }
      out += c;
      advance();
    }
    tok.kind = Tok::quoted_atom;
    tok.text = std::move(out);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { tok_ = lexer_.next(); }

  // disjunction := conjunction [';' disjunction]
  Term body() {
    Term left = conjunction();
    if (tok_.kind == Tok::semicolon) {
      shift();
      Term right = body();
      return Term::compound(";", {std::move(left), std::move(right)});
    }
    return left;
  }

  // conjunction := equation [',' conjunction]
  Term conjunction() {
    Term left = equation();
    if (tok_.kind == Tok::comma) {
      shift();
      Term right = conjunction();
      return Term::compound(",", {std::move(left), std::move(right)});
    }
    return left;
  }

  // equation := primary ['=' primary]
  Term equation() {
    Term left = primary();
    if (tok_.kind == Tok::equals) {
      shift();
      Term right = primary();
      return Term::compound("=", {std::move(left), std::move(right)});
    }
    return left;
  }

  Term primary() {
    switch (tok_.kind) {
      case Tok::integer: {
        Term t = Term::integer(BigInt(tok_.text));
        shift();
        return t;
      }
      case Tok::floating: {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), value);
        if (ec != std::errc{}) Lexer::fail("float literal out of range", tok_.span);
        shift();
        return Term::floating(value);
      }
      case Tok::var: {
        Term t = Term::var(tok_.text);
        shift();
        return t;
      }
      case Tok::atom:
      case Tok::quoted_atom: {
        std::string name = tok_.text;
        bool functional = tok_.functional;
        shift();
        if (!functional) return Term::atom(std::move(name));
        expect(Tok::lparen);
        std::vector<Term> args;
        args.push_back(equation());
        while (tok_.kind == Tok::comma) {
          shift();
          args.push_back(equation());
        }
        expect(Tok::rparen);
        return Term::compound(std::move(name), std::move(args));
      }
      case Tok::lbracket: {
        shift();
        if (tok_.kind == Tok::rbracket) {
          shift();
          return Term::nil();
        }
        std::vector<Term> items;
        items.push_back(equation());
        while (tok_.kind == Tok::comma) {
          shift();
          items.push_back(equation());
        }
        std::optional<Term> tail;
        if (tok_.kind == Tok::bar) {
          shift();
          tail = equation();
        }
        expect(Tok::rbracket);
        return Term::list(std::move(items), std::move(tail));
      }
      case Tok::lparen: {
        shift();
        Term inner = body();
        expect(Tok::rparen);
        return inner;
      }
      default: unexpected("a term");
    }
  }

  const Token& token() const { return tok_; }

  void shift() { tok_ = lexer_.next(); }

  void expect(Tok kind) {
    if (tok_.kind != kind) unexpected(describe(kind));
    shift();
  }

  [[noreturn]] void unexpected(const std::string& wanted) const {
    std::string found = describe(tok_.kind);
    if (!tok_.text.empty() && tok_.kind != Tok::eof) found += " " + tok_.text;
    Lexer::fail("expected " + wanted + " but found " + found, tok_.span);
  }

 private:
  Lexer lexer_;
  Token tok_;
};

void append_quoted(std::string& out, std::string_view name) {
  out += '\'';
  for (char c : name) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x\\", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '\'';
}

void append_atom(std::string& out, std::string_view name) {
  if (is_plain_atom_name(name) || name == "[]")
    out += name;
  else
    append_quoted(out, name);
}

void append_float(std::string& out, double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string text(buf, ptr);
  if (text.find_first_of("ni") != std::string::npos) {  // inf, nan
    out += text;
    return;
  }
  auto e = text.find('e');
  if (text.find('.') == std::string::npos) text.insert(e == std::string::npos ? text.size() : e, ".0");
  out += text;
}

void append_term(std::string& out, const Term& t);

void append_equation_operand(std::string& out, const Term& t) {
  if (t.is_compound("=", 2)) {
    out += '(';
    append_term(out, t);
    out += ')';
  } else {
    append_term(out, t);
  }
}

void append_term(std::string& out, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::atom: append_atom(out, t.as_atom().name); return;
    case Term::Kind::integer: out += t.as_integer().value.str(); return;
    case Term::Kind::floating: append_float(out, t.as_float().value); return;
    case Term::Kind::var: {
      const Var& v = t.as_var();
      if (v.serial == 0)
        out += v.name;
      else
        out += "_G" + std::to_string(v.serial);
      return;
    }
    case Term::Kind::foreign_ref: out += "<jref:" + std::to_string(t.as_foreign_ref().handle.id) + ">"; return;
    case Term::Kind::compound: break;
  }
  const Compound& c = t.as_compound();
  if (t.is_compound(".", 2)) {
    out += '[';
    bool first = true;
    Term tail = for_each_list_element(t, [&](const Term& item) {
      if (!first) out += ',';
      first = false;
      append_term(out, item);
    });
    if (!tail.is_atom("[]")) {
      out += '|';
      append_term(out, tail);
    }
    out += ']';
    return;
  }
  if (t.is_compound(",", 2) || t.is_compound(";", 2)) {
    out += '(';
    append_term(out, c.arg(0));
    out += c.functor;
    append_term(out, c.arg(1));
    out += ')';
    return;
  }
  if (t.is_compound("=", 2)) {
    append_equation_operand(out, c.arg(0));
    out += '=';
    append_equation_operand(out, c.arg(1));
    return;
  }
  append_atom(out, c.functor);
  out += '(';
  for (std::size_t i = 0; i < c.arity(); ++i) {
    if (i) out += ',';
    append_term(out, c.arg(i));
  }
  out += ')';
}

}  // namespace

SyntaxError::SyntaxError(const std::string& message, SourceSpan span)
    : Error("syntax_error",
            "line " + std::to_string(span.line) + ", column " + std::to_string(span.column) + ": " + message),
      span_(span),
      detail_(message) {}

void check_clause_head(const Term& head) {
  if (!head.is_callable())
    throw InvalidHeadError("clause head must be an atom or compound term, got " + print_term(head));
}

Term parse_term(std::string_view input) {
  Parser p(input);
  if (p.token().kind == Tok::eof) Lexer::fail("empty input", p.token().span);
  Term t = p.equation();
  if (p.token().kind != Tok::eof) p.unexpected(describe(Tok::eof));
  return t;
}

Term parse_goal(std::string_view input) {
  Parser p(input);
  if (p.token().kind == Tok::eof) Lexer::fail("empty goal", p.token().span);
  Term t = p.body();
  if (p.token().kind == Tok::end) p.shift();
  if (p.token().kind != Tok::eof) p.unexpected(describe(Tok::eof));
  return t;
}

std::vector<Clause> parse_program(std::string_view input) {
  Parser p(input);
  std::vector<Clause> clauses;
  while (p.token().kind != Tok::eof) {
    SourceSpan clause_start = p.token().span;
    try {
      Clause clause;
      SourceSpan head_span = p.token().span;
      clause.head = p.equation();
      if (!clause.head.is_callable())
        Lexer::fail("clause head must be an atom or compound term", head_span);
      if (p.token().kind == Tok::neck) {
        p.shift();
        clause.body = p.body();
      }
      if (p.token().kind != Tok::end) p.unexpected("':-' or '.'");
      p.shift();
      clauses.push_back(std::move(clause));
    } catch (const SyntaxError& e) {
      SourceSpan span = clause_start;
      span.end = e.span().end;
      throw SyntaxError(e.detail() + " (at line " + std::to_string(e.span().line) + ", column " +
                            std::to_string(e.span().column) + ")",
                        span);
    }
  }
  return clauses;
}

std::string print_term(const Term& t) {
  std::string out;
  append_term(out, t);
  return out;
}

std::string print_clause(const Clause& c) {
  std::string out;
  append_term(out, c.head);
  if (!c.is_fact()) {
    out += " :- ";
    // Top-level control needs no parentheses.
    if (c.body.is_compound(",", 2) || c.body.is_compound(";", 2)) {
      append_term(out, c.body.arg(0));
      out += c.body.as_compound().functor;
      append_term(out, c.body.arg(1));
    } else {
      append_term(out, c.body);
    }
  }
  out += '.';
  return out;
}

bool is_plain_atom_name(std::string_view name) {
  if (name.empty() || !is_lower(name.front())) return false;
  for (char c : name)
    if (!is_alnum(c)) return false;
  return true;
}

}  // namespace lbridge
