#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hyperqsat/formula.hpp"

namespace hyperqsat {

struct parse_error : std::runtime_error {
  int line;
  int col;
  parse_error(int line_, int col_, const std::string& what_)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
};

namespace detail {

enum class tok_kind { ident, lparen, rparen, dot, underscore, tilde, amp, pipe, arrow, iff, eof };

struct token {
  tok_kind kind;
  std::string text;
  int line;
  int col;
};

class lexer {
 public:
  explicit lexer(std::string_view src) : src_(src) {}

  std::vector<token> run() {
    std::vector<token> out;
    for (;;) {
      skip_ws_and_comments();
      int l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({tok_kind::eof, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch))) {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isalnum(static_cast<unsigned char>(src_[pos_])))
          advance();
        out.push_back({tok_kind::ident, std::string(src_.substr(start, pos_ - start)), l, c});
        continue;
      }
      switch (ch) {
        case '(': out.push_back({tok_kind::lparen, "(", l, c}); advance(); break;
        case ')': out.push_back({tok_kind::rparen, ")", l, c}); advance(); break;
        case '.': out.push_back({tok_kind::dot, ".", l, c}); advance(); break;
        case '_': out.push_back({tok_kind::underscore, "_", l, c}); advance(); break;
        case '~': out.push_back({tok_kind::tilde, "~", l, c}); advance(); break;
        case '&': out.push_back({tok_kind::amp, "&", l, c}); advance(); break;
        case '|': out.push_back({tok_kind::pipe, "|", l, c}); advance(); break;
        case '-':
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            out.push_back({tok_kind::arrow, "->", l, c});
            advance();
            advance();
            break;
          }
          throw parse_error(l, c, "syntax error: stray '-'");
        case '<':
          if (pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' && src_[pos_ + 2] == '>') {
            out.push_back({tok_kind::iff, "<->", l, c});
            advance();
            advance();
            advance();
            break;
          }
          throw parse_error(l, c, "syntax error: stray '<'");
        default:
          throw parse_error(l, c, std::string("syntax error: unexpected character '") + ch + "'");
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance();
      if (pos_ < src_.size() && src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class parser {
 public:
  explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

  formula run() {
    formula f;
    while (at_quantifier()) f.prefix.push_back(parse_group());
    if (f.prefix.empty())
      throw parse_error(peek().line, peek().col,
                        "syntax error: expected 'forall' or 'exists'");
    f.body = parse_body();
    expect(tok_kind::eof, "end of input");
    return f;
  }

 private:
  const token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const token& t, const std::string& msg) {
    throw parse_error(t.line, t.col, msg);
  }

  token expect(tok_kind k, const std::string& what) {
    if (peek().kind != k)
      fail(peek(), "syntax error: expected " + what + ", got '" + peek().text + "'");
    return next();
  }

  // "forall"/"exists" starts a quantifier group unless it is the AP of an
  // atom such as "forall_pi".
  bool at_quantifier() const {
    return peek().kind == tok_kind::ident &&
           (peek().text == "forall" || peek().text == "exists") &&
           peek(1).kind != tok_kind::underscore;
  }

  quant_group parse_group() {
    token q = next();
    quant_group g;
    g.quant = q.text == "forall" ? quantifier::forall : quantifier::exists;
    while (peek().kind == tok_kind::ident) {
      token v = next();
      if (declared_.count(v.text))
        fail(v, "duplicate trace variable '" + v.text + "'");
      declared_.insert(v.text);
      g.vars.push_back(v.text);
    }
    if (g.vars.empty()) fail(peek(), "syntax error: expected a trace variable");
    expect(tok_kind::dot, "'.'");
    return g;
  }

  ltl parse_body() { return parse_iff(); }

  ltl parse_iff() {
    ltl l = parse_impl();
    while (peek().kind == tok_kind::iff) {
      next();
      l = mk::iff(l, parse_impl());
    }
    return l;
  }

  ltl parse_impl() {
    ltl l = parse_disj();
    if (peek().kind == tok_kind::arrow) {
      next();
      return mk::implies(l, parse_impl());
    }
    return l;
  }

  ltl parse_disj() {
    ltl l = parse_conj();
    while (peek().kind == tok_kind::pipe) {
      next();
      l = mk::or_(l, parse_conj());
    }
    return l;
  }

  ltl parse_conj() {
    ltl l = parse_temp();
    while (peek().kind == tok_kind::amp) {
      next();
      l = mk::and_(l, parse_temp());
    }
    return l;
  }

  ltl parse_temp() {
    ltl l = parse_unary();
    if (peek().kind == tok_kind::ident && peek(1).kind != tok_kind::underscore) {
      const std::string& t = peek().text;
      if (t == "U" || t == "W" || t == "R") {
        next();
        ltl r = parse_temp();
        if (t == "U") return mk::until(l, r);
        if (t == "W") return mk::weak_until(l, r);
        return mk::release(l, r);
      }
    }
    return l;
  }

  ltl parse_unary() {
    if (peek().kind == tok_kind::tilde) {
      next();
      return mk::not_(parse_unary());
    }
    if (peek().kind == tok_kind::ident && peek(1).kind != tok_kind::underscore) {
      const std::string& t = peek().text;
      if (t == "X" || t == "F" || t == "G") {
        next();
        ltl s = parse_unary();
        if (t == "X") return mk::next(s);
        if (t == "F") return mk::eventually(s);
        return mk::always(s);
      }
    }
    return parse_atom();
  }

  ltl parse_atom() {
    if (peek().kind == tok_kind::lparen) {
      next();
      ltl b = parse_body();
      expect(tok_kind::rparen, "')'");
      return b;
    }
    if (peek().kind != tok_kind::ident)
      fail(peek(), "syntax error: expected an atom, got '" + peek().text + "'");
    token ap = next();
    if (peek().kind != tok_kind::underscore) {
      if (ap.text == "true") return mk::tt();
      if (ap.text == "false") return mk::ff();
      fail(ap, "syntax error: expected '_<trace variable>' after '" + ap.text + "'");
    }
    next();  // '_'
    token tv = expect(tok_kind::ident, "a trace variable");
    if (!declared_.count(tv.text))
      fail(tv, "unbound trace variable '" + tv.text + "'");
    return mk::atom(ap.text, tv.text);
  }

  std::vector<token> toks_;
  size_t pos_ = 0;
  std::set<std::string> declared_;
};

}  // namespace detail

// Parses the concrete syntax into a closed prenex formula. Throws
// parse_error (carrying line/column) on malformed input, duplicate trace
// variables, or atoms referencing undeclared variables.
inline formula parse(std::string_view text) {
  detail::lexer lex(text);
  detail::parser p(lex.run());
  formula f = p.run();
  validate(f);
  return f;
}

}  // namespace hyperqsat
