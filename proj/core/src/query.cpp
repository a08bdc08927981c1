#include "matsparql/query.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace matsparql {

std::optional<VertexId> QueryGraph::find_variable(std::string_view name) const {
  for (VertexId v = 0; v < vertices.size(); ++v) {
    if (!vertices[v].constant && vertices[v].term == name) return v;
  }
  return std::nullopt;
}

bool QueryGraph::has_constants() const {
  return std::any_of(vertices.begin(), vertices.end(), [](const QueryVertex& v) { return v.constant; });
}

std::vector<VertexId> QueryGraph::variables() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices.size(); ++v) {
    if (!vertices[v].constant) out.push_back(v);
  }
  return out;
}

std::unordered_set<std::string> QueryGraph::predicates() const {
  std::unordered_set<std::string> out;
  for (const auto& e : edges) out.insert(e.predicate);
  return out;
}

std::vector<VertexId> QueryGraph::neighbours(VertexId v) const {
  std::set<VertexId> out;
  for (const auto& e : edges) {
    if (e.from == v && e.to != v) out.insert(e.to);
    if (e.to == v && e.from != v) out.insert(e.from);
  }
  return {out.begin(), out.end()};
}

namespace {

enum class TokenKind { variable, iri, literal, name, star, lbrace, rbrace, dot, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (c == '{') return single(t, TokenKind::lbrace);
    if (c == '}') return single(t, TokenKind::rbrace);
    if (c == '.') return single(t, TokenKind::dot);
    if (c == '*') return single(t, TokenKind::star);
    if (c == '?' || c == '$') {
      advance();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      if (pos_ == start) throw ParseError("empty variable name", t.line, t.column);
      t.kind = TokenKind::variable;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (c == '<') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != '>') {
        if (src_[pos_] == '\n') throw ParseError("unterminated IRI", t.line, t.column);
        advance();
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated IRI", t.line, t.column);
      advance();
      t.kind = TokenKind::iri;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (c == '"') {
      const std::size_t start = pos_;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\') advance();
        advance();
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated literal", t.line, t.column);
      advance();
      if (pos_ < src_.size() && src_[pos_] == '@') {
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '-' ||
                                      src_[pos_] == '@')) {
          advance();
        }
      } else if (src_.substr(pos_, 2) == "^^") {
        advance();
        advance();
        if (pos_ < src_.size() && src_[pos_] == '<') {
          while (pos_ < src_.size() && src_[pos_] != '>') advance();
          if (pos_ < src_.size()) advance();
        } else {
          while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        }
      }
      t.kind = TokenKind::literal;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) {
      // a '.' ends the name when followed by whitespace, '}' or end of input
      if (src_[pos_] == '.') {
        const std::size_t nxt = pos_ + 1;
        if (nxt >= src_.size() || std::isspace(static_cast<unsigned char>(src_[nxt])) || src_[nxt] == '}') break;
      }
      advance();
    }
    if (pos_ == start) throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
    t.kind = TokenKind::name;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

 private:
  static bool is_name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}' && c != '"' && c != '<' &&
           c != '?' && c != '$';
  }

  Token single(Token t, TokenKind kind) {
    t.kind = kind;
    t.text = std::string(1, src_[pos_]);
    advance();
    return t;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool keyword(const Token& t, std::string_view kw) {
  if (t.kind != TokenKind::name || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  QueryGraph parse() {
    while (keyword(tok_, "PREFIX")) parse_prefix();
    if (!keyword(tok_, "SELECT")) fail("expected SELECT");
    shift();
    if (keyword(tok_, "DISTINCT") || keyword(tok_, "REDUCED")) shift();

    bool star = false;
    std::vector<std::pair<std::string, Token>> selected;
    if (tok_.kind == TokenKind::star) {
      star = true;
      shift();
    } else {
      while (tok_.kind == TokenKind::variable) {
        selected.emplace_back(tok_.text, tok_);
        shift();
      }
      if (selected.empty()) fail("expected projection variables or '*'");
    }
    if (keyword(tok_, "WHERE")) shift();
    expect(TokenKind::lbrace, "'{'");

    while (tok_.kind != TokenKind::rbrace) {
      if (tok_.kind == TokenKind::end) fail("unexpected end of query, expected '}'");
      if (tok_.kind == TokenKind::dot) {
        shift();
        continue;
      }
      if (keyword(tok_, "FILTER") || keyword(tok_, "OPTIONAL") || keyword(tok_, "UNION")) {
        throw UnsupportedFeature(tok_.text + " is not supported (basic graph patterns only)");
      }
      const VertexId from = vertex(take_term("subject"));
      const Token p = tok_;
      if (p.kind == TokenKind::variable) {
        throw UnsupportedFeature("variable predicate ?" + p.text + " at line " + std::to_string(p.line) +
                                 " is not supported");
      }
      if (p.kind == TokenKind::literal) fail("literal in predicate position");
      const std::string pred = take_term("predicate").term;
      const VertexId to = vertex(take_term("object"));
      g_.edges.push_back({from, to, pred});
      if (tok_.kind != TokenKind::dot && tok_.kind != TokenKind::rbrace) fail("expected '.' or '}'");
    }
    shift();
    if (tok_.kind != TokenKind::end) fail("trailing input after '}'");

    if (star) {
      g_.projection = g_.variables();
    } else {
      for (const auto& [name, t] : selected) {
        auto v = g_.find_variable(name);
        if (!v) throw ParseError("projected variable ?" + name + " does not occur in the pattern", t.line, t.column);
        if (std::find(g_.projection.begin(), g_.projection.end(), *v) == g_.projection.end()) {
          g_.projection.push_back(*v);
        }
      }
    }
    return std::move(g_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, tok_.line, tok_.column); }

  void shift() { tok_ = lex_.next(); }

  void expect(TokenKind k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what);
    shift();
  }

  void parse_prefix() {
    shift();
    if (tok_.kind != TokenKind::name || tok_.text.back() != ':') fail("expected prefix name ending in ':'");
    std::string pfx = tok_.text.substr(0, tok_.text.size() - 1);
    shift();
    if (tok_.kind != TokenKind::iri) fail("expected <iri> after prefix name");
    prefixes_[pfx] = canonical_term(tok_.text);
    shift();
  }

  QueryVertex take_term(const char* role) {
    QueryVertex v;
    switch (tok_.kind) {
      case TokenKind::variable:
        v = {tok_.text, false};
        break;
      case TokenKind::iri:
      case TokenKind::literal:
        v = {canonical_term(tok_.text), true};
        break;
      case TokenKind::name: {
        v = {expand(tok_.text), true};
        break;
      }
      default:
        fail(std::string("expected ") + role + " term");
    }
    shift();
    return v;
  }

  std::string expand(const std::string& name) const {
    auto colon = name.find(':');
    if (colon != std::string::npos) {
      auto it = prefixes_.find(name.substr(0, colon));
      if (it != prefixes_.end()) return it->second + name.substr(colon + 1);
      fail("undeclared prefix '" + name.substr(0, colon + 1) + "'");
    }
    return name;
  }

  VertexId vertex(const QueryVertex& qv) {
    for (VertexId v = 0; v < g_.vertices.size(); ++v) {
      if (g_.vertices[v] == qv) return v;
    }
    g_.vertices.push_back(qv);
    return g_.vertices.size() - 1;
  }

  Lexer lex_;
  Token tok_;
  QueryGraph g_;
  std::map<std::string, std::string> prefixes_;
};

std::string render_term(const QueryVertex& v) {
  if (!v.constant) return "?" + v.term;
  return display_term(v.term);
}

}  // namespace

QueryGraph parse_query(std::string_view text) { return Parser(text).parse(); }

std::string print_query(const QueryGraph& g) {
  std::string out = "SELECT";
  for (VertexId v : g.projection) out += " ?" + g.vertices[v].term;
  if (g.projection.empty()) out += " *";
  out += " WHERE {\n";
  for (const auto& e : g.edges) {
    out += "  " + render_term(g.vertices[e.from]) + " " + display_term(e.predicate) + " " +
           render_term(g.vertices[e.to]) + " .\n";
  }
  out += "}\n";
  return out;
}

EdgeClasses classify_edges(const QueryGraph& g) {
  EdgeClasses c;
  for (EdgeId e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (g.vertices[edge.from].constant || g.vertices[edge.to].constant) {
      c.light.push_back(e);
    } else {
      c.heavy.push_back(e);
    }
  }
  return c;
}

ResolvedQuery resolve(const QueryGraph& g, const Dictionary& dict) {
  ResolvedQuery r;
  r.edge_predicate.reserve(g.edges.size());
  for (const auto& e : g.edges) r.edge_predicate.push_back(dict.predicate_id(e.predicate));
  r.constant_entity.assign(g.vertices.size(), kAbsent);
  for (VertexId v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].constant) r.constant_entity[v] = dict.entity_id(g.vertices[v].term);
  }
  return r;
}

}  // namespace matsparql
