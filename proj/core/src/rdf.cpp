#include "matsparql/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>

namespace matsparql {

std::string canonical_term(std::string_view token) {
  if (token.size() >= 2 && token.front() == '<' && token.back() == '>') {
    return std::string(token.substr(1, token.size() - 2));
  }
  return std::string(token);
}

std::string display_term(std::string_view canonical) {
  if (!canonical.empty() && canonical.front() == '"') return std::string(canonical);
  return "<" + std::string(canonical) + ">";
}

EntityId Dictionary::intern_entity(const std::string& term) {
  auto [it, inserted] = entity_ids_.try_emplace(term, static_cast<EntityId>(entities_.size()));
  if (inserted) entities_.push_back(term);
  return it->second;
}

PredicateId Dictionary::intern_predicate(const std::string& term) {
  auto [it, inserted] =
      predicate_ids_.try_emplace(term, static_cast<PredicateId>(predicates_.size() + 1));
  if (inserted) predicates_.push_back(term);
  return it->second;
}

EntityId Dictionary::entity_id(std::string_view term) const {
  auto it = entity_ids_.find(term);
  return it == entity_ids_.end() ? kAbsent : it->second;
}

PredicateId Dictionary::predicate_id(std::string_view term) const {
  auto it = predicate_ids_.find(term);
  return it == predicate_ids_.end() ? 0 : it->second;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits one line into raw term tokens plus a trailing "." if present.
// Returns false if the line is blank or a comment.
bool tokenize_line(std::string_view line, std::size_t line_no, std::vector<std::string>& out) {
  out.clear();
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && is_space(line[i])) ++i;
    if (i >= n) break;
    const char c = line[i];
    if (c == '#') break;
    const std::size_t start = i;
    if (c == '<') {
      auto close = line.find('>', i);
      if (close == std::string_view::npos) throw ParseError("unterminated IRI", line_no, i + 1);
      i = close + 1;
    } else if (c == '"') {
      ++i;
      while (i < n && line[i] != '"') i += (line[i] == '\\') ? 2 : 1;
      if (i >= n) throw ParseError("unterminated literal", line_no, start + 1);
      ++i;
      if (i < n && line[i] == '@') {
        while (i < n && !is_space(line[i]) && line[i] != '.') ++i;
        // language tags may contain '-' but never '.'
      } else if (i + 1 < n && line[i] == '^' && line[i + 1] == '^') {
        i += 2;
        if (i < n && line[i] == '<') {
          auto close = line.find('>', i);
          if (close == std::string_view::npos) throw ParseError("unterminated datatype IRI", line_no, i + 1);
          i = close + 1;
        } else {
          while (i < n && !is_space(line[i])) ++i;
        }
      }
    } else {
      while (i < n && !is_space(line[i])) ++i;
      // a bare identifier glued to the terminating '.'
      std::string_view tok = line.substr(start, i - start);
      if (tok.size() > 1 && tok.back() == '.') {
        std::size_t j = i;
        while (j < n && is_space(line[j])) ++j;
        if (j >= n || line[j] == '#') {
          out.emplace_back(tok.substr(0, tok.size() - 1));
          out.emplace_back(".");
          continue;
        }
      }
    }
    out.emplace_back(line.substr(start, i - start));
  }
  return !out.empty();
}

}  // namespace

std::vector<RawTriple> parse_ntriples(std::istream& in) {
  std::vector<RawTriple> result;
  std::string line;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!tokenize_line(line, line_no, tokens)) continue;
    if (tokens.back() != ".") throw ParseError("missing terminating '.'", line_no);
    tokens.pop_back();
    if (tokens.size() != 3) {
      throw ParseError("expected 3 terms before '.', found " + std::to_string(tokens.size()), line_no);
    }
    if (tokens[0].front() == '"' || tokens[1].front() == '"') {
      throw ParseError("literal in subject or predicate position", line_no);
    }
    result.push_back({canonical_term(tokens[0]), canonical_term(tokens[1]), canonical_term(tokens[2])});
  }
  return result;
}

std::vector<RawTriple> parse_ntriples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  return parse_ntriples(in);
}

std::vector<RawTriple> filter_predicates(std::span<const RawTriple> raw,
                                         const std::unordered_set<std::string>& query_predicates) {
  std::vector<RawTriple> kept;
  for (const auto& t : raw) {
    if (query_predicates.contains(t.predicate)) kept.push_back(t);
  }
  return kept;
}

Encoded encode(std::span<const RawTriple> filtered, std::span<const std::string> preferred_order) {
  Encoded out;
  if (!preferred_order.empty()) {
    std::unordered_set<std::string_view> present;
    for (const auto& t : filtered) {
      present.insert(t.subject);
      present.insert(t.object);
    }
    for (const auto& term : preferred_order) {
      if (present.contains(term)) out.dictionary.intern_entity(term);
    }
  }

  std::set<EncodedTriple> seen;
  out.triples.triples.reserve(filtered.size());
  for (const auto& t : filtered) {
    const EntityId s = out.dictionary.intern_entity(t.subject);
    const EntityId o = out.dictionary.intern_entity(t.object);
    const PredicateId p = out.dictionary.intern_predicate(t.predicate);
    const EncodedTriple e{s, o, p};
    if (seen.insert(e).second) out.triples.triples.push_back(e);
  }
  out.triples.n = out.dictionary.entity_count();
  out.triples.predicate_count = out.dictionary.predicate_count();
  return out;
}

}  // namespace matsparql
