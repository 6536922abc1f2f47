#ifndef FDLITE_PARSER_HPP
#define FDLITE_PARSER_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fdlite/ontology.hpp"
#include "fdlite/query.hpp"

namespace fdlite {

/// Parse failure with a 1-based source position. No partial results are
/// ever returned.
class SourceError : public std::runtime_error {
public:
  SourceError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

private:
  int line_;
  int column_;
  std::string message_;
};

namespace detail {

struct Token {
  enum class Kind { name, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SourceError(tok_.line, tok_.col, msg);
  }

private:
  void advance() {
    skip_blank();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_ = {Token::Kind::end, "", line_, col_};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        s += take();
      tok_ = {Token::Kind::name, std::move(s), tok_.line, tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        s += take();
      // a '.' or '/' continues the number only when a digit follows
      for (char sep : {'.', '/'}) {
        if (pos_ + 1 < text_.size() && text_[pos_] == sep &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          s += take();
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            s += take();
        }
      }
      tok_ = {Token::Kind::number, std::move(s), tok_.line, tok_.col};
      return;
    }
    if (c == '>' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      take(); take();
      tok_ = {Token::Kind::punct, ">=", tok_.line, tok_.col};
      return;
    }
    if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      take(); take();
      tok_ = {Token::Kind::punct, ":-", tok_.line, tok_.col};
      return;
    }
    if (c == '(' || c == ')' || c == ',' || c == '-' || c == '.' || c == '&') {
      std::string s(1, take());
      tok_ = {Token::Kind::punct, std::move(s), tok_.line, tok_.col};
      return;
    }
    throw SourceError(line_, col_, std::string("unexpected character '") + c + "'");
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        take();
      } else {
        break;
      }
    }
  }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
    return c;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

inline bool is_keyword(const std::string& s) {
  return s == "EX" || s == "NOT" || s == "SUBC" || s == "SUBR";
}

inline std::string expect_name(Lexer& lx, const char* what) {
  if (lx.peek().kind != Token::Kind::name) lx.fail(std::string("expected ") + what);
  if (is_keyword(lx.peek().text)) lx.fail("keyword '" + lx.peek().text + "' used as a name");
  if (lx.peek().text.starts_with('_'))
    lx.fail("names starting with '_' are reserved ('" + lx.peek().text + "')");
  return lx.next().text;
}

inline void expect_punct(Lexer& lx, const char* p) {
  if (lx.peek().kind != Token::Kind::punct || lx.peek().text != p)
    lx.fail(std::string("expected '") + p + "'");
  lx.next();
}

inline bool accept_punct(Lexer& lx, const char* p) {
  if (lx.peek().kind == Token::Kind::punct && lx.peek().text == p) {
    lx.next();
    return true;
  }
  return false;
}

inline bool accept_keyword(Lexer& lx, const char* kw) {
  if (lx.peek().kind == Token::Kind::name && lx.peek().text == kw) {
    lx.next();
    return true;
  }
  return false;
}

inline Degree expect_degree(Lexer& lx) {
  if (lx.peek().kind != Token::Kind::number) lx.fail("expected a degree");
  Token t = lx.next();
  Degree d = Degree::zero();
  try {
    d = Degree::parse(t.text);
  } catch (const std::invalid_argument& e) {
    throw SourceError(t.line, t.col, e.what());
  }
  if (d.is_zero()) throw SourceError(t.line, t.col, "degree must be positive");
  return d;
}

inline BasicRole parse_role(Lexer& lx) {
  std::string name = expect_name(lx, "a role name");
  bool inverted = accept_punct(lx, "-");
  return {std::move(name), inverted};
}

inline BasicConcept parse_basic_concept(Lexer& lx) {
  if (accept_keyword(lx, "EX")) return BasicConcept::exists(parse_role(lx));
  return BasicConcept::named(expect_name(lx, "a concept name"));
}

}  // namespace detail

/// Parse an ontology in the line-oriented .fdl syntax:
///
///   Museum SUBC Popular >= 0.6
///   EX locIn SUBC NOT Cheap >= 0.5
///   locIn SUBR Near >= 1
///   Popular(comic) >= 0.8
///   near(irish, comic) >= 0.7
///
/// '#' starts a comment. Degrees are decimals or p/q fractions; degree 0
/// is rejected, as are negations on a left-hand side.
inline Ontology parse_ontology(std::string_view text) {
  using namespace detail;
  Lexer lx(text);
  Ontology o;
  while (lx.peek().kind != Token::Kind::end) {
    if (lx.peek().kind == Token::Kind::name && lx.peek().text == "NOT")
      lx.fail("negation cannot occur on the left-hand side");
    // assertion lines start with NAME '('
    bool ex_lhs = lx.peek().kind == Token::Kind::name && lx.peek().text == "EX";
    std::string first;
    Token first_tok = lx.peek();
    if (!ex_lhs) first = expect_name(lx, "a concept, role, or assertion name");
    if (!ex_lhs && accept_punct(lx, "(")) {
      std::string a = expect_name(lx, "an individual name");
      std::string b;
      bool role = accept_punct(lx, ",");
      if (role) b = expect_name(lx, "an individual name");
      expect_punct(lx, ")");
      expect_punct(lx, ">=");
      Degree d = expect_degree(lx);
      if (role)
        o.abox.emplace_back(RoleAssertion{first, a, b}, d);
      else
        o.abox.emplace_back(ConceptAssertion{BasicConcept::named(first), a}, d);
      continue;
    }
    // axiom line; re-read the left-hand side
    BasicConcept lhs_c;
    BasicRole lhs_r;
    bool lhs_inverted = false;
    if (ex_lhs) {
      lx.next();  // EX
      lhs_c = BasicConcept::exists(parse_role(lx));
    } else {
      lhs_inverted = accept_punct(lx, "-");
      lhs_c = BasicConcept::named(first);
      lhs_r = {first, lhs_inverted};
    }
    if (accept_keyword(lx, "SUBC")) {
      if (ex_lhs ? false : lhs_inverted)
        throw SourceError(first_tok.line, first_tok.col, "inverted role before SUBC");
      bool negated = accept_keyword(lx, "NOT");
      BasicConcept rhs = parse_basic_concept(lx);
      expect_punct(lx, ">=");
      Degree d = expect_degree(lx);
      o.tbox.emplace_back(ConceptInclusion{lhs_c, {rhs, negated}}, d);
    } else if (accept_keyword(lx, "SUBR")) {
      if (ex_lhs) lx.fail("SUBR requires a role on the left-hand side");
      bool negated = accept_keyword(lx, "NOT");
      BasicRole rhs = parse_role(lx);
      expect_punct(lx, ">=");
      Degree d = expect_degree(lx);
      o.tbox.emplace_back(RoleInclusion{lhs_r, {rhs, negated}}, d);
    } else {
      lx.fail("expected SUBC, SUBR, or '('");
    }
  }
  return o;
}

using ParsedQuery = std::variant<ConjunctiveQuery, ThresholdQuery>;

namespace detail {

// Variables are '_', tokens starting upper-case, single lower-case letters,
// or names declared in the head; everything else is an individual.
inline Term classify_term(const Token& t, const std::vector<std::string>& head_vars,
                          int& next_anon) {
  if (t.text == "_") return Term::anon(next_anon++);
  bool head_declared = false;
  for (const auto& v : head_vars)
    if (v == t.text) head_declared = true;
  if (head_declared || std::isupper(static_cast<unsigned char>(t.text[0])) ||
      t.text.size() == 1)
    return Term::variable(t.text);
  return Term::individual(t.text);
}

inline Token expect_term_token(Lexer& lx) {
  if (lx.peek().kind != Token::Kind::name) lx.fail("expected a term");
  if (is_keyword(lx.peek().text)) lx.fail("keyword '" + lx.peek().text + "' used as a term");
  Token t = lx.next();
  if (t.text.starts_with('_') && t.text != "_")
    throw SourceError(t.line, t.col, "names starting with '_' are reserved");
  return t;
}

}  // namespace detail

/// Parse a query in the .fq syntax. A head of terms, ':-', a comma list of
/// atoms, and a final '.':
///
///   q(x) :- Cheap(x), Popular(y), near(x,y).            (conjunctive)
///   q(x) :- Cheap(x) >= 0.8, near(x,y) >= 0.6.          (threshold)
///
/// Terms: upper-case names, single letters, and names declared in the head
/// are variables; '_' is an anonymous variable; other lower-case names are
/// individuals. Every head variable must occur in the body.
inline ParsedQuery parse_query(std::string_view text) {
  using namespace detail;
  Lexer lx(text);
  if (lx.peek().kind != Token::Kind::name) lx.fail("expected a query head");
  std::string qname = lx.next().text;
  expect_punct(lx, "(");
  std::vector<Token> head_toks;
  if (!accept_punct(lx, ")")) {
    do {
      head_toks.push_back(expect_term_token(lx));
    } while (accept_punct(lx, ","));
    expect_punct(lx, ")");
  }
  expect_punct(lx, ":-");

  std::vector<std::string> head_vars;
  for (const Token& t : head_toks)
    if (t.text == "_")
      throw SourceError(t.line, t.col, "'_' cannot appear in a query head");
    else if (std::isupper(static_cast<unsigned char>(t.text[0])) || t.text.size() == 1)
      head_vars.push_back(t.text);

  int next_anon = 0;
  std::vector<Term> head;
  for (const Token& t : head_toks) head.push_back(classify_term(t, head_vars, next_anon));

  struct RawAtom {
    Atom atom;
    std::optional<Degree> bound;
    Token where;
  };
  std::vector<RawAtom> raw;
  do {
    Token where = lx.peek();
    std::string pred = expect_name(lx, "a predicate name");
    expect_punct(lx, "(");
    std::vector<Term> terms;
    terms.push_back(classify_term(expect_term_token(lx), head_vars, next_anon));
    if (accept_punct(lx, ","))
      terms.push_back(classify_term(expect_term_token(lx), head_vars, next_anon));
    expect_punct(lx, ")");
    std::optional<Degree> bound;
    if (accept_punct(lx, ">=")) bound = expect_degree(lx);
    raw.push_back({{pred, std::move(terms)}, bound, where});
  } while (accept_punct(lx, ","));
  expect_punct(lx, ".");
  if (lx.peek().kind != Token::Kind::end) lx.fail("trailing input after '.'");

  bool threshold = raw.front().bound.has_value();
  for (const RawAtom& ra : raw)
    if (ra.bound.has_value() != threshold)
      throw SourceError(ra.where.line, ra.where.col,
                        "mixed plain and threshold atoms in one query");

  try {
    if (threshold) {
      ThresholdQuery q;
      q.name = qname;
      q.head = head;
      for (RawAtom& ra : raw) q.atoms.push_back({std::move(ra.atom), *ra.bound});
      q.validate();
      return q;
    }
    ConjunctiveQuery q;
    q.name = qname;
    q.head = head;
    for (RawAtom& ra : raw) {
      if (std::find(q.atoms.begin(), q.atoms.end(), ra.atom) == q.atoms.end())
        q.atoms.push_back(std::move(ra.atom));
    }
    q.validate();
    return q;
  } catch (const std::invalid_argument& e) {
    throw SourceError(1, 1, e.what());
  }
}

// ---------------------------------------------------------------------------
// serialization

inline std::string serialize(const BasicRole& r) {
  return r.inverted ? r.name + "-" : r.name;
}

inline std::string serialize(const BasicConcept& b) {
  return b.is_name() ? b.name() : "EX " + serialize(b.role());
}

inline std::string serialize(const Axiom& ax) {
  std::string s;
  if (ax.is_concept_inclusion()) {
    const ConceptInclusion& ci = ax.concepts();
    s = serialize(ci.lhs) + " SUBC " + (ci.rhs.negated ? "NOT " : "") + serialize(ci.rhs.base);
  } else {
    const RoleInclusion& ri = ax.roles();
    s = serialize(ri.lhs) + " SUBR " + (ri.rhs.negated ? "NOT " : "") + serialize(ri.rhs.base);
  }
  return s + " >= " + ax.degree.str();
}

inline std::string serialize(const Assertion& as) {
  if (as.is_concept()) {
    const ConceptAssertion& ca = as.as_concept();
    if (!ca.what.is_name())
      throw std::invalid_argument("existential assertions have no textual form");
    return ca.what.name() + "(" + ca.individual + ") >= " + as.degree.str();
  }
  const RoleAssertion& ra = as.as_role();
  return ra.role + "(" + ra.subject + ", " + ra.object + ") >= " + as.degree.str();
}

/// Diagnostic text for statements. Unlike serialize(), existential
/// assertions render in an extended form ("EX P(a) >= d") that the grammar
/// cannot parse back.
inline std::string statement_text(const Assertion& as) {
  if (as.is_concept() && !as.as_concept().what.is_name())
    return serialize(as.as_concept().what) + "(" + as.as_concept().individual +
           ") >= " + as.degree.str();
  return serialize(as);
}

inline std::string statement_text(const Axiom& ax) { return serialize(ax); }

inline std::string serialize_ontology(const Ontology& o) {
  std::string out;
  for (const Axiom& ax : o.tbox) out += serialize(ax) + "\n";
  for (const Assertion& as : o.abox) out += serialize(as) + "\n";
  return out;
}

inline std::string serialize(const Term& t) {
  return t.is_anon() ? "_" : t.name;
}

inline std::string serialize(const Atom& a) {
  std::string s = a.predicate + "(" + serialize(a.terms[0]);
  if (a.terms.size() == 2) s += "," + serialize(a.terms[1]);
  return s + ")";
}

namespace detail {

template <typename AtomT, typename Fn>
std::string serialize_query_impl(const std::string& name, const std::vector<Term>& head,
                                 const std::vector<AtomT>& atoms, Fn&& one) {
  std::string s = name + "(";
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (i) s += ",";
    s += serialize(head[i]);
  }
  s += ") :- ";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    s += one(atoms[i]);
  }
  return s + ".";
}

}  // namespace detail

inline std::string serialize_query(const ConjunctiveQuery& q) {
  return detail::serialize_query_impl(q.name, q.head, q.atoms,
                                      [](const Atom& a) { return serialize(a); });
}

inline std::string serialize_query(const ThresholdQuery& q) {
  return detail::serialize_query_impl(
      q.name, q.head, q.atoms,
      [](const ThresholdAtom& ta) { return serialize(ta.atom) + " >= " + ta.bound.str(); });
}

inline std::string serialize_query(const ParsedQuery& q) {
  return std::visit([](const auto& v) { return serialize_query(v); }, q);
}

}  // namespace fdlite

#endif
