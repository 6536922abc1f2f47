#ifndef FDLITE_QUERY_HPP
#define FDLITE_QUERY_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdlite/degree.hpp"

namespace fdlite {

/// A query term: an individual, a variable, or an anonymous variable.
/// Anonymous terms stand for undistinguished, unshared variables and are
/// pairwise distinct; each carries its own id within a query.
struct Term {
  enum class Kind { individual, variable, anonymous };
  Kind kind = Kind::anonymous;
  std::string name;  // empty for anonymous
  int anon_id = -1;  // valid for anonymous

  static Term individual(std::string n) { return {Kind::individual, std::move(n), -1}; }
  static Term variable(std::string n) { return {Kind::variable, std::move(n), -1}; }
  static Term anon(int id) { return {Kind::anonymous, {}, id}; }

  bool is_individual() const { return kind == Kind::individual; }
  bool is_variable() const { return kind == Kind::variable; }
  bool is_anon() const { return kind == Kind::anonymous; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

/// A concept atom A(t) or a role atom P(t1,t2). Atoms never mention
/// inverted roles; inversion is expressed by swapping the term positions.
struct Atom {
  std::string predicate;
  std::vector<Term> terms;  // size 1 or 2

  bool is_role() const { return terms.size() == 2; }
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct ThresholdAtom {
  Atom atom;
  Degree bound;  // in (0,1]

  friend bool operator==(const ThresholdAtom&, const ThresholdAtom&) = default;
};

namespace detail {

inline void check_head(const std::vector<Term>& head, const auto& atoms,
                       auto&& atom_of) {
  for (const Term& t : head) {
    if (t.is_anon()) throw std::invalid_argument("anonymous term in query head");
    if (!t.is_variable()) continue;
    bool found = false;
    for (const auto& a : atoms)
      for (const Term& u : atom_of(a).terms)
        if (u == t) found = true;
    if (!found)
      throw std::invalid_argument("head variable '" + t.name + "' does not occur in the body");
  }
}

}  // namespace detail

/// A conjunctive query. The head holds the answer positions: variables, or
/// individuals pinned by rewriting.
struct ConjunctiveQuery {
  std::string name = "q";
  std::vector<Term> head;
  std::vector<Atom> atoms;

  /// Throws if some head variable does not occur in the body.
  void validate() const {
    detail::check_head(head, atoms, [](const Atom& a) -> const Atom& { return a; });
  }

  std::vector<std::string> answer_variables() const {
    std::vector<std::string> vs;
    for (const Term& t : head)
      if (t.is_variable()) vs.push_back(t.name);
    return vs;
  }

  friend bool operator==(const ConjunctiveQuery&, const ConjunctiveQuery&) = default;
};

/// A threshold query: a conjunction of atoms, each with its own lower bound.
struct ThresholdQuery {
  std::string name = "q";
  std::vector<Term> head;
  std::vector<ThresholdAtom> atoms;

  void validate() const {
    detail::check_head(head, atoms,
                       [](const ThresholdAtom& a) -> const Atom& { return a.atom; });
    for (const ThresholdAtom& ta : atoms)
      if (ta.bound.is_zero()) throw std::invalid_argument("threshold atom with bound 0");
  }

  std::vector<std::string> answer_variables() const {
    std::vector<std::string> vs;
    for (const Term& t : head)
      if (t.is_variable()) vs.push_back(t.name);
    return vs;
  }

  friend bool operator==(const ThresholdQuery&, const ThresholdQuery&) = default;
};

/// A union of threshold queries over a shared head.
struct UnionTQ {
  std::vector<ThresholdQuery> queries;  // nonempty
};

/// Turn a CQ into the TQ that bounds every atom by d. Sound and complete
/// for the degree query q >= d under the Goedel t-norm only.
inline ThresholdQuery cq_to_tq(const ConjunctiveQuery& q, const Degree& d) {
  if (d.is_zero()) throw std::invalid_argument("cq_to_tq with bound 0");
  ThresholdQuery tq;
  tq.name = q.name;
  tq.head = q.head;
  for (const Atom& a : q.atoms) tq.atoms.push_back({a, d});
  return tq;
}

}  // namespace fdlite

#endif
