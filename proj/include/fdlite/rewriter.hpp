#ifndef FDLITE_REWRITER_HPP
#define FDLITE_REWRITER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fdlite/ontology.hpp"
#include "fdlite/parser.hpp"
#include "fdlite/query.hpp"
#include "fdlite/tnorm.hpp"

namespace fdlite {

/// Can the axiom rewrite the threshold atom "backwards"? Three shapes:
/// a concept atom A(t) >= d takes <C SUBC A, e>; a role atom with anonymous
/// second term takes <C SUBC EX P, e>; with anonymous first term
/// <C SUBC EX P-, e>; and any role atom takes a role inclusion into P or
/// P-. In every shape the atom bound may not exceed the axiom degree:
/// an axiom cannot force more than it grants, under any of the t-norms.
inline bool applicable(const Axiom& ax, const ThresholdAtom& ta, TNorm) {
  if (!ax.positive()) return false;
  if (ta.bound > ax.degree) return false;
  const Atom& atom = ta.atom;
  if (ax.is_concept_inclusion()) {
    const ConceptInclusion& ci = ax.concepts();
    if (ci.rhs.base.is_name())
      return !atom.is_role() && ci.rhs.base.name() == atom.predicate;
    if (!atom.is_role() || ci.rhs.base.role().name != atom.predicate) return false;
    return ci.rhs.base.role().inverted ? atom.terms[0].is_anon() : atom.terms[1].is_anon();
  }
  return atom.is_role() && ax.roles().rhs.base.name == atom.predicate;
}

namespace detail {

// Bound carried over to the rewritten atom. Goedel keeps d; for the others
// the residuum dictates how much more the left-hand side must hold:
// d/e for product, d+1-e for Lukasiewicz. Applicability (d <= e) keeps the
// result within (0,1].
inline Degree transfer_bound(TNorm k, const Degree& d, const Degree& e) {
  switch (k) {
    case TNorm::godel: return d;
    case TNorm::product: return Degree::from_raw(d.raw() / e.raw());
    case TNorm::lukasiewicz: return Degree::from_raw(d.raw() + 1 - e.raw());
  }
  throw std::logic_error("bad t-norm");
}

}  // namespace detail

/// The rewritten atom. `next_anon` supplies ids for anonymous terms the
/// rewriting introduces. Requires applicable(ax, ta, k).
inline ThresholdAtom gr(const ThresholdAtom& ta, const Axiom& ax, TNorm k, int& next_anon) {
  if (!applicable(ax, ta, k)) throw std::invalid_argument("gr: axiom not applicable");
  Degree nb = detail::transfer_bound(k, ta.bound, ax.degree);
  const Atom& atom = ta.atom;
  if (ax.is_concept_inclusion()) {
    const ConceptInclusion& ci = ax.concepts();
    // the term the left-hand side constrains
    Term t = !atom.is_role() ? atom.terms[0]
             : ci.rhs.base.role().inverted ? atom.terms[1]
                                           : atom.terms[0];
    if (ci.lhs.is_name()) return {{ci.lhs.name(), {t}}, nb};
    const BasicRole& q = ci.lhs.role();
    if (q.inverted) return {{q.name, {Term::anon(next_anon++), t}}, nb};
    return {{q.name, {t, Term::anon(next_anon++)}}, nb};
  }
  const RoleInclusion& ri = ax.roles();
  Term x = atom.terms[0], y = atom.terms[1];
  if (ri.rhs.base.inverted) std::swap(x, y);
  if (ri.lhs.inverted) std::swap(x, y);
  return {{ri.lhs.name, {x, y}}, nb};
}

namespace detail {

// Flat-term unification. Answer variables unify only with themselves or
// with individuals; anonymous terms are pairwise distinct and bind freely,
// but never become a binding target (they must stay unshared).
struct Subst {
  std::map<std::string, Term> vars;
  std::map<int, Term> anons;

  Term resolve(Term t) const {
    for (;;) {
      if (t.is_variable()) {
        auto it = vars.find(t.name);
        if (it == vars.end()) return t;
        t = it->second;
      } else if (t.is_anon()) {
        auto it = anons.find(t.anon_id);
        if (it == anons.end()) return t;
        t = it->second;
      } else {
        return t;
      }
    }
  }

  void bind(const Term& from, Term to) {
    if (from.is_anon()) anons[from.anon_id] = std::move(to);
    else vars[from.name] = std::move(to);
  }
};

inline bool unify_terms(Term a, Term b, const std::set<std::string>& answer_vars, Subst& s) {
  a = s.resolve(a);
  b = s.resolve(b);
  if (a == b) return true;
  auto is_answer = [&](const Term& t) {
    return t.is_variable() && answer_vars.count(t.name) > 0;
  };
  if (a.is_individual() && b.is_individual()) return false;
  if (a.is_individual()) { s.bind(b, a); return true; }
  if (b.is_individual()) { s.bind(a, b); return true; }
  // both are variables or anonymous
  if (is_answer(a) && is_answer(b)) return false;
  if (a.is_anon()) { s.bind(a, b); return true; }
  if (b.is_anon()) { s.bind(b, a); return true; }
  if (is_answer(a)) { s.bind(b, a); return true; }
  s.bind(a, b);
  return true;
}

inline std::optional<Subst> unify_atoms(const Atom& a, const Atom& b,
                                        const std::set<std::string>& answer_vars) {
  if (a.predicate != b.predicate || a.terms.size() != b.terms.size()) return std::nullopt;
  Subst s;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (!unify_terms(a.terms[i], b.terms[i], answer_vars, s)) return std::nullopt;
  return s;
}

inline ThresholdQuery apply_subst(const ThresholdQuery& q, const Subst& s) {
  ThresholdQuery out = q;
  for (Term& t : out.head) t = s.resolve(t);
  for (ThresholdAtom& ta : out.atoms)
    for (Term& t : ta.atom.terms) t = s.resolve(t);
  return out;
}

// Variables that are neither answer variables nor shared between term
// positions are re-marked anonymous; exact duplicate atoms collapse.
inline ThresholdQuery normalize_unshared(ThresholdQuery q) {
  std::set<std::string> answer;
  for (const Term& t : q.head)
    if (t.is_variable()) answer.insert(t.name);
  std::map<std::string, int> occurrences;
  for (const ThresholdAtom& ta : q.atoms)
    for (const Term& t : ta.atom.terms)
      if (t.is_variable()) ++occurrences[t.name];
  int next_anon = 0;
  for (const ThresholdAtom& ta : q.atoms)
    for (const Term& t : ta.atom.terms)
      if (t.is_anon()) next_anon = std::max(next_anon, t.anon_id + 1);
  for (ThresholdAtom& ta : q.atoms)
    for (Term& t : ta.atom.terms)
      if (t.is_variable() && !answer.count(t.name) && occurrences[t.name] == 1)
        t = Term::anon(next_anon++);
  std::vector<ThresholdAtom> dedup;
  for (ThresholdAtom& ta : q.atoms)
    if (std::find(dedup.begin(), dedup.end(), ta) == dedup.end())
      dedup.push_back(std::move(ta));
  q.atoms = std::move(dedup);
  return q;
}

// Canonical renaming for duplicate elimination: atoms sorted, existential
// variables renamed Y0,Y1,... in traversal order (skipping head names) and
// anonymous ids renumbered. Head variable names are preserved.
inline ThresholdQuery canonicalize(ThresholdQuery q) {
  q = normalize_unshared(std::move(q));
  std::set<std::string> head_names;
  for (const Term& t : q.head)
    if (t.is_variable()) head_names.insert(t.name);

  auto skeleton = [&](const ThresholdAtom& ta) {
    std::string s = ta.atom.predicate + "/";
    for (const Term& t : ta.atom.terms) {
      if (t.is_individual()) s += "i:" + t.name;
      else if (t.is_variable() && head_names.count(t.name)) s += "h:" + t.name;
      else if (t.is_variable()) s += "v";
      else s += "_";
      s += ";";
    }
    return s + ta.bound.str();
  };
  std::stable_sort(q.atoms.begin(), q.atoms.end(),
                   [&](const ThresholdAtom& a, const ThresholdAtom& b) {
                     return skeleton(a) < skeleton(b);
                   });

  std::map<std::string, std::string> var_names;
  std::map<int, int> anon_ids;
  int next_var = 0, next_anon = 0;
  auto fresh_var = [&]() {
    for (;;) {
      std::string name = "Y" + std::to_string(next_var++);
      if (!head_names.count(name)) return name;
    }
  };
  for (ThresholdAtom& ta : q.atoms)
    for (Term& t : ta.atom.terms) {
      if (t.is_variable() && !head_names.count(t.name)) {
        auto [it, fresh] = var_names.try_emplace(t.name);
        if (fresh) it->second = fresh_var();
        t = Term::variable(it->second);
      } else if (t.is_anon()) {
        auto [it, fresh] = anon_ids.try_emplace(t.anon_id);
        if (fresh) it->second = next_anon++;
        t = Term::anon(it->second);
      }
    }
  std::sort(q.atoms.begin(), q.atoms.end(), [](const ThresholdAtom& a, const ThresholdAtom& b) {
    return a.atom != b.atom ? a.atom < b.atom : a.bound < b.bound;
  });
  return q;
}

}  // namespace detail

/// Unify the atoms at positions i1 and i2 of p and apply the most general
/// unifier to the whole query. The two atoms collapse into one whose bound
/// is the larger of the two; variables that lost shared status are
/// re-marked anonymous. Returns nothing when the atoms do not unify.
inline std::optional<ThresholdQuery> try_reduce(const ThresholdQuery& p, std::size_t i1,
                                                std::size_t i2) {
  if (i1 >= p.atoms.size() || i2 >= p.atoms.size() || i1 == i2)
    throw std::invalid_argument("reduce: bad atom positions");
  std::set<std::string> answer_vars;
  for (const Term& t : p.head)
    if (t.is_variable()) answer_vars.insert(t.name);
  auto s = detail::unify_atoms(p.atoms[i1].atom, p.atoms[i2].atom, answer_vars);
  if (!s) return std::nullopt;
  ThresholdQuery out = detail::apply_subst(p, *s);
  out.atoms[i1].bound = std::max(p.atoms[i1].bound, p.atoms[i2].bound);
  out.atoms.erase(out.atoms.begin() + static_cast<std::ptrdiff_t>(i2));
  return detail::normalize_unshared(std::move(out));
}

/// Unification-step precondition as a standalone check.
inline ThresholdQuery reduce(const ThresholdQuery& p, std::size_t i1, std::size_t i2) {
  auto r = try_reduce(p, i1, i2);
  if (!r) throw std::invalid_argument("reduce: atoms do not unify");
  return *r;
}

/// Fuzzy PerfectRef: the least set of threshold queries containing q and
/// closed under backward axiom application (gr) and atom unification
/// (reduce). Evaluating the result over the ABox alone answers q over the
/// whole ontology, for consistent ontologies.
///
/// Termination: atoms range over a finite term universe, and every bound
/// transfer under product (factor 1/e) or Lukasiewicz (summand 1-e) with
/// e < 1 strictly increases the bound, so only finitely many applications
/// stay within (0,1]. Duplicates are eliminated up to variable renaming
/// and atom order.
inline UnionTQ perfect_ref(const ThresholdQuery& q, const std::vector<Axiom>& tbox, TNorm k) {
  q.validate();
  UnionTQ out;
  std::set<std::string> seen;
  std::vector<ThresholdQuery> work;
  auto push = [&](ThresholdQuery tq) {
    ThresholdQuery c = detail::canonicalize(std::move(tq));
    if (seen.insert(serialize_query(c)).second) {
      out.queries.push_back(c);
      work.push_back(std::move(c));
    }
  };
  push(q);
  while (!work.empty()) {
    ThresholdQuery p = std::move(work.back());
    work.pop_back();
    int next_anon = 0;
    for (const ThresholdAtom& ta : p.atoms)
      for (const Term& t : ta.atom.terms)
        if (t.is_anon()) next_anon = std::max(next_anon, t.anon_id + 1);
    for (std::size_t gi = 0; gi < p.atoms.size(); ++gi)
      for (const Axiom& ax : tbox)
        if (applicable(ax, p.atoms[gi], k)) {
          ThresholdQuery p2 = p;
          int na = next_anon;
          p2.atoms[gi] = gr(p.atoms[gi], ax, k, na);
          push(std::move(p2));
        }
    for (std::size_t a = 0; a + 1 < p.atoms.size(); ++a)
      for (std::size_t b = a + 1; b < p.atoms.size(); ++b)
        if (auto r = try_reduce(p, a, b)) push(std::move(*r));
  }
  return out;
}

}  // namespace fdlite

#endif
