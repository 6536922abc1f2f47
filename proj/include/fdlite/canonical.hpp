#ifndef FDLITE_CANONICAL_HPP
#define FDLITE_CANONICAL_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fdlite/parser.hpp"
#include "fdlite/query.hpp"
#include "fdlite/tnorm.hpp"

namespace fdlite {

/// A finite fuzzy structure: a domain of named individuals plus anonymous
/// constants, with graded unary and binary relations. Absent entries mean
/// degree 0; stored degrees are always positive.
struct FuzzyInterpretation {
  std::vector<std::string> domain;
  std::vector<bool> anon;
  std::map<std::string, int> index;
  std::map<std::pair<std::string, int>, Degree> concept_deg;
  std::map<std::tuple<std::string, int, int>, Degree> role_deg;

  int find(const std::string& name) const {
    auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
  }

  int add_element(std::string name, bool anonymous) {
    int id = static_cast<int>(domain.size());
    index.emplace(name, id);
    domain.push_back(std::move(name));
    anon.push_back(anonymous);
    return id;
  }

  Degree concept_degree(const std::string& c, int e) const {
    auto it = concept_deg.find({c, e});
    return it == concept_deg.end() ? Degree::zero() : it->second;
  }

  Degree role_degree(const std::string& r, int a, int b) const {
    auto it = role_deg.find({r, a, b});
    return it == role_deg.end() ? Degree::zero() : it->second;
  }

  /// Q(a,b), resolving inversion.
  Degree basic_role_degree(const BasicRole& q, int a, int b) const {
    return q.inverted ? role_degree(q.name, b, a) : role_degree(q.name, a, b);
  }

  /// B(e); EX Q is the maximum over the finite domain.
  Degree basic_concept_degree(const BasicConcept& b, int e) const {
    if (b.is_name()) return concept_degree(b.name(), e);
    Degree best = Degree::zero();
    for (int x = 0; x < static_cast<int>(domain.size()); ++x)
      best = std::max(best, basic_role_degree(b.role(), e, x));
    return best;
  }

  void set_concept(const std::string& c, int e, Degree d) {
    if (d.is_zero()) return;
    concept_deg[{c, e}] = std::move(d);
  }

  void set_role(const std::string& r, int a, int b, Degree d) {
    if (d.is_zero()) return;
    role_deg[{r, a, b}] = std::move(d);
  }
};

struct RuleTraceEntry {
  std::string rule;  // R1..R8
  std::string statement;
  std::vector<std::string> elements;
  Degree new_degree;
};
using RuleTrace = std::vector<RuleTraceEntry>;

/// Cap on the anonymous constants materialization may create; the textbook
/// construction is infinitary, so truncation is reported explicitly.
struct Budget {
  std::size_t max_fresh_elements = 0;

  /// |TBox| x |individuals| x |distinct degrees|, plus one slot per
  /// existential assertion (each may need a witness even with an empty
  /// TBox).
  static Budget default_for(const Ontology& o) {
    std::size_t ex_assertions = 0;
    for (const Assertion& as : o.abox)
      if (as.is_concept() && !as.as_concept().what.is_name()) ++ex_assertions;
    std::size_t n = o.tbox.size() * o.signature().individuals.size() * degree_set(o).size();
    return {n + ex_assertions};
  }
};

struct CanonicalResult {
  FuzzyInterpretation interpretation;
  RuleTrace trace;
  bool complete = false;
};

namespace detail {

inline bool has_positive_exists_exists(const Ontology& o) {
  for (const Axiom& ax : o.tbox)
    if (ax.is_concept_inclusion() && !ax.concepts().lhs.is_name() &&
        !ax.concepts().rhs.negated && !ax.concepts().rhs.base.is_name())
      return true;
  return false;
}

// Does any materialization rule still want to fire? Budget ignored.
inline bool rules_applicable(const FuzzyInterpretation& i, const Ontology& o, TNorm k) {
  const int n = static_cast<int>(i.domain.size());
  for (const Assertion& as : o.abox) {
    if (as.is_concept()) {
      int e = i.find(as.as_concept().individual);
      if (e < 0) return true;
      if (i.basic_concept_degree(as.as_concept().what, e) < as.degree) return true;
    } else {
      int a = i.find(as.as_role().subject), b = i.find(as.as_role().object);
      if (a < 0 || b < 0) return true;
      if (i.role_degree(as.as_role().role, a, b) < as.degree) return true;
    }
  }
  for (const Axiom& ax : o.tbox) {
    if (!ax.positive()) continue;
    if (ax.is_concept_inclusion()) {
      const ConceptInclusion& ci = ax.concepts();
      for (int e = 0; e < n; ++e) {
        Degree need = conj(k, i.basic_concept_degree(ci.lhs, e), ax.degree);
        if (!need.is_zero() && i.basic_concept_degree(ci.rhs.base, e) < need) return true;
      }
    } else {
      const RoleInclusion& ri = ax.roles();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Degree need = conj(k, i.basic_role_degree(ri.lhs, a, b), ax.degree);
          if (!need.is_zero() && i.basic_role_degree(ri.rhs.base, a, b) < need) return true;
        }
    }
  }
  return false;
}

}  // namespace detail

/// Materialize the least fixpoint of the construction rules, creating at
/// most budget.max_fresh_elements anonymous witnesses (printed as
/// "_n:<index>"). Statements are revisited round-robin until a full pass
/// changes nothing. `complete` is true iff nothing remains applicable, i.e.
/// the budget suppressed no needed witness.
///
/// Requires a normalized ontology (no positive EX-to-EX axiom).
inline CanonicalResult build_canonical(const Ontology& o, TNorm k, const Budget& budget) {
  if (detail::has_positive_exists_exists(o))
    throw std::invalid_argument("build_canonical requires a normalized ontology");

  CanonicalResult res;
  FuzzyInterpretation& i = res.interpretation;
  for (const std::string& a : o.signature().individuals) i.add_element(a, false);

  std::size_t fresh_used = 0;
  auto fresh = [&]() -> int {
    if (fresh_used >= budget.max_fresh_elements) return -1;
    return i.add_element("_n:" + std::to_string(fresh_used++), true);
  };
  auto record = [&](const char* rule, const std::string& stmt,
                    std::vector<std::string> elems, const Degree& d) {
    res.trace.push_back({rule, stmt, std::move(elems), d});
  };

  // For <A SUBC EX Q, d>: a fresh witness only when no existing edge is
  // strong enough; the witness edge gets exactly the required degree.
  auto ensure_witness = [&](const char* rule, const std::string& stmt, int e,
                            const BasicRole& q, const Degree& need) -> bool {
    if (need.is_zero()) return false;
    for (int x = 0; x < static_cast<int>(i.domain.size()); ++x)
      if (i.basic_role_degree(q, e, x) >= need) return false;
    int w = fresh();
    if (w < 0) return false;  // budget exhausted; reported via `complete`
    if (q.inverted)
      i.set_role(q.name, w, e, need);
    else
      i.set_role(q.name, e, w, need);
    record(rule, stmt, {i.domain[e], i.domain[w]}, need);
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Assertion& as : o.abox) {
      if (as.is_concept()) {
        const ConceptAssertion& ca = as.as_concept();
        int e = i.find(ca.individual);
        if (ca.what.is_name()) {
          if (i.concept_degree(ca.what.name(), e) < as.degree) {  // R1
            i.set_concept(ca.what.name(), e, as.degree);
            record("R1", statement_text(as), {ca.individual}, as.degree);
            changed = true;
          }
        } else {
          changed |= ensure_witness("R1", statement_text(as), e, ca.what.role(), as.degree);
        }
      } else {
        const RoleAssertion& ra = as.as_role();
        int a = i.find(ra.subject), b = i.find(ra.object);
        if (i.role_degree(ra.role, a, b) < as.degree) {  // R2
          i.set_role(ra.role, a, b, as.degree);
          record("R2", statement_text(as), {ra.subject, ra.object}, as.degree);
          changed = true;
        }
      }
    }
    for (const Axiom& ax : o.tbox) {
      if (!ax.positive()) continue;
      if (ax.is_concept_inclusion()) {
        const ConceptInclusion& ci = ax.concepts();
        const int n = static_cast<int>(i.domain.size());
        for (int e = 0; e < n; ++e) {
          Degree need = conj(k, i.basic_concept_degree(ci.lhs, e), ax.degree);
          if (need.is_zero()) continue;
          if (ci.rhs.base.is_name()) {
            // R3 (named lhs) / R6, R7 (existential lhs)
            if (i.concept_degree(ci.rhs.base.name(), e) < need) {
              i.set_concept(ci.rhs.base.name(), e, need);
              const char* rule = ci.lhs.is_name() ? "R3"
                                 : ci.lhs.role().inverted ? "R7" : "R6";
              record(rule, statement_text(ax), {i.domain[e]}, need);
              changed = true;
            }
          } else {
            // R4 / R5
            const char* rule = ci.rhs.base.role().inverted ? "R5" : "R4";
            changed |= ensure_witness(rule, statement_text(ax), e, ci.rhs.base.role(), need);
          }
        }
      } else {
        const RoleInclusion& ri = ax.roles();
        // R8: iterate the stored lhs edges instead of the full square
        std::vector<std::tuple<int, int, Degree>> lhs_edges;
        for (const auto& [key, deg] : i.role_deg) {
          if (std::get<0>(key) != ri.lhs.name) continue;
          int a = std::get<1>(key), b = std::get<2>(key);
          if (ri.lhs.inverted) std::swap(a, b);  // (a,b) now in lhs-role coordinates
          lhs_edges.emplace_back(a, b, deg);
        }
        for (const auto& [a, b, deg] : lhs_edges) {
          Degree need = conj(k, deg, ax.degree);
          if (need.is_zero()) continue;
          if (i.basic_role_degree(ri.rhs.base, a, b) < need) {
            int x = a, y = b;
            if (ri.rhs.base.inverted) std::swap(x, y);
            i.set_role(ri.rhs.base.name, x, y, need);
            record("R8", statement_text(ax), {i.domain[a], i.domain[b]}, need);
            changed = true;
          }
        }
      }
    }
  }
  res.complete = !detail::rules_applicable(i, o, k);
  return res;
}

inline CanonicalResult build_canonical(const Ontology& o, TNorm k) {
  return build_canonical(o, k, Budget::default_for(o));
}

/// All statements of `o` violated by `i`, serialized. Empty iff `i` is a
/// model. EX is evaluated as a maximum over the finite domain; negation and
/// implication through the t-norm's operators.
inline std::vector<std::string> check_model(const FuzzyInterpretation& i, const Ontology& o,
                                            TNorm k) {
  std::vector<std::string> violated;
  const int n = static_cast<int>(i.domain.size());
  for (const Axiom& ax : o.tbox) {
    bool ok = true;
    if (ax.is_concept_inclusion()) {
      const ConceptInclusion& ci = ax.concepts();
      for (int e = 0; e < n && ok; ++e) {
        Degree lhs = i.basic_concept_degree(ci.lhs, e);
        Degree rhs = i.basic_concept_degree(ci.rhs.base, e);
        if (ci.rhs.negated) rhs = neg(k, rhs);
        ok = resid(k, lhs, rhs) >= ax.degree;
      }
    } else {
      const RoleInclusion& ri = ax.roles();
      for (int a = 0; a < n && ok; ++a)
        for (int b = 0; b < n && ok; ++b) {
          Degree lhs = i.basic_role_degree(ri.lhs, a, b);
          Degree rhs = i.basic_role_degree(ri.rhs.base, a, b);
          if (ri.rhs.negated) rhs = neg(k, rhs);
          ok = resid(k, lhs, rhs) >= ax.degree;
        }
    }
    if (!ok) violated.push_back(statement_text(ax));
  }
  for (const Assertion& as : o.abox) {
    bool ok;
    if (as.is_concept()) {
      int e = i.find(as.as_concept().individual);
      ok = e >= 0 && i.basic_concept_degree(as.as_concept().what, e) >= as.degree;
    } else {
      int a = i.find(as.as_role().subject), b = i.find(as.as_role().object);
      ok = a >= 0 && b >= 0 && i.role_degree(as.as_role().role, a, b) >= as.degree;
    }
    if (!ok) violated.push_back(statement_text(as));
  }
  return violated;
}

namespace detail {

struct MatchBinding {
  std::map<std::string, int> vars;   // named variables
  std::map<int, int> anons;          // anonymous ids
};

inline bool bind_term(const FuzzyInterpretation& i, const Term& t, int elem, MatchBinding& b,
                      std::vector<std::pair<bool, std::string>>& undo) {
  if (t.is_individual()) return i.find(t.name) == elem;
  if (t.is_variable()) {
    auto it = b.vars.find(t.name);
    if (it != b.vars.end()) return it->second == elem;
    b.vars.emplace(t.name, elem);
    undo.emplace_back(false, t.name);
    return true;
  }
  auto it = b.anons.find(t.anon_id);
  if (it != b.anons.end()) return it->second == elem;
  b.anons.emplace(t.anon_id, elem);
  undo.emplace_back(true, std::to_string(t.anon_id));
  return true;
}

inline void unbind(MatchBinding& b, const std::vector<std::pair<bool, std::string>>& undo) {
  for (const auto& [is_anon, key] : undo) {
    if (is_anon) b.anons.erase(std::stoi(key));
    else b.vars.erase(key);
  }
}

// Enumerate the stored (positive) entries matching one atom, invoking
// fn(degree) for every consistent extension of the current binding.
// fn returns false to stop.
template <typename Fn>
bool for_each_atom_match(const FuzzyInterpretation& i, const Atom& atom, MatchBinding& b,
                         Fn&& fn) {
  if (!atom.is_role()) {
    for (const auto& [key, d] : i.concept_deg) {
      if (key.first != atom.predicate) continue;
      std::vector<std::pair<bool, std::string>> undo;
      if (bind_term(i, atom.terms[0], key.second, b, undo)) {
        if (!fn(d)) { unbind(b, undo); return false; }
      }
      unbind(b, undo);
    }
    return true;
  }
  for (const auto& [key, d] : i.role_deg) {
    if (std::get<0>(key) != atom.predicate) continue;
    std::vector<std::pair<bool, std::string>> undo;
    if (bind_term(i, atom.terms[0], std::get<1>(key), b, undo) &&
        bind_term(i, atom.terms[1], std::get<2>(key), b, undo)) {
      if (!fn(d)) { unbind(b, undo); return false; }
    }
    unbind(b, undo);
  }
  return true;
}

// Pre-binds the head terms to the candidate tuple; false when the tuple
// cannot match at all (unknown individual or pinned-head mismatch).
inline bool bind_head(const FuzzyInterpretation& i, const std::vector<Term>& head,
                      const std::vector<std::string>& tuple, MatchBinding& b) {
  if (head.size() != tuple.size())
    throw std::invalid_argument("answer tuple arity mismatch");
  for (std::size_t j = 0; j < head.size(); ++j) {
    int e = i.find(tuple[j]);
    if (e < 0) return false;
    if (head[j].is_individual()) {
      if (head[j].name != tuple[j]) return false;
    } else if (head[j].is_variable()) {
      auto it = b.vars.find(head[j].name);
      if (it != b.vars.end() && it->second != e) return false;
      b.vars.emplace(head[j].name, e);
    }
  }
  return true;
}

}  // namespace detail

/// Degree of the CQ at the answer tuple: the maximum over all matches of
/// the t-norm fold of the atom degrees. Existential variables range over
/// the whole domain, anonymous constants included.
inline Degree eval_cq_on(const FuzzyInterpretation& i, const ConjunctiveQuery& q,
                         const std::vector<std::string>& tuple, TNorm k) {
  detail::MatchBinding binding;
  if (!detail::bind_head(i, q.head, tuple, binding)) return Degree::zero();

  Degree best = Degree::zero();
  bool found = false;
  auto recurse = [&](auto&& self, std::size_t idx, const Degree& acc) -> void {
    if (idx == q.atoms.size()) {
      if (!found || acc > best) { best = acc; found = true; }
      return;
    }
    detail::for_each_atom_match(i, q.atoms[idx], binding, [&](const Degree& d) {
      Degree next = conj(k, acc, d);
      if (!found || next > best) self(self, idx + 1, next);
      return true;
    });
  };
  recurse(recurse, 0, Degree::one());
  return q.atoms.empty() ? Degree::one() : best;
}

/// Does some match satisfy every threshold atom?
inline bool eval_tq_on(const FuzzyInterpretation& i, const ThresholdQuery& q,
                       const std::vector<std::string>& tuple) {
  detail::MatchBinding binding;
  if (!detail::bind_head(i, q.head, tuple, binding)) return false;

  bool sat = false;
  auto recurse = [&](auto&& self, std::size_t idx) -> void {
    if (idx == q.atoms.size()) { sat = true; return; }
    const ThresholdAtom& ta = q.atoms[idx];
    detail::for_each_atom_match(i, ta.atom, binding, [&](const Degree& d) {
      if (d >= ta.bound) self(self, idx + 1);
      return !sat;
    });
  };
  recurse(recurse, 0);
  return sat;
}

/// True iff no existential witness can transitively require a witness for
/// the same concept again. For a normalized TBox this bounds the depth of
/// anonymous elements, so materialization is complete within a finite
/// budget.
inline bool existential_cycle_check(const Ontology& o) {
  if (detail::has_positive_exists_exists(o))
    throw std::invalid_argument("existential_cycle_check requires a normalized ontology");

  // Role facts a witness can carry, as (role name, witness-is-object).
  // Facts, the concepts they grant, and the edges the witness's own
  // existentials hand back to it are closed jointly.
  using RoleFact = std::pair<std::string, bool>;
  auto acquirable = [&](const BasicRole& created) {
    std::set<RoleFact> facts;
    std::set<std::string> concepts;
    facts.emplace(created.name, !created.inverted);
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Axiom& ax : o.tbox) {
        if (!ax.positive()) continue;
        if (!ax.is_concept_inclusion()) {
          const RoleInclusion& ri = ax.roles();
          std::vector<RoleFact> snapshot(facts.begin(), facts.end());
          for (const RoleFact& f : snapshot) {
            if (f.first != ri.lhs.name) continue;
            bool witness_is_x = (f.second == ri.lhs.inverted);
            bool new_pos = witness_is_x ? ri.rhs.base.inverted : !ri.rhs.base.inverted;
            if (facts.emplace(ri.rhs.base.name, new_pos).second) grew = true;
          }
          continue;
        }
        const ConceptInclusion& ci = ax.concepts();
        if (ci.rhs.base.is_name()) {
          // EX P fires on an outgoing edge, EX P- on an incoming one
          bool fires = ci.lhs.is_name()
                           ? concepts.count(ci.lhs.name()) > 0
                           : facts.count({ci.lhs.role().name, ci.lhs.role().inverted}) > 0;
          if (fires && concepts.insert(ci.rhs.base.name()).second) grew = true;
        } else if (ci.lhs.is_name() && concepts.count(ci.lhs.name()) > 0) {
          const BasicRole& q = ci.rhs.base.role();
          if (facts.emplace(q.name, q.inverted).second) grew = true;
        }
      }
    }
    return concepts;
  };

  std::map<std::string, std::set<std::string>> edges;
  for (const Axiom& ax : o.tbox) {
    if (!ax.positive() || !ax.is_concept_inclusion()) continue;
    const ConceptInclusion& ci = ax.concepts();
    if (!ci.lhs.is_name() || ci.rhs.base.is_name()) continue;
    auto acq = acquirable(ci.rhs.base.role());
    edges[ci.lhs.name()].insert(acq.begin(), acq.end());
  }

  // DFS cycle detection over the creation graph
  std::map<std::string, int> color;  // 0 unseen, 1 active, 2 done
  auto dfs = [&](auto&& self, const std::string& v) -> bool {
    color[v] = 1;
    auto it = edges.find(v);
    if (it != edges.end())
      for (const std::string& w : it->second) {
        if (color[w] == 1) return false;
        if (color[w] == 0 && !self(self, w)) return false;
      }
    color[v] = 2;
    return true;
  };
  for (const auto& [v, _] : edges)
    if (color[v] == 0 && !dfs(dfs, v)) return false;
  return true;
}

/// Exposed for stability checks: does any construction rule remain
/// applicable on `i` (budget ignored)?
inline bool rules_applicable(const FuzzyInterpretation& i, const Ontology& o, TNorm k) {
  return detail::rules_applicable(i, o, k);
}

}  // namespace fdlite

#endif
