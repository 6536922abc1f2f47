#ifndef FDLITE_EVALUATOR_HPP
#define FDLITE_EVALUATOR_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fdlite/ontology.hpp"
#include "fdlite/query.hpp"
#include "fdlite/tnorm.hpp"

namespace fdlite {

/// The ABox viewed as a database: one row per assertion key, holding the
/// maximum asserted degree. Existential concept assertions EX Q(a)
/// materialize as a role row with a fresh anonymous individual ("_a:<i>");
/// anonymous individuals never appear in answer tuples.
struct AboxDatabase {
  struct ConceptRow {
    std::string name;
    std::string individual;
    Degree degree;
  };
  struct RoleRow {
    std::string name;
    std::string subject;
    std::string object;
    Degree degree;
  };

  std::vector<ConceptRow> concept_rows;
  std::vector<RoleRow> role_rows;
  std::set<std::string> named_individuals;

  bool is_named(const std::string& x) const { return named_individuals.count(x) > 0; }
};

inline AboxDatabase from_abox(const std::vector<Assertion>& abox) {
  AboxDatabase db;
  std::map<std::pair<std::string, std::string>, Degree> concepts;
  std::map<std::tuple<std::string, std::string, std::string>, Degree> roles;
  // (role, individual, witness-is-object) for EX Q(a) assertions
  std::map<std::tuple<std::string, std::string, bool>, Degree> existentials;

  auto bump = [](auto& m, auto key, const Degree& d) {
    auto [it, fresh] = m.try_emplace(std::move(key), d);
    if (!fresh && it->second < d) it->second = d;
  };
  for (const Assertion& as : abox) {
    if (as.is_concept()) {
      const ConceptAssertion& ca = as.as_concept();
      db.named_individuals.insert(ca.individual);
      if (ca.what.is_name())
        bump(concepts, std::make_pair(ca.what.name(), ca.individual), as.degree);
      else
        bump(existentials,
             std::make_tuple(ca.what.role().name, ca.individual, !ca.what.role().inverted),
             as.degree);
    } else {
      const RoleAssertion& ra = as.as_role();
      db.named_individuals.insert(ra.subject);
      db.named_individuals.insert(ra.object);
      bump(roles, std::make_tuple(ra.role, ra.subject, ra.object), as.degree);
    }
  }
  for (auto& [key, d] : concepts)
    db.concept_rows.push_back({key.first, key.second, std::move(d)});
  int next_anon = 0;
  for (auto& [key, d] : existentials) {
    std::string anon = "_a:" + std::to_string(next_anon++);
    const auto& [role, individual, witness_is_object] = key;
    if (witness_is_object)
      db.role_rows.push_back({role, individual, anon, std::move(d)});
    else
      db.role_rows.push_back({role, anon, individual, std::move(d)});
  }
  for (auto& [key, d] : roles)
    db.role_rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(d)});
  return db;
}

struct AnswerRow {
  std::vector<std::string> tuple;
  std::optional<Degree> degree;
};

/// Tuples of named individuals, optionally carrying a degree. Rows are kept
/// unique by tuple; insertion keeps the larger degree.
struct AnswerSet {
  std::size_t arity = 0;
  std::vector<AnswerRow> rows;

  void insert(std::vector<std::string> tuple, std::optional<Degree> d = std::nullopt) {
    for (AnswerRow& r : rows)
      if (r.tuple == tuple) {
        if (d && (!r.degree || *r.degree < *d)) r.degree = d;
        return;
      }
    rows.push_back({std::move(tuple), std::move(d)});
  }

  bool contains(const std::vector<std::string>& tuple) const {
    for (const AnswerRow& r : rows)
      if (r.tuple == tuple) return true;
    return false;
  }

  std::set<std::vector<std::string>> tuples() const {
    std::set<std::vector<std::string>> out;
    for (const AnswerRow& r : rows) out.insert(r.tuple);
    return out;
  }
};

/// Order rows by degree descending, then lexicographically by tuple.
inline void sort_answers(AnswerSet& s) {
  std::sort(s.rows.begin(), s.rows.end(), [](const AnswerRow& a, const AnswerRow& b) {
    if (a.degree && b.degree && !(*a.degree == *b.degree)) return *b.degree < *a.degree;
    return a.tuple < b.tuple;
  });
}

namespace detail {

struct DbBinding {
  std::map<std::string, std::string> vars;
  std::map<int, std::string> anons;
};

// All rows matching one atom under the current binding. fn(constants...)
// extends the binding itself via bind(); here we just enumerate rows whose
// fixed positions agree.
template <typename Fn>
void db_atom_rows(const AboxDatabase& db, const Atom& atom, Fn&& fn) {
  if (!atom.is_role()) {
    for (const auto& row : db.concept_rows)
      if (row.name == atom.predicate) fn(std::vector<const std::string*>{&row.individual}, row.degree);
  } else {
    for (const auto& row : db.role_rows)
      if (row.name == atom.predicate)
        fn(std::vector<const std::string*>{&row.subject, &row.object}, row.degree);
  }
}

inline bool db_bind(const AboxDatabase& db, const Term& t, const std::string& value,
                    const std::set<std::string>& answer_vars, DbBinding& b,
                    std::vector<std::pair<bool, std::string>>& undo) {
  if (t.is_individual()) return t.name == value;
  if (t.is_variable()) {
    auto it = b.vars.find(t.name);
    if (it != b.vars.end()) return it->second == value;
    if (answer_vars.count(t.name) && !db.is_named(value)) return false;
    b.vars.emplace(t.name, value);
    undo.emplace_back(false, t.name);
    return true;
  }
  auto it = b.anons.find(t.anon_id);
  if (it != b.anons.end()) return it->second == value;
  b.anons.emplace(t.anon_id, value);
  undo.emplace_back(true, std::to_string(t.anon_id));
  return true;
}

inline void db_unbind(DbBinding& b, const std::vector<std::pair<bool, std::string>>& undo) {
  for (const auto& [is_anon, key] : undo) {
    if (is_anon) b.anons.erase(std::stoi(key));
    else b.vars.erase(key);
  }
}

// Most-constrained-atom-first: fewer candidate rows match earlier.
template <typename AtomT>
std::vector<std::size_t> atom_order(const AboxDatabase& db, const std::vector<AtomT>& atoms,
                                    auto&& atom_of) {
  std::vector<std::pair<std::size_t, std::size_t>> counted;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::size_t rows = 0;
    db_atom_rows(db, atom_of(atoms[i]), [&](const auto&, const Degree&) { ++rows; });
    counted.emplace_back(rows, i);
  }
  std::sort(counted.begin(), counted.end());
  std::vector<std::size_t> order;
  for (auto& [_, i] : counted) order.push_back(i);
  return order;
}

template <typename AtomT, typename Leaf>
void db_search(const AboxDatabase& db, const std::vector<AtomT>& atoms,
               const std::vector<std::size_t>& order, std::size_t depth,
               const std::set<std::string>& answer_vars, DbBinding& b, auto&& admit,
               Leaf&& leaf) {
  if (depth == order.size()) {
    leaf();
    return;
  }
  const AtomT& ta = atoms[order[depth]];
  const Atom& atom = [&]() -> const Atom& {
    if constexpr (std::is_same_v<AtomT, Atom>) return ta;
    else return ta.atom;
  }();
  db_atom_rows(db, atom, [&](const std::vector<const std::string*>& values, const Degree& d) {
    if (!admit(ta, d)) return;
    std::vector<std::pair<bool, std::string>> undo;
    bool ok = true;
    for (std::size_t i = 0; i < values.size() && ok; ++i)
      ok = db_bind(db, atom.terms[i], *values[i], answer_vars, b, undo);
    if (ok) db_search(db, atoms, order, depth + 1, answer_vars, b, admit, leaf);
    db_unbind(b, undo);
  });
}

inline std::set<std::string> answer_var_set(const std::vector<Term>& head) {
  std::set<std::string> s;
  for (const Term& t : head)
    if (t.is_variable()) s.insert(t.name);
  return s;
}

inline std::vector<std::string> head_tuple(const std::vector<Term>& head, const DbBinding& b) {
  std::vector<std::string> tuple;
  for (const Term& t : head)
    tuple.push_back(t.is_individual() ? t.name : b.vars.at(t.name));
  return tuple;
}

}  // namespace detail

/// Answer-variable assignments extendable to a full match where every
/// threshold atom lands on a row of sufficient degree. Anonymous terms
/// match any row element; answer variables only named individuals.
inline AnswerSet eval_tq(const AboxDatabase& db, const ThresholdQuery& q) {
  AnswerSet out;
  out.arity = q.head.size();
  auto answer_vars = detail::answer_var_set(q.head);
  auto order = detail::atom_order(db, q.atoms,
                                  [](const ThresholdAtom& ta) -> const Atom& { return ta.atom; });
  detail::DbBinding b;
  detail::db_search(
      db, q.atoms, order, 0, answer_vars, b,
      [](const ThresholdAtom& ta, const Degree& d) { return d >= ta.bound; },
      [&]() { out.insert(detail::head_tuple(q.head, b)); });
  return out;
}

/// Union of eval_tq over all disjuncts.
inline AnswerSet eval_utq(const AboxDatabase& db, const UnionTQ& u) {
  AnswerSet out;
  bool first = true;
  for (const ThresholdQuery& q : u.queries) {
    AnswerSet one = eval_tq(db, q);
    if (first) { out.arity = one.arity; first = false; }
    for (AnswerRow& r : one.rows) out.insert(std::move(r.tuple));
  }
  return out;
}

/// Largest t-norm fold of row degrees over all matches of the CQ at the
/// given tuple; 0 when nothing matches, 1 for the empty conjunction.
inline Degree eval_cq_degree(const AboxDatabase& db, const ConjunctiveQuery& q,
                             const std::vector<std::string>& tuple, TNorm k) {
  if (tuple.size() != q.head.size())
    throw std::invalid_argument("answer tuple arity mismatch");
  detail::DbBinding b;
  for (std::size_t i = 0; i < q.head.size(); ++i) {
    const Term& t = q.head[i];
    if (t.is_individual()) {
      if (t.name != tuple[i]) return Degree::zero();
    } else {
      auto it = b.vars.find(t.name);
      if (it != b.vars.end() && it->second != tuple[i]) return Degree::zero();
      b.vars.emplace(t.name, tuple[i]);
    }
  }
  if (q.atoms.empty()) return Degree::one();

  auto answer_vars = detail::answer_var_set(q.head);
  auto order = detail::atom_order(db, q.atoms, [](const Atom& a) -> const Atom& { return a; });

  // degrees of the rows currently matched, in search order
  std::vector<Degree> picked;
  Degree best = Degree::zero();
  auto search = [&](auto&& self, std::size_t depth) -> void {
    if (depth == order.size()) {
      best = std::max(best, conj_fold(k, picked));
      return;
    }
    const Atom& atom = q.atoms[order[depth]];
    detail::db_atom_rows(db, atom,
                         [&](const std::vector<const std::string*>& values, const Degree& d) {
      std::vector<std::pair<bool, std::string>> undo;
      bool ok = true;
      for (std::size_t i = 0; i < values.size() && ok; ++i)
        ok = detail::db_bind(db, atom.terms[i], *values[i], answer_vars, b, undo);
      if (ok) {
        picked.push_back(d);
        self(self, depth + 1);
        picked.pop_back();
      }
      detail::db_unbind(b, undo);
    });
  };
  search(search, 0);
  return best;
}

}  // namespace fdlite

#endif
