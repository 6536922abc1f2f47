#ifndef FDLITE_ANSWERING_HPP
#define FDLITE_ANSWERING_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "fdlite/evaluator.hpp"
#include "fdlite/ontology.hpp"
#include "fdlite/parser.hpp"
#include "fdlite/query.hpp"
#include "fdlite/rewriter.hpp"
#include "fdlite/tnorm.hpp"

namespace fdlite {

/// Raised when an operation has no decision procedure under the requested
/// t-norm (notably anything needing Lukasiewicz consistency).
class UnsupportedSemanticsError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class InconsistentOntologyError : public std::runtime_error {
public:
  InconsistentOntologyError() : std::runtime_error("the ontology is inconsistent") {}
};

namespace detail {

inline void append_basic_atom(std::vector<ThresholdAtom>& atoms, const BasicConcept& b,
                              const Term& x, int& next_anon) {
  if (b.is_name()) {
    atoms.push_back({{b.name(), {x}}, Degree::one()});
  } else if (b.role().inverted) {
    atoms.push_back({{b.role().name, {Term::anon(next_anon++), x}}, Degree::one()});
  } else {
    atoms.push_back({{b.role().name, {x, Term::anon(next_anon++)}}, Degree::one()});
  }
}

inline Atom role_atom(const BasicRole& q, const Term& x, const Term& y) {
  return q.inverted ? Atom{q.name, {y, x}} : Atom{q.name, {x, y}};
}

// Classical certain answers of q over an all-degree-1 ontology, through the
// rewriting at bound 1.
inline AnswerSet classical_answers(const Ontology& crisp, const ConjunctiveQuery& q) {
  UnionTQ u = perfect_ref(cq_to_tq(q, Degree::one()), crisp.tbox, TNorm::godel);
  return eval_utq(from_abox(crisp.abox), u);
}

}  // namespace detail

/// Decide consistency by the classical reduction: flatten all degrees to 1
/// and ask, for every negative axiom, whether its clash pattern matches the
/// rewritten ABox. Sound and complete for the Goedel and product t-norms;
/// Lukasiewicz consistency has no known decision procedure and is refused.
inline bool check_consistency(const Ontology& o, TNorm k) {
  if (k == TNorm::lukasiewicz)
    throw UnsupportedSemanticsError(
        "consistency under the Lukasiewicz t-norm is undecided; none of the "
        "classical reductions apply");
  Ontology crisp = classical_version(o);
  AboxDatabase db = from_abox(crisp.abox);
  for (const Axiom& ax : crisp.tbox) {
    if (ax.positive()) continue;
    ThresholdQuery clash;  // Boolean query: some element in both sides
    int next_anon = 0;
    if (ax.is_concept_inclusion()) {
      Term x = Term::variable("X");
      detail::append_basic_atom(clash.atoms, ax.concepts().lhs, x, next_anon);
      detail::append_basic_atom(clash.atoms, ax.concepts().rhs.base, x, next_anon);
    } else {
      Term x = Term::variable("X"), y = Term::variable("Y");
      clash.atoms.push_back({detail::role_atom(ax.roles().lhs, x, y), Degree::one()});
      clash.atoms.push_back({detail::role_atom(ax.roles().rhs.base, x, y), Degree::one()});
    }
    if (!eval_utq(db, perfect_ref(clash, crisp.tbox, TNorm::godel)).rows.empty())
      return false;
  }
  return true;
}

/// Certain answers of the degree query q >= theta under the Goedel t-norm:
/// classical answering over the flattened theta-cut.
inline AnswerSet answer_at_least(const Ontology& o, const ConjunctiveQuery& q,
                                 const Degree& theta) {
  if (theta.is_zero()) throw std::invalid_argument("answer_at_least: threshold 0");
  if (!check_consistency(o, TNorm::godel)) throw InconsistentOntologyError();
  return detail::classical_answers(classical_version(cut(o, theta)), q);
}

namespace detail {

inline AnswerSet at_least_unchecked(const Ontology& o, const ConjunctiveQuery& q,
                                    const Degree& theta) {
  return classical_answers(classical_version(cut(o, theta)), q);
}

inline Degree degree_of_unchecked(const Ontology& o, const ConjunctiveQuery& q,
                                  const std::vector<std::string>& tuple, bool binary_search) {
  std::vector<Degree> ds = degree_set(o);
  if (!binary_search) {
    // descend through the occurring degrees, largest first
    for (auto it = ds.rbegin(); it != ds.rend(); ++it)
      if (at_least_unchecked(o, q, *it).contains(tuple)) return *it;
    return Degree::zero();
  }
  // answers are antitone in the threshold, so the largest admissible
  // degree can be found by bisection
  std::size_t lo = 0, hi = ds.size();  // invariant: degrees below lo admit the tuple
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (at_least_unchecked(o, q, ds[mid]).contains(tuple)) lo = mid + 1;
    else hi = mid;
  }
  return lo == 0 ? Degree::zero() : ds[lo - 1];
}

}  // namespace detail

/// The degree of one answer tuple (Goedel): the largest degree occurring in
/// the ontology at which the tuple is still a certain answer, or 0. Linear
/// descent by default; bisection behind the flag.
inline Degree degree_of(const Ontology& o, const ConjunctiveQuery& q,
                        const std::vector<std::string>& tuple, bool binary_search = false) {
  if (tuple.size() != q.head.size())
    throw std::invalid_argument("answer tuple arity mismatch");
  if (!check_consistency(o, TNorm::godel)) throw InconsistentOntologyError();
  return detail::degree_of_unchecked(o, q, tuple, binary_search);
}

/// The best-scoring answers (Goedel): descend through the degree levels and
/// stop at the first one yielding at least k tuples; every returned tuple
/// carries its exact degree. Ordered by degree descending, ties
/// lexicographic.
inline AnswerSet top_k(const Ontology& o, const ConjunctiveQuery& q, std::size_t k) {
  if (k == 0) throw std::invalid_argument("top_k: k must be positive");
  if (!check_consistency(o, TNorm::godel)) throw InconsistentOntologyError();
  std::vector<Degree> ds = degree_set(o);
  AnswerSet found;
  found.arity = q.head.size();
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
    found = detail::at_least_unchecked(o, q, *it);
    if (found.rows.size() >= k) break;
  }
  AnswerSet out;
  out.arity = q.head.size();
  for (const AnswerRow& r : found.rows)
    out.insert(r.tuple, detail::degree_of_unchecked(o, q, r.tuple, false));
  sort_answers(out);
  return out;
}

/// Threshold-query answers via the rewriting, for consistent ontologies.
/// Goedel and product check consistency here; Lukasiewicz cannot, so the
/// caller must explicitly assume it.
inline AnswerSet answer_threshold(const Ontology& o, const ThresholdQuery& q, TNorm k,
                                  bool assume_consistent = false) {
  if (k == TNorm::lukasiewicz) {
    if (!assume_consistent)
      throw std::invalid_argument(
          "Lukasiewicz threshold answering requires the consistency assumption "
          "to be acknowledged explicitly");
  } else if (!check_consistency(o, k)) {
    throw InconsistentOntologyError();
  }
  return eval_utq(from_abox(o.abox), perfect_ref(q, o.tbox, k));
}

/// Tuples whose query degree is positive in every model: classical answers
/// over the flattened ontology. Valid for Goedel and product; under
/// Lukasiewicz the flattening is unsound (nilpotence can drive a derived
/// degree to 0), so the operation is refused.
inline AnswerSet positive_answers(const Ontology& o, const ConjunctiveQuery& q, TNorm k) {
  if (k == TNorm::lukasiewicz)
    throw UnsupportedSemanticsError(
        "positive answers under the Lukasiewicz t-norm cannot be reduced to the "
        "classical case");
  if (!check_consistency(o, k)) throw InconsistentOntologyError();
  return detail::classical_answers(classical_version(o), q);
}

/// One query-answering request, as the CLI receives it.
struct QueryRequest {
  enum class Mode { at_least, degree_of, top_k, threshold, positive };

  ParsedQuery query;
  Mode mode = Mode::at_least;
  TNorm tnorm = TNorm::godel;
  Degree bound;                    // at_least
  std::vector<std::string> tuple;  // degree_of
  std::size_t k = 0;               // top_k
  bool assume_consistent = false;
  bool binary_search = false;
};

/// Mode/kind/t-norm compatibility: threshold mode takes threshold queries,
/// everything else plain CQs; degree-valued modes need Goedel; positive
/// answers need Goedel or product.
inline void validate_request(const QueryRequest& r) {
  bool is_tq = std::holds_alternative<ThresholdQuery>(r.query);
  if (r.mode == QueryRequest::Mode::threshold) {
    if (!is_tq) throw std::invalid_argument("threshold mode needs a threshold query");
  } else if (is_tq) {
    throw std::invalid_argument("this mode needs a plain conjunctive query");
  }
  if ((r.mode == QueryRequest::Mode::at_least || r.mode == QueryRequest::Mode::degree_of ||
       r.mode == QueryRequest::Mode::top_k) &&
      r.tnorm != TNorm::godel)
    throw UnsupportedSemanticsError(
        "degree queries are only supported under the Goedel t-norm");
  if (r.mode == QueryRequest::Mode::positive && r.tnorm == TNorm::lukasiewicz)
    throw UnsupportedSemanticsError(
        "positive answers under the Lukasiewicz t-norm cannot be reduced to the "
        "classical case");
}

inline AnswerSet run_request(const Ontology& o, const QueryRequest& r) {
  validate_request(r);
  if (r.mode == QueryRequest::Mode::threshold)
    return answer_threshold(o, std::get<ThresholdQuery>(r.query), r.tnorm,
                            r.assume_consistent);
  const ConjunctiveQuery& q = std::get<ConjunctiveQuery>(r.query);
  switch (r.mode) {
    case QueryRequest::Mode::at_least:
      return answer_at_least(o, q, r.bound);
    case QueryRequest::Mode::degree_of: {
      AnswerSet one;
      one.arity = r.tuple.size();
      one.insert(r.tuple, degree_of(o, q, r.tuple, r.binary_search));
      return one;
    }
    case QueryRequest::Mode::top_k:
      return top_k(o, q, r.k);
    case QueryRequest::Mode::positive:
      return positive_answers(o, q, r.tnorm);
    default:
      throw std::logic_error("bad mode");
  }
}

}  // namespace fdlite

#endif
