#ifndef FDLITE_HARDNESS_HPP
#define FDLITE_HARDNESS_HPP

#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdlite/degree.hpp"
#include "fdlite/tnorm.hpp"

namespace fdlite {

struct CnfLiteral {
  std::string var;
  bool positive = true;
  friend bool operator==(const CnfLiteral&, const CnfLiteral&) = default;
};

/// A disjunction of exactly three literals.
struct CnfClause {
  std::array<CnfLiteral, 3> literals;
};

struct CnfFormula {
  std::vector<CnfClause> clauses;

  std::vector<std::string> variables() const {
    std::set<std::string> vs;
    for (const CnfClause& c : clauses)
      for (const CnfLiteral& l : c.literals) vs.insert(l.var);
    return {vs.begin(), vs.end()};
  }
};

/// DIMACS cnf reader; every clause must have exactly three literals.
/// Variable i becomes "v<i>".
inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  CnfFormula f;
  std::string line;
  std::vector<long> pending;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == 'p' || line[0] == '%') continue;
    std::istringstream ls(line);
    long v;
    while (ls >> v) {
      if (v == 0) {
        if (pending.size() != 3)
          throw std::runtime_error("hardness generator needs exactly 3 literals per clause");
        CnfClause c;
        for (int i = 0; i < 3; ++i)
          c.literals[i] = {"v" + std::to_string(std::abs(pending[i])), pending[i] > 0};
        f.clauses.push_back(c);
        pending.clear();
      } else {
        pending.push_back(v);
      }
    }
  }
  if (!pending.empty()) throw std::runtime_error("unterminated DIMACS clause");
  return f;
}

inline bool eval_formula(const CnfFormula& f, const std::set<std::string>& true_vars) {
  for (const CnfClause& c : f.clauses) {
    bool sat = false;
    for (const CnfLiteral& l : c.literals)
      if (l.positive == (true_vars.count(l.var) > 0)) sat = true;
    if (!sat) return false;
  }
  return true;
}

/// Exhaustive propositional satisfiability; only sensible for a handful of
/// variables.
inline std::optional<std::set<std::string>> find_satisfying_valuation(const CnfFormula& f) {
  std::vector<std::string> vars = f.variables();
  if (vars.size() > 24) throw std::invalid_argument("brute-force solver: too many variables");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    std::set<std::string> tv;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) tv.insert(vars[i]);
    if (eval_formula(f, tv)) return tv;
  }
  return std::nullopt;
}

inline bool satisfiable_brute_force(const CnfFormula& f) {
  return find_satisfying_valuation(f).has_value();
}

// ---------------------------------------------------------------------------
// The Horn target language: inclusions between conjunctions of concept
// names (with bottom on the right), kept deliberately separate from the
// DL-Lite_R model so conjunctions cannot leak into the main pipeline.

struct HornConjunction {
  std::vector<std::string> names;
  bool bottom = false;  // right-hand sides only

  friend bool operator==(const HornConjunction&, const HornConjunction&) = default;
};

struct HornAxiom {
  HornConjunction lhs;
  HornConjunction rhs;
  Degree degree;
};

struct HornAssertion {
  std::string name;
  std::string individual;
  Degree degree;
};

struct HornOntology {
  std::vector<HornAxiom> axioms;
  std::vector<HornAssertion> abox;

  std::vector<std::string> concept_names() const {
    std::set<std::string> cs;
    for (const HornAxiom& ax : axioms) {
      cs.insert(ax.lhs.names.begin(), ax.lhs.names.end());
      cs.insert(ax.rhs.names.begin(), ax.rhs.names.end());
    }
    for (const HornAssertion& as : abox) cs.insert(as.name);
    return {cs.begin(), cs.end()};
  }
};

/// A singleton-domain Lukasiewicz interpretation: one degree per concept
/// name at the single element.
struct PointModel {
  std::map<std::string, Degree> assignment;

  Degree value(const std::string& name) const {
    auto it = assignment.find(name);
    return it == assignment.end() ? Degree::zero() : it->second;
  }
};

/// Encode 3-CNF satisfiability. Per variable v, four axioms pin the
/// concepts A_v / An_v to {"true" = 1, "false" = 2/3}: two idempotence
/// breakers at degree 1, a clash axiom at 1/3, and a forcing axiom from the
/// start concept at 2/3. Per clause, one axiom at 1/3 requires some literal
/// concept to be fully true. The ABox holds the start concept at 1.
inline HornOntology gen_ontology(const CnfFormula& f) {
  HornOntology h;
  Degree third = Degree::fraction(1, 3);
  Degree two_thirds = Degree::fraction(2, 3);
  auto lit_name = [](const CnfLiteral& l) {
    return (l.positive ? "A_" : "An_") + l.var;
  };
  h.abox.push_back({"A0", "a", Degree::one()});
  for (const std::string& v : f.variables()) {
    for (std::string name : {"A_" + v, "An_" + v}) {
      HornConjunction three{{name, name, name}, false};
      HornConjunction four{{name, name, name, name}, false};
      h.axioms.push_back({three, four, Degree::one()});
    }
    h.axioms.push_back({{{"A_" + v, "An_" + v}, false}, {{}, true}, third});
    h.axioms.push_back({{{"A0"}, false}, {{"A_" + v, "An_" + v}, false}, two_thirds});
  }
  for (const CnfClause& c : f.clauses) {
    HornConjunction rho{{lit_name(c.literals[0]), lit_name(c.literals[1]),
                         lit_name(c.literals[2])}, false};
    h.axioms.push_back({{{"A0"}, false}, rho, third});
  }
  return h;
}

/// The interpretation the reduction pairs with a satisfying valuation:
/// A0 = 1, A_v = 1 where v holds (else 2/3), An_v dually.
inline PointModel valuation_model(const CnfFormula& f, const std::set<std::string>& true_vars) {
  PointModel m;
  Degree two_thirds = Degree::fraction(2, 3);
  m.assignment["A0"] = Degree::one();
  for (const std::string& v : f.variables()) {
    bool t = true_vars.count(v) > 0;
    m.assignment["A_" + v] = t ? Degree::one() : two_thirds;
    m.assignment["An_" + v] = t ? two_thirds : Degree::one();
  }
  return m;
}

namespace detail {

inline Degree horn_value(const HornConjunction& c, const PointModel& m) {
  Degree acc = Degree::one();
  for (const std::string& n : c.names) acc = conj(TNorm::lukasiewicz, acc, m.value(n));
  if (c.bottom) acc = Degree::zero();
  return acc;
}

}  // namespace detail

/// Is the singleton interpretation a model of the Horn ontology under
/// Lukasiewicz semantics?
inline bool check_point_model(const PointModel& m, const HornOntology& h) {
  for (const HornAxiom& ax : h.axioms) {
    Degree lhs = detail::horn_value(ax.lhs, m);
    Degree rhs = detail::horn_value(ax.rhs, m);
    if (resid(TNorm::lukasiewicz, lhs, rhs) < ax.degree) return false;
  }
  for (const HornAssertion& as : h.abox)
    if (m.value(as.name) < as.degree) return false;
  return true;
}

class SearchCapExceeded : public std::runtime_error {
public:
  SearchCapExceeded() : std::runtime_error("grid search cap exceeded") {}
};

/// Exhaustive search for a singleton-domain model whose degrees are all
/// multiples of `step` (which must be 1/q). Backtracking over the concepts
/// in order, pruning on every axiom whose concepts are already assigned.
/// A hit is a model; absence is exhaustive over the grid, which is evidence
/// of inconsistency, not a proof (off-grid models are not examined).
inline std::optional<PointModel> grid_search_consistent(const HornOntology& h,
                                                        const Degree& step,
                                                        std::size_t node_cap = 50'000'000) {
  if (step.raw().get_num() != 1)
    throw std::invalid_argument("grid step must be 1/q");
  unsigned long q = step.raw().get_den().get_ui();

  // Assignment order drives pruning: ABox-constrained concepts first, then
  // greedily the concept completing the most axioms, so coupled concepts
  // sit next to each other.
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const HornAssertion& as : h.abox)
    if (seen.insert(as.name).second) order.push_back(as.name);
  std::vector<std::string> remaining;
  for (const std::string& c : h.concept_names())
    if (!seen.count(c)) remaining.push_back(c);
  while (!remaining.empty()) {
    std::size_t best = 0;
    int best_score = -1;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      int score = 0;
      for (const HornAxiom& ax : h.axioms) {
        bool complete = true, uses = false;
        for (const auto* side : {&ax.lhs, &ax.rhs})
          for (const std::string& n : side->names) {
            if (n == remaining[i]) uses = true;
            else if (!seen.count(n)) complete = false;
          }
        if (uses && complete) ++score;
      }
      if (score > best_score) { best_score = score; best = i; }
    }
    seen.insert(remaining[best]);
    order.push_back(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  auto last_position = [&](const HornConjunction& c) {
    std::size_t p = 0;
    for (const std::string& n : c.names) p = std::max(p, position[n]);
    return p;
  };
  // axioms and assertions checkable once concept #i is assigned
  std::vector<std::vector<const HornAxiom*>> axiom_at(order.size());
  std::vector<std::vector<const HornAssertion*>> assertion_at(order.size());
  for (const HornAxiom& ax : h.axioms) {
    std::size_t p = std::max(ax.lhs.names.empty() ? 0 : last_position(ax.lhs),
                             ax.rhs.names.empty() ? 0 : last_position(ax.rhs));
    axiom_at[p].push_back(&ax);
  }
  for (const HornAssertion& as : h.abox) assertion_at[position[as.name]].push_back(&as);

  std::vector<Degree> grid;
  for (unsigned long i = 0; i <= q; ++i)
    grid.push_back(Degree::fraction(static_cast<long>(i), static_cast<long>(q)));

  PointModel m;
  std::size_t visited = 0;
  auto search = [&](auto&& self, std::size_t idx) -> bool {
    if (++visited > node_cap) throw SearchCapExceeded();
    if (idx == order.size()) return true;
    for (const Degree& v : grid) {
      m.assignment[order[idx]] = v;
      bool ok = true;
      for (const HornAxiom* ax : axiom_at[idx])
        if (resid(TNorm::lukasiewicz, detail::horn_value(ax->lhs, m),
                  detail::horn_value(ax->rhs, m)) < ax->degree) {
          ok = false;
          break;
        }
      if (ok)
        for (const HornAssertion* as : assertion_at[idx])
          if (m.value(as->name) < as->degree) {
            ok = false;
            break;
          }
      if (ok && self(self, idx + 1)) return true;
    }
    m.assignment.erase(order[idx]);
    return false;
  };
  if (order.empty()) return check_point_model(m, h) ? std::optional<PointModel>(m) : std::nullopt;
  if (search(search, 0)) return m;
  return std::nullopt;
}

/// The extended ontology dialect: '&' joins conjuncts, BOT is bottom.
inline std::string serialize_horn(const HornOntology& h) {
  auto conj_text = [](const HornConjunction& c) {
    std::string s;
    for (std::size_t i = 0; i < c.names.size(); ++i) {
      if (i) s += " & ";
      s += c.names[i];
    }
    if (c.bottom) s = s.empty() ? "BOT" : s + " & BOT";
    return s;
  };
  std::string out;
  for (const HornAxiom& ax : h.axioms)
    out += conj_text(ax.lhs) + " SUBC " + conj_text(ax.rhs) + " >= " + ax.degree.str() + "\n";
  for (const HornAssertion& as : h.abox)
    out += as.name + "(" + as.individual + ") >= " + as.degree.str() + "\n";
  return out;
}

}  // namespace fdlite

#endif
