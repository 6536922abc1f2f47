#ifndef FDLITE_TESTS_TESTUTIL_HPP
#define FDLITE_TESTS_TESTUTIL_HPP

#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fdlite/fdlite.hpp"

namespace testutil {

inline fdlite::Degree deg(const char* s) { return fdlite::Degree::parse(s); }

inline const char* kExaText = R"(
Monument SUBC TouristAttraction >= 1
Museum SUBC TouristAttraction >= 1
Pub SUBC Eatery >= 1
Restaurant SUBC Eatery >= 1
locIn SUBR Near >= 1
Museum SUBC Popular >= 0.6
EX locIn SUBC NOT Cheap >= 0.5
Monument(peace) >= 1
Monument(love) >= 1
Museum(modernArt) >= 1
Museum(contArt) >= 1
Museum(comic) >= 1
Restaurant(sioux) >= 1
Restaurant(gamberone) >= 1
Pub(irish) >= 1
locIn(sioux, modernArt) >= 1
Popular(comic) >= 0.8
Cheap(irish) >= 0.6
near(irish, comic) >= 0.7
)";

inline fdlite::Ontology exa() { return fdlite::parse_ontology(kExaText); }

inline fdlite::Ontology o0() {
  return fdlite::parse_ontology(R"(
A1 SUBC NOT A2 >= 1
A1(a) >= 0.5
A2(a) >= 0.5
)");
}

/// A_0(a) = 1 with a chain A_i SUBC A_{i+1} at 0.9 up to A_n.
inline fdlite::Ontology chain(int n) {
  std::string text = "A0(a) >= 1\n";
  for (int i = 0; i < n; ++i)
    text += "A" + std::to_string(i) + " SUBC A" + std::to_string(i + 1) + " >= 0.9\n";
  return fdlite::parse_ontology(text);
}

/// The chain plus a direct assertion A_n(b) = 0.85.
inline fdlite::Ontology chain_with_b(int n) {
  fdlite::Ontology o = chain(n);
  o.abox.emplace_back(
      fdlite::ConceptAssertion{fdlite::BasicConcept::named("A" + std::to_string(n)), "b"},
      deg("0.85"));
  return o;
}

inline fdlite::ConjunctiveQuery cq(const std::string& text) {
  return std::get<fdlite::ConjunctiveQuery>(fdlite::parse_query(text));
}

inline fdlite::ThresholdQuery tq(const std::string& text) {
  return std::get<fdlite::ThresholdQuery>(fdlite::parse_query(text));
}

inline std::set<std::vector<std::string>> tuples_of(const fdlite::AnswerSet& s) {
  return s.tuples();
}

inline std::vector<std::vector<std::string>> all_tuples(const std::set<std::string>& inds,
                                                        std::size_t arity) {
  std::vector<std::vector<std::string>> out{{}};
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : out)
      for (const std::string& a : inds) {
        auto t2 = t;
        t2.push_back(a);
        next.push_back(std::move(t2));
      }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// random corpus

struct CorpusConfig {
  int max_concepts = 6;
  int max_roles = 3;
  int max_individuals = 8;
  bool negative_axioms = true;
  bool existential_assertions = true;
};

inline fdlite::Degree random_degree(std::mt19937& rng, int min_tenths = 2) {
  std::uniform_int_distribution<int> d(min_tenths, 10);
  return fdlite::Degree::fraction(d(rng), 10);
}

inline fdlite::Ontology random_ontology(std::mt19937& rng, const CorpusConfig& cfg = {}) {
  std::uniform_int_distribution<int> ncon(2, cfg.max_concepts);
  std::uniform_int_distribution<int> nrol(1, cfg.max_roles);
  std::uniform_int_distribution<int> nind(2, cfg.max_individuals);
  int C = ncon(rng), R = nrol(rng), I = nind(rng);
  auto concept_name = [&] { return "C" + std::to_string(std::uniform_int_distribution<int>(1, C)(rng)); };
  auto role_name = [&] { return "R" + std::to_string(std::uniform_int_distribution<int>(1, R)(rng)); };
  auto individual = [&] { return "a" + std::to_string(std::uniform_int_distribution<int>(1, I)(rng)); };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  auto basic_role = [&] { return fdlite::BasicRole{role_name(), coin(0.3)}; };
  auto basic_concept = [&] {
    return coin(0.7) ? fdlite::BasicConcept::named(concept_name())
                     : fdlite::BasicConcept::exists(basic_role());
  };

  fdlite::Ontology o;
  int axioms = std::uniform_int_distribution<int>(0, 7)(rng);
  for (int i = 0; i < axioms; ++i) {
    if (coin(0.7)) {
      bool negated = cfg.negative_axioms && coin(0.2);
      o.tbox.emplace_back(fdlite::ConceptInclusion{basic_concept(), {basic_concept(), negated}},
                          random_degree(rng));
    } else {
      bool negated = cfg.negative_axioms && coin(0.15);
      o.tbox.emplace_back(fdlite::RoleInclusion{basic_role(), {basic_role(), negated}},
                          random_degree(rng));
    }
  }
  int assertions = std::uniform_int_distribution<int>(1, 10)(rng);
  for (int i = 0; i < assertions; ++i) {
    if (coin(0.6)) {
      o.abox.emplace_back(
          fdlite::ConceptAssertion{fdlite::BasicConcept::named(concept_name()), individual()},
          random_degree(rng));
    } else if (cfg.existential_assertions && coin(0.25)) {
      o.abox.emplace_back(
          fdlite::ConceptAssertion{fdlite::BasicConcept::exists(basic_role()), individual()},
          random_degree(rng));
    } else {
      o.abox.emplace_back(fdlite::RoleAssertion{role_name(), individual(), individual()},
                          random_degree(rng));
    }
  }
  return o;
}

/// Keeps sampling until the ontology is consistent (Goedel) and its
/// normalization passes the acyclicity guard, so the materialized oracle is
/// complete.
inline fdlite::Ontology random_consistent_acyclic(std::mt19937& rng,
                                                  const CorpusConfig& cfg = {}) {
  for (;;) {
    fdlite::Ontology o = random_ontology(rng, cfg);
    if (!fdlite::existential_cycle_check(fdlite::normalize(o))) continue;
    if (!fdlite::check_consistency(o, fdlite::TNorm::godel)) continue;
    return o;
  }
}

struct RandomAtoms {
  std::vector<fdlite::Atom> atoms;
  std::vector<fdlite::Term> head;
};

inline RandomAtoms random_atoms(std::mt19937& rng, const fdlite::Signature& sig,
                                int max_atoms) {
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  std::vector<std::string> concepts(sig.concept_names.begin(), sig.concept_names.end());
  std::vector<std::string> roles(sig.role_names.begin(), sig.role_names.end());
  std::vector<std::string> inds(sig.individuals.begin(), sig.individuals.end());
  std::vector<std::string> vars = {"X", "Y", "Z"};
  int next_anon = 0;
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  auto term = [&]() -> fdlite::Term {
    double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.5) return fdlite::Term::variable(pick(vars));
    if (r < 0.7 && !inds.empty()) return fdlite::Term::individual(pick(inds));
    return fdlite::Term::anon(next_anon++);
  };

  RandomAtoms out;
  int n = std::uniform_int_distribution<int>(1, max_atoms)(rng);
  for (int i = 0; i < n; ++i) {
    bool role = !roles.empty() && (concepts.empty() || coin(0.4));
    if (role)
      out.atoms.push_back({pick(roles), {term(), term()}});
    else if (!concepts.empty())
      out.atoms.push_back({pick(concepts), {term()}});
  }
  if (out.atoms.empty()) out.atoms.push_back({"C1", {term()}});

  std::set<std::string> occurring;
  for (const fdlite::Atom& a : out.atoms)
    for (const fdlite::Term& t : a.terms)
      if (t.is_variable()) occurring.insert(t.name);
  for (const std::string& v : occurring)
    if (coin(0.5) && out.head.size() < 2) out.head.push_back(fdlite::Term::variable(v));
  return out;
}

inline fdlite::ThresholdQuery random_tq(std::mt19937& rng, const fdlite::Signature& sig,
                                        int max_atoms) {
  RandomAtoms ra = random_atoms(rng, sig, max_atoms);
  fdlite::ThresholdQuery q;
  q.head = ra.head;
  for (fdlite::Atom& a : ra.atoms) q.atoms.push_back({std::move(a), random_degree(rng, 1)});
  q.validate();
  return q;
}

inline fdlite::ConjunctiveQuery random_cq(std::mt19937& rng, const fdlite::Signature& sig,
                                          int max_atoms) {
  RandomAtoms ra = random_atoms(rng, sig, max_atoms);
  fdlite::ConjunctiveQuery q;
  q.head = ra.head;
  q.atoms = std::move(ra.atoms);
  q.validate();
  return q;
}

/// Materialize with completeness asserted: bumps the budget until the
/// fixpoint is reached (the corpus is acyclic, so it always is).
inline fdlite::CanonicalResult oracle_canonical(const fdlite::Ontology& o, fdlite::TNorm k) {
  fdlite::Ontology n = fdlite::normalize(o);
  fdlite::Budget b = fdlite::Budget::default_for(n);
  for (int attempt = 0; attempt < 6; ++attempt) {
    fdlite::CanonicalResult res = fdlite::build_canonical(n, k, b);
    if (res.complete) return res;
    b.max_fresh_elements = b.max_fresh_elements * 4 + 16;
  }
  throw std::runtime_error("oracle materialization did not complete");
}

}  // namespace testutil

#endif
