#ifndef FDLITE_ONTOLOGY_HPP
#define FDLITE_ONTOLOGY_HPP

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fdlite/degree.hpp"

namespace fdlite {

/// A role name, possibly inverted: P or P-.
struct BasicRole {
  std::string name;
  bool inverted = false;

  BasicRole inverse() const { return {name, !inverted}; }
  friend bool operator==(const BasicRole&, const BasicRole&) = default;
};

/// A concept name or an unqualified existential restriction EX Q.
struct BasicConcept {
  std::variant<std::string, BasicRole> form;

  static BasicConcept named(std::string name) { return {std::move(name)}; }
  static BasicConcept exists(BasicRole role) { return {std::move(role)}; }

  bool is_name() const { return form.index() == 0; }
  const std::string& name() const { return std::get<0>(form); }
  const BasicRole& role() const { return std::get<1>(form); }

  friend bool operator==(const BasicConcept&, const BasicConcept&) = default;
};

/// A basic concept or its negation; negation is only allowed on the
/// right-hand side of inclusions.
struct GeneralConcept {
  BasicConcept base;
  bool negated = false;
  friend bool operator==(const GeneralConcept&, const GeneralConcept&) = default;
};

struct GeneralRole {
  BasicRole base;
  bool negated = false;
  friend bool operator==(const GeneralRole&, const GeneralRole&) = default;
};

struct ConceptInclusion {
  BasicConcept lhs;
  GeneralConcept rhs;
  friend bool operator==(const ConceptInclusion&, const ConceptInclusion&) = default;
};

struct RoleInclusion {
  BasicRole lhs;
  GeneralRole rhs;
  friend bool operator==(const RoleInclusion&, const RoleInclusion&) = default;
};

/// A graded TBox axiom. Degree-0 axioms are vacuous and rejected.
struct Axiom {
  std::variant<ConceptInclusion, RoleInclusion> form;
  Degree degree;

  Axiom(std::variant<ConceptInclusion, RoleInclusion> f, Degree d)
      : form(std::move(f)), degree(std::move(d)) {
    if (degree.is_zero()) throw std::invalid_argument("axiom with degree 0");
  }

  bool is_concept_inclusion() const { return form.index() == 0; }
  const ConceptInclusion& concepts() const { return std::get<0>(form); }
  const RoleInclusion& roles() const { return std::get<1>(form); }

  bool positive() const {
    return is_concept_inclusion() ? !concepts().rhs.negated : !roles().rhs.negated;
  }

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

struct ConceptAssertion {
  BasicConcept what;
  std::string individual;
  friend bool operator==(const ConceptAssertion&, const ConceptAssertion&) = default;
};

struct RoleAssertion {
  std::string role;
  std::string subject;
  std::string object;
  friend bool operator==(const RoleAssertion&, const RoleAssertion&) = default;
};

/// A graded ABox assertion; concept assertions use basic concepts only.
struct Assertion {
  std::variant<ConceptAssertion, RoleAssertion> form;
  Degree degree;

  Assertion(std::variant<ConceptAssertion, RoleAssertion> f, Degree d)
      : form(std::move(f)), degree(std::move(d)) {
    if (degree.is_zero()) throw std::invalid_argument("assertion with degree 0");
  }

  bool is_concept() const { return form.index() == 0; }
  const ConceptAssertion& as_concept() const { return std::get<0>(form); }
  const RoleAssertion& as_role() const { return std::get<1>(form); }

  friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct Signature {
  std::set<std::string> concept_names;
  std::set<std::string> role_names;
  std::set<std::string> individuals;
};

/// A fuzzy DL-Lite_R ontology: a graded TBox plus a graded ABox.
/// Immutable by convention once built; the structural operations below
/// return new ontologies.
struct Ontology {
  std::vector<Axiom> tbox;
  std::vector<Assertion> abox;

  Signature signature() const {
    Signature sig;
    auto add_basic = [&](const BasicConcept& b) {
      if (b.is_name()) sig.concept_names.insert(b.name());
      else sig.role_names.insert(b.role().name);
    };
    for (const Axiom& ax : tbox) {
      if (ax.is_concept_inclusion()) {
        add_basic(ax.concepts().lhs);
        add_basic(ax.concepts().rhs.base);
      } else {
        sig.role_names.insert(ax.roles().lhs.name);
        sig.role_names.insert(ax.roles().rhs.base.name);
      }
    }
    for (const Assertion& as : abox) {
      if (as.is_concept()) {
        add_basic(as.as_concept().what);
        sig.individuals.insert(as.as_concept().individual);
      } else {
        sig.role_names.insert(as.as_role().role);
        sig.individuals.insert(as.as_role().subject);
        sig.individuals.insert(as.as_role().object);
      }
    }
    return sig;
  }
};

/// Prefix reserved for concept names introduced by normalize(); the parser
/// rejects user names starting with it.
inline constexpr const char* kFreshNamePrefix = "__norm";

/// Eliminate positive axioms EX Q1 SUBC EX Q2 by routing them through a
/// fresh concept name: <EX Q1 SUBC X, 1> and <X SUBC EX Q2, d>. Answers of
/// queries over the original signature are preserved.
inline Ontology normalize(const Ontology& o) {
  Ontology out;
  out.abox = o.abox;
  int next_fresh = 0;
  for (const Axiom& ax : o.tbox) {
    if (ax.is_concept_inclusion()) {
      const ConceptInclusion& ci = ax.concepts();
      if (!ci.lhs.is_name() && !ci.rhs.negated && !ci.rhs.base.is_name()) {
        std::string fresh = kFreshNamePrefix + std::to_string(next_fresh++);
        out.tbox.emplace_back(
            ConceptInclusion{ci.lhs, {BasicConcept::named(fresh), false}}, Degree::one());
        out.tbox.emplace_back(
            ConceptInclusion{BasicConcept::named(fresh), ci.rhs}, ax.degree);
        continue;
      }
    }
    out.tbox.push_back(ax);
  }
  return out;
}

/// The crisp companion: every statement kept, all degrees raised to 1.
inline Ontology classical_version(const Ontology& o) {
  Ontology out;
  for (const Axiom& ax : o.tbox) out.tbox.emplace_back(ax.form, Degree::one());
  for (const Assertion& as : o.abox) out.abox.emplace_back(as.form, Degree::one());
  return out;
}

/// Subontology of statements holding to degree at least theta. theta = 0 is
/// rejected (it would be the identity and is never meaningful here).
inline Ontology cut(const Ontology& o, const Degree& theta) {
  if (theta.is_zero()) throw std::invalid_argument("cut with threshold 0");
  Ontology out;
  for (const Axiom& ax : o.tbox)
    if (ax.degree >= theta) out.tbox.push_back(ax);
  for (const Assertion& as : o.abox)
    if (as.degree >= theta) out.abox.push_back(as);
  return out;
}

/// Distinct degrees occurring in the ontology, ascending, with 1 appended
/// if absent.
inline std::vector<Degree> degree_set(const Ontology& o) {
  std::vector<Degree> ds;
  auto add = [&](const Degree& d) {
    if (std::find(ds.begin(), ds.end(), d) == ds.end()) ds.push_back(d);
  };
  for (const Axiom& ax : o.tbox) add(ax.degree);
  for (const Assertion& as : o.abox) add(as.degree);
  add(Degree::one());
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace fdlite

#endif
