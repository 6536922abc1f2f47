#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fdlite/fdlite.hpp"
#include "testutil.hpp"

using namespace fdlite;
using testutil::deg;

TEST_CASE("degree-0 statements are rejected") {
  CHECK_THROWS_AS(Axiom(ConceptInclusion{BasicConcept::named("A"),
                                         {BasicConcept::named("B"), false}},
                        Degree::zero()),
                  std::invalid_argument);
  CHECK_THROWS_AS(Assertion(ConceptAssertion{BasicConcept::named("A"), "a"}, Degree::zero()),
                  std::invalid_argument);
}

TEST_CASE("normalize splits existential-to-existential axioms") {
  Ontology o = parse_ontology("EX P SUBC EX S >= 0.8\n");
  Ontology n = normalize(o);
  REQUIRE(n.tbox.size() == 2);
  const ConceptInclusion& first = n.tbox[0].concepts();
  const ConceptInclusion& second = n.tbox[1].concepts();
  CHECK(first.lhs == BasicConcept::exists({"P", false}));
  CHECK(first.rhs.base.is_name());
  CHECK(first.rhs.base.name().starts_with("__norm"));
  CHECK(n.tbox[0].degree == Degree::one());
  CHECK(second.lhs == first.rhs.base);
  CHECK(second.rhs.base == BasicConcept::exists({"S", false}));
  CHECK(n.tbox[1].degree == deg("0.8"));
}

TEST_CASE("normalize leaves other ontologies unchanged") {
  Ontology o = testutil::exa();
  Ontology n = normalize(o);
  CHECK(n.tbox == o.tbox);
  CHECK(n.abox == o.abox);
  CHECK(normalize(Ontology{}).tbox.empty());
}

TEST_CASE("classical version flattens degrees") {
  Ontology o0 = testutil::o0();
  Ontology flat = classical_version(o0);
  REQUIRE(flat.tbox.size() == 1);
  REQUIRE(flat.abox.size() == 2);
  CHECK(flat.tbox[0].degree == Degree::one());
  CHECK(flat.abox[0].degree == Degree::one());
  CHECK(flat.abox[1].degree == Degree::one());
  // idempotent
  Ontology again = classical_version(flat);
  CHECK(again.tbox == flat.tbox);
  CHECK(again.abox == flat.abox);
  CHECK(classical_version(Ontology{}).abox.empty());
}

TEST_CASE("theta-cut keeps exactly the statements at or above the bound") {
  Ontology o = testutil::exa();
  Ontology c = cut(o, deg("0.7"));

  // expected set computed by filtering the statement lists directly
  std::vector<Axiom> expected_tbox;
  for (const Axiom& ax : o.tbox)
    if (ax.degree >= deg("0.7")) expected_tbox.push_back(ax);
  std::vector<Assertion> expected_abox;
  for (const Assertion& as : o.abox)
    if (as.degree >= deg("0.7")) expected_abox.push_back(as);
  CHECK(c.tbox == expected_tbox);
  CHECK(c.abox == expected_abox);

  // Example 1 has 19 statements; the 0.6 axiom, the 0.5 axiom and the 0.6
  // assertion fall below the bound
  CHECK(o.tbox.size() + o.abox.size() == 19);
  CHECK(c.tbox.size() + c.abox.size() == 16);
  for (const Axiom& ax : c.tbox) CHECK(ax.degree >= deg("0.7"));
  std::string dump = serialize_ontology(c);
  CHECK(dump.find("Museum SUBC Popular") == std::string::npos);
  CHECK(dump.find("EX locIn SUBC NOT Cheap") == std::string::npos);
  CHECK(dump.find("Cheap(irish)") == std::string::npos);
  CHECK(dump.find("near(irish, comic) >= 0.7") != std::string::npos);

  CHECK_THROWS_AS(cut(o, Degree::zero()), std::invalid_argument);
  Ontology all = cut(o, deg("0.5"));  // smallest degree present
  CHECK(all.tbox == o.tbox);
  CHECK(all.abox == o.abox);
  Ontology top = cut(o, Degree::one());
  for (const Axiom& ax : top.tbox) CHECK(ax.degree == Degree::one());
  CHECK(top.tbox.size() + top.abox.size() == 14);
}

TEST_CASE("degree_set collects distinct degrees ascending with 1 appended") {
  std::vector<Degree> ds = degree_set(testutil::exa());
  std::vector<Degree> want = {deg("0.5"), deg("0.6"), deg("0.7"), deg("0.8"), Degree::one()};
  CHECK(ds == want);
  CHECK(degree_set(Ontology{}) == std::vector<Degree>{Degree::one()});
  CHECK(degree_set(classical_version(testutil::exa())) ==
        std::vector<Degree>{Degree::one()});
}

TEST_CASE("cut composition and flattening commute") {
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    Ontology o = testutil::random_ontology(rng);
    Degree t1 = testutil::random_degree(rng), t2 = testutil::random_degree(rng);
    Ontology a = cut(cut(o, t1), t2);
    Ontology b = cut(o, std::max(t1, t2));
    CHECK(a.tbox == b.tbox);
    CHECK(a.abox == b.abox);

    Ontology left = classical_version(cut(o, t1));
    Ontology right;  // filter first, then flatten by hand
    for (const Axiom& ax : o.tbox)
      if (ax.degree >= t1) right.tbox.emplace_back(ax.form, Degree::one());
    for (const Assertion& as : o.abox)
      if (as.degree >= t1) right.abox.emplace_back(as.form, Degree::one());
    CHECK(left.tbox == right.tbox);
    CHECK(left.abox == right.abox);
  }
}

TEST_CASE("normalization preserves query answers over the original signature") {
  std::mt19937 rng(99);
  int done = 0;
  while (done < 12) {
    testutil::CorpusConfig positive_only;
    positive_only.negative_axioms = false;
    Ontology o = testutil::random_ontology(rng, positive_only);
    if (!existential_cycle_check(normalize(o))) continue;
    ++done;
    // the rewriting answers over the raw TBox (EX-to-EX axioms included);
    // the oracle needs the normalized one - all three must agree
    Ontology n = normalize(o);
    CanonicalResult oracle = testutil::oracle_canonical(o, TNorm::godel);
    Signature sig = o.signature();
    for (int qi = 0; qi < 4; ++qi) {
      ThresholdQuery q = testutil::random_tq(rng, sig, 2);
      AnswerSet raw = answer_threshold(o, q, TNorm::godel);
      AnswerSet normalized = answer_threshold(n, q, TNorm::godel);
      CHECK(raw.tuples() == normalized.tuples());
      for (const auto& tuple : testutil::all_tuples(sig.individuals, q.head.size()))
        CHECK(raw.contains(tuple) == eval_tq_on(oracle.interpretation, q, tuple));
    }
  }
}
