#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fdlite/fdlite.hpp"
#include "testutil.hpp"

using namespace fdlite;
using testutil::deg;

namespace {

Axiom concept_axiom(const char* text) {
  return parse_ontology(std::string(text) + "\n").tbox.at(0);
}

ThresholdAtom ta(Atom a, const char* bound) { return {std::move(a), deg(bound)}; }

}  // namespace

TEST_CASE("applicability") {
  Axiom museum = concept_axiom("Museum SUBC Popular >= 0.6");
  CHECK(applicable(museum, ta({"Popular", {Term::variable("x")}}, "0.5"), TNorm::godel));
  CHECK(applicable(museum, ta({"Popular", {Term::variable("x")}}, "0.6"), TNorm::godel));
  CHECK(!applicable(museum, ta({"Popular", {Term::variable("x")}}, "0.7"), TNorm::godel));
  CHECK(!applicable(museum, ta({"Museum", {Term::variable("x")}}, "0.5"), TNorm::godel));

  Axiom exists = concept_axiom("A SUBC EX P >= 1");
  // second term bound: not applicable
  CHECK(!applicable(exists, ta({"P", {Term::variable("x"), Term::variable("y")}}, "0.5"),
                    TNorm::godel));
  CHECK(applicable(exists, ta({"P", {Term::variable("x"), Term::anon(0)}}, "0.5"),
                   TNorm::godel));
  Axiom exists_inv = concept_axiom("A SUBC EX P- >= 1");
  CHECK(applicable(exists_inv, ta({"P", {Term::anon(0), Term::variable("x")}}, "0.5"),
                   TNorm::godel));
  CHECK(!applicable(exists_inv, ta({"P", {Term::variable("x"), Term::anon(0)}}, "0.5"),
                    TNorm::godel));

  Axiom role = concept_axiom("S SUBR P >= 0.9");
  CHECK(applicable(role, ta({"P", {Term::variable("x"), Term::variable("y")}}, "0.9"),
                   TNorm::godel));
  CHECK(!applicable(role, ta({"P", {Term::variable("x"), Term::variable("y")}}, "0.95"),
                    TNorm::godel));

  Axiom negative = concept_axiom("A SUBC NOT B >= 1");
  CHECK(!applicable(negative, ta({"B", {Term::variable("x")}}, "0.5"), TNorm::godel));
}

TEST_CASE("gr transfers bounds per t-norm") {
  int anon = 0;
  Axiom museum = concept_axiom("Museum SUBC Popular >= 0.6");
  ThresholdAtom g = gr(ta({"Popular", {Term::variable("x")}}, "0.5"), museum,
                       TNorm::godel, anon);
  CHECK(g.atom == Atom{"Museum", {Term::variable("x")}});
  CHECK(g.bound == deg("0.5"));

  Axiom ab9 = concept_axiom("A SUBC B >= 0.9");
  CHECK(gr(ta({"B", {Term::variable("x")}}, "0.9"), ab9, TNorm::product, anon).bound ==
        Degree::one());
  CHECK(gr(ta({"B", {Term::variable("x")}}, "0.81"), ab9, TNorm::product, anon).bound ==
        deg("0.9"));
  Axiom ab8 = concept_axiom("A SUBC B >= 0.8");
  CHECK(gr(ta({"B", {Term::variable("x")}}, "0.5"), ab8, TNorm::lukasiewicz, anon).bound ==
        deg("0.7"));

  CHECK_THROWS_AS(gr(ta({"B", {Term::variable("x")}}, "0.95"), ab9, TNorm::godel, anon),
                  std::invalid_argument);
}

TEST_CASE("gr rewrites atom shapes per axiom form") {
  int anon = 10;
  Term x = Term::variable("x");

  ThresholdAtom r1 = gr(ta({"A", {x}}, "0.5"), concept_axiom("EX P SUBC A >= 1"),
                        TNorm::godel, anon);
  CHECK(r1.atom.predicate == "P");
  CHECK(r1.atom.terms[0] == x);
  CHECK(r1.atom.terms[1].is_anon());

  ThresholdAtom r2 = gr(ta({"A", {x}}, "0.5"), concept_axiom("EX P- SUBC A >= 1"),
                        TNorm::godel, anon);
  CHECK(r2.atom.terms[0].is_anon());
  CHECK(r2.atom.terms[1] == x);

  ThresholdAtom r3 = gr(ta({"P", {x, Term::anon(0)}}, "0.5"),
                        concept_axiom("A SUBC EX P >= 1"), TNorm::godel, anon);
  CHECK(r3.atom == Atom{"A", {x}});

  ThresholdAtom r4 = gr(ta({"P", {Term::anon(0), x}}, "0.5"),
                        concept_axiom("A SUBC EX P- >= 1"), TNorm::godel, anon);
  CHECK(r4.atom == Atom{"A", {x}});

  ThresholdAtom r5 = gr(ta({"P", {x, Term::anon(0)}}, "0.5"),
                        concept_axiom("EX S- SUBC EX P >= 1"), TNorm::godel, anon);
  CHECK(r5.atom.predicate == "S");
  CHECK(r5.atom.terms[0].is_anon());
  CHECK(r5.atom.terms[1] == x);

  Term y = Term::variable("y");
  ThresholdAtom s1 = gr(ta({"P", {x, y}}, "0.5"), concept_axiom("S SUBR P >= 1"),
                        TNorm::godel, anon);
  CHECK(s1.atom == Atom{"S", {x, y}});
  ThresholdAtom s2 = gr(ta({"P", {x, y}}, "0.5"), concept_axiom("S- SUBR P- >= 1"),
                        TNorm::godel, anon);
  CHECK(s2.atom == Atom{"S", {x, y}});
  ThresholdAtom s3 = gr(ta({"P", {x, y}}, "0.5"), concept_axiom("S SUBR P- >= 1"),
                        TNorm::godel, anon);
  CHECK(s3.atom == Atom{"S", {y, x}});
  ThresholdAtom s4 = gr(ta({"P", {x, y}}, "0.5"), concept_axiom("S- SUBR P >= 1"),
                        TNorm::godel, anon);
  CHECK(s4.atom == Atom{"S", {y, x}});
}

TEST_CASE("reduce applies the most general unifier") {
  ThresholdQuery p;
  p.head = {Term::variable("x")};
  p.atoms = {ta({"A", {Term::variable("x")}}, "0.5"),
             ta({"A", {Term::variable("y")}}, "0.7"),
             ta({"R", {Term::variable("x"), Term::variable("y")}}, "0.3")};
  ThresholdQuery r = reduce(p, 0, 1);
  REQUIRE(r.atoms.size() == 2);
  CHECK(r.atoms[0] == ta({"A", {Term::variable("x")}}, "0.7"));
  CHECK(r.atoms[1] == ta({"R", {Term::variable("x"), Term::variable("x")}}, "0.3"));

  // identical atoms collapse
  ThresholdQuery dup;
  dup.head = {Term::variable("x")};
  dup.atoms = {ta({"A", {Term::variable("x")}}, "0.5"),
               ta({"A", {Term::variable("x")}}, "0.5")};
  CHECK(reduce(dup, 0, 1).atoms.size() == 1);

  // ground unification substitutes individuals throughout
  ThresholdQuery ground;
  ground.atoms = {ta({"P", {Term::variable("X"), Term::individual("a")}}, "0.5"),
                  ta({"P", {Term::individual("b"), Term::variable("Y")}}, "0.5"),
                  ta({"A", {Term::variable("X")}}, "0.4")};
  ThresholdQuery g = reduce(ground, 0, 1);
  REQUIRE(g.atoms.size() == 2);
  CHECK(g.atoms[0].atom == Atom{"P", {Term::individual("b"), Term::individual("a")}});
  CHECK(g.atoms[1].atom == Atom{"A", {Term::individual("b")}});

  // two answer variables never unify; distinct individuals never unify
  ThresholdQuery two;
  two.head = {Term::variable("x"), Term::variable("y")};
  two.atoms = {ta({"A", {Term::variable("x")}}, "0.5"),
               ta({"A", {Term::variable("y")}}, "0.5"),
               ta({"R", {Term::variable("x"), Term::variable("y")}}, "0.5")};
  CHECK(!try_reduce(two, 0, 1).has_value());
  ThresholdQuery inds;
  inds.atoms = {ta({"A", {Term::individual("a")}}, "0.5"),
                ta({"A", {Term::individual("b")}}, "0.5")};
  CHECK(!try_reduce(inds, 0, 1).has_value());
}

TEST_CASE("rewriting the popularity query") {
  Ontology o = testutil::exa();
  UnionTQ u5 = perfect_ref(testutil::tq("q(x) :- Popular(x) >= 0.5."), o.tbox, TNorm::godel);
  REQUIRE(u5.queries.size() == 2);
  std::set<std::string> shapes;
  for (const ThresholdQuery& q : u5.queries) shapes.insert(serialize_query(q));
  CHECK(shapes == std::set<std::string>{"q(x) :- Museum(x) >= 0.5.",
                                        "q(x) :- Popular(x) >= 0.5."});

  UnionTQ u7 = perfect_ref(testutil::tq("q(x) :- Popular(x) >= 0.7."), o.tbox, TNorm::godel);
  REQUIRE(u7.queries.size() == 1);
  CHECK(serialize_query(u7.queries[0]) == "q(x) :- Popular(x) >= 0.7.");

  UnionTQ empty = perfect_ref(testutil::tq("q(x) :- Popular(x) >= 0.5."), {}, TNorm::godel);
  CHECK(empty.queries.size() == 1);
}

TEST_CASE("rewriting keeps heads and Goedel bounds stable") {
  std::mt19937 rng(2025);
  for (int i = 0; i < 25; ++i) {
    Ontology o = testutil::random_ontology(rng);
    ThresholdQuery q = testutil::random_tq(rng, o.signature(), 3);
    UnionTQ u = perfect_ref(q, o.tbox, TNorm::godel);
    REQUIRE(!u.queries.empty());
    CHECK(u.queries[0].head == q.head);  // first entry is the seed query
    std::set<std::string> input_bounds;
    for (const ThresholdAtom& a : q.atoms) input_bounds.insert(a.bound.str());
    for (const ThresholdQuery& d : u.queries) {
      // heads keep their shape; a position is either the original answer
      // variable or an individual it was unified with
      REQUIRE(d.head.size() == q.head.size());
      for (std::size_t pos = 0; pos < d.head.size(); ++pos)
        CHECK((d.head[pos] == q.head[pos] || d.head[pos].is_individual()));
      for (const ThresholdAtom& a : d.atoms)
        CHECK(input_bounds.count(a.bound.str()) == 1);
    }
  }
}

TEST_CASE("non-idempotent rewriting terminates with bounds in (0,1]") {
  Ontology o = testutil::chain(6);
  for (TNorm k : {TNorm::product, TNorm::lukasiewicz}) {
    UnionTQ u = perfect_ref(testutil::tq("q(x) :- A6(x) >= 0.5."), o.tbox, k);
    CHECK(u.queries.size() >= 2);
    for (const ThresholdQuery& d : u.queries)
      for (const ThresholdAtom& a : d.atoms) {
        CHECK(!a.bound.is_zero());
        CHECK(a.bound <= Degree::one());
      }
  }
  // product: 0.5 / 0.9^k stays below 1 for k <= 6, so the chain rewrites
  // all the way down
  UnionTQ u = perfect_ref(testutil::tq("q(x) :- A6(x) >= 0.5."), o.tbox, TNorm::product);
  CHECK(u.queries.size() == 7);
}

TEST_CASE("reduce can unlock further rewriting steps") {
  // unifying the two role atoms pins the answer variable to the individual
  // and frees the join variable, after which the existential axiom applies
  Ontology o = parse_ontology("C SUBC EX P >= 1\nC(a) >= 1\n");
  ThresholdQuery q;
  q.head = {Term::variable("x")};
  q.atoms = {ta({"P", {Term::individual("a"), Term::variable("y")}}, "1"),
             ta({"P", {Term::variable("x"), Term::variable("y")}}, "1")};
  UnionTQ u = perfect_ref(q, o.tbox, TNorm::godel);
  bool has_pinned_concept_disjunct = false;
  for (const ThresholdQuery& d : u.queries)
    if (d.atoms.size() == 1 && d.atoms[0].atom == Atom{"C", {Term::individual("a")}} &&
        d.head == std::vector<Term>{Term::individual("a")})
      has_pinned_concept_disjunct = true;
  CHECK(has_pinned_concept_disjunct);

  AnswerSet ans = eval_utq(from_abox(o.abox), u);
  CHECK(ans.tuples() == std::set<std::vector<std::string>>{{"a"}});
}
