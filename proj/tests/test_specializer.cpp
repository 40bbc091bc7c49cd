#include <doctest.h>

#include <functional>
#include <random>

#include "fixtures.hpp"
#include "pbn/evaluator.hpp"
#include "pbn/specializer.hpp"
#include "pbn/state_kb.hpp"

using namespace pbn;

namespace {

// University model plus a zero-arity `t` whose first clause has `body`.
struct Probe {
  std::shared_ptr<Model> model;
  int t = -1;
  const Clause& clause() const { return model->cpd(t).clauses[0]; }
  std::vector<std::vector<SymbolId>> domains() const { return variable_domains(*model, t, clause()); }
};

Probe probe(const std::string& body, int students = 2, int courses = 5) {
  Probe p;
  p.model = fixtures::load(fixtures::university(students, courses) +
                           "parrv t states { y, n }.\ncpd t ~ [y:0.5, n:0.5] :- " + body +
                           ".\ncpd t ~ [y:0.5, n:0.5].\n");
  p.t = *p.model->find_parrv("t");
  return p;
}

Literal ground_lit(const Model& m, const std::string& parrv, std::vector<std::string> args,
                   const std::string& state, bool positive = true) {
  Literal l;
  l.positive = positive;
  l.parrv = *m.find_parrv(parrv);
  for (const auto& a : args) l.args.push_back(Term::constant(const_cast<Model&>(m).intern(a)));
  l.state = Term::constant(*m.find_symbol(state));
  return l;
}

BodyFormula glit(const Model& m, const std::string& parrv, std::vector<std::string> args,
                 const std::string& state, bool positive = true) {
  return BodyFormula::lit(ground_lit(m, parrv, std::move(args), state, positive));
}

}  // namespace

TEST_CASE("literal specialization truth table") {
  auto m = fixtures::load(fixtures::university());
  Evidence ev = fixtures::evidence(*m, "grade(s1,c1)=a.");
  EvidenceView view(*m, ev);
  auto spec = [&](Literal l) { return specialize_literal(*m, l, view); };

  CHECK(spec(ground_lit(*m, "grade", {"s1", "c1"}, "a")) == BodyFormula::truth());
  CHECK(spec(ground_lit(*m, "grade", {"s1", "c1"}, "b")) == BodyFormula::falsity());
  Literal unobs = ground_lit(*m, "grade", {"s1", "c2"}, "a");
  CHECK(spec(unobs) == BodyFormula::lit(unobs));
  CHECK(spec(ground_lit(*m, "grade", {"s9", "c1"}, "a")) == BodyFormula::falsity());
  CHECK(spec(ground_lit(*m, "grade", {"s1", "c1"}, "a", false)) == BodyFormula::falsity());
  CHECK(spec(ground_lit(*m, "grade", {"s1", "c1"}, "b", false)) == BodyFormula::truth());
  Literal unobs_neg = ground_lit(*m, "grade", {"s1", "c2"}, "a", false);
  CHECK(spec(unobs_neg) == BodyFormula::lit(unobs_neg));
  CHECK(spec(ground_lit(*m, "grade", {"s9", "c1"}, "a", false)) == BodyFormula::truth());
}

TEST_CASE("count with two absorbed true disjuncts and bound < 2 is false") {
  auto m = fixtures::load(fixtures::university());
  BodyFormula f = BodyFormula::count_ground(
      {glit(*m, "grade", {"s1", "c1"}, "a"), BodyFormula::truth(),
       glit(*m, "grade", {"s1", "c3"}, "a"), BodyFormula::falsity(), BodyFormula::truth()},
      0, Comparator::Less, 2);
  CHECK(simplify_body(f) == BodyFormula::falsity());

  // With a bound the residual survives, offset 2 and the false disjunct dropped.
  BodyFormula g = f;
  g.count.bound = 4;
  BodyFormula expected = BodyFormula::count_ground(
      {glit(*m, "grade", {"s1", "c1"}, "a"), glit(*m, "grade", {"s1", "c3"}, "a")}, 2,
      Comparator::Less, 4);
  CHECK(simplify_body(g) == expected);
}

TEST_CASE("simplify rules") {
  auto m = fixtures::load(fixtures::university());
  BodyFormula l = glit(*m, "iq", {"s1"}, "high");
  BodyFormula or_true;
  or_true.kind = BodyFormula::Kind::Or;
  or_true.children = {BodyFormula::truth(), l};
  CHECK(simplify_body(or_true) == BodyFormula::truth());
  BodyFormula and_false;
  and_false.kind = BodyFormula::Kind::And;
  and_false.children = {BodyFormula::falsity(), l};
  CHECK(simplify_body(and_false) == BodyFormula::falsity());
  BodyFormula or_false = or_true;
  or_false.children[0] = BodyFormula::falsity();
  CHECK(simplify_body(or_false) == l);
  CHECK(simplify_body(BodyFormula::count_ground({l}, 0, Comparator::GreaterEq, 0)) ==
        BodyFormula::truth());
  CHECK(simplify_body(BodyFormula::count_ground({}, 0, Comparator::Equal, 0)) == BodyFormula::truth());
}

TEST_CASE("ground_body") {
  SUBCASE("existential literal becomes a disjunction") {
    Probe p = probe("grade(s1,C,a)");
    const Model& m = *p.model;
    BodyFormula g = ground_body(m, p.clause().body, p.domains());
    std::vector<BodyFormula> ds;
    for (int c = 1; c <= 5; ++c) ds.push_back(glit(m, "grade", {"s1", "c" + std::to_string(c)}, "a"));
    CHECK(g == BodyFormula::disj(ds));
  }
  SUBCASE("independent conjunct stays outside the disjunction") {
    auto m = fixtures::load(R"(
population x = { x1, x2, x3 }.
parrv p states { y, n }.
parrv q(x) states { y, n }.
parrv t states { y, n }.
cpd p ~ [y:0.5, n:0.5].
cpd q(_X) ~ [y:0.5, n:0.5].
cpd t ~ [y:0.5, n:0.5] :- p(y), q(X,y).
cpd t ~ [y:0.5, n:0.5].
)");
    int t = *m->find_parrv("t");
    const Clause& c = m->cpd(t).clauses[0];
    BodyFormula g = ground_body(*m, c.body, variable_domains(*m, t, c));
    BodyFormula expected = BodyFormula::conj(
        {glit(*m, "p", {}, "y"),
         BodyFormula::disj({glit(*m, "q", {"x1"}, "y"), glit(*m, "q", {"x2"}, "y"),
                            glit(*m, "q", {"x3"}, "y")})});
    CHECK(g == expected);
  }
  SUBCASE("count goal becomes its disjunct list") {
    Probe p = probe("count(C, grade(s1,C,a)) < 2");
    const Model& m = *p.model;
    BodyFormula g = ground_body(m, p.clause().body, p.domains());
    std::vector<BodyFormula> ds;
    for (int c = 1; c <= 5; ++c) ds.push_back(glit(m, "grade", {"s1", "c" + std::to_string(c)}, "a"));
    CHECK(g == BodyFormula::count_ground(ds, 0, Comparator::Less, 2));
  }
  SUBCASE("negated literal with a free variable grounds to a conjunction") {
    Probe p = probe("not grade(s1,C,a)", 2, 2);
    const Model& m = *p.model;
    BodyFormula g = ground_body(m, p.clause().body, p.domains());
    CHECK(g == BodyFormula::conj({glit(m, "grade", {"s1", "c1"}, "a", false),
                                  glit(m, "grade", {"s1", "c2"}, "a", false)}));
  }
  SUBCASE("shared variable keeps its literals together") {
    Probe p = probe("grade(s1,C,c), level(C,advanced)", 2, 2);
    const Model& m = *p.model;
    BodyFormula g = ground_body(m, p.clause().body, p.domains());
    CHECK(g == BodyFormula::disj({BodyFormula::conj({glit(m, "grade", {"s1", "c1"}, "c"),
                                                     glit(m, "level", {"c1"}, "advanced")}),
                                  BodyFormula::conj({glit(m, "grade", {"s1", "c2"}, "c"),
                                                     glit(m, "level", {"c2"}, "advanced")})}));
  }
}

TEST_CASE("specialize_body") {
  Probe p = probe("grade(s1,C,a)");
  const Model& m = *p.model;
  const BodyFormula& body = p.clause().body;
  auto run = [&](const std::string& ev) {
    Evidence e = fixtures::evidence(m, ev);
    return specialize_body(m, body, p.domains(), EvidenceView(m, e));
  };
  CHECK(run("grade(s1,c1)=a.") == BodyFormula::truth());
  CHECK(run("") == body);
  CHECK(run("grade(s2,c1)=a.") == body);
  CHECK(run("grade(s1,c1)=b. grade(s1,c2)=b. grade(s1,c3)=b. grade(s1,c4)=b. grade(s1,c5)=c.") ==
        BodyFormula::falsity());
  BodyFormula partial = run("grade(s1,c1)=b. grade(s1,c2)=b.");
  CHECK(partial == BodyFormula::disj({glit(m, "grade", {"s1", "c3"}, "a"),
                                      glit(m, "grade", {"s1", "c4"}, "a"),
                                      glit(m, "grade", {"s1", "c5"}, "a")}));

  Probe iq = probe("iq(s1,high)");
  Evidence low = fixtures::evidence(*iq.model, "iq(s1)=low.");
  CHECK(specialize_body(*iq.model, iq.clause().body, iq.domains(), EvidenceView(*iq.model, low)) ==
        BodyFormula::falsity());
}

TEST_CASE("spec_decision_list") {
  auto m = fixtures::load(fixtures::university());
  int grad = *m->find_parrv("graduates");
  CPDQuery q{grad, {*m->find_symbol("s1")}};
  auto run = [&](const std::string& ev) {
    Evidence e = fixtures::evidence(*m, ev);
    return spec_decision_list(*m, m->cpd(grad), q, EvidenceView(*m, e));
  };

  SUBCASE("true body becomes a fact and stops") {
    SpecResult r = run("grade(s1,c2)=c.");
    REQUIRE(r.outcome == SpecOutcome::Ground);
    REQUIRE(r.list.clauses.size() == 1);
    CHECK(r.list.clauses[0].body.is_true());
    CHECK(r.list.clauses[0].distribution.probs == std::vector<double>{0.2, 0.8});
    CHECK(r.list.clauses[0].head == std::vector<Term>{Term::constant(*m->find_symbol("s1"))});
  }
  SUBCASE("false first body is dropped") {
    SpecResult r = run(
        "grade(s1,c1)=a. grade(s1,c2)=b. grade(s1,c3)=b. grade(s1,c4)=b. grade(s1,c5)=b.");
    REQUIRE(r.outcome == SpecOutcome::Ground);
    REQUIRE(r.list.clauses.size() == 1);
    CHECK(r.list.clauses[0].distribution.probs == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("partially resolved body is kept") {
    SpecResult r = run("grade(s1,c1)=a. grade(s1,c2)=b.");
    REQUIRE(r.outcome == SpecOutcome::Ground);
    REQUIRE(r.list.clauses.size() == 3);
    CHECK(r.list.clauses[0].body ==
          BodyFormula::disj({glit(*m, "grade", {"s1", "c3"}, "c"), glit(*m, "grade", {"s1", "c4"}, "c"),
                             glit(*m, "grade", {"s1", "c5"}, "c")}));
    CHECK(r.list.clauses[1].body.kind == BodyFormula::Kind::Count);
    CHECK(r.list.clauses[1].body.count.offset == 1);
    CHECK(r.list.clauses[1].body.children.size() == 3);
    CHECK(r.list.clauses[2].body.is_true());
  }
  SUBCASE("evidence on another student changes nothing") {
    CHECK(run("grade(s2,c1)=c.").outcome == SpecOutcome::UseOriginal);
  }
}

TEST_CASE("specialize whole programs") {
  auto m = fixtures::load(fixtures::university());
  SUBCASE("iq and level observed: every grade query is a fact") {
    Evidence e = fixtures::evidence(
        *m, "iq(s1)=high. iq(s2)=low. level(c1)=intro. level(c2)=advanced. level(c3)=intro. "
            "level(c4)=advanced. level(c5)=intro.");
    SpecializedProgram prog = specialize(m, e);
    for (const auto& q : cpd_queries_for("grade", *m)) {
      RvIndex rv = m->rv_index(q.parrv, q.params);
      REQUIRE_FALSE(prog.uses_original(rv));
      REQUIRE(prog.lists[rv]->clauses.size() == 1);
      CHECK(prog.lists[rv]->clauses[0].body.is_true());
    }
    RvIndex g11 = fixtures::rv(*m, "grade(s1,c1)");
    CHECK(prog.lists[g11]->clauses[0].distribution.probs == std::vector<double>{0.7, 0.2, 0.1});
    RvIndex g22 = fixtures::rv(*m, "grade(s2,c2)");
    CHECK(prog.lists[g22]->clauses[0].distribution.probs == std::vector<double>{0.2, 0.2, 0.6});
    RvIndex g12 = fixtures::rv(*m, "grade(s1,c2)");
    CHECK(prog.lists[g12]->clauses[0].distribution.probs == std::vector<double>{0.3, 0.4, 0.3});
  }
  SUBCASE("empty evidence changes nothing") {
    SpecializedProgram prog = specialize(m, Evidence{});
    for (RvIndex q = 0; q < m->rv_count(); ++q) CHECK(prog.uses_original(q));
  }
  SUBCASE("full evidence makes every query a fact") {
    Evidence e;
    std::mt19937_64 rng(2);
    for (RvIndex q = 0; q < m->rv_count(); ++q) {
      e.assignments[q] = static_cast<int>(rng() % m->parrv(m->rv_parrv(q)).range.size());
    }
    SpecializedProgram prog = specialize(m, e);
    for (RvIndex q = 0; q < m->rv_count(); ++q) {
      if (prog.uses_original(q)) {
        // Parentless lists are already a single fact.
        CHECK(m->cpd(m->rv_parrv(q)).clauses.size() == 1);
        continue;
      }
      REQUIRE(prog.lists[q]->clauses.size() == 1);
      CHECK(prog.lists[q]->clauses[0].body.is_true());
    }
    auto rep = verify_equivalence(*m, e, prog, 1, 1);
    CHECK(rep.ok());
  }
}

namespace {

void collect_literals(const BodyFormula& f, std::vector<const Literal*>& out) {
  if (f.kind == BodyFormula::Kind::Lit) out.push_back(&f.literal);
  for (const auto& c : f.children) collect_literals(c, out);
}

Evidence random_evidence(const Model& m, double fraction, std::mt19937_64& rng) {
  Evidence e;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (RvIndex q = 0; q < m.rv_count(); ++q) {
    if (u(rng) < fraction) {
      e.assignments[q] = static_cast<int>(rng() % m.parrv(m.rv_parrv(q)).range.size());
    }
  }
  return e;
}

}  // namespace

TEST_CASE("specialized programs answer like the original") {
  std::mt19937_64 rng(99);
  for (int students : {1, 2, 3}) {
    for (int courses : {1, 3, 4}) {
      auto m = fixtures::load(fixtures::university(students, courses));
      for (double f : {0.0, 0.3, 0.6, 1.0}) {
        Evidence e = random_evidence(*m, f, rng);
        SpecializedProgram prog = specialize(m, e);
        auto rep = verify_equivalence(*m, e, prog, 100, rng());
        INFO(rep.first_counterexample);
        CHECK(rep.ok());
        CHECK(rep.checks == 100L * m->rv_count());
      }
    }
  }
}

TEST_CASE("specialized output: shrinkage, no observed references, fixed point") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 12; ++rep) {
    auto m = fixtures::load(fixtures::university(1 + rep % 3, 2 + rep % 5));
    Evidence e = random_evidence(*m, 0.2 + 0.05 * rep, rng);
    EvidenceView view(*m, e);
    SpecializedProgram prog = specialize(m, e);
    for (RvIndex q = 0; q < m->rv_count(); ++q) {
      CHECK(clause_count(prog, q) <= m->cpd(m->rv_parrv(q)).clauses.size());
      if (prog.uses_original(q)) continue;
      const DecisionList& list = *prog.lists[q];
      for (const auto& c : list.clauses) {
        std::vector<const Literal*> lits;
        collect_literals(c.body, lits);
        for (const Literal* l : lits) {
          std::vector<SymbolId> params;
          bool ground = true;
          for (const auto& a : l->args) {
            ground = ground && !a.is_var();
            params.push_back(a.id);
          }
          if (!ground) continue;
          RvIndex r = m->rv_index(l->parrv, params);
          CHECK(r >= 0);
          CHECK_FALSE(view.is_observed(r));
        }
      }
      GroundRV g = m->ground_rv(q);
      SpecResult again = spec_decision_list(*m, list, CPDQuery{g.parrv, g.params}, view);
      CHECK(again.outcome == SpecOutcome::UseOriginal);
    }
  }
}

namespace {

// Random ground formulas over p(x) with states {a,b,c} and the zero-arity r.
struct FormulaGen {
  const Model& m;
  std::mt19937_64& rng;
  int members;

  BodyFormula leaf() {
    switch (rng() % 8) {
      case 0: return BodyFormula::truth();
      case 1: return BodyFormula::falsity();
      case 2: return glit(m, "r", {}, rng() % 2 ? "a" : "b", rng() % 2);
      default: {
        static const char* states[] = {"a", "b", "c"};
        return glit(m, "p", {"x" + std::to_string(1 + rng() % members)}, states[rng() % 3],
                    rng() % 3 != 0);
      }
    }
  }

  BodyFormula gen(int depth) {
    if (depth == 0 || rng() % 4 == 0) return leaf();
    int n = 1 + static_cast<int>(rng() % 4);
    std::vector<BodyFormula> kids;
    for (int i = 0; i < n; ++i) kids.push_back(gen(depth - 1));
    BodyFormula f;
    switch (rng() % 3) {
      case 0: f.kind = BodyFormula::Kind::And; break;
      case 1: f.kind = BodyFormula::Kind::Or; break;
      default: {
        static const Comparator cmps[] = {Comparator::Less, Comparator::LessEq, Comparator::Equal,
                                          Comparator::GreaterEq, Comparator::Greater};
        return BodyFormula::count_ground(std::move(kids), static_cast<int>(rng() % 3),
                                         cmps[rng() % 5], static_cast<int>(rng() % 5));
      }
    }
    f.children = std::move(kids);
    return f;
  }
};

}  // namespace

TEST_CASE("simplify_body preserves truth") {
  std::mt19937_64 rng(17);
  for (int members = 1; members <= 6; ++members) {
    std::string text = "population x = { x1";
    for (int i = 2; i <= members; ++i) text += ", x" + std::to_string(i);
    text += R"( }.
parrv p(x) states { a, b, c }.
parrv r states { a, b }.
cpd p(_X) ~ [a:0.2, b:0.3, c:0.5].
cpd r ~ [a:0.5, b:0.5].
)";
    auto m = fixtures::load(text);
    FormulaGen gen{*m, rng, members};
    StateKB kb(*m, Evidence{});
    for (int t = 0; t < 400; ++t) {
      BodyFormula f = gen.gen(5);
      BodyFormula s = simplify_body(f);
      CHECK(simplify_body(s) == s);
      for (int k = 0; k < 5; ++k) {
        for (RvIndex rv : kb.unobserved()) kb.set_state(rv, static_cast<int>(rng() % kb.range_size(rv)));
        REQUIRE(eval_body(kb, s, {}) == eval_body(kb, f, {}));
      }
    }
  }
}

TEST_CASE("same_structure ignores singleton wrappers") {
  auto m = fixtures::load(fixtures::university());
  BodyFormula l = glit(*m, "iq", {"s1"}, "high");
  BodyFormula wrapped;
  wrapped.kind = BodyFormula::Kind::Or;
  wrapped.children = {l};
  CHECK(same_structure(wrapped, l));
  CHECK_FALSE(same_structure(l, glit(*m, "iq", {"s1"}, "low")));
}
