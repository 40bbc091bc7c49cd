#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pbn/parser.hpp"
#include "pbn/specializer.hpp"

using namespace pbn;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_model(text, "x.pbn");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("university program parses") {
  auto m = fixtures::load(fixtures::university());
  CHECK(m->parrvs().size() == 4);
  CHECK(m->cpd(*m->find_parrv("grade")).clauses.size() == 3);
  CHECK(m->cpd(*m->find_parrv("graduates")).clauses.size() == 3);
  const auto& c = m->cpd(*m->find_parrv("graduates")).clauses[1];
  CHECK(c.body.kind == BodyFormula::Kind::Count);
  CHECK(c.body.count.cmp == Comparator::Less);
  CHECK(c.body.count.bound == 2);
}

TEST_CASE("parse errors carry a location") {
  CHECK(parse_error("").find("no populations declared") != std::string::npos);
  std::string e = parse_error(
      "population student = { s1 }.\npopulation course = { c1 }.\n"
      "parrv grade(student, course) states { a, b, c }.\n"
      "cpd grade(S,C) ~ [a:0.7,b:0.2,c:0.1] :- iq(S,high).\n");
  CHECK(e.find("iq") != std::string::npos);
  CHECK(e.find("x.pbn:4:") == 0);
  CHECK(parse_error("population p = { x }.\nparrv v(p) states { a, b }.\ncpd v(X) ~ [a:1.0, b:0.0] "
                    ":- v(X, z).\n")
            .find("not in range") != std::string::npos);
  CHECK(parse_error("population p = { x }.\nparrv v(q) states { a, b }.\n").find("undeclared population") !=
        std::string::npos);
  CHECK(parse_error("population p = { x }.\nparrv v(p) states { a, b }.\ncpd v(X) ~ [a:1.0, b:0.0] "
                    ":- v(X,a) ; v(X,b).\n")
            .find("disjunction") != std::string::npos);
}

TEST_CASE("evidence parsing") {
  auto m = fixtures::load(fixtures::university());
  auto ev = parse_evidence("grade(s1,c1)=b.", *m);
  REQUIRE(ev.assignments.size() == 1);
  CHECK(ev.assignments.at(fixtures::rv(*m, "grade(s1,c1)")) == fixtures::st(*m, "grade", "b"));
  CHECK_THROWS_WITH_AS(parse_evidence("grade(s1,c1)=b. grade(s1,c1)=a.", *m),
                       doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_WITH_AS(parse_evidence("iq(s9)=high.", *m), doctest::Contains("unknown RV"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_evidence("iq(s1)=medium.", *m), doctest::Contains("not in range"),
                       ParseError);
  auto rain = fixtures::load(fixtures::kRainWet);
  CHECK(parse_evidence("wet=y.", *rain).assignments.at(1) == 0);
}

TEST_CASE("model round-trips through text") {
  auto m = fixtures::load(fixtures::university());
  std::string text = serialize_model(*m);
  Model back = parse_model(text, "rt.pbn");
  CHECK(back.cpds() == m->cpds());
  CHECK(serialize_model(back) == text);
  auto rain = fixtures::load(fixtures::kRainWet);
  CHECK(parse_model(serialize_model(*rain)).cpds() == rain->cpds());
}

TEST_CASE("evidence round-trips through text") {
  auto m = fixtures::load(fixtures::university());
  auto ev = parse_evidence("grade(s1,c1)=b. iq(s2)=low. level(c3)=intro.", *m);
  CHECK(parse_evidence(serialize_evidence(*m, ev), *m).assignments == ev.assignments);
}

TEST_CASE("specialized fact serializes as a ground cpd clause") {
  auto m = fixtures::load(fixtures::university());
  auto ev = parse_evidence("grade(s1,c2)=c.", *m);
  auto prog = specialize(m, ev);
  RvIndex q = fixtures::rv(*m, "graduates(s1)");
  REQUIRE_FALSE(prog.uses_original(q));
  const auto& list = *prog.lists[q];
  REQUIRE(list.clauses.size() == 1);
  CHECK(serialize_clause(*m, *m->find_parrv("graduates"), list.clauses[0]) ==
        "cpd graduates(s1) ~ [yes:0.2,no:0.8].");
}

TEST_CASE("specialized program with disjunctions and counts round-trips") {
  auto m = fixtures::load(fixtures::university());
  auto ev = parse_evidence("grade(s1,c2)=a. grade(s1,c3)=b. iq(s2)=low.", *m);
  auto prog = specialize(m, ev);
  std::string text = serialize_specialized(prog);
  CHECK(text.find(';') != std::string::npos);
  CHECK(text.find("count{") != std::string::npos);
  CHECK(text.find("unchanged") != std::string::npos);
  SpecializedProgram back = parse_specialized(text, "spec.pbn");
  CHECK(back.model->cpds() == m->cpds());
  REQUIRE(back.lists.size() == prog.lists.size());
  for (std::size_t i = 0; i < prog.lists.size(); ++i) CHECK(back.lists[i] == prog.lists[i]);
  CHECK(serialize_specialized(back) == text);
}

TEST_CASE("parser is total on mutated input") {
  const std::string base = fixtures::university(2, 3) + "\n" + fixtures::kRainWet;
  const std::string alphabet = "abcXYZ_(),.;:-~[]{}<>=%0123456789 \n\tnotcountparrvcpdpopulation";
  std::mt19937_64 rng(42);
  int models = 0, errors = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string s = base;
    int edits = 1 + static_cast<int>(rng() % 6);
    for (int e = 0; e < edits; ++e) {
      std::size_t pos = rng() % (s.size() + 1);
      switch (rng() % 3) {
        case 0:
          if (!s.empty() && pos < s.size()) s.erase(pos, 1 + rng() % 4);
          break;
        case 1: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        default:
          if (pos < s.size()) s[pos] = alphabet[rng() % alphabet.size()];
      }
    }
    if (rng() % 10 == 0) s = s.substr(0, rng() % (s.size() + 1));
    try {
      parse_model(s, "fuzz.pbn");
      ++models;
    } catch (const ParseError& e) {
      CHECK(e.span().line >= 1);
      CHECK(e.span().column >= 1);
      ++errors;
    }
  }
  CHECK(models + errors == 3000);
  CHECK(errors > 0);
}
