#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "pbn/dependency.hpp"
#include "pbn/evaluator.hpp"

using namespace pbn;

namespace {

std::vector<std::string> names(const Model& m, const std::vector<RvIndex>& rvs) {
  std::vector<std::string> out;
  for (RvIndex r : rvs) out.push_back(m.rv_name(r));
  return out;
}

const char* const kCycle = R"(
parrv a states { y, n }.
parrv b states { y, n }.
cpd a ~ [y:0.5, n:0.5] :- b(y).
cpd a ~ [y:0.1, n:0.9].
cpd b ~ [y:0.5, n:0.5] :- a(y).
cpd b ~ [y:0.1, n:0.9].
)";

}  // namespace

TEST_CASE("parents and children of the university model") {
  auto m = fixtures::load(fixtures::university());
  DependencyGraph g = build_dependency_graph(*m);
  CHECK(names(*m, g.parents[fixtures::rv(*m, "grade(s1,c1)")]) ==
        std::vector<std::string>{"level(c1)", "iq(s1)"});
  CHECK(names(*m, g.parents[fixtures::rv(*m, "graduates(s1)")]) ==
        std::vector<std::string>{"grade(s1,c1)", "grade(s1,c2)", "grade(s1,c3)", "grade(s1,c4)",
                                 "grade(s1,c5)"});
  CHECK(g.parents[fixtures::rv(*m, "level(c1)")].empty());
  CHECK(names(*m, children_of(g, fixtures::rv(*m, "iq(s1)"))) ==
        std::vector<std::string>{"grade(s1,c1)", "grade(s1,c2)", "grade(s1,c3)", "grade(s1,c4)",
                                 "grade(s1,c5)"});
  CHECK(children_of(g, fixtures::rv(*m, "graduates(s1)")).empty());
  CHECK_THROWS_AS(children_of(g, 99), ModelError);
  CHECK(check_acyclic(g).empty());
  CHECK(dump_edges(*m, g).find("iq(s1) -> grade(s1,c3)\n") != std::string::npos);
}

TEST_CASE("parents and children are inverse") {
  auto m = fixtures::load(fixtures::university(3, 4));
  DependencyGraph g = build_dependency_graph(*m);
  for (RvIndex a = 0; a < g.size(); ++a) {
    for (RvIndex b = 0; b < g.size(); ++b) {
      bool p = std::binary_search(g.parents[a].begin(), g.parents[a].end(), b);
      const auto& ch = g.children[b];
      bool c = std::find(ch.begin(), ch.end(), a) != ch.end();
      CHECK(p == c);
    }
  }
}

TEST_CASE("cycles are reported with a witness") {
  auto m = fixtures::load(kCycle);
  DependencyGraph g = build_dependency_graph(*m);
  CHECK(names(*m, check_acyclic(g)) == std::vector<std::string>{"a", "b", "a"});
  CHECK_THROWS_AS(topological_order(g), ModelError);
  CHECK(cycle_text(*m, check_acyclic(g)) == "a -> b -> a");

  auto self = fixtures::load(R"(
parrv a states { y, n }.
cpd a ~ [y:0.5, n:0.5] :- a(y).
cpd a ~ [y:0.1, n:0.9].
)");
  CHECK(names(*self, check_acyclic(build_dependency_graph(*self))) ==
        std::vector<std::string>{"a", "a"});
}

TEST_CASE("topological order") {
  auto m = fixtures::load(fixtures::university());
  auto order = topological_order(build_dependency_graph(*m));
  std::vector<std::string> n = names(*m, order);
  auto layer = [](const std::string& s) {
    if (s.rfind("iq", 0) == 0 || s.rfind("level", 0) == 0) return 0;
    if (s.rfind("grade", 0) == 0) return 1;
    return 2;
  };
  for (std::size_t i = 1; i < n.size(); ++i) CHECK(layer(n[i - 1]) <= layer(n[i]));

  auto flat = fixtures::load("population p = { x, y, z }.\nparrv v(p) states { a, b }.\n"
                             "cpd v(_X) ~ [a:0.5, b:0.5].\n");
  CHECK(topological_order(build_dependency_graph(*flat)) == std::vector<RvIndex>{0, 1, 2});

  auto chain = fixtures::load(R"(
parrv c states { y, n }.
parrv b states { y, n }.
parrv a states { y, n }.
cpd c ~ [y:0.5, n:0.5] :- b(y).
cpd c ~ [y:0.1, n:0.9].
cpd b ~ [y:0.5, n:0.5] :- a(y).
cpd b ~ [y:0.1, n:0.9].
cpd a ~ [y:0.3, n:0.7].
)");
  CHECK(names(*chain, topological_order(build_dependency_graph(*chain))) ==
        std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("changing a non-parent never changes a CPD answer") {
  auto m = fixtures::load(fixtures::university(3, 4));
  DependencyGraph g = build_dependency_graph(*m);
  CompiledProgram prog = CompiledProgram::original(*m);
  StateKB kb(*m, Evidence{});
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    for (RvIndex rv : kb.unobserved()) kb.set_state(rv, static_cast<int>(rng() % kb.range_size(rv)));
    RvIndex x = static_cast<RvIndex>(rng() % m->rv_count());
    auto before = prog.apply(kb, x);
    std::vector<double> b(before.begin(), before.end());
    for (RvIndex y = 0; y < m->rv_count(); ++y) {
      if (y == x || std::binary_search(g.parents[x].begin(), g.parents[x].end(), y)) continue;
      int old = kb.raw_state(y);
      kb.set_state(y, (old + 1 + static_cast<int>(rng() % (kb.range_size(y) - 1))) % kb.range_size(y));
      auto after = prog.apply(kb, x);
      CHECK(std::vector<double>(after.begin(), after.end()) == b);
      kb.set_state(y, old);
    }
  }
}
