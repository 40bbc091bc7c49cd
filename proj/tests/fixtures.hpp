#ifndef pbn_tests_fixtures_hpp
#define pbn_tests_fixtures_hpp

#include <memory>
#include <string>

#include "pbn/model.hpp"
#include "pbn/parser.hpp"

namespace fixtures {

// The university program with `students` x `courses` populations.
inline std::string university(int students = 2, int courses = 5) {
  std::string s = "population student = { ";
  for (int i = 1; i <= students; ++i) s += (i > 1 ? ", s" : "s") + std::to_string(i);
  s += " }.\npopulation course = { ";
  for (int i = 1; i <= courses; ++i) s += (i > 1 ? ", c" : "c") + std::to_string(i);
  s += " }.\n";
  s += R"(
parrv level(course) states { intro, advanced }.
parrv iq(student) states { high, low }.
parrv grade(student, course) states { a, b, c }.
parrv graduates(student) states { yes, no }.

cpd level(_C) ~ [intro:0.4, advanced:0.6].

cpd iq(_S) ~ [high:0.5, low:0.5].

cpd grade(S,C) ~ [a:0.7, b:0.2, c:0.1] :- iq(S,high), level(C,intro).
cpd grade(S,C) ~ [a:0.2, b:0.2, c:0.6] :- iq(S,low), level(C,advanced).
cpd grade(_S,_C) ~ [a:0.3, b:0.4, c:0.3].

cpd graduates(S) ~ [yes:0.2, no:0.8] :- grade(S,_C,c).
cpd graduates(S) ~ [yes:0.5, no:0.5] :- count(C, grade(S,C,a)) < 2.
cpd graduates(_S) ~ [yes:0.9, no:0.1].
)";
  return s;
}

inline const char* const kRainWet = R"(
parrv rain states { y, n }.
parrv wet states { y, n }.
cpd rain ~ [y:0.3, n:0.7].
cpd wet ~ [y:0.9, n:0.1] :- rain(y).
cpd wet ~ [y:0.2, n:0.8].
)";

inline std::shared_ptr<pbn::Model> load(const std::string& text) {
  return std::make_shared<pbn::Model>(pbn::parse_model(text, "test.pbn"));
}

inline pbn::RvIndex rv(const pbn::Model& m, const std::string& name) {
  for (pbn::RvIndex i = 0; i < m.rv_count(); ++i) {
    if (m.rv_name(i) == name) return i;
  }
  return -1;
}

inline int st(const pbn::Model& m, const std::string& parrv, const std::string& state) {
  return m.state_index(*m.find_parrv(parrv), *m.find_symbol(state));
}

inline pbn::Evidence evidence(const pbn::Model& m, const std::string& text) {
  return pbn::parse_evidence(text, m, "test.ev");
}

}  // namespace fixtures

#endif
