#ifndef pbn_parser_hpp
#define pbn_parser_hpp

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pbn/model.hpp"

namespace pbn {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& msg);
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

struct Evidence {
  std::map<RvIndex, int> assignments;  // RV -> state index
};

struct SpecializedProgram;

// Model language:
//   population student = { s1, s2 }.
//   parrv grade(student, course) states { a, b, c }.
//   cpd grade(S,C) ~ [a:0.7, b:0.2, c:0.1] :- iq(S,high), level(C,intro).
// Bodies: literals, `not` literals, `count(Var, literal) CMP int`.
Model parse_model(std::string_view text, const std::string& file = "<input>");

// `grade(s1,c1)=b.` statements.
Evidence parse_evidence(std::string_view text, const Model& model,
                        const std::string& file = "<input>");

std::string serialize_model(const Model& model);
std::string serialize_clause(const Model& model, int parrv, const Clause& clause);
std::string serialize_body(const Model& model, const BodyFormula& body,
                           const std::vector<std::string>& var_names);
std::string serialize_evidence(const Model& model, const Evidence& ev);
std::string serialize_distribution(const Model& model, int parrv,
                                   const CategoricalDistribution& d);

// Extended syntax: the original program followed by one entry per CPD-query,
//   specialized graduates(s1) {
//   cpd graduates(s1) ~ [yes:0.2,no:0.8].
//   }
//   unchanged grade(s1,c1).
std::string serialize_specialized(const SpecializedProgram& prog);
SpecializedProgram parse_specialized(std::string_view text, const std::string& file = "<input>");

}  // namespace pbn

#endif
