#ifndef pbn_specializer_hpp
#define pbn_specializer_hpp

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pbn/model.hpp"
#include "pbn/parser.hpp"

namespace pbn {

// Specialized decision lists, one slot per CPD-query (indexed like the
// model's ground RVs). An empty slot means the query keeps using the
// original parameterized list.
struct SpecializedProgram {
  std::shared_ptr<const Model> model;
  std::vector<std::optional<DecisionList>> lists;
  double t_spec = 0.0;  // seconds

  bool uses_original(RvIndex q) const { return !lists.at(q).has_value(); }
  // The list that answers q: the ground one, or the original list of q's parRV.
  const DecisionList& list_for(RvIndex q) const;
};

// Observed state per RV (-1 when unobserved): the static part of the state KB.
class EvidenceView {
 public:
  EvidenceView(const Model& model, const Evidence& evidence);
  int observed_state(RvIndex rv) const { return observed_[rv]; }
  bool is_observed(RvIndex rv) const { return observed_[rv] >= 0; }

 private:
  std::vector<int> observed_;
};

enum class SpecOutcome : std::uint8_t { UseOriginal, Ground };

struct SpecResult {
  SpecOutcome outcome = SpecOutcome::UseOriginal;
  DecisionList list;  // valid when outcome == Ground
};

SpecializedProgram specialize(std::shared_ptr<const Model> model, const Evidence& evidence);

SpecResult spec_decision_list(const Model& model, const DecisionList& list, const CPDQuery& q,
                              const EvidenceView& ev);

// `body` must have its head variables substituted already.
BodyFormula specialize_body(const Model& model, const BodyFormula& body,
                            const std::vector<std::vector<SymbolId>>& domains,
                            const EvidenceView& ev);

// Grounds every free variable: parameter variables over their population,
// state variables over the range. Conjunctions are split into
// variable-connected components first, so `p, q(X)` grounds to
// `p, (q(x1) ; ... ; q(xn))`.
BodyFormula ground_body(const Model& model, const BodyFormula& body,
                        const std::vector<std::vector<SymbolId>>& domains);

BodyFormula specialize_literal(const Model& model, const Literal& lit, const EvidenceView& ev);
BodyFormula specialize_literals(const Model& model, const BodyFormula& f, const EvidenceView& ev);
BodyFormula simplify_body(const BodyFormula& f);

// Structural identity, treating `Or[x]` / `And[x]` and `x` alike.
bool same_structure(const BodyFormula& a, const BodyFormula& b);

struct EquivalenceReport {
  long trials = 0;
  long checks = 0;
  long mismatches = 0;
  std::string first_counterexample;
  bool ok() const { return mismatches == 0; }
};

EquivalenceReport verify_equivalence(const Model& model, const Evidence& evidence,
                                     const SpecializedProgram& specialized, int n_trials,
                                     std::uint64_t seed);

// Clause count of the list that answers q.
std::size_t clause_count(const SpecializedProgram& prog, RvIndex q);

}  // namespace pbn

#endif
