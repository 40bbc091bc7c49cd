#ifndef pbn_evaluator_hpp
#define pbn_evaluator_hpp

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "pbn/model.hpp"
#include "pbn/state_kb.hpp"

namespace pbn {

struct SpecializedProgram;

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symbol bound to each clause variable (by variable id); -1 when unbound.
using Bindings = std::vector<SymbolId>;

// Decision lists lowered to an index-based form for the sampler's inner
// loop. Both the original and the specialized programs run through the
// same interpreter, so timings compare like with like.
//
// Body semantics: variables that are neither head variables nor bound by the
// query are existential. A variable occurring in a positive literal of a
// conjunction scopes over the whole conjunction; a variable that only occurs
// in a negated literal is local to it (`not p(X)` holds iff no X satisfies
// p). A count ranges its counted variable over the variable's domain.
class CompiledProgram {
 public:
  static CompiledProgram original(const Model& model);
  static CompiledProgram specialized(const SpecializedProgram& prog);

  const Model& model() const;

  // The distribution of the first clause in q's decision list whose body holds.
  std::span<const double> apply(const StateKB& kb, RvIndex q) const;

  struct Impl;

 private:
  explicit CompiledProgram(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

inline std::span<const double> apply_cpd(const StateKB& kb, const CompiledProgram& prog,
                                         RvIndex q) {
  return prog.apply(kb, q);
}

CategoricalDistribution apply_cpd(const StateKB& kb, const CompiledProgram& prog,
                                  const CPDQuery& q);

// Evaluates a body directly (tests and tools; the sampler uses apply()).
// Variables with a binding >= 0 are treated as bound.
bool eval_body(const StateKB& kb, const BodyFormula& body, const Bindings& bind);

// `count` must be a Count node.
bool eval_count(const StateKB& kb, const BodyFormula& count, const Bindings& bind);

}  // namespace pbn

#endif
