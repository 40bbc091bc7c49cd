#ifndef pbn_model_hpp
#define pbn_model_hpp

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pbn {

using SymbolId = int;
using RvIndex = int;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
};

// A variable (clause-local id) or a constant (model-wide symbol id).
struct Term {
  enum class Kind : std::uint8_t { Var, Const };
  Kind kind = Kind::Const;
  int id = -1;

  static Term var(int v) { return {Kind::Var, v}; }
  static Term constant(SymbolId s) { return {Kind::Const, s}; }
  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Term&) const = default;
};

// A state literal `p(t1,...,tn,state)`, possibly negated.
struct Literal {
  bool positive = true;
  int parrv = -1;
  std::vector<Term> args;
  Term state;

  bool operator==(const Literal&) const = default;
};

enum class Comparator : std::uint8_t { Less, LessEq, Equal, GreaterEq, Greater };

bool compare(int lhs, Comparator cmp, int rhs);
std::string_view comparator_text(Comparator cmp);

// Clause-body IR. A Count node carries its goal in `literal` before
// grounding; after grounding (`count.grounded`) its disjuncts live in
// `children` and `count.offset` holds the number of absorbed true disjuncts.
struct BodyFormula {
  enum class Kind : std::uint8_t { True, False, Lit, Count, And, Or };

  struct CountInfo {
    int counted_var = -1;
    bool grounded = false;
    int offset = 0;
    Comparator cmp = Comparator::Less;
    int bound = 0;
    bool operator==(const CountInfo&) const = default;
  };

  Kind kind = Kind::True;
  Literal literal;
  std::vector<BodyFormula> children;
  CountInfo count;

  static BodyFormula truth() { return {}; }
  static BodyFormula falsity();
  static BodyFormula lit(Literal l);
  static BodyFormula conj(std::vector<BodyFormula> items);
  static BodyFormula disj(std::vector<BodyFormula> items);
  static BodyFormula count_goal(int counted_var, Literal goal, Comparator cmp, int bound);
  static BodyFormula count_ground(std::vector<BodyFormula> disjuncts, int offset, Comparator cmp,
                                  int bound);

  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
};

bool operator==(const BodyFormula& a, const BodyFormula& b);

struct CategoricalDistribution {
  std::vector<double> probs;  // in the parRV's range order
  bool operator==(const CategoricalDistribution&) const = default;
};

struct Clause {
  std::vector<Term> head;
  CategoricalDistribution distribution;
  BodyFormula body;
  std::vector<std::string> var_names;  // indexed by variable id
  SourceSpan span;

  bool operator==(const Clause& o) const {
    return head == o.head && distribution == o.distribution && body == o.body &&
           var_names == o.var_names;
  }
};

struct DecisionList {
  std::vector<Clause> clauses;
  bool operator==(const DecisionList&) const = default;
};

struct Population {
  std::string type_name;
  std::vector<SymbolId> members;
};

struct ParRVDecl {
  std::string name;
  std::vector<int> param_types;  // population indices
  std::vector<SymbolId> range;
};

struct GroundRV {
  int parrv = -1;
  std::vector<SymbolId> params;
  bool operator==(const GroundRV&) const = default;
  auto operator<=>(const GroundRV&) const = default;
};

struct CPDQuery {
  int parrv = -1;
  std::vector<SymbolId> params;
  bool operator==(const CPDQuery&) const = default;
};

class Model {
 public:
  SymbolId intern(std::string_view name);
  std::optional<SymbolId> find_symbol(std::string_view name) const;
  const std::string& symbol_name(SymbolId s) const { return symbols_.at(s); }
  std::size_t symbol_count() const { return symbols_.size(); }

  int add_population(Population p);
  int add_parrv(ParRVDecl d);

  std::optional<int> find_population(std::string_view name) const;
  std::optional<int> find_parrv(std::string_view name) const;

  const std::vector<Population>& populations() const { return populations_; }
  const std::vector<ParRVDecl>& parrvs() const { return parrvs_; }
  const ParRVDecl& parrv(int p) const { return parrvs_.at(p); }
  const Population& population(int p) const { return populations_.at(p); }

  std::vector<DecisionList>& cpds() { return cpds_; }
  const std::vector<DecisionList>& cpds() const { return cpds_; }
  const DecisionList& cpd(int parrv) const { return cpds_.at(parrv); }

  // -1 when the symbol is not a member / not a state.
  int member_index(int population, SymbolId s) const;
  int state_index(int parrv, SymbolId s) const;

  // Dense ground-RV layout: parRV declaration order, then lexicographic
  // population order (last parameter varies fastest).
  int rv_count() const { return rv_count_; }
  int rv_base(int parrv) const { return rv_base_.at(parrv); }
  int rv_count_of(int parrv) const;
  RvIndex rv_index(const GroundRV& rv) const;  // -1 if no such RV
  RvIndex rv_index(int parrv, std::span<const SymbolId> params) const;
  GroundRV ground_rv(RvIndex i) const;
  int rv_parrv(RvIndex i) const;
  std::string rv_name(RvIndex i) const;
  std::string literal_text(const Literal& l, const std::vector<std::string>& var_names = {}) const;

  // Rebuilds the RV layout; throws ModelError on an empty population.
  void finalize();

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_ids_;
  std::vector<Population> populations_;
  std::vector<std::unordered_map<SymbolId, int>> member_ids_;
  std::vector<ParRVDecl> parrvs_;
  std::vector<std::unordered_map<SymbolId, int>> state_ids_;
  std::vector<DecisionList> cpds_;
  std::vector<int> rv_base_;
  int rv_count_ = 0;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_model(const Model& model);

std::vector<GroundRV> enumerate_rvs(const Model& model);
std::vector<CPDQuery> cpd_queries_for(std::string_view parrv, const Model& model);

// Domain of every clause variable, taken from its first occurrence
// (population members for parameter positions, the range for state positions).
std::vector<std::vector<SymbolId>> variable_domains(const Model& model, int parrv,
                                                    const Clause& clause);
std::vector<std::vector<SymbolId>> variable_domains(const Model& model, const BodyFormula& body,
                                                    std::size_t var_count);

// Variables of a formula in first-occurrence order.
std::vector<int> formula_variables(const BodyFormula& f);

// Replaces bound variables (value >= 0) with constants.
Literal substitute(const Literal& l, std::span<const SymbolId> binding);
BodyFormula substitute(const BodyFormula& f, std::span<const SymbolId> binding);

// Renumbers the clause's variables in first-occurrence order, dropping unused ones.
void compact_variables(Clause& clause);

bool is_ground(const BodyFormula& f);

}  // namespace pbn

#endif
