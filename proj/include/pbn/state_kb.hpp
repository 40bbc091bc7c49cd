#ifndef pbn_state_kb_hpp
#define pbn_state_kb_hpp

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbn/model.hpp"
#include "pbn/parser.hpp"

namespace pbn {

class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Current state of every ground RV. Observed RVs (the evidence) are fixed at
// construction; unobserved ones start uninitialized.
class StateKB {
 public:
  static constexpr int kUninitialized = -1;

  StateKB(const Model& model, const Evidence& evidence);

  const Model& model() const { return *model_; }
  int size() const { return static_cast<int>(states_.size()); }

  void set_state(RvIndex rv, int state);
  int get_state(RvIndex rv) const;
  bool is_observed(RvIndex rv) const;
  bool is_initialized(RvIndex rv) const { return states_.at(rv) != kUninitialized; }

  // No bounds or initialization checks.
  int raw_state(RvIndex rv) const { return states_[rv]; }
  int range_size(RvIndex rv) const { return range_size_[rv]; }

  const std::vector<RvIndex>& unobserved() const { return unobserved_; }

 private:
  const Model* model_;
  std::vector<int> states_;
  std::vector<std::uint8_t> observed_;
  std::vector<std::uint8_t> range_size_;
  std::vector<RvIndex> unobserved_;
};

// Convenience: init_from_evidence.
inline StateKB init_from_evidence(const Model& model, const Evidence& evidence) {
  return StateKB(model, evidence);
}

// Truth of a ground literal. A literal over a non-existent RV is false when
// positive and true when negated.
bool truth_of(const StateKB& kb, const Literal& lit);

// One `rv = state` line per RV in canonical order.
std::string dump_state(const StateKB& kb);

}  // namespace pbn

#endif
