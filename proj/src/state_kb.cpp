#include "pbn/state_kb.hpp"

#include <algorithm>
#include <sstream>

namespace pbn {

StateKB::StateKB(const Model& model, const Evidence& evidence)
    : model_(&model),
      states_(model.rv_count(), kUninitialized),
      observed_(model.rv_count(), 0),
      range_size_(model.rv_count(), 0) {
  for (int p = 0; p < static_cast<int>(model.parrvs().size()); ++p) {
    int base = model.rv_base(p);
    int n = model.rv_count_of(p);
    auto r = static_cast<std::uint8_t>(std::min<std::size_t>(model.parrv(p).range.size(), 255));
    for (int i = 0; i < n; ++i) range_size_[base + i] = r;
  }
  for (const auto& [rv, st] : evidence.assignments) {
    if (rv < 0 || rv >= size()) throw StateError("evidence refers to an unknown RV");
    if (st < 0 || st >= range_size_[rv]) {
      throw StateError("evidence state out of range for " + model.rv_name(rv));
    }
    states_[rv] = st;
    observed_[rv] = 1;
  }
  for (RvIndex i = 0; i < size(); ++i) {
    if (!observed_[i]) unobserved_.push_back(i);
  }
}

void StateKB::set_state(RvIndex rv, int state) {
  if (rv < 0 || rv >= size()) throw StateError("unknown RV index " + std::to_string(rv));
  if (observed_[rv]) {
    throw StateError("cannot set observed RV " + model_->rv_name(rv));
  }
  if (state < 0 || state >= range_size_[rv]) {
    throw StateError("state " + std::to_string(state) + " outside range of " + model_->rv_name(rv));
  }
  states_[rv] = state;
}

int StateKB::get_state(RvIndex rv) const {
  if (rv < 0 || rv >= size()) throw StateError("unknown RV index " + std::to_string(rv));
  int s = states_[rv];
  if (s == kUninitialized) throw StateError("uninitialized RV " + model_->rv_name(rv));
  return s;
}

bool StateKB::is_observed(RvIndex rv) const {
  if (rv < 0 || rv >= size()) throw StateError("unknown RV index " + std::to_string(rv));
  return observed_[rv] != 0;
}

bool truth_of(const StateKB& kb, const Literal& lit) {
  const Model& m = kb.model();
  std::vector<SymbolId> params;
  params.reserve(lit.args.size());
  for (const auto& a : lit.args) {
    if (a.is_var()) throw StateError("truth_of needs a ground literal");
    params.push_back(a.id);
  }
  if (lit.state.is_var()) throw StateError("truth_of needs a ground literal");
  RvIndex rv = m.rv_index(lit.parrv, params);
  if (rv < 0) return !lit.positive;
  bool holds = kb.get_state(rv) == m.state_index(lit.parrv, lit.state.id);
  return lit.positive ? holds : !holds;
}

std::string dump_state(const StateKB& kb) {
  const Model& m = kb.model();
  std::ostringstream os;
  for (RvIndex i = 0; i < kb.size(); ++i) {
    os << m.rv_name(i) << " = ";
    int s = kb.raw_state(i);
    if (s == StateKB::kUninitialized) {
      os << "?";
    } else {
      os << m.symbol_name(m.parrv(m.rv_parrv(i)).range[s]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pbn
