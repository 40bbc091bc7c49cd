#ifndef pbn_samplers_hpp
#define pbn_samplers_hpp

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "pbn/dependency.hpp"
#include "pbn/evaluator.hpp"
#include "pbn/state_kb.hpp"

namespace pbn {

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// mt19937_64; uniform() takes the top 53 bits of one output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Inverse CDF over the entries in range order.
int draw_from(std::span<const double> dist, double u);
inline int draw_from(std::span<const double> dist, Rng& rng) { return draw_from(dist, rng.uniform()); }

struct SamplerConfig {
  long n_samples = 1000;
  long burn_in = 0;
  std::uint64_t seed = 1;
};

struct MarginalEstimate {
  RvIndex rv = -1;
  std::vector<long> counts;
  long n_samples = 0;
  double estimate(int state) const {
    return n_samples ? static_cast<double>(counts.at(state)) / static_cast<double>(n_samples) : 0.0;
  }
};

struct GibbsResult {
  std::vector<MarginalEstimate> estimates;
  double t_sample = 0.0;  // seconds spent in the sweep loop
};

// Draws every unobserved RV from its CPD, parents first.
void forward_sample(StateKB& kb, const CompiledProgram& prog, const std::vector<RvIndex>& topo,
                    Rng& rng);

// Full conditional of u given its Markov blanket. kb is left as it was.
std::vector<double> gibbs_psample(StateKB& kb, const CompiledProgram& prog,
                                  const DependencyGraph& graph, RvIndex u);

// When `stream` is non-null every drawn state is appended to it, in draw order.
GibbsResult run_gibbs(StateKB& kb, const CompiledProgram& prog, const DependencyGraph& graph,
                      const SamplerConfig& config, const std::vector<RvIndex>& targets, Rng& rng,
                      std::vector<std::uint16_t>* stream = nullptr);

// Evidence setup, forward initialization and Gibbs, seeded from config.seed.
GibbsResult sample_marginals(const Model& model, const Evidence& evidence,
                             const CompiledProgram& prog, const DependencyGraph& graph,
                             const SamplerConfig& config, const std::vector<RvIndex>& targets,
                             std::vector<std::uint16_t>* stream = nullptr);

// Exact posterior marginals by enumerating the unobserved RVs.
std::vector<std::vector<double>> exact_marginals(const Model& model, const Evidence& evidence,
                                                 const std::vector<RvIndex>& targets,
                                                 double max_states = 1e7);

}  // namespace pbn

#endif
