#include "pbn/samplers.hpp"

#include <chrono>

namespace pbn {

int draw_from(std::span<const double> dist, double u) {
  if (dist.empty()) throw SamplerError("empty distribution");
  double c = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    c += dist[i];
    if (dist[i] > 0.0) last = static_cast<int>(i);
    if (u < c) return static_cast<int>(i);
  }
  // Rounding left u above the final cumulative sum.
  if (last < 0) throw SamplerError("distribution has no mass");
  return last;
}

void forward_sample(StateKB& kb, const CompiledProgram& prog, const std::vector<RvIndex>& topo,
                    Rng& rng) {
  for (RvIndex rv : topo) {
    if (kb.is_observed(rv)) continue;
    kb.set_state(rv, draw_from(prog.apply(kb, rv), rng));
  }
}

namespace {

void full_conditional(StateKB& kb, const CompiledProgram& prog, const DependencyGraph& graph,
                      RvIndex u, std::vector<double>& w) {
  auto prior = prog.apply(kb, u);
  const int entry = kb.raw_state(u);
  const auto& kids = graph.children[u];
  w.assign(prior.begin(), prior.end());
  double total = 0.0;
  for (int s = 0; s < static_cast<int>(w.size()); ++s) {
    if (w[s] != 0.0 && !kids.empty()) {
      kb.set_state(u, s);
      for (RvIndex c : kids) {
        w[s] *= prog.apply(kb, c)[kb.raw_state(c)];
        if (w[s] == 0.0) break;
      }
    }
    total += w[s];
  }
  if (!kids.empty() && entry >= 0) kb.set_state(u, entry);
  if (!(total > 0.0)) {
    throw SamplerError("deterministic conflict: no state of " + kb.model().rv_name(u) +
                       " has positive weight");
  }
  for (double& x : w) x /= total;
}

}  // namespace

std::vector<double> gibbs_psample(StateKB& kb, const CompiledProgram& prog,
                                  const DependencyGraph& graph, RvIndex u) {
  std::vector<double> w;
  full_conditional(kb, prog, graph, u, w);
  return w;
}

GibbsResult run_gibbs(StateKB& kb, const CompiledProgram& prog, const DependencyGraph& graph,
                      const SamplerConfig& config, const std::vector<RvIndex>& targets, Rng& rng,
                      std::vector<std::uint16_t>* stream) {
  if (config.n_samples < 1) throw SamplerError("n_samples must be at least 1");
  if (config.burn_in < 0) throw SamplerError("burn_in must be non-negative");
  GibbsResult res;
  for (RvIndex t : targets) {
    if (t < 0 || t >= kb.size()) throw SamplerError("unknown target RV");
    res.estimates.push_back({t, std::vector<long>(kb.range_size(t), 0), 0});
  }
  const auto& unobserved = kb.unobserved();
  std::vector<double> w;
  auto start = std::chrono::steady_clock::now();
  for (long it = 0; it < config.burn_in + config.n_samples; ++it) {
    for (RvIndex u : unobserved) {
      full_conditional(kb, prog, graph, u, w);
      int s = draw_from(w, rng);
      kb.set_state(u, s);
      if (stream) stream->push_back(static_cast<std::uint16_t>(s));
    }
    if (it >= config.burn_in) {
      for (auto& e : res.estimates) {
        ++e.counts[kb.get_state(e.rv)];
        ++e.n_samples;
      }
    }
  }
  res.t_sample = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

GibbsResult sample_marginals(const Model& model, const Evidence& evidence,
                             const CompiledProgram& prog, const DependencyGraph& graph,
                             const SamplerConfig& config, const std::vector<RvIndex>& targets,
                             std::vector<std::uint16_t>* stream) {
  StateKB kb(model, evidence);
  Rng rng(config.seed);
  forward_sample(kb, prog, topological_order(graph), rng);
  return run_gibbs(kb, prog, graph, config, targets, rng, stream);
}

std::vector<std::vector<double>> exact_marginals(const Model& model, const Evidence& evidence,
                                                 const std::vector<RvIndex>& targets,
                                                 double max_states) {
  StateKB kb(model, evidence);
  const auto& free = kb.unobserved();
  double space = 1.0;
  for (RvIndex rv : free) space *= kb.range_size(rv);
  if (space > max_states) {
    throw SamplerError("state space of " + std::to_string(static_cast<long double>(space)) +
                       " assignments exceeds the enumeration limit");
  }
  CompiledProgram prog = CompiledProgram::original(model);
  std::vector<std::vector<double>> out;
  for (RvIndex t : targets) {
    if (t < 0 || t >= kb.size()) throw SamplerError("unknown target RV");
    out.emplace_back(kb.range_size(t), 0.0);
  }
  for (RvIndex rv : free) kb.set_state(rv, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (RvIndex rv = 0; rv < kb.size() && w != 0.0; ++rv) w *= prog.apply(kb, rv)[kb.raw_state(rv)];
    total += w;
    for (std::size_t i = 0; i < targets.size(); ++i) out[i][kb.raw_state(targets[i])] += w;
    std::size_t k = 0;
    for (; k < free.size(); ++k) {
      int s = kb.raw_state(free[k]) + 1;
      if (s < kb.range_size(free[k])) {
        kb.set_state(free[k], s);
        break;
      }
      kb.set_state(free[k], 0);
    }
    if (k == free.size()) break;
  }
  if (!(total > 0.0)) throw SamplerError("evidence has zero probability");
  for (auto& d : out) {
    for (double& x : d) x /= total;
  }
  return out;
}

}  // namespace pbn
