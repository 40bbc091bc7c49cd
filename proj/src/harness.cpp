#include "pbn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pbn/dependency.hpp"
#include "pbn/evaluator.hpp"
#include "pbn/samplers.hpp"
#include "pbn/specializer.hpp"

namespace pbn {

std::string generate_university_model(int students, int courses) {
  if (students < 1 || courses < 1) throw std::invalid_argument("sizes must be at least 1");
  const int k = std::max(1, static_cast<int>(std::ceil(0.35 * courses)));
  std::ostringstream os;
  os << "% university model, " << students << " students x " << courses << " courses\n";
  os << "population student = { ";
  for (int i = 1; i <= students; ++i) os << (i > 1 ? ", " : "") << 's' << i;
  os << " }.\npopulation course = { ";
  for (int i = 1; i <= courses; ++i) os << (i > 1 ? ", " : "") << 'c' << i;
  os << " }.\n\n";
  os << "parrv level(course) states { intro, advanced }.\n"
        "parrv iq(student) states { high, low }.\n"
        "parrv grade(student, course) states { a, b, c }.\n"
        "parrv graduates(student) states { yes, no }.\n\n"
        "cpd level(_C) ~ [intro:0.4, advanced:0.6].\n\n"
        "cpd iq(_S) ~ [high:0.5, low:0.5].\n\n"
        "cpd grade(S,C) ~ [a:0.7, b:0.2, c:0.1] :- iq(S,high), level(C,intro).\n"
        "cpd grade(S,C) ~ [a:0.2, b:0.2, c:0.6] :- iq(S,low), level(C,advanced).\n"
        "cpd grade(_S,_C) ~ [a:0.3, b:0.4, c:0.3].\n\n";
  os << "cpd graduates(S) ~ [yes:0.9, no:0.1] :- count(C, grade(S,C,a)) >= " << k << ".\n";
  os << "cpd graduates(S) ~ [yes:0.2, no:0.8] :- grade(S,C,c), level(C,advanced), "
        "not iq(S,high).\n"
        "cpd graduates(S) ~ [yes:0.5, no:0.5] :- count(C, grade(S,C,a)) < 2.\n"
        "cpd graduates(_S) ~ [yes:0.6, no:0.4].\n";
  return os.str();
}

ScenarioSpec ScenarioSpec::parse(std::string_view text) {
  ScenarioSpec s;
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("scenario must be missing:<f> or class:<parrv>");
  }
  std::string kind(text.substr(0, colon));
  std::string arg(text.substr(colon + 1));
  if (kind == "missing") {
    std::size_t used = 0;
    double f = 0;
    try {
      f = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty()) throw std::invalid_argument("bad fraction '" + arg + "'");
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("fraction must lie strictly between 0 and 1");
    s.kind = Kind::Missing;
    s.fraction = f;
  } else if (kind == "class") {
    if (arg.empty()) throw std::invalid_argument("class scenario needs a parrv name");
    s.kind = Kind::Classification;
    s.class_parrv = arg;
  } else {
    throw std::invalid_argument("unknown scenario kind '" + kind + "'");
  }
  return s;
}

std::string ScenarioSpec::param() const {
  if (kind == Kind::Classification) return class_parrv;
  std::ostringstream os;
  os << fraction;
  return os.str();
}

Evidence draw_scenario_evidence(const Model& model, const ScenarioSpec& scenario,
                                std::uint64_t seed) {
  const int n = model.rv_count();
  StateKB kb(model, Evidence{});
  Rng rng(seed);
  CompiledProgram prog = CompiledProgram::original(model);
  forward_sample(kb, prog, topological_order(build_dependency_graph(model)), rng);

  std::vector<char> hidden(n, 0);
  if (scenario.kind == ScenarioSpec::Kind::Missing) {
    int h = static_cast<int>(std::lround(scenario.fraction * n));
    std::vector<RvIndex> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates driven by the sampler's uniform draws.
    for (int i = 0; i < h; ++i) {
      int j = i + static_cast<int>(rng.uniform() * (n - i));
      std::swap(idx[i], idx[std::min(j, n - 1)]);
      hidden[idx[i]] = 1;
    }
  } else {
    auto p = model.find_parrv(scenario.class_parrv);
    if (!p) throw std::invalid_argument("unknown class parrv '" + scenario.class_parrv + "'");
    for (int i = 0; i < model.rv_count_of(*p); ++i) hidden[model.rv_base(*p) + i] = 1;
  }
  Evidence ev;
  for (RvIndex rv = 0; rv < n; ++rv) {
    if (!hidden[rv]) ev.assignments[rv] = kb.raw_state(rv);
  }
  return ev;
}

BenchRow bench_once(std::shared_ptr<const Model> model, const Evidence& evidence, long n_samples,
                    std::uint64_t seed) {
  const Model& m = *model;
  DependencyGraph graph = build_dependency_graph(m);
  SamplerConfig cfg;
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  std::size_t n_free = m.rv_count() - evidence.assignments.size();
  std::vector<std::uint16_t> stream_orig, stream_spec;
  stream_orig.reserve(n_free * n_samples);
  stream_spec.reserve(n_free * n_samples);

  CompiledProgram orig = CompiledProgram::original(m);
  GibbsResult r_orig = sample_marginals(m, evidence, orig, graph, cfg, {}, &stream_orig);

  auto t0 = std::chrono::steady_clock::now();
  SpecializedProgram sp = specialize(model, evidence);
  CompiledProgram spec = CompiledProgram::specialized(sp);
  double t_spec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  GibbsResult r_spec = sample_marginals(m, evidence, spec, graph, cfg, {}, &stream_spec);

  if (stream_orig != stream_spec) {
    std::size_t i = 0;
    while (i < stream_orig.size() && i < stream_spec.size() && stream_orig[i] == stream_spec[i]) ++i;
    std::ostringstream os;
    os << "sequence identity violated at draw " << i;
    if (n_free > 0 && i < stream_orig.size() && i < stream_spec.size()) {
      StateKB kb(m, evidence);
      RvIndex rv = kb.unobserved()[i % n_free];
      os << " (sweep " << i / n_free << ", " << m.rv_name(rv) << "): original state "
         << stream_orig[i] << ", specialized state " << stream_spec[i];
    } else {
      os << ": stream lengths " << stream_orig.size() << " and " << stream_spec.size();
    }
    throw BenchError(os.str());
  }

  BenchRow row;
  row.rv_count = m.rv_count();
  row.n_samples = n_samples;
  row.t_spec = t_spec;
  row.t_sample_spec = r_spec.t_sample;
  row.t_sample_orig = r_orig.t_sample;
  double with_spec = t_spec + r_spec.t_sample;
  row.speedup = with_spec > 0 ? r_orig.t_sample / with_spec : 0.0;
  row.overhead_fraction = with_spec > 0 ? t_spec / with_spec : 0.0;
  row.seed = seed;
  return row;
}

std::vector<BenchRow> run_bench(std::shared_ptr<const Model> model, const ScenarioSpec& scenario,
                                long n_samples, int reps, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  for (int r = 0; r < reps; ++r) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(r);
    Evidence ev = draw_scenario_evidence(*model, scenario, s);
    BenchRow row = bench_once(model, ev, n_samples, s);
    row.scenario = scenario.name();
    row.param = scenario.param();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchRow> run_bench(std::shared_ptr<const Model> model, const Evidence& evidence,
                                long n_samples, int reps, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  const int n = model->rv_count();
  std::ostringstream f;
  f << (n ? static_cast<double>(n - static_cast<int>(evidence.assignments.size())) / n : 0.0);
  for (int r = 0; r < reps; ++r) {
    BenchRow row = bench_once(model, evidence, n_samples, seed + static_cast<std::uint64_t>(r));
    row.scenario = "evidence";
    row.param = f.str();
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* const kBenchCsvHeader =
    "scenario,param,rv_count,n_samples,t_spec,t_sample_spec,t_sample_orig,speedup,"
    "overhead_fraction,seed";

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows, bool header) {
  if (header) os << kBenchCsvHeader << '\n';
  std::ostringstream line;
  line.precision(9);
  for (const auto& r : rows) {
    line.str("");
    line << r.scenario << ',' << r.param << ',' << r.rv_count << ',' << r.n_samples << ','
         << r.t_spec << ',' << r.t_sample_spec << ',' << r.t_sample_orig << ',' << r.speedup << ','
         << r.overhead_fraction << ',' << r.seed << '\n';
    os << line.str();
  }
}

}  // namespace pbn
