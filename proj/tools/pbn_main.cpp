#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "pbn/dependency.hpp"
#include "pbn/evaluator.hpp"
#include "pbn/harness.hpp"
#include "pbn/model.hpp"
#include "pbn/parser.hpp"
#include "pbn/samplers.hpp"
#include "pbn/specializer.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Input problems (syntax, validation, cycles) map to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::shared_ptr<pbn::Model> load_model(const std::string& path, pbn::DependencyGraph* graph_out) {
  std::shared_ptr<pbn::Model> model;
  try {
    model = std::make_shared<pbn::Model>(pbn::parse_model(read_file(path), path));
  } catch (const pbn::ParseError& e) {
    throw InputError(e.what());
  }
  auto report = pbn::validate_model(*model);
  if (!report.ok()) {
    std::string msg = "invalid model " + path + ":";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw InputError(msg);
  }
  pbn::DependencyGraph graph = pbn::build_dependency_graph(*model);
  auto cycle = pbn::check_acyclic(graph);
  if (!cycle.empty()) {
    throw InputError(path + ": dependency cycle: " + pbn::cycle_text(*model, cycle));
  }
  if (graph_out) *graph_out = std::move(graph);
  return model;
}

pbn::Evidence load_evidence(const std::string& path, const pbn::Model& model) {
  try {
    return pbn::parse_evidence(read_file(path), model, path);
  } catch (const pbn::ParseError& e) {
    throw InputError(e.what());
  }
}

pbn::RvIndex find_rv(const pbn::Model& model, const std::string& text) {
  std::string key;
  for (char c : text) {
    if (c != ' ' && c != '\t') key += c;
  }
  for (pbn::RvIndex i = 0; i < model.rv_count(); ++i) {
    if (model.rv_name(i) == key) return i;
  }
  throw std::runtime_error("unknown target RV '" + text + "'");
}

int cmd_validate(const std::string& path, bool edges) {
  pbn::DependencyGraph graph;
  auto model = load_model(path, &graph);
  std::cout << path << ": ok (" << model->parrvs().size() << " parrvs, " << model->rv_count()
            << " RVs, acyclic)\n";
  if (edges) std::cout << pbn::dump_edges(*model, graph);
  return 0;
}

int cmd_specialize(const std::string& model_path, const std::string& ev_path,
                   const std::string& out_path) {
  auto model = load_model(model_path, nullptr);
  pbn::Evidence ev = load_evidence(ev_path, *model);
  pbn::SpecializedProgram prog = pbn::specialize(model, ev);
  std::size_t before = 0, after = 0, ground = 0;
  for (pbn::RvIndex q = 0; q < model->rv_count(); ++q) {
    before += model->cpd(model->rv_parrv(q)).clauses.size();
    after += pbn::clause_count(prog, q);
    ground += prog.uses_original(q) ? 0 : 1;
  }
  write_file(out_path, pbn::serialize_specialized(prog));
  std::cout << "t_spec " << prog.t_spec << " s\n"
            << "queries " << model->rv_count() << " (specialized " << ground << ", unchanged "
            << model->rv_count() - static_cast<int>(ground) << ")\n"
            << "clauses before " << before << ", after " << after << '\n';
  return 0;
}

int cmd_sample(const std::string& model_path, const std::string& ev_path,
               const std::vector<std::string>& targets, long n, long burn_in, std::uint64_t seed,
               bool use_spec) {
  pbn::DependencyGraph graph;
  auto model = load_model(model_path, &graph);
  pbn::Evidence ev = load_evidence(ev_path, *model);
  std::vector<pbn::RvIndex> rvs;
  for (const auto& t : targets) rvs.push_back(find_rv(*model, t));

  pbn::SamplerConfig cfg;
  cfg.n_samples = n;
  cfg.burn_in = burn_in;
  cfg.seed = seed;
  double t_spec = 0;
  std::optional<pbn::CompiledProgram> prog;
  if (use_spec) {
    pbn::SpecializedProgram sp = pbn::specialize(model, ev);
    t_spec = sp.t_spec;
    prog = pbn::CompiledProgram::specialized(sp);
  } else {
    prog = pbn::CompiledProgram::original(*model);
  }
  pbn::GibbsResult res = pbn::sample_marginals(*model, ev, *prog, graph, cfg, rvs);

  std::cout << "rv,state,estimate\n" << std::fixed << std::setprecision(6);
  for (const auto& e : res.estimates) {
    const auto& range = model->parrv(model->rv_parrv(e.rv)).range;
    for (std::size_t s = 0; s < range.size(); ++s) {
      std::cout << model->rv_name(e.rv) << ',' << model->symbol_name(range[s]) << ','
                << e.estimate(static_cast<int>(s)) << '\n';
    }
  }
  if (use_spec) std::cerr << "t_spec " << t_spec << " s\n";
  std::cerr << "t_sample " << res.t_sample << " s\n";
  return 0;
}

int cmd_gen(int students, int courses, const std::string& scenario_text, std::uint64_t seed,
            const std::string& prefix) {
  pbn::ScenarioSpec scenario = pbn::ScenarioSpec::parse(scenario_text);
  std::string text = pbn::generate_university_model(students, courses);
  pbn::Model model = pbn::parse_model(text, prefix + ".pbn");
  pbn::Evidence ev = pbn::draw_scenario_evidence(model, scenario, seed);
  write_file(prefix + ".pbn", text);
  write_file(prefix + ".ev", pbn::serialize_evidence(model, ev));
  std::cout << "wrote " << prefix << ".pbn (" << model.rv_count() << " RVs) and " << prefix
            << ".ev (" << ev.assignments.size() << " observed)\n";
  return 0;
}

int cmd_bench(const std::string& model_path, const std::string& ev_or_scenario, long n, int reps,
              std::uint64_t seed, const std::string& out_path) {
  auto model = load_model(model_path, nullptr);
  std::vector<pbn::BenchRow> rows;
  bool is_scenario = ev_or_scenario.rfind("missing:", 0) == 0 ||
                     ev_or_scenario.rfind("class:", 0) == 0;
  if (is_scenario) {
    rows = pbn::run_bench(model, pbn::ScenarioSpec::parse(ev_or_scenario), n, reps, seed);
  } else {
    rows = pbn::run_bench(model, load_evidence(ev_or_scenario, *model), n, reps, seed);
  }
  if (out_path.empty() || out_path == "-") {
    pbn::write_bench_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    pbn::write_bench_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameterized Bayesian network sampler with evidence-driven specialization"};
  app.require_subcommand(1);

  std::string model_path, ev_path, out_path;
  bool edges = false;
  auto* validate = app.add_subcommand("validate", "Check a model: totality, distributions, cycles");
  validate->add_option("model", model_path, "Model file")->required();
  validate->add_flag("--edges", edges, "Print the dependency graph as parent -> child lines");

  auto* spec = app.add_subcommand("specialize", "Specialize a model with respect to evidence");
  spec->add_option("model", model_path, "Model file")->required();
  spec->add_option("evidence", ev_path, "Evidence file")->required();
  spec->add_option("-o,--output", out_path, "Output file")->required();

  std::vector<std::string> targets;
  long n = 10000, burn_in = 0;
  std::uint64_t seed = 1;
  bool use_spec = false;
  auto* sample = app.add_subcommand("sample", "Estimate marginals with Gibbs sampling");
  sample->add_option("model", model_path, "Model file")->required();
  sample->add_option("evidence", ev_path, "Evidence file")->required();
  sample->add_option("--target", targets, "Target RV, e.g. grade(s1,c1)")->required();
  sample->add_option("-n", n, "Number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--burn-in", burn_in, "Burn-in sweeps")->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_flag("--specialize", use_spec, "Specialize the program before sampling");

  int students = 2, courses = 5;
  std::string scenario = "missing:0.15";
  std::string prefix;
  auto* gen = app.add_subcommand("gen", "Generate a university model and evidence");
  gen->add_option("--students", students, "Number of students")->check(CLI::PositiveNumber);
  gen->add_option("--courses", courses, "Number of courses")->check(CLI::PositiveNumber);
  gen->add_option("--scenario", scenario, "missing:<f> or class:<parrv>");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("-o,--output", prefix, "Output prefix (writes .pbn and .ev)")->required();

  int reps = 5;
  std::string ev_or_scenario;
  auto* bench = app.add_subcommand("bench", "Time sampling with and without specialization");
  bench->add_option("model", model_path, "Model file")->required();
  bench->add_option("evidence", ev_or_scenario, "Evidence file, missing:<f> or class:<parrv>")
      ->required();
  bench->add_option("-n", n, "Samples per run")->check(CLI::PositiveNumber);
  bench->add_option("--reps", reps, "Repetitions")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "RNG seed of the first repetition");
  bench->add_option("-o,--output", out_path, "CSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(model_path, edges);
    if (*spec) return cmd_specialize(model_path, ev_path, out_path);
    if (*sample) return cmd_sample(model_path, ev_path, targets, n, burn_in, seed, use_spec);
    if (*gen) return cmd_gen(students, courses, scenario, seed, prefix);
    if (*bench) return cmd_bench(model_path, ev_or_scenario, n, reps, seed, out_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
