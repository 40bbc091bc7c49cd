#ifndef pbn_harness_hpp
#define pbn_harness_hpp

#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbn/model.hpp"
#include "pbn/parser.hpp"

namespace pbn {

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// University-style model: level(course), iq(student), grade(student,course)
// and graduates(student), whose first clause counts a-grades over all courses.
std::string generate_university_model(int students, int courses);

struct ScenarioSpec {
  enum class Kind { Missing, Classification };
  Kind kind = Kind::Missing;
  double fraction = 0.15;   // missing: share of RVs left unobserved
  std::string class_parrv;  // classification: every RV of this parRV is unobserved

  // `missing:<f>` or `class:<parrv>`; throws std::invalid_argument.
  static ScenarioSpec parse(std::string_view text);
  std::string name() const { return kind == Kind::Missing ? "missing" : "classification"; }
  std::string param() const;
};

// Forward-samples a full joint state and reveals everything except the
// scenario's unobserved RVs.
Evidence draw_scenario_evidence(const Model& model, const ScenarioSpec& scenario,
                                std::uint64_t seed);

struct BenchRow {
  std::string scenario;
  std::string param;
  int rv_count = 0;
  long n_samples = 0;
  double t_spec = 0;
  double t_sample_spec = 0;
  double t_sample_orig = 0;
  double speedup = 0;
  double overhead_fraction = 0;
  std::uint64_t seed = 0;
};

// Times one run with the original program and one with the specialized
// program (specialization time included). Throws BenchError if the two runs
// draw different state sequences.
BenchRow bench_once(std::shared_ptr<const Model> model, const Evidence& evidence, long n_samples,
                    std::uint64_t seed);

// `reps` repetitions with seeds seed, seed+1, ...; a scenario draws fresh
// evidence per repetition.
std::vector<BenchRow> run_bench(std::shared_ptr<const Model> model, const ScenarioSpec& scenario,
                                long n_samples, int reps, std::uint64_t seed);
std::vector<BenchRow> run_bench(std::shared_ptr<const Model> model, const Evidence& evidence,
                                long n_samples, int reps, std::uint64_t seed);

extern const char* const kBenchCsvHeader;
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows, bool header = true);

}  // namespace pbn

#endif
