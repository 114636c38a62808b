#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seglearn/baseline.hpp"
#include "seglearn/graph.hpp"
#include "seglearn/graph_build.hpp"
#include "seglearn/relaxed.hpp"
#include "seglearn/segregation.hpp"

namespace seglearn {

struct DatasetSpec {
  enum class Kind { moons, mnist, csv } kind = Kind::moons;
  // moons
  std::size_t classes = 3;
  std::size_t per_class = 300;
  double noise = 0.1;
  std::uint64_t seed = 1;
  // mnist
  std::filesystem::path images;
  std::filesystem::path labels;
  std::vector<int> digits{0, 1, 2};
  std::size_t pca = 0;  // 0 keeps raw pixels
  // csv
  std::filesystem::path path;
};

struct GraphSpec {
  enum class Kind { gaussian, knn } kind = Kind::knn;
  std::size_t k = 20;
  std::optional<double> sigma;  // default: weight exp(-1) at the median k-NN distance
  KernelForm kernel = KernelForm::unsquared;
};

struct LearnerSettings {
  LinearSolveConfig laplace{1e-8, 0, SolverMethod::conjugate_gradient};
  LinearSolveConfig poisson{1e-8, 0, SolverMethod::jacobi};
  SegregationConfig segregation{};
  GradientProjectionConfig gradproj{};
  PenalizationConfig penalize{};
  std::vector<double> epsilon_schedule = default_epsilon_schedule();
};

struct ExperimentConfig {
  DatasetSpec dataset;
  GraphSpec graph;
  std::vector<std::string> learners{"laplace", "poisson", "segregation"};
  LearnerSettings settings;
  std::vector<std::size_t> labels_per_class{2, 3, 5, 20};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  /// Throws ParameterError when a count is zero or a name is unknown.
  void validate() const;
};

/// Parses a JSON configuration. Relative paths resolve against `base_dir`.
/// Unknown keys are rejected. Throws ParameterError.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& learner_names();

/// Dataset with ground-truth labels in [0, classes).
PointCloud load_dataset(const DatasetSpec& spec);
std::size_t num_classes(const PointCloud& pc);

/// Throws GraphError("graph not connected; increase k") on a disconnected
/// result.
WeightedGraph build_graph(const PointCloud& pc, const GraphSpec& spec);

struct LearnerRun {
  std::vector<int> predictions;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double seconds = 0.0;
};

LearnerRun run_learner(const std::string& name, const WeightedGraph& g, const LabelData& labels,
                       const LearnerSettings& settings);

/// Fraction of vertices outside the boundary predicted correctly.
double accuracy(std::span<const int> predictions, std::span<const int> truth,
                const LabelData& labels);

/// Seed of the labeled set used by `trial` at a given label rate.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, std::size_t labels_per_class);

struct TrialOutcome {
  std::size_t trial = 0;
  std::size_t labels_per_class = 0;
  std::string learner;
  double accuracy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Every learner on every (trial, label rate) pair of the configuration.
/// Rows are ordered by label rate, then trial, then learner position.
std::vector<TrialOutcome> run_benchmark(const ExperimentConfig& cfg, const PointCloud& pc,
                                        const WeightedGraph& g);

struct SummaryRow {
  std::string learner;
  std::size_t labels_per_class = 0;
  double mean_acc = 0.0;
  double sd_acc = 0.0;  // sample standard deviation, 0 for a single trial
  std::size_t trials = 0;
};

/// Rows ordered by learner position in `learners`, then label rate.
std::vector<SummaryRow> summarize(const std::vector<TrialOutcome>& outcomes,
                                  const std::vector<std::string>& learners);

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
void write_trials_csv(const std::filesystem::path& path,
                      const std::vector<TrialOutcome>& outcomes);

/// 800 x 800 scatter plot colored by predicted class, boundary points
/// ringed in red. Clouds of dimension above two are drawn on their first
/// two principal components.
void write_svg(const std::filesystem::path& path, const PointCloud& pc,
               std::span<const int> predictions, const LabelData& labels,
               const std::string& title);

/// Runs the fixture checks, printing one line per check. True when all pass.
bool run_verification_suite(std::ostream& out);

}  // namespace seglearn
