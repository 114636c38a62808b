// seglearn command line: generate, run, benchmark, verify.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "seglearn/datasets.hpp"
#include "seglearn/harness.hpp"

using namespace seglearn;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kNoConvergence = 4;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string learner;
  std::string labels_per_class;
  std::optional<std::size_t> trials;
  bool svg = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON experiment configuration");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output directory");
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t v = 0;
    std::size_t used = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ParameterError("bad labels-per-class list '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError("empty labels-per-class list");
  return out;
}

ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.learner.empty()) cfg.learners = {o.learner};
  if (!o.labels_per_class.empty()) cfg.labels_per_class = parse_list(o.labels_per_class);
  if (o.trials) cfg.trials = *o.trials;
  cfg.validate();
  return cfg;
}

std::size_t checked_classes(const PointCloud& pc) {
  const std::size_t k = num_classes(pc);
  if (k < 2) throw ParameterError("classification needs at least 2 classes");
  return k;
}

int cmd_generate(const Options& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const PointCloud pc = load_dataset(cfg.dataset);
  const auto path = cfg.out / "points.csv";
  std::filesystem::create_directories(cfg.out);
  csv_write(path, pc);
  std::vector<std::size_t> counts(num_classes(pc), 0);
  for (int l : pc.labels) ++counts[static_cast<std::size_t>(l)];
  std::cout << "wrote " << pc.size() << " points in " << pc.dim << " dimensions to "
            << path.string() << '\n';
  for (std::size_t c = 0; c < counts.size(); ++c)
    std::cout << "  class " << c + 1 << ": " << counts[c] << '\n';
  return kOk;
}

int cmd_run(const Options& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const PointCloud pc = load_dataset(cfg.dataset);
  const std::size_t k = checked_classes(pc);
  const WeightedGraph g = build_graph(pc, cfg.graph);
  const std::size_t lpc = cfg.labels_per_class.front();
  const TrialSplit split = sample_split(pc.labels, k, lpc, trial_seed(cfg.seed, 0, lpc));
  const LabelData labels = split.to_labels(pc.size());
  const std::string& name = cfg.learners.front();
  const LearnerRun run = run_learner(name, g, labels, cfg.settings);

  std::filesystem::create_directories(cfg.out);
  csv_write(cfg.out / "predictions.csv", pc, run.predictions);
  if (o.svg) {
    write_svg(cfg.out / (name + ".svg"), pc, run.predictions, labels,
              name + ", " + std::to_string(lpc) + " labels per class");
  }
  const double acc = accuracy(run.predictions, pc.labels, labels);
  std::printf("%s  labels/class %zu  accuracy %.4f  iterations %zu  residual %.3g  %.3fs\n",
              name.c_str(), lpc, acc, run.iterations, run.residual, run.seconds);
  if (!run.converged) {
    std::cerr << "warning: " << name << " did not converge\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_benchmark(const Options& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const PointCloud pc = load_dataset(cfg.dataset);
  checked_classes(pc);
  const WeightedGraph g = build_graph(pc, cfg.graph);
  const auto outcomes = run_benchmark(cfg, pc, g);
  const auto rows = summarize(outcomes, cfg.learners);
  write_summary_csv(cfg.out / "benchmark.csv", rows);
  write_trials_csv(cfg.out / "trials.csv", outcomes);
  std::printf("%-12s %6s %9s %8s %7s\n", "learner", "labels", "mean_acc", "sd_acc", "trials");
  for (const auto& r : rows)
    std::printf("%-12s %6zu %9.4f %8.4f %7zu\n", r.learner.c_str(), r.labels_per_class,
                r.mean_acc, r.sd_acc, r.trials);
  std::size_t failed = 0;
  for (const auto& t : outcomes) failed += !t.converged;
  if (failed) {
    std::cerr << "warning: " << failed << " learner runs did not converge\n";
    return kNoConvergence;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based semi-supervised learning with segregation models"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "write the configured dataset as CSV");
  add_common(gen, o);
  auto* run = app.add_subcommand("run", "run one learner on one labeled sample");
  add_common(run, o);
  run->add_option("--learner", o.learner, "laplace | poisson | segregation | gradproj | penalize");
  run->add_option("--labels-per-class", o.labels_per_class, "labels per class (first entry used)");
  run->add_flag("--svg", o.svg, "also write an SVG scatter plot");
  auto* bench = app.add_subcommand("benchmark", "average accuracy over repeated trials");
  add_common(bench, o);
  bench->add_option("--learner", o.learner, "restrict to one learner");
  bench->add_option("--labels-per-class", o.labels_per_class, "comma-separated label rates");
  bench->add_option("--trials", o.trials, "trials per label rate");
  auto* verify = app.add_subcommand("verify", "check solvers against reference fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*run) return cmd_run(o);
    if (*bench) return cmd_benchmark(o);
    if (*verify) return run_verification_suite(std::cout) ? kOk : 1;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
