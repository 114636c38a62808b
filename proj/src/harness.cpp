#include "seglearn/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seglearn/datasets.hpp"
#include "seglearn/rng.hpp"

namespace seglearn {

using nlohmann::json;

const std::vector<std::string>& learner_names() {
  static const std::vector<std::string> names{"laplace", "poisson", "segregation", "gradproj",
                                              "penalize"};
  return names;
}

void ExperimentConfig::validate() const {
  if (learners.empty()) throw ParameterError("no learners configured");
  for (const auto& l : learners)
    if (std::find(learner_names().begin(), learner_names().end(), l) == learner_names().end())
      throw ParameterError("unknown learner '" + l + "'");
  if (labels_per_class.empty()) throw ParameterError("labels_per_class is empty");
  for (std::size_t m : labels_per_class)
    if (m == 0) throw ParameterError("labels_per_class entries must be positive");
  if (trials == 0) throw ParameterError("trials must be positive");
  if (dataset.kind == DatasetSpec::Kind::moons) {
    if (dataset.classes < 2) throw ParameterError("classification needs at least 2 classes");
    if (dataset.per_class == 0) throw ParameterError("per_class must be positive");
    if (!(dataset.noise >= 0.0)) throw ParameterError("noise must be nonnegative");
  }
  if (dataset.kind == DatasetSpec::Kind::mnist) {
    if (dataset.digits.size() < 2) throw ParameterError("classification needs at least 2 classes");
    if (dataset.per_class == 0) throw ParameterError("per_class must be positive");
  }
  if (graph.kind == GraphSpec::Kind::knn && graph.k == 0) throw ParameterError("k must be positive");
  if (graph.kind == GraphSpec::Kind::gaussian && !graph.sigma)
    throw ParameterError("gaussian graph needs sigma");
  if (graph.sigma && !(*graph.sigma > 0.0)) throw ParameterError("sigma must be positive");
  settings.laplace.validate();
  settings.poisson.validate();
  settings.segregation.validate();
  if (!(settings.gradproj.tol > 0.0)) throw ParameterError("gradproj tolerance must be positive");
  PenalizationConfig pc = settings.penalize;
  pc.epsilon = settings.epsilon_schedule.empty() ? 0.0 : settings.epsilon_schedule.front();
  pc.validate();
  for (std::size_t s = 1; s < settings.epsilon_schedule.size(); ++s)
    if (!(settings.epsilon_schedule[s] < settings.epsilon_schedule[s - 1]))
      throw ParameterError("epsilon schedule must be strictly decreasing");
}

namespace {

// Reads keys out of a JSON object, rejecting any that are never consumed.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ParameterError(where_ + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ParameterError(where_ + "." + key + " has the wrong type");
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ParameterError(where_ + "." + key + " must be a nonnegative integer");
    return v.get<std::size_t>();
  }

  const json& sub(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ParameterError("unknown key " + where_ + "." + key);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

KernelForm parse_kernel(const std::string& s) {
  if (s == "unsquared") return KernelForm::unsquared;
  if (s == "squared") return KernelForm::squared;
  throw ParameterError("unknown kernel '" + s + "'");
}

PenaltySweep parse_sweep(const std::string& s) {
  if (s == "automatic") return PenaltySweep::automatic;
  if (s == "alternating") return PenaltySweep::alternating;
  if (s == "sequential") return PenaltySweep::sequential;
  throw ParameterError("unknown penalty sweep '" + s + "'");
}

void read_linear(const json& j, const std::string& where, LinearSolveConfig& cfg) {
  Reader r(j, where);
  r.get("tol", cfg.tol);
  cfg.max_iter = r.count("max_iter", cfg.max_iter);
  if (r.has("method")) cfg.method = parse_solver_method(r.sub("method").get<std::string>());
  r.finish();
}

void read_solvers(const json& j, LearnerSettings& s) {
  Reader r(j, "solvers");
  if (r.has("laplace")) read_linear(r.sub("laplace"), "solvers.laplace", s.laplace);
  if (r.has("poisson")) read_linear(r.sub("poisson"), "solvers.poisson", s.poisson);
  if (r.has("segregation")) {
    Reader q(r.sub("segregation"), "solvers.segregation");
    q.get("tol", s.segregation.tol);
    s.segregation.max_iter = q.count("max_iter", s.segregation.max_iter);
    q.get("damping", s.segregation.damping);
    q.finish();
  }
  if (r.has("gradproj")) {
    Reader q(r.sub("gradproj"), "solvers.gradproj");
    q.get("tol", s.gradproj.tol);
    s.gradproj.max_iter = q.count("max_iter", s.gradproj.max_iter);
    q.finish();
  }
  if (r.has("penalize")) {
    Reader q(r.sub("penalize"), "solvers.penalize");
    q.get("epsilon_schedule", s.epsilon_schedule);
    q.get("inner_tol", s.penalize.inner_tol);
    q.get("outer_tol", s.penalize.outer_tol);
    s.penalize.max_inner = q.count("max_inner", s.penalize.max_inner);
    s.penalize.max_outer = q.count("max_outer", s.penalize.max_outer);
    if (q.has("sweep")) s.penalize.sweep = parse_sweep(q.sub("sweep").get<std::string>());
    if (q.has("inner_method"))
      s.penalize.inner_method = parse_solver_method(q.sub("inner_method").get<std::string>());
    q.finish();
  }
  r.finish();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Reader r(root, "config");
  if (r.has("dataset")) {
    Reader d(r.sub("dataset"), "dataset");
    std::string type = "moons";
    d.get("type", type);
    DatasetSpec& ds = cfg.dataset;
    if (type == "moons") {
      ds.kind = DatasetSpec::Kind::moons;
      ds.classes = d.count("classes", ds.classes);
      ds.per_class = d.count("per_class", ds.per_class);
      d.get("noise", ds.noise);
      d.get("seed", ds.seed);
    } else if (type == "mnist") {
      ds.kind = DatasetSpec::Kind::mnist;
      std::string images, labels;
      d.get("images", images);
      d.get("labels", labels);
      if (images.empty() || labels.empty())
        throw ParameterError("mnist dataset needs images and labels paths");
      ds.images = resolve(base_dir, images);
      ds.labels = resolve(base_dir, labels);
      d.get("digits", ds.digits);
      ds.per_class = d.count("per_class", 500);
      ds.pca = d.count("pca", 0);
      d.get("seed", ds.seed);
    } else if (type == "csv") {
      ds.kind = DatasetSpec::Kind::csv;
      std::string p;
      d.get("path", p);
      if (p.empty()) throw ParameterError("csv dataset needs a path");
      ds.path = resolve(base_dir, p);
    } else {
      throw ParameterError("unknown dataset type '" + type + "'");
    }
    d.finish();
  }
  if (r.has("graph")) {
    Reader gr(r.sub("graph"), "graph");
    std::string type = "knn";
    gr.get("type", type);
    if (type == "knn") {
      cfg.graph.kind = GraphSpec::Kind::knn;
      cfg.graph.k = gr.count("k", cfg.graph.k);
    } else if (type == "gaussian") {
      cfg.graph.kind = GraphSpec::Kind::gaussian;
    } else {
      throw ParameterError("unknown graph type '" + type + "'");
    }
    if (gr.has("sigma")) {
      double s = 0.0;
      gr.get("sigma", s);
      cfg.graph.sigma = s;
    }
    if (gr.has("kernel")) cfg.graph.kernel = parse_kernel(gr.sub("kernel").get<std::string>());
    gr.finish();
  }
  r.get("learners", cfg.learners);
  if (r.has("learner")) cfg.learners = {r.sub("learner").get<std::string>()};
  r.get("labels_per_class", cfg.labels_per_class);
  cfg.trials = r.count("trials", cfg.trials);
  r.get("seed", cfg.seed);
  if (r.has("out")) cfg.out = resolve(base_dir, r.sub("out").get<std::string>());
  if (r.has("solvers")) read_solvers(r.sub("solvers"), cfg.settings);
  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

PointCloud load_dataset(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetSpec::Kind::moons:
      return make_moons(spec.classes, spec.per_class, spec.noise, spec.seed);
    case DatasetSpec::Kind::mnist: {
      const IdxImages images = load_idx_images(spec.images);
      const std::vector<std::uint8_t> labels = load_idx_labels(spec.labels);
      const PointCloud all = mnist_cloud(images, labels);
      const auto idx = subset_by_class(all.labels, spec.digits, spec.per_class, spec.seed);
      PointCloud pc = select_points(all, idx, spec.digits);
      return spec.pca ? pca_reduce(pc, spec.pca) : pc;
    }
    case DatasetSpec::Kind::csv: {
      PointCloud pc = csv_read(spec.path);
      if (!pc.has_labels()) throw FormatError(spec.path.string() + ": no label column");
      for (int l : pc.labels)
        if (l < 0) throw FormatError(spec.path.string() + ": every point needs a label");
      return pc;
    }
  }
  throw ParameterError("unknown dataset kind");
}

std::size_t num_classes(const PointCloud& pc) {
  int top = -1;
  for (int l : pc.labels) top = std::max(top, l);
  return static_cast<std::size_t>(top + 1);
}

WeightedGraph build_graph(const PointCloud& pc, const GraphSpec& spec) {
  WeightedGraph g;
  if (spec.kind == GraphSpec::Kind::knn) {
    if (spec.k >= pc.size()) throw ParameterError("k must be smaller than the number of points");
    const double sigma = spec.sigma ? *spec.sigma : default_sigma(pc, spec.k, spec.kernel);
    g = knn_graph(pc, spec.k, sigma, spec.kernel);
  } else {
    g = gaussian_weights(pc, *spec.sigma, spec.kernel);
  }
  if (!g.connected()) throw GraphError("graph not connected; increase k");
  return g;
}

LearnerRun run_learner(const std::string& name, const WeightedGraph& g, const LabelData& labels,
                       const LearnerSettings& settings) {
  LearnerRun run;
  const auto t0 = std::chrono::steady_clock::now();
  auto take = [&run](const SolveReport& rep) {
    run.iterations = rep.iterations;
    run.residual = rep.residual;
    run.converged = rep.converged;
  };
  if (name == "laplace") {
    auto [u, rep] = laplace_learn(g, labels, settings.laplace);
    run.predictions = decide_labels_argmax(u, labels);
    take(rep);
  } else if (name == "poisson") {
    auto [u, rep] = poisson_learn(g, labels, settings.poisson);
    run.predictions = decide_labels_argmax(u, labels);
    take(rep);
  } else if (name == "segregation") {
    auto [u, rep] = segregation_solve(g, labels, settings.segregation);
    run.predictions = decide_labels_segregation(u, g, labels);
    take(rep);
  } else if (name == "gradproj") {
    auto [u, rep] = gradient_projection_solve(g, labels, settings.gradproj);
    run.predictions = decide_labels_segregation(u, g, labels);
    take(rep);
  } else if (name == "penalize") {
    ContinuationResult res =
        epsilon_continuation(g, labels, settings.epsilon_schedule, settings.penalize);
    run.predictions = decide_labels_segregation(res.state, g, labels);
    take(res.report);
  } else {
    throw ParameterError("unknown learner '" + name + "'");
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

double accuracy(std::span<const int> predictions, std::span<const int> truth,
                const LabelData& labels) {
  if (predictions.size() != truth.size() || truth.size() != labels.num_vertices())
    throw DimensionError("accuracy: length mismatch");
  std::size_t hit = 0;
  std::size_t total = 0;
  for (std::size_t x = 0; x < truth.size(); ++x) {
    if (labels.is_boundary(x)) continue;
    ++total;
    hit += predictions[x] == truth[x];
  }
  return total ? static_cast<double>(hit) / static_cast<double>(total) : 1.0;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, std::size_t labels_per_class) {
  return Rng::stream_seed(Rng::stream_seed(master, trial), labels_per_class);
}

std::vector<TrialOutcome> run_benchmark(const ExperimentConfig& cfg, const PointCloud& pc,
                                        const WeightedGraph& g) {
  cfg.validate();
  const std::size_t k = num_classes(pc);
  if (k < 2) throw ParameterError("classification needs at least 2 classes");
  std::vector<TrialOutcome> out;
  for (std::size_t lpc : cfg.labels_per_class) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialSplit split = sample_split(pc.labels, k, lpc, trial_seed(cfg.seed, t, lpc));
      const LabelData labels = split.to_labels(pc.size());
      for (const auto& name : cfg.learners) {
        const LearnerRun run = run_learner(name, g, labels, cfg.settings);
        out.push_back({t, lpc, name, accuracy(run.predictions, pc.labels, labels), run.iterations,
                       run.converged, run.seconds});
      }
    }
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialOutcome>& outcomes,
                                  const std::vector<std::string>& learners) {
  std::vector<std::size_t> rates;
  for (const auto& o : outcomes)
    if (std::find(rates.begin(), rates.end(), o.labels_per_class) == rates.end())
      rates.push_back(o.labels_per_class);
  std::vector<SummaryRow> rows;
  for (const auto& name : learners) {
    for (std::size_t lpc : rates) {
      std::vector<double> acc;
      for (const auto& o : outcomes)
        if (o.learner == name && o.labels_per_class == lpc) acc.push_back(o.accuracy);
      if (acc.empty()) continue;
      double mean = 0.0;
      for (double a : acc) mean += a;
      mean /= static_cast<double>(acc.size());
      double ss = 0.0;
      for (double a : acc) ss += (a - mean) * (a - mean);
      const double sd = acc.size() > 1 ? std::sqrt(ss / static_cast<double>(acc.size() - 1)) : 0.0;
      rows.push_back({name, lpc, mean, sd, acc.size()});
    }
  }
  return rows;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_out(path);
  out << "learner,labels_per_class,mean_acc,sd_acc,trials\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& r : rows)
    out << r.learner << ',' << r.labels_per_class << ',' << r.mean_acc << ',' << r.sd_acc << ','
        << r.trials << '\n';
}

void write_trials_csv(const std::filesystem::path& path,
                      const std::vector<TrialOutcome>& outcomes) {
  std::ofstream out = open_out(path);
  out << "trial,labels_per_class,learner,accuracy,iterations,converged,seconds\n";
  for (const auto& o : outcomes)
    out << o.trial << ',' << o.labels_per_class << ',' << o.learner << ',' << std::fixed
        << std::setprecision(6) << o.accuracy << ',' << o.iterations << ','
        << (o.converged ? 1 : 0) << ',' << o.seconds << '\n';
}

void write_svg(const std::filesystem::path& path, const PointCloud& pc,
               std::span<const int> predictions, const LabelData& labels,
               const std::string& title) {
  static constexpr std::array<const char*, 10> palette{
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const PointCloud flat = pc.dim > 2 ? pca_reduce(pc, 2) : pc;
  const std::size_t n = flat.size();
  if (predictions.size() != n) throw DimensionError("svg: prediction count mismatch");
  auto px = [&](std::size_t i) { return flat.point(i)[0]; };
  // Screen y grows downward; negate so the plot keeps the data orientation.
  auto py = [&](std::size_t i) { return flat.dim > 1 ? -flat.point(i)[1] : 0.0; };
  double x0 = px(0), x1 = px(0), y0 = py(0), y1 = py(0);
  for (std::size_t i = 1; i < n; ++i) {
    x0 = std::min(x0, px(i));
    x1 = std::max(x1, px(i));
    y0 = std::min(y0, py(i));
    y1 = std::max(y1, py(i));
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double mx = 0.05 * std::max(x1 - x0, 1e-12 * span);
  const double my = 0.05 * std::max(y1 - y0, 1e-12 * span);
  const double r = 0.006 * span;

  std::ofstream out = open_out(path);
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\""
      << x0 - mx << ' ' << y0 - my << ' ' << (x1 - x0) + 2 * mx << ' ' << (y1 - y0) + 2 * my
      << "\" preserveAspectRatio=\"xMidYMid meet\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect x=\"" << x0 - mx << "\" y=\"" << y0 - my << "\" width=\"" << (x1 - x0) + 2 * mx
      << "\" height=\"" << (y1 - y0) + 2 * my << "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const int c = predictions[i];
    const char* fill = c >= 0 ? palette[static_cast<std::size_t>(c) % palette.size()] : "#000000";
    out << "<circle cx=\"" << px(i) << "\" cy=\"" << py(i) << "\" r=\"" << r << "\" fill=\"" << fill
        << "\"/>\n";
  }
  for (std::size_t x : labels.boundary())
    out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(x) << "\" r=\"" << 2.2 * r
        << "\" fill=\"none\" stroke=\"red\" stroke-width=\"" << 0.6 * r << "\"/>\n";
  out << "</svg>\n";
}

}  // namespace seglearn
