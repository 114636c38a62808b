// Acceptance gate: one PASS/FAIL line per criterion. Arguments, when given,
// select criteria by number. Exit status is 1 if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seglearn/baseline.hpp"
#include "seglearn/calculus.hpp"
#include "seglearn/fixtures.hpp"
#include "seglearn/harness.hpp"
#include "seglearn/relaxed.hpp"
#include "seglearn/segregation.hpp"
#include "seglearn/verification.hpp"

#ifndef SEGLEARN_SOURCE_DIR
#define SEGLEARN_SOURCE_DIR "."
#endif

using namespace seglearn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

// Solutions gathered while the suite runs, rechecked by criteria 8 and 11.
struct FixedPoint {
  WeightedGraph g;
  LabelData labels;
  StateField u;
};
struct ScalarSolution {
  WeightedGraph g;
  std::vector<std::size_t> gamma;
  std::vector<double> potential;  // empty for harmonic solutions
  std::vector<double> u;
};
std::vector<FixedPoint> fixed_points;
std::vector<ScalarSolution> scalar_solutions;

SegregationConfig tight_segregation() {
  SegregationConfig c;
  c.tol = 1e-12;
  return c;
}

PenalizationConfig tight_penalty(double eps) {
  PenalizationConfig c;
  c.epsilon = eps;
  c.inner_tol = 1e-14;
  c.outer_tol = 1e-10;
  c.inner_method = SolverMethod::conjugate_gradient;
  return c;
}

std::vector<std::size_t> gamma_of(const LabelData& labels) {
  return {labels.boundary().begin(), labels.boundary().end()};
}

void record_harmonic(const WeightedGraph& g, const LabelData& labels) {
  const auto [u, r] = laplace_learn(g, labels, {1e-13, 0, SolverMethod::conjugate_gradient});
  for (std::size_t i = 0; i < labels.num_classes(); ++i)
    scalar_solutions.push_back({g, gamma_of(labels), {}, u.column(i)});
}

void record_penalized(const WeightedGraph& g, const LabelData& labels, const PenalizedSolve& s) {
  for (std::size_t i = 0; i < labels.num_classes(); ++i)
    scalar_solutions.push_back({g, gamma_of(labels), s.potential.column(i), s.state.column(i)});
}

double norm(std::span<const double> u) { return std::sqrt(inner(u, u)); }

bool exactly_segregated(const StateField& u) {
  for (std::size_t x = 0; x < u.size(); ++x) {
    std::size_t positive = 0;
    for (std::size_t i = 0; i < u.classes(); ++i) {
      if (!(u(x, i) >= 0.0)) return false;
      positive += u(x, i) != 0.0;
    }
    if (positive > 1) return false;
  }
  return true;
}

// Toy cycle A-B-C-D: interior B (1) and D (3).
Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const Instance c = four_cycle();
  const BruteForceResult bf = brute_force(c.graph, c.labels, Functional::l2);
  o.require(bf.minimizers.size() == 4, fmt("%zu l2 minimizers", bf.minimizers.size()));
  std::set<std::pair<int, int>> patterns;
  for (const StateField& m : bf.minimizers) {
    o.require(std::abs(l2_energy(c.graph, m) - 3.0) <= 1e-9, "minimizer energy differs from 3");
    int cls[2] = {-1, -1};
    for (int s = 0; s < 2; ++s) {
      const std::size_t x = s == 0 ? 1 : 3;
      for (std::size_t i = 0; i < 2; ++i) {
        if (m(x, i) == 0.0) continue;
        o.require(m(x, i) == 0.5 && cls[s] < 0, "interior value is not a single 1/2");
        cls[s] = static_cast<int>(i);
      }
      o.require(cls[s] >= 0, "interior vertex left empty");
    }
    patterns.insert({cls[0], cls[1]});
  }
  o.require(patterns.size() == 4, "minimizer patterns are not the four class choices");

  const auto [u, r] = gradient_projection_solve(c.graph, c.labels);
  const double e = l2_energy(c.graph, u);
  o.require(r.converged, "gradient projection did not converge");
  o.require(e <= 3.0 + 1e-6, fmt("gradient projection energy %.9g", e));
  bool matches = false;
  for (const StateField& m : bf.minimizers) matches = matches || u.max_abs_diff(m) <= 1e-6;
  o.require(matches, "gradient projection limit is not an oracle minimizer");
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, fmt("runtime %.3f s", secs));
  if (o.pass)
    o.detail = fmt("4 minimizers at energy 3, gradient projection energy %.12g, %.3f s", e, secs);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const Instance c = four_cycle();
  const BruteForceResult bf = brute_force(c.graph, c.labels, Functional::segregation);
  o.require(bf.minimizers.size() == 1, fmt("%zu minimizers", bf.minimizers.size()));
  o.require(std::abs(bf.energy - 2.0) <= 1e-9, fmt("oracle energy %.12g", bf.energy));
  if (!bf.minimizers.empty()) {
    const StateField& m = bf.minimizers.front();
    for (std::size_t i = 0; i < 2; ++i)
      o.require(m(1, i) == 0.0 && m(3, i) == 0.0, "oracle minimizer has nonzero interior");
  }
  Rng rng(2002);
  double worst = 0.0;
  for (int s = 0; s < 20 && !bf.minimizers.empty(); ++s) {
    const StateField init = random_segregated_state(c.labels, rng);
    const auto [u, r] = segregation_solve(c.graph, c.labels, tight_segregation(), init);
    o.require(r.converged, "segregation solve did not converge");
    worst = std::max(worst, u.max_abs_diff(bf.minimizers.front()));
    fixed_points.push_back({c.graph, c.labels, u});
  }
  o.require(worst <= 1e-8, fmt("distance to oracle %.3g", worst));
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, fmt("runtime %.3f s", secs));
  if (o.pass)
    o.detail = fmt("unique minimizer at energy 2, 20 starts within %.3g, %.3f s", worst, secs);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Instance p = labeled_path(4);
  const auto [u, r] = segregation_solve(p.graph, p.labels, tight_segregation());
  o.require(r.converged, "segregation solve did not converge");
  const double eb = std::abs(u(1, 0) - 1.0 / 3.0);
  const double ec = std::abs(u(2, 1) - 1.0 / 3.0);
  o.require(eb <= 1e-8 && ec <= 1e-8, fmt("errors %.3g %.3g", eb, ec));
  o.require(u(1, 1) == 0.0 && u(2, 0) == 0.0, "competitor entries are not zero");
  fixed_points.push_back({p.graph, p.labels, u});
  if (o.pass) o.detail = fmt("u1(B)=%.15g u2(C)=%.15g", u(1, 0), u(2, 1));
  return o;
}

Outcome criterion4() {
  Outcome o;
  Rng rng(2004);
  std::size_t iterates = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 6 + rng.below(45);
    const std::size_t k = 2 + rng.below(4);
    const WeightedGraph g = random_connected_graph(n, 3.0 / static_cast<double>(n), rng);
    const LabelData labels = random_labels(n, k, k + rng.below(std::min<std::size_t>(5, n - k)), rng);
    bool ok = exactly_segregated(labels.initial_state());
    const auto [u, r] = segregation_solve(g, labels, tight_segregation(), std::nullopt,
                                          [&](std::size_t, const StateField& it) {
                                            ++iterates;
                                            ok = ok && exactly_segregated(it);
                                          });
    o.require(ok && exactly_segregated(u), fmt("graph %d: iterate not exactly segregated", rep));
    if (r.converged) fixed_points.push_back({g, labels, u});
  }
  if (o.pass) o.detail = fmt("100 graphs, %zu iterates exactly disjoint and nonnegative", iterates);
  return o;
}

// Interleaved order of the alternating penalization iterates.
bool chain_holds(const std::vector<StateField>& it, double slack, std::string& why) {
  for (std::size_t a = 0; a < it.size(); ++a)
    for (std::size_t b = 0; b < it.size(); ++b) {
      const bool a_even = a % 2 == 0;
      const bool b_even = b % 2 == 0;
      // hi >= lo is required for: even a < even b, odd b < odd a, even a vs odd b.
      bool ordered = false;
      if (a_even && b_even) ordered = a < b;
      else if (!a_even && !b_even) ordered = b < a;
      else ordered = a_even;
      if (!ordered) continue;
      const StateField& hi = it[a];
      const StateField& lo = it[b];
      for (std::size_t x = 0; x < hi.size(); ++x)
        for (std::size_t i = 0; i < hi.classes(); ++i)
          if (hi(x, i) < lo(x, i) - slack || lo(x, i) < -slack || hi(x, i) > 1.0 + slack) {
            why = fmt("u_%zu < u_%zu at vertex %zu class %zu", a, b, x, i);
            return false;
          }
    }
  return true;
}

Outcome criterion5() {
  Outcome o;
  Rng rng(2005);
  double worst_res = 0.0;
  for (int rep = 0; rep < 50 && o.pass; ++rep) {
    const std::size_t n = 6 + rng.below(25);
    const std::size_t k = 2 + rng.below(3);
    const WeightedGraph g = random_connected_graph(n, 0.3, rng);
    const LabelData labels = random_labels(n, k, k + rng.below(3), rng);
    const double eps = 0.25 + rng.uniform(0.0, 1.75);

    PenalizationConfig alt = tight_penalty(eps);
    alt.sweep = PenaltySweep::alternating;
    alt.max_outer = 10;
    alt.outer_tol = 1e-300;
    std::vector<StateField> iterates;
    penalized_solve(g, labels, alt, std::nullopt,
                    [&](std::size_t, const StateField& u) { iterates.push_back(u); });
    std::string why;
    o.require(iterates.size() == 11, "expected ten outer iterations");
    o.require(chain_holds(iterates, 1e-12, why), fmt("instance %d: ", rep) + why);

    const PenalizedSolve s = penalized_solve(g, labels, tight_penalty(eps));
    const double res = pde_penalized_residual(g, labels, s.state, eps);
    worst_res = std::max(worst_res, res);
    o.require(s.report.converged && res <= 1e-8, fmt("instance %d: residual %.3g", rep, res));
    record_penalized(g, labels, s);
    record_harmonic(g, labels);
  }

  const Instance p = labeled_path(3);
  PenalizationConfig hand = tight_penalty(0.25);
  hand.inner_tol = 1e-15;
  hand.sweep = PenaltySweep::alternating;
  hand.max_outer = 2;
  std::vector<double> b;
  penalized_solve(p.graph, p.labels, hand, std::nullopt,
                  [&](std::size_t, const StateField& u) { b.push_back(u(1, 0)); });
  o.require(b.size() == 3, "hand chain too short");
  if (b.size() == 3) {
    o.require(std::abs(b[1] - 1.0 / 3.0) <= 1e-12, fmt("u_1(B)=%.17g", b[1]));
    o.require(std::abs(b[2] - 9.0 / 22.0) <= 1e-12, fmt("u_2(B)=%.17g", b[2]));
  }
  if (o.pass)
    o.detail = fmt("50 instances chained, worst residual %.3g; path u_1(B)=%.15g u_2(B)=%.15g",
                   worst_res, b[1], b[2]);
  return o;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(2006);
  int found = 0;
  int missed = 0;
  double worst = 0.0;
  for (int attempt = 0; found < 10 && attempt < 1000; ++attempt) {
    const std::size_t k = 2 + rng.below(2);
    const std::size_t interior = 2 + rng.below(3);
    const std::size_t n = k + interior;
    const WeightedGraph g = random_connected_graph(n, 0.5, rng);
    const LabelData labels = random_labels(n, k, k, rng);
    const BruteForceResult bf = brute_force(g, labels, Functional::l2);
    if (bf.minimizers.size() != 1) continue;
    ++found;
    PenalizationConfig cfg = tight_penalty(1.0);
    cfg.outer_tol = 1e-9;
    const ContinuationResult res =
        epsilon_continuation(g, labels, default_epsilon_schedule(), cfg);
    const double gap = std::abs(l2_energy(g, res.state) - bf.energy);
    worst = std::max(worst, gap);
    missed += gap > 1e-3;
    record_harmonic(g, labels);
  }
  o.require(found == 10, fmt("only %d instances with a unique oracle minimizer", found));
  o.require(missed == 0, fmt("%d of 10 instances end more than 1e-3 above the oracle", missed));
  o.detail += fmt("%s10 instances, worst energy gap %.3g", o.pass ? "" : "; ", worst);
  return o;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Outcome criterion7() {
  Outcome o;
  Rng rng(2007);
  for (std::size_t k = 2; k <= 5; ++k)
    for (int rep = 0; rep < 1000; ++rep) {
      std::vector<double> v(k), pv(k);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      project_row(v, pv);
      // Segregated candidates: empty support, or class i alone at any value
      // (its best value is max(v_i, 0)).
      double best = distance(v, std::vector<double>(k, 0.0));
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> c(k, 0.0);
        c[i] = std::max(v[i], 0.0);
        best = std::min(best, distance(v, c));
      }
      o.require(distance(v, pv) <= best + 1e-12, fmt("k=%zu row %d not minimal", k, rep));

      std::vector<double> u(k), pu(k), gu(k);
      for (double& x : u) x = rng.uniform();
      project_row(u, pu);
      gmap_row(u, gu);
      const double dp = distance(pu, u);
      const double dg = distance(gu, u);
      o.require(dp <= dg + 1e-12 && dg <= static_cast<double>(k) * dp + 1e-12,
                fmt("k=%zu row %d: sandwich %.3g %.3g", k, rep, dp, dg));
    }
  if (o.pass) o.detail = "4000 rows optimal, sandwich holds";
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(2008);
  double margin = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 8 + rng.below(40);
    const WeightedGraph g = random_connected_graph(n, 0.2, rng);
    const auto gamma = rng.sample_without_replacement(n, 1 + rng.below(4));
    const double lam = poincare_lambda1(g, gamma);
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> u(n);
      for (double& v : u) v = rng.uniform(-1.0, 1.0);
      for (std::size_t x : gamma) u[x] = 0.0;
      const double lhs = lam * norm(u);
      const double rhs = std::sqrt(dirichlet_energy(g, u));
      margin = std::min(margin, rhs - lhs);
      o.require(lhs <= rhs + 1e-10, fmt("graph %d: Poincare inequality fails", rep));
    }
    const LabelData labels = random_labels(n, 2, std::max<std::size_t>(2, gamma.size()), rng);
    record_harmonic(g, labels);
  }
  std::size_t checked = 0;
  for (const ScalarSolution& s : scalar_solutions) {
    const MaxPrincipleResult r = check_max_principle(s.g, s.gamma, s.potential, s.u);
    ++checked;
    o.require(r.passed(), "maximum principle: " + r.message);
  }
  if (o.pass)
    o.detail = fmt("20000 Poincare samples (min margin %.3g), %zu solutions satisfy the"
                   " maximum principle",
                   margin, checked);
  return o;
}

std::map<std::pair<std::string, std::size_t>, double> benchmark_means(const ExperimentConfig& cfg,
                                                                      double& secs) {
  const auto t0 = Clock::now();
  const PointCloud pc = load_dataset(cfg.dataset);
  const WeightedGraph g = build_graph(pc, cfg.graph);
  const auto outcomes = run_benchmark(cfg, pc, g);
  secs = seconds_since(t0);
  std::map<std::pair<std::string, std::size_t>, double> mean;
  for (const SummaryRow& row : summarize(outcomes, cfg.learners))
    mean[{row.learner, row.labels_per_class}] = 100.0 * row.mean_acc;
  return mean;
}

Outcome criterion9() {
  Outcome o;
  const ExperimentConfig cfg = load_config(SEGLEARN_SOURCE_DIR "/configs/moons_benchmark.json");
  double secs = 0.0;
  auto m = benchmark_means(cfg, secs);
  std::string table;
  for (std::size_t lpc : {2, 3, 5, 20}) {
    const double lap = m[{"laplace", lpc}];
    const double poi = m[{"poisson", lpc}];
    const double seg = m[{"segregation", lpc}];
    table += fmt(" [%zu: laplace %.2f poisson %.2f segregation %.2f]", lpc, lap, poi, seg);
    if (lpc == 20) {
      const double spread = std::max({lap, poi, seg}) - std::min({lap, poi, seg});
      o.require(spread <= 5.0, fmt("spread %.2f at 20 labels/class", spread));
    } else {
      o.require(seg - lap >= 10.0,
                fmt("segregation - laplace = %.2f points at %zu labels/class", seg - lap, lpc));
      o.require(std::abs(seg - poi) <= 5.0,
                fmt("|segregation - poisson| = %.2f points at %zu labels/class",
                    std::abs(seg - poi), lpc));
    }
  }
  o.require(secs < 300.0, fmt("runtime %.1f s", secs));
  o.detail += fmt("%s%s; %.1f s", o.pass ? "" : ";", table.c_str(), secs);
  return o;
}

Outcome criterion10() {
  Outcome o;
  ExperimentConfig cfg = load_config(SEGLEARN_SOURCE_DIR "/configs/mnist_benchmark.json");
  cfg.labels_per_class = {5, 100};
  double secs = 0.0;
  auto m = benchmark_means(cfg, secs);
  const double lap5 = m[{"laplace", 5}];
  const double poi5 = m[{"poisson", 5}];
  const double seg5 = m[{"segregation", 5}];
  o.require(seg5 >= 85.0 && poi5 >= 85.0,
            fmt("at 5 labels/class segregation %.2f, poisson %.2f", seg5, poi5));
  o.require(std::min(seg5, poi5) - lap5 >= 15.0,
            fmt("laplace only %.2f points below at 5 labels/class", std::min(seg5, poi5) - lap5));
  for (const char* name : {"laplace", "poisson", "segregation"})
    o.require(m[{name, 100}] >= 90.0, fmt("%s %.2f at 100 labels/class", name, m[{name, 100}]));
  o.require(secs < 600.0, fmt("runtime %.1f s", secs));
  o.detail += fmt("%s [5: laplace %.2f poisson %.2f segregation %.2f] [100: laplace %.2f"
                  " poisson %.2f segregation %.2f]; %.1f s",
                  o.pass ? "" : ";", lap5, poi5, seg5, m[{"laplace", 100}], m[{"poisson", 100}],
                  m[{"segregation", 100}], secs);
  return o;
}

Outcome criterion11() {
  Outcome o;
  // Fixed points on larger instances than criterion 4 uses.
  Rng rng(2011);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 50 + rng.below(150);
    const std::size_t k = 2 + rng.below(4);
    const WeightedGraph g = random_connected_graph(n, 4.0 / static_cast<double>(n), rng);
    const LabelData labels = random_labels(n, k, k + rng.below(10), rng);
    const auto [u, r] = segregation_solve(g, labels, tight_segregation());
    if (r.converged) fixed_points.push_back({g, labels, u});
  }
  double support = 0.0;
  double negative = 0.0;
  for (const FixedPoint& f : fixed_points) {
    const SegregationConditionReport c = check_segregation_conditions(f.g, f.labels, f.u, 1e-8);
    support = std::max(support, c.worst_support);
    negative = std::max(negative, c.worst_negative);
    o.require(c.passed(), fmt("support %.3g, negative part %.3g", c.worst_support,
                              c.worst_negative));
  }
  o.require(fixed_points.size() >= 100, fmt("only %zu fixed points", fixed_points.size()));
  if (o.pass)
    o.detail = fmt("%zu fixed points, max |L uhat|/d on support %.3g, max negative part %.3g",
                   fixed_points.size(), support, negative);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"toy four-cycle l2 ground truth", criterion1},
      {"segregation uniqueness on the toy four-cycle", criterion2},
      {"path fixed point", criterion3},
      {"exact disjointness and nonnegativity", criterion4},
      {"penalization order and residual", criterion5},
      {"epsilon continuation reaches the oracle", criterion6},
      {"projection optimality and sandwich", criterion7},
      {"Poincare inequality and maximum principle", criterion8},
      {"half-moons low-label comparison", criterion9},
      {"MNIST {0,1,2} comparison", criterion10},
      {"hat-transform conditions at fixed points", criterion11},
  };
  std::set<std::size_t> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::strtoul(argv[a], nullptr, 10));

  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (!selected.empty() && !selected.count(c + 1)) continue;
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", c + 1, criteria[c].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
