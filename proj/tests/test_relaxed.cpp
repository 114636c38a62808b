#include <doctest.h>

#include <cmath>

#include "seglearn/baseline.hpp"
#include "seglearn/calculus.hpp"
#include "seglearn/fixtures.hpp"
#include "seglearn/relaxed.hpp"
#include "seglearn/verification.hpp"

using namespace seglearn;

namespace {

std::vector<double> row(std::initializer_list<double> v) { return v; }

std::vector<double> apply_project(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  project_row(v, out);
  return out;
}

std::vector<double> apply_gmap(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  gmap_row(v, out);
  return out;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

PenalizationConfig tight_penalty(double eps) {
  PenalizationConfig c;
  c.epsilon = eps;
  c.inner_tol = 1e-14;
  c.outer_tol = 1e-10;
  c.inner_method = SolverMethod::conjugate_gradient;
  return c;
}

}  // namespace

TEST_CASE("projection rows") {
  CHECK(apply_project(row({0.5, 0.3})) == row({0.5, 0.0}));
  CHECK(apply_project(row({-0.2, -0.1})) == row({0.0, 0.0}));
  CHECK(apply_project(row({0.4, 0.4})) == row({0.4, 0.0}));
  CHECK(apply_project(row({-1.0, 0.2, 0.7})) == row({0.0, 0.0, 0.7}));
}

TEST_CASE("G rows") {
  const auto g = apply_gmap(row({0.5, 0.3}));
  CHECK(g[0] == doctest::Approx(0.2));
  CHECK(g[1] == 0.0);
  CHECK(apply_gmap(row({0.4, 0.4})) == row({0.0, 0.0}));
  CHECK(apply_gmap(row({0.9})) == row({0.9}));
  CHECK_THROWS_AS(apply_gmap(row({0.1, -0.1})), ParameterError);
}

TEST_CASE("projection beats every segregated candidate") {
  Rng rng(40);
  for (std::size_t k = 2; k <= 4; ++k) {
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> v(k);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      const std::vector<double> p = apply_project(v);
      const double best = dist(p, v);
      // Segregated candidates: one class j holds a value c >= 0, others zero.
      for (std::size_t j = 0; j < k; ++j)
        for (int m = 0; m <= 200; ++m) {
          std::vector<double> c(k, 0.0);
          c[j] = m / 100.0;
          CHECK(best <= dist(c, v) + 1e-15);
        }
    }
  }
}

TEST_CASE("state-level maps keep the boundary") {
  const Instance c = four_cycle();
  StateField v(4, 2, 0.3);
  v(1, 1) = 0.6;
  v(0, 1) = 5.0;
  const StateField p = project_S(v, c.labels);
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == 0.0);
  CHECK(p(1, 1) == 0.6);
  CHECK(p(1, 0) == 0.0);
  CHECK(p.is_segregated());
  v(3, 0) = -1.0;
  CHECK_THROWS_AS(gmap(v, c.labels), ParameterError);
}

TEST_CASE("gradient projection fixtures") {
  const Instance c = four_cycle();
  const auto [u, rep] = gradient_projection_solve(c.graph, c.labels);
  CHECK(rep.converged);
  CHECK(u(1, 0) == 0.5);
  CHECK(u(3, 0) == 0.5);
  CHECK(u(1, 1) == 0.0);
  CHECK(l2_energy(c.graph, u) == doctest::Approx(3.0));
  CHECK(rep.energy_trace.size() == rep.iterations + 1);

  const Instance p = labeled_path(3);
  const auto [w, wrep] = gradient_projection_solve(p.graph, p.labels);
  CHECK(w(1, 0) == 0.5);
  CHECK(w(1, 1) == 0.0);
  CHECK(l2_energy(p.graph, w) == doctest::Approx(1.5));
}

TEST_CASE("gradient projection with one class is the harmonic extension") {
  Rng rng(41);
  const WeightedGraph g = random_connected_graph(20, 0.2, rng);
  const LabelData l(20, {0, 5, 11}, {0, 0, 0}, 1);
  const auto [u, rep] = gradient_projection_solve(g, l, {1e-13, 0});
  const auto [h, hrep] = laplace_learn(g, l, {1e-12, 0, SolverMethod::conjugate_gradient});
  CHECK(rep.converged);
  CHECK(u.max_abs_diff(h) <= 1e-8);
}

TEST_CASE("gradient projection iterates stay segregated and fixed points satisfy the averaging conditions") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 6 + rng.below(30);
    const std::size_t k = 2 + rng.below(3);
    const WeightedGraph g = random_connected_graph(n, 0.2, rng);
    const LabelData labels = random_labels(n, k, k + rng.below(3), rng);
    const auto [u, r] = gradient_projection_solve(g, labels, {1e-13, 0});
    CHECK(u.is_segregated());
    if (!r.converged) continue;
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> a = average(g, u.column(i));
      for (std::size_t x = 0; x < n; ++x) {
        if (labels.is_boundary(x) || u(x, i) <= 0.0) continue;
        CHECK(std::abs(u(x, i) - a[x]) <= 1e-10);
        for (std::size_t j = 0; j < k; ++j)
          CHECK(a[x] >= average(g, u.column(j))[x] - 1e-10);
      }
    }
  }
}

TEST_CASE("sandwich bound between P and G") {
  Rng rng(43);
  for (std::size_t k = 2; k <= 5; ++k)
    for (int rep = 0; rep < 1000; ++rep) {
      std::vector<double> u(k);
      for (double& x : u) x = rng.uniform();
      const double pu = dist(apply_project(u), u);
      const double gu = dist(apply_gmap(u), u);
      CHECK(pu <= gu + 1e-12);
      CHECK(gu <= static_cast<double>(k) * pu + 1e-12);
    }
}

TEST_CASE("penalization chain on the three-vertex path") {
  const Instance p = labeled_path(3);
  PenalizationConfig cfg;
  cfg.epsilon = 0.25;
  cfg.inner_tol = 1e-15;
  cfg.max_outer = 2;
  cfg.sweep = PenaltySweep::alternating;
  std::vector<double> b;
  penalized_solve(p.graph, p.labels, cfg, std::nullopt,
                  [&](std::size_t, const StateField& u) { b.push_back(u(1, 0)); });
  REQUIRE(b.size() == 3);
  CHECK(std::abs(b[0] - 0.5) <= 1e-12);
  CHECK(std::abs(b[1] - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(b[2] - 9.0 / 22.0) <= 1e-12);
}

TEST_CASE("penalized solution residual and limits") {
  const Instance p = labeled_path(3);
  const PenalizedSolve s = penalized_solve(p.graph, p.labels, tight_penalty(0.25));
  CHECK(s.report.converged);
  CHECK(pde_penalized_residual(p.graph, p.labels, s.state, 0.25) <= 1e-10);
  // b = 1 / (2 + 4 b^2): the positive root of 4 b^3 + 2 b - 1 = 0.
  const double b = s.state(1, 0);
  CHECK(std::abs(4 * b * b * b + 2 * b - 1) <= 1e-9);

  Rng rng(44);
  const WeightedGraph g = random_connected_graph(15, 0.3, rng);
  const LabelData one(15, {0, 3}, {0, 0}, 1);
  const PenalizedSolve h = penalized_solve(g, one, tight_penalty(1e-3));
  const auto [lap, lr] = laplace_learn(g, one, {1e-12, 0, SolverMethod::conjugate_gradient});
  CHECK(h.state.max_abs_diff(lap) <= 1e-8);

  const LabelData two = random_labels(15, 2, 4, rng);
  const PenalizedSolve big = penalized_solve(g, two, tight_penalty(1e6));
  const auto [lap2, lr2] = laplace_learn(g, two, {1e-12, 0, SolverMethod::conjugate_gradient});
  CHECK(big.state.max_abs_diff(lap2) <= 1e-4);
}

TEST_CASE("small epsilon converges through the sequential sweep") {
  const Instance p = labeled_path(3);
  PenalizationConfig cfg = tight_penalty(1e-3);
  cfg.sweep = PenaltySweep::alternating;
  cfg.max_outer = 200;
  const PenalizedSolve alt = penalized_solve(p.graph, p.labels, cfg);
  CHECK_FALSE(alt.report.converged);
  cfg.sweep = PenaltySweep::automatic;
  const PenalizedSolve aut = penalized_solve(p.graph, p.labels, cfg);
  CHECK(aut.report.converged);
  CHECK(aut.used_sequential);
}

TEST_CASE("penalized solutions satisfy the maximum principle") {
  Rng rng(45);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 5 + rng.below(20);
    const std::size_t k = 2 + rng.below(3);
    const WeightedGraph g = random_connected_graph(n, 0.25, rng);
    const LabelData labels = random_labels(n, k, k + rng.below(3), rng);
    const PenalizedSolve s = penalized_solve(g, labels, tight_penalty(0.05 + rng.uniform()));
    CHECK(s.report.converged);
    for (std::size_t i = 0; i < k; ++i) {
      const auto res =
          check_max_principle(g, labels.boundary(), s.potential.column(i), s.state.column(i));
      CHECK(res.passed());
    }
    for (double v : s.state.data()) CHECK(v >= -1e-10);
  }
}

TEST_CASE("epsilon continuation") {
  const Instance c = four_cycle(2.0);
  PenalizationConfig cfg = tight_penalty(1.0);
  cfg.outer_tol = 1e-9;
  const auto schedule = default_epsilon_schedule();
  CHECK(schedule.size() == 10);
  CHECK(schedule[1] == 0.25);
  const ContinuationResult res = epsilon_continuation(c.graph, c.labels, schedule, cfg);
  CHECK(res.state.is_segregated());
  for (std::size_t s = 1; s < res.penalty_trace.size(); ++s)
    CHECK(res.penalty_trace[s] < res.penalty_trace[s - 1]);
  const BruteForceResult oracle = brute_force(c.graph, c.labels, Functional::l2);
  CHECK(std::abs(l2_energy(c.graph, res.state) - oracle.energy) <= 1e-3);

  const std::vector<double> single{0.5};
  const ContinuationResult one = epsilon_continuation(c.graph, c.labels, single, cfg);
  PenalizationConfig direct = cfg;
  direct.epsilon = 0.5;
  CHECK(one.unprojected == penalized_solve(c.graph, c.labels, direct).state);

  const std::vector<double> rising{0.1, 0.2};
  CHECK_THROWS_AS(epsilon_continuation(c.graph, c.labels, rising, cfg), ParameterError);
}

TEST_CASE("penalty magnitude") {
  StateField u(2, 3);
  u(0, 0) = 1.0;
  u(0, 1) = 2.0;
  u(1, 2) = 5.0;
  CHECK(penalty_magnitude(u) == 8.0);  // ordered pairs: 2 * (1 * 4)
}
