#include "seglearn/verification.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "seglearn/calculus.hpp"

namespace seglearn {

double poincare_lambda1(const WeightedGraph& g, std::span<const std::size_t> gamma,
                        double rel_tol) {
  if (gamma.empty()) throw ParameterError("boundary set is empty");
  const std::size_t n = g.size();
  std::vector<std::ptrdiff_t> slot(n, -1);
  std::vector<char> fixed(n, 0);
  for (std::size_t x : gamma) {
    if (x >= n) throw DimensionError("boundary vertex out of range");
    fixed[x] = 1;
  }
  std::ptrdiff_t m = 0;
  for (std::size_t x = 0; x < n; ++x)
    if (!fixed[x]) slot[x] = m++;
  if (m == 0) return std::numeric_limits<double>::infinity();

  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t x = 0; x < n; ++x) {
    if (fixed[x]) continue;
    trip.emplace_back(slot[x], slot[x], g.degree(x));
    const auto nb = g.neighbors(x);
    const auto wt = g.weights(x);
    for (std::size_t p = 0; p < nb.size(); ++p)
      if (!fixed[nb[p]]) trip.emplace_back(slot[x], slot[nb[p]], -wt[p]);
  }
  Eigen::SparseMatrix<double> a(m, m);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw GraphError("interior Laplacian is singular");

  Eigen::VectorXd v = Eigen::VectorXd::Ones(m).normalized();
  double mu = v.dot(a * v);
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd w = ldlt.solve(v);
    v = w.normalized();
    const double next = v.dot(a * v);
    const bool done = std::abs(next - mu) <= rel_tol * next &&
                      (a * v - next * v).norm() <= rel_tol * next;
    mu = next;
    if (done) break;
  }
  return std::sqrt(mu);
}

MaxPrincipleResult check_max_principle(const WeightedGraph& g, std::span<const std::size_t> gamma,
                                       std::span<const double> p, std::span<const double> u,
                                       double hyp_tol, double concl_tol) {
  const std::size_t n = g.size();
  if (u.size() != n || (!p.empty() && p.size() != n))
    throw DimensionError("max principle: length mismatch");
  std::vector<char> fixed(n, 0);
  for (std::size_t x : gamma) fixed[x] = 1;
  MaxPrincipleResult res;
  for (std::size_t x = 0; x < n; ++x) {
    const double pot = p.empty() ? 0.0 : p[x];
    if (pot < 0.0) throw ParameterError("potential must be nonnegative");
    const double h = fixed[x] ? u[x] : laplacian_at(g, u, x) + pot * u[x];
    if (h < -hyp_tol) {
      res.status = MaxPrincipleStatus::hypothesis_violated;
      res.vertex = x;
      res.value = h;
      res.message = "hypothesis violated at vertex " + std::to_string(x);
      return res;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (u[x] < -concl_tol) {
      res.status = MaxPrincipleStatus::principle_failure;
      res.vertex = x;
      res.value = u[x];
      res.message = "negative value at vertex " + std::to_string(x);
      return res;
    }
  }
  return res;
}

MinimizerReport check_minimizer_properties(const WeightedGraph& g, const LabelData& labels,
                                           const StateField& u, double tol) {
  require_compatible(g, labels);
  MinimizerReport rep;
  std::vector<std::vector<double>> lap(u.classes());
  for (std::size_t i = 0; i < u.classes(); ++i) lap[i] = laplacian_apply(g, u.column(i));
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (labels.is_boundary(x)) continue;
    const double d = g.degree(x);
    bool any = false;
    for (std::size_t i = 0; i < u.classes(); ++i) {
      const double lr = lap[i][x] / d;
      if (u(x, i) > 0.0) {
        any = true;
        rep.worst_support = std::max(rep.worst_support, std::abs(lr));
      } else {
        rep.worst_zero_set = std::max(rep.worst_zero_set, lr);
      }
    }
    if (!any) ++rep.uncovered;
  }
  rep.zero_set_subharmonic = rep.worst_zero_set <= tol;
  rep.harmonic_on_support = rep.worst_support <= tol;
  rep.covered = rep.uncovered == 0;
  return rep;
}

SegregationConditionReport check_segregation_conditions(const WeightedGraph& g,
                                                        const LabelData& labels,
                                                        const StateField& u, double tol) {
  require_compatible(g, labels);
  const StateField hat = hat_transform(u);
  SegregationConditionReport rep;
  for (std::size_t i = 0; i < u.classes(); ++i) {
    const std::vector<double> lap = laplacian_apply(g, hat.column(i));
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (labels.is_boundary(x)) continue;
      const double lr = lap[x] / g.degree(x);
      if (u(x, i) > 0.0) rep.worst_support = std::max(rep.worst_support, std::abs(lr));
      rep.worst_negative = std::max(rep.worst_negative, -lr);
    }
  }
  rep.harmonic_on_support = rep.worst_support <= tol;
  rep.superharmonic = rep.worst_negative <= tol;
  return rep;
}

namespace {

struct Search {
  const WeightedGraph& g;
  const LabelData& labels;
  Functional functional;
  std::size_t k;
  std::size_t grid;  // values m / grid for m = 1..grid
  std::vector<std::size_t> interior{};
  StateField state{};
  std::vector<std::vector<std::size_t>> back_edges{};  // per depth: neighbors already fixed
  std::vector<std::vector<double>> back_weights{};
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, StateField>> near{};
  std::size_t evaluated = 0;

  double edge_energy(std::size_t x, std::size_t y, double w) const {
    const auto a = state.row(x);
    const auto b = state.row(y);
    double sq = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double di = b[i] - a[i];
      sq += di * di;
      if (functional == Functional::segregation)
        for (std::size_t j = 0; j < k; ++j)
          if (j != i) cross += di * (b[j] - a[j]);
    }
    return functional == Functional::l2 ? w * sq : w * (0.5 * sq - cross);
  }

  double local(std::size_t depth) const {
    const std::size_t x = interior[depth];
    double e = 0.0;
    for (std::size_t p = 0; p < back_edges[depth].size(); ++p)
      e += edge_energy(x, back_edges[depth][p], back_weights[depth][p]);
    return e;
  }

  void record(double e) {
    ++evaluated;
    if (e > best + 1e-9) return;
    if (e < best) {
      best = e;
      std::erase_if(near, [&](const auto& c) { return c.first > best + 1e-9; });
    }
    near.emplace_back(e, state);
  }

  void dfs(std::size_t depth, double partial) {
    if (depth == interior.size()) {
      record(partial);
      return;
    }
    // Edge terms of the l2 functional are nonnegative, so partial sums
    // bound the total from below.
    const bool prune = functional == Functional::l2;
    const std::size_t x = interior[depth];
    auto row = state.row(x);
    std::fill(row.begin(), row.end(), 0.0);
    {
      const double e = partial + local(depth);
      if (!prune || e <= best + 1e-9) dfs(depth + 1, e);
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t m = 1; m <= grid; ++m) {
        std::fill(row.begin(), row.end(), 0.0);
        row[i] = static_cast<double>(m) / static_cast<double>(grid);
        const double e = partial + local(depth);
        if (!prune || e <= best + 1e-9) dfs(depth + 1, e);
      }
    }
    std::fill(row.begin(), row.end(), 0.0);
  }
};

}  // namespace

BruteForceResult brute_force(const WeightedGraph& g, const LabelData& labels,
                             Functional functional, double grid_step) {
  require_compatible(g, labels);
  const std::size_t k = labels.num_classes();
  if (k > 3) throw ParameterError("brute force supports at most three classes");
  if (labels.num_interior() > 4)
    throw ParameterError("brute force supports at most four interior vertices");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw ParameterError("grid step must lie in (0, 1]");
  const double inv = 1.0 / grid_step;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded) throw ParameterError("grid step must divide 1");

  Search s{g, labels, functional, k, static_cast<std::size_t>(rounded)};
  s.state = labels.initial_state();
  std::vector<std::ptrdiff_t> depth_of(g.size(), -1);
  for (std::size_t x = 0; x < g.size(); ++x)
    if (!labels.is_boundary(x)) {
      depth_of[x] = static_cast<std::ptrdiff_t>(s.interior.size());
      s.interior.push_back(x);
    }
  s.back_edges.resize(s.interior.size());
  s.back_weights.resize(s.interior.size());
  double base = 0.0;
  for (const WeightedEdge& e : g.edges()) {
    const auto du = depth_of[e.u];
    const auto dv = depth_of[e.v];
    if (du < 0 && dv < 0) {
      base += s.edge_energy(e.u, e.v, e.w);
      continue;
    }
    // Attach the edge to whichever endpoint is assigned last.
    const bool u_last = du > dv;
    const std::size_t at = static_cast<std::size_t>(u_last ? du : dv);
    s.back_edges[at].push_back(u_last ? e.v : e.u);
    s.back_weights[at].push_back(e.w);
  }
  s.dfs(0, base);

  BruteForceResult res;
  res.energy = s.best;
  res.evaluated = s.evaluated;
  for (auto& c : s.near)
    if (c.first <= s.best + 1e-9) res.minimizers.push_back(std::move(c.second));
  return res;
}

}  // namespace seglearn
