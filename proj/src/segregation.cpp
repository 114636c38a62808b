#include "seglearn/segregation.hpp"

#include <algorithm>
#include <cmath>

#include "seglearn/calculus.hpp"

namespace seglearn {

void SegregationConfig::validate() const {
  if (!(tol > 0.0)) throw ParameterError("segregation tolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw ParameterError("damping must lie in (0, 1]");
}

namespace {

// Neighbor means of every class at x, written to `bar`.
void row_average(const WeightedGraph& g, const StateField& u, std::size_t x,
                 std::vector<double>& bar) {
  const std::size_t k = u.classes();
  std::fill(bar.begin(), bar.end(), 0.0);
  const auto nb = g.neighbors(x);
  const auto wt = g.weights(x);
  for (std::size_t p = 0; p < nb.size(); ++p) {
    const auto r = u.row(nb[p]);
    for (std::size_t i = 0; i < k; ++i) bar[i] += wt[p] * r[i];
  }
  const double d = g.degree(x);
  for (double& v : bar) v /= d;
}

// out_i = max(z_i - sum_{j != i} z_j, 0). For z >= 0 the sum of the others
// is at least any single other entry in floating point, so two positive
// outputs are impossible.
void max_rule(std::span<const double> z, std::span<double> out) {
  const std::size_t k = z.size();
  for (std::size_t i = 0; i < k; ++i) {
    double others = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) others += z[j];
    out[i] = std::max(z[i] - others, 0.0);
  }
}

void sweep(const WeightedGraph& g, const LabelData& labels, const StateField& u, double lambda,
           StateField& out) {
  const std::size_t k = u.classes();
  std::vector<double> bar(k);
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (labels.is_boundary(x)) {
      for (std::size_t i = 0; i < k; ++i) out(x, i) = labels.phi(x, i);
      continue;
    }
    row_average(g, u, x, bar);
    if (lambda != 1.0) {
      const auto r = u.row(x);
      for (std::size_t i = 0; i < k; ++i) bar[i] = (1.0 - lambda) * r[i] + lambda * bar[i];
    }
    max_rule(bar, out.row(x));
  }
}

void require_state(const WeightedGraph& g, const LabelData& labels, const StateField& u) {
  require_compatible(g, labels);
  if (u.size() != g.size() || u.classes() != labels.num_classes())
    throw DimensionError("state does not match graph and labels");
}

}  // namespace

StateField segregation_step(const WeightedGraph& g, const LabelData& labels, const StateField& u) {
  require_state(g, labels, u);
  StateField out(u.size(), u.classes());
  sweep(g, labels, u, 1.0, out);
  return out;
}

double fixed_point_residual(const WeightedGraph& g, const LabelData& labels, const StateField& u) {
  const StateField s = segregation_step(g, labels, u);
  double m = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (labels.is_boundary(x)) continue;
    for (std::size_t i = 0; i < u.classes(); ++i) m = std::max(m, std::abs(s(x, i) - u(x, i)));
  }
  return m;
}

std::pair<StateField, SolveReport> segregation_solve(const WeightedGraph& g,
                                                     const LabelData& labels,
                                                     const SegregationConfig& cfg,
                                                     const std::optional<StateField>& init,
                                                     const IterateObserver& observer) {
  cfg.validate();
  require_compatible(g, labels);
  require_connected(g);
  StateField cur = init ? *init : labels.initial_state();
  require_state(g, labels, cur);
  for (double v : cur.data())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ParameterError("initial state must be finite and nonnegative");
  labels.impose(cur);

  const std::size_t cap = cfg.iteration_cap(g.size());
  StateField nxt(cur.size(), cur.classes());
  SolveReport report;
  if (cfg.record_energy) report.energy_trace.push_back(segregation_energy(g, cur));
  for (std::size_t it = 0;; ++it) {
    if (it == cap) {
      report.iterations = it;
      break;
    }
    sweep(g, labels, cur, cfg.damping, nxt);
    const double change = cur.max_abs_diff(nxt);
    if (change <= cfg.tol) {
      report.iterations = it;
      report.converged = true;
      break;
    }
    std::swap(cur, nxt);
    if (cfg.record_energy) report.energy_trace.push_back(segregation_energy(g, cur));
    if (observer) observer(it + 1, cur);
  }
  report.residual = fixed_point_residual(g, labels, cur);
  return {std::move(cur), std::move(report)};
}

std::vector<int> decide_labels_segregation(const StateField& u, const WeightedGraph& g,
                                           const LabelData& labels) {
  require_state(g, labels, u);
  const std::size_t k = u.classes();
  std::vector<int> out(u.size(), 0);
  std::vector<double> bar(k);
  for (std::size_t x = 0; x < u.size(); ++x) {
    if (labels.is_boundary(x)) {
      out[x] = labels.class_at(x);
      continue;
    }
    const auto r = u.row(x);
    const auto best = std::max_element(r.begin(), r.end());
    if (*best > 0.0) {
      out[x] = static_cast<int>(best - r.begin());
      continue;
    }
    row_average(g, u, x, bar);
    out[x] = static_cast<int>(std::max_element(bar.begin(), bar.end()) - bar.begin());
  }
  return out;
}

}  // namespace seglearn
