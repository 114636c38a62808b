#include "seglearn/baseline.hpp"

#include <algorithm>

namespace seglearn {

void LinearSolveConfig::validate() const {
  if (!(tol > 0.0)) throw ParameterError("solver tolerance must be positive");
}

std::pair<StateField, SolveReport> laplace_learn(const WeightedGraph& g, const LabelData& labels,
                                                 const LinearSolveConfig& cfg) {
  cfg.validate();
  require_compatible(g, labels);
  require_connected(g);
  const std::size_t n = g.size();
  const std::size_t k = labels.num_classes();
  std::vector<char> fixed(n, 0);
  for (std::size_t x : labels.boundary()) fixed[x] = 1;

  StateField u = labels.initial_state();
  SolveReport report;
  report.converged = true;
  std::vector<double> col(n);
  for (std::size_t i = 0; i < k; ++i) {
    col = u.column(i);
    const ScalarSolve s = solve_dirichlet(g, fixed, {}, col, cfg.method, cfg.tol,
                                          cfg.iteration_cap(n), ResidualScale::per_degree);
    u.set_column(i, col);
    report.iterations = std::max(report.iterations, s.iterations);
    report.residual = std::max(report.residual, s.residual);
    report.converged = report.converged && s.converged;
  }
  return {std::move(u), std::move(report)};
}

std::pair<StateField, SolveReport> poisson_learn(const WeightedGraph& g, const LabelData& labels,
                                                 const LinearSolveConfig& cfg) {
  cfg.validate();
  require_compatible(g, labels);
  require_connected(g);
  const std::size_t n = g.size();
  const std::size_t k = labels.num_classes();
  const auto gamma = labels.boundary();
  const auto cls = labels.boundary_classes();

  std::vector<double> ybar(k, 0.0);
  for (int c : cls) ybar[static_cast<std::size_t>(c)] += 1.0;
  for (double& v : ybar) v /= static_cast<double>(gamma.size());

  StateField u(n, k, 0.0);
  SolveReport report;
  report.converged = true;
  std::vector<double> b(n), col(n);
  for (std::size_t i = 0; i < k; ++i) {
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t p = 0; p < gamma.size(); ++p)
      b[gamma[p]] += (cls[p] == static_cast<int>(i) ? 1.0 : 0.0) - ybar[i];
    std::fill(col.begin(), col.end(), 0.0);
    const ScalarSolve s = solve_poisson(g, b, col, cfg.method, cfg.tol, cfg.iteration_cap(n));
    u.set_column(i, col);
    report.iterations = std::max(report.iterations, s.iterations);
    report.residual = std::max(report.residual, s.residual);
    report.converged = report.converged && s.converged;
  }
  return {std::move(u), std::move(report)};
}

std::vector<int> decide_labels_argmax(const StateField& u, const LabelData& labels) {
  if (u.size() != labels.num_vertices() || u.classes() != labels.num_classes())
    throw DimensionError("state does not match label data");
  std::vector<int> out(u.size(), 0);
  for (std::size_t x = 0; x < u.size(); ++x) {
    if (labels.is_boundary(x)) {
      out[x] = labels.class_at(x);
      continue;
    }
    const auto r = u.row(x);
    out[x] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

}  // namespace seglearn
