#include "seglearn/relaxed.hpp"

#include <algorithm>
#include <cmath>

#include "seglearn/calculus.hpp"

namespace seglearn {

void project_row(std::span<const double> v, std::span<double> out) {
  std::size_t best = 0;
  double top = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double pos = std::max(v[j], 0.0);
    if (pos > top) {
      top = pos;
      best = j;
    }
  }
  std::fill(out.begin(), out.end(), 0.0);
  if (top > 0.0) out[best] = top;
}

void gmap_row(std::span<const double> u, std::span<double> out) {
  const std::size_t k = u.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (u[i] < 0.0) throw ParameterError("gmap requires nonnegative input");
    double others = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) others += u[j];
    out[i] = std::max(u[i] - others, 0.0);
  }
}

namespace {

void require_state(const LabelData& labels, const StateField& u) {
  if (u.size() != labels.num_vertices() || u.classes() != labels.num_classes())
    throw DimensionError("state does not match label data");
}

template <class RowMap>
StateField map_rows(const StateField& v, const LabelData& labels, RowMap f) {
  require_state(labels, v);
  StateField out(v.size(), v.classes());
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (labels.is_boundary(x)) {
      for (std::size_t i = 0; i < v.classes(); ++i) out(x, i) = labels.phi(x, i);
    } else {
      f(v.row(x), out.row(x));
    }
  }
  return out;
}

std::vector<char> boundary_mask(const LabelData& labels) {
  std::vector<char> fixed(labels.num_vertices(), 0);
  for (std::size_t x : labels.boundary()) fixed[x] = 1;
  return fixed;
}

}  // namespace

StateField project_S(const StateField& v, const LabelData& labels) {
  return map_rows(v, labels, project_row);
}

StateField gmap(const StateField& u, const LabelData& labels) {
  return map_rows(u, labels, gmap_row);
}

std::pair<StateField, SolveReport> gradient_projection_solve(
    const WeightedGraph& g, const LabelData& labels, const GradientProjectionConfig& cfg,
    const std::optional<StateField>& init) {
  if (!(cfg.tol > 0.0)) throw ParameterError("tolerance must be positive");
  require_compatible(g, labels);
  require_connected(g);
  const std::size_t n = g.size();
  const std::size_t k = labels.num_classes();
  StateField cur = init ? project_S(*init, labels) : labels.initial_state();
  require_state(labels, cur);

  const std::size_t cap = cfg.iteration_cap(n);
  SolveReport report;
  report.energy_trace.push_back(l2_energy(g, cur));
  StateField nxt(n, k);
  std::vector<double> bar(k);
  for (std::size_t it = 0;; ++it) {
    report.iterations = it;
    if (it == cap) break;
    for (std::size_t x = 0; x < n; ++x) {
      if (labels.is_boundary(x)) {
        for (std::size_t i = 0; i < k; ++i) nxt(x, i) = labels.phi(x, i);
        continue;
      }
      std::fill(bar.begin(), bar.end(), 0.0);
      const auto nb = g.neighbors(x);
      const auto wt = g.weights(x);
      for (std::size_t p = 0; p < nb.size(); ++p) {
        const auto r = cur.row(nb[p]);
        for (std::size_t i = 0; i < k; ++i) bar[i] += wt[p] * r[i];
      }
      for (double& b : bar) b /= g.degree(x);
      project_row(bar, nxt.row(x));
    }
    const double change = cur.max_abs_diff(nxt);
    report.residual = change;
    if (change <= cfg.tol) {
      report.converged = true;
      break;
    }
    std::swap(cur, nxt);
    report.energy_trace.push_back(l2_energy(g, cur));
  }
  return {std::move(cur), std::move(report)};
}

void PenalizationConfig::validate() const {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0))
    throw ParameterError("penalization tolerances must be positive");
  if (max_outer == 0) throw ParameterError("max_outer must be at least 1");
}

double penalty_magnitude(const StateField& u) {
  double total = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) {
    const auto r = u.row(x);
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < r.size(); ++j)
        if (i != j) total += r[i] * r[i] * r[j] * r[j];
  }
  return total;
}

namespace {

double others_squared(std::span<const double> r, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j)
    if (j != i) s += r[j] * r[j];
  return s;
}

}  // namespace

double pde_penalized_residual(const WeightedGraph& g, const LabelData& labels, const StateField& u,
                              double epsilon) {
  require_compatible(g, labels);
  require_state(labels, u);
  double m = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (labels.is_boundary(x)) continue;
    const auto nb = g.neighbors(x);
    const auto wt = g.weights(x);
    const auto r = u.row(x);
    for (std::size_t i = 0; i < u.classes(); ++i) {
      double lu = g.degree(x) * r[i];
      for (std::size_t p = 0; p < nb.size(); ++p) lu -= wt[p] * u(nb[p], i);
      m = std::max(m, std::abs(lu + r[i] * others_squared(r, i) / epsilon));
    }
  }
  return m;
}

namespace {

struct InnerSolver {
  const WeightedGraph& g;
  const PenalizationConfig& cfg;
  std::vector<char> fixed;
  std::vector<double> pot;
  std::vector<double> col;

  // Solves class i against the potential built from `others` and writes
  // the result into `target`; records the potential used.
  double solve(std::size_t i, const StateField& others, StateField& target,
               StateField& potential) {
    const std::size_t n = g.size();
    for (std::size_t x = 0; x < n; ++x) {
      pot[x] = others_squared(others.row(x), i) / cfg.epsilon;
      potential(x, i) = pot[x];
      col[x] = target(x, i);
    }
    const ScalarSolve s = solve_dirichlet(g, fixed, pot, col, cfg.inner_method, cfg.inner_tol,
                                          cfg.inner_cap(n), ResidualScale::absolute);
    target.set_column(i, col);
    return s.residual;
  }
};

}  // namespace

PenalizedSolve penalized_solve(const WeightedGraph& g, const LabelData& labels,
                               const PenalizationConfig& cfg,
                               const std::optional<StateField>& init,
                               const OuterObserver& observer) {
  cfg.validate();
  require_compatible(g, labels);
  require_connected(g);
  const std::size_t n = g.size();
  const std::size_t k = labels.num_classes();

  InnerSolver inner{g, cfg, boundary_mask(labels), std::vector<double>(n, 0.0),
                    std::vector<double>(n, 0.0)};
  PenalizedSolve out;
  out.potential = StateField(n, k, 0.0);
  StateField cur;
  if (init) {
    cur = *init;
    require_state(labels, cur);
    labels.impose(cur);
  } else {
    // Harmonic extension: the inner solve with zero potential.
    cur = labels.initial_state();
    StateField zero(n, k, 0.0);
    PenalizationConfig harmonic = cfg;
    harmonic.epsilon = 1.0;
    InnerSolver h{g, harmonic, inner.fixed, inner.pot, inner.col};
    for (std::size_t i = 0; i < k; ++i) h.solve(i, zero, cur, out.potential);
  }
  if (observer) observer(0, cur);

  bool sequential = cfg.sweep == PenaltySweep::sequential;
  std::vector<double> gaps;
  StateField nxt = cur;
  SolveReport& report = out.report;
  for (std::size_t m = 0; m < cfg.max_outer; ++m) {
    double inner_res = 0.0;
    if (sequential) {
      nxt = cur;
      for (std::size_t i = 0; i < k; ++i)
        inner_res = std::max(inner_res, inner.solve(i, nxt, nxt, out.potential));
    } else {
      for (std::size_t i = 0; i < k; ++i)
        inner_res = std::max(inner_res, inner.solve(i, cur, nxt, out.potential));
    }
    const double gap = cur.max_abs_diff(nxt);
    std::swap(cur, nxt);
    out.inner_residual = inner_res;
    report.iterations = m + 1;
    report.energy_trace.push_back(penalty_magnitude(cur));
    if (observer) observer(m + 1, cur);

    report.residual = pde_penalized_residual(g, labels, cur, cfg.epsilon);
    if (report.residual <= cfg.outer_tol) {
      report.converged = true;
      break;
    }
    // The alternating map oscillates between two states when eps is small;
    // a stalled gap between consecutive iterates detects the cycle.
    gaps.push_back(gap);
    const std::size_t t = gaps.size();
    if (cfg.sweep == PenaltySweep::automatic && !sequential && t >= 4 &&
        gaps[t - 1] >= 0.9 * gaps[t - 3]) {
      sequential = true;
      out.used_sequential = true;
    }
    if (gap == 0.0) break;
  }
  out.state = std::move(cur);
  return out;
}

std::vector<double> default_epsilon_schedule(std::size_t stages, double start, double ratio) {
  if (stages == 0 || !(start > 0.0) || !(ratio > 0.0 && ratio < 1.0))
    throw ParameterError("invalid epsilon schedule parameters");
  std::vector<double> eps(stages);
  double e = start;
  for (double& v : eps) {
    v = e;
    e *= ratio;
  }
  return eps;
}

ContinuationResult epsilon_continuation(const WeightedGraph& g, const LabelData& labels,
                                        std::span<const double> schedule,
                                        const PenalizationConfig& cfg) {
  if (schedule.empty()) throw ParameterError("epsilon schedule is empty");
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    if (!(schedule[s] > 0.0)) throw ParameterError("epsilon must be positive");
    if (s > 0 && !(schedule[s] < schedule[s - 1]))
      throw ParameterError("epsilon schedule must be strictly decreasing");
  }
  ContinuationResult res;
  std::optional<StateField> warm;
  res.report.converged = true;
  for (double eps : schedule) {
    PenalizationConfig stage = cfg;
    stage.epsilon = eps;
    PenalizedSolve s = penalized_solve(g, labels, stage, warm);
    res.epsilons.push_back(eps);
    res.penalty_trace.push_back(penalty_magnitude(s.state));
    res.report.iterations += s.report.iterations;
    res.report.residual = s.report.residual;
    res.report.converged = res.report.converged && s.report.converged;
    res.report.energy_trace.push_back(l2_energy(g, s.state));
    warm = std::move(s.state);
  }
  res.unprojected = std::move(*warm);
  res.state = project_S(res.unprojected, labels);
  return res;
}

}  // namespace seglearn
