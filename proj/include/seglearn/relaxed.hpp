#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seglearn/graph.hpp"
#include "seglearn/linear_solvers.hpp"

namespace seglearn {

/// Row form of the projection onto segregated states: keep the largest
/// positive part (smallest index on ties), zero the rest.
void project_row(std::span<const double> v, std::span<double> out);

/// Row form of G: out_i = max(u_i - sum_{j != i} u_j, 0). Requires u >= 0.
void gmap_row(std::span<const double> u, std::span<double> out);

/// project_row on the interior, phi on the boundary.
StateField project_S(const StateField& v, const LabelData& labels);

/// gmap_row on the interior, phi on the boundary. Throws ParameterError on
/// a negative entry.
StateField gmap(const StateField& u, const LabelData& labels);

struct GradientProjectionConfig {
  double tol = 1e-10;
  std::size_t max_iter = 0;  // 0 selects 100 * n

  std::size_t iteration_cap(std::size_t n) const { return max_iter ? max_iter : 100 * n; }
};

/// u <- P(A u) from phi on the boundary and zero inside, until the max-norm
/// change is at most tol. The energy trace holds l2_energy of every iterate.
std::pair<StateField, SolveReport> gradient_projection_solve(
    const WeightedGraph& g, const LabelData& labels, const GradientProjectionConfig& cfg = {},
    const std::optional<StateField>& init = std::nullopt);

enum class PenaltySweep {
  /// Alternating scheme, falling back to sequential once the distance
  /// between consecutive outer iterates stops shrinking.
  automatic,
  /// Every class solved against the previous outer iterate of the others.
  alternating,
  /// Classes solved in turn, each against the latest values of the others.
  sequential,
};

struct PenalizationConfig {
  double epsilon = 1.0;
  double inner_tol = 1e-10;
  double outer_tol = 1e-8;
  std::size_t max_inner = 0;  // 0 selects 100 * n
  std::size_t max_outer = 10000;
  PenaltySweep sweep = PenaltySweep::automatic;
  SolverMethod inner_method = SolverMethod::jacobi;

  std::size_t inner_cap(std::size_t n) const { return max_inner ? max_inner : 100 * n; }
  void validate() const;
};

/// Called with (outer iteration, iterate); iteration 0 is the start state.
using OuterObserver = std::function<void(std::size_t, const StateField&)>;

struct PenalizedSolve {
  StateField state;
  /// Outer iterations, the final penalized-equation residual and whether it
  /// reached outer_tol. The energy trace holds the penalty magnitude.
  SolveReport report;
  /// Largest residual of any final inner solve.
  double inner_residual = 0.0;
  /// For each class, the potential (1/eps) sum_{j != i} u_j^2 its last
  /// inner solve used; state column i solves L u + p u = 0 against column i.
  StateField potential;
  bool used_sequential = false;
};

/// Minimizes sum_i ||grad u_i||^2 + (1/eps) sum_{i<j} (u_i^2, u_j^2) with
/// u = phi on the boundary. Outer iteration 0 is the harmonic extension
/// unless `init` is given; each inner step solves
/// (d + p) u(x) = sum_y w_xy u(y) with p built from the other classes.
PenalizedSolve penalized_solve(const WeightedGraph& g, const LabelData& labels,
                               const PenalizationConfig& cfg,
                               const std::optional<StateField>& init = std::nullopt,
                               const OuterObserver& observer = {});

/// max over interior x and classes of |L u_i + (u_i / eps) sum_{j != i} u_j^2|.
double pde_penalized_residual(const WeightedGraph& g, const LabelData& labels, const StateField& u,
                              double epsilon);

/// sum_{i != j} (u_i^2, u_j^2) over ordered pairs.
double penalty_magnitude(const StateField& u);

/// 1, 1/4, 1/16, ... with `stages` entries.
std::vector<double> default_epsilon_schedule(std::size_t stages = 10, double start = 1.0,
                                             double ratio = 0.25);

struct ContinuationResult {
  /// Final stage projected onto segregated states.
  StateField state;
  StateField unprojected;
  SolveReport report;
  std::vector<double> epsilons;
  /// Penalty magnitude after each stage.
  std::vector<double> penalty_trace;
};

/// penalized_solve along a strictly decreasing schedule, each stage warm
/// started from the previous one. `cfg.epsilon` is ignored.
ContinuationResult epsilon_continuation(const WeightedGraph& g, const LabelData& labels,
                                        std::span<const double> schedule,
                                        const PenalizationConfig& cfg = {});

}  // namespace seglearn
