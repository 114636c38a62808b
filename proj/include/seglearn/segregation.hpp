#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "seglearn/graph.hpp"

namespace seglearn {

struct SegregationConfig {
  double tol = 1e-10;
  std::size_t max_iter = 0;  // 0 selects 100 * n
  /// lambda in (0, 1]. Below 1 the max rule is applied to the lazy average
  /// (1 - lambda) u + lambda ubar, which has the same fixed points and keeps
  /// every iterate exactly segregated.
  double damping = 1.0;
  bool record_energy = false;

  std::size_t iteration_cap(std::size_t n) const { return max_iter ? max_iter : 100 * n; }
  void validate() const;
};

/// Called with (iteration, iterate) after every sweep.
using IterateObserver = std::function<void(std::size_t, const StateField&)>;

/// One synchronous sweep u_i <- max(ubar_i - sum_{j != i} ubar_j, 0) on the
/// interior, boundary rows left equal to phi. The competitor sum is formed
/// explicitly so that the output is exactly segregated.
StateField segregation_step(const WeightedGraph& g, const LabelData& labels, const StateField& u);

/// Iterates the sweep from `init` (default: phi on the boundary, zero inside)
/// until the max-norm change between iterates is at most tol. The returned
/// state is the last iterate whose change was measured; the reported
/// residual is its fixed-point residual.
std::pair<StateField, SolveReport> segregation_solve(
    const WeightedGraph& g, const LabelData& labels, const SegregationConfig& cfg = {},
    const std::optional<StateField>& init = std::nullopt, const IterateObserver& observer = {});

/// max over interior x and classes i of |u_i(x) - step(u)_i(x)|.
double fixed_point_residual(const WeightedGraph& g, const LabelData& labels, const StateField& u);

/// Class of the strictly positive component. Rows that vanish take the arg
/// max of the neighbor averages, smallest index on ties. Boundary vertices
/// keep their given class.
std::vector<int> decide_labels_segregation(const StateField& u, const WeightedGraph& g,
                                           const LabelData& labels);

}  // namespace seglearn
