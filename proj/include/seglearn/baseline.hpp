#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "seglearn/graph.hpp"
#include "seglearn/linear_solvers.hpp"

namespace seglearn {

struct LinearSolveConfig {
  double tol = 1e-8;
  std::size_t max_iter = 0;  // 0 selects 10 * n
  SolverMethod method = SolverMethod::conjugate_gradient;

  std::size_t iteration_cap(std::size_t n) const { return max_iter ? max_iter : 10 * n; }
  void validate() const;
};

/// Per-class harmonic extension of the one-hot boundary data. The residual
/// is max |L u_i(x)| / d(x) over interior vertices.
std::pair<StateField, SolveReport> laplace_learn(const WeightedGraph& g, const LabelData& labels,
                                                 const LinearSolveConfig& cfg = {});

/// L u = sum over labeled vertices of (y_j - ybar) delta_j with the degree
/// weighted mean of each class removed. Defaults to the projected Jacobi
/// iteration; pass another method for large graphs.
std::pair<StateField, SolveReport> poisson_learn(
    const WeightedGraph& g, const LabelData& labels,
    const LinearSolveConfig& cfg = {1e-8, 0, SolverMethod::jacobi});

/// Zero-based arg max per row, smallest index on ties. Boundary vertices
/// report their given class.
std::vector<int> decide_labels_argmax(const StateField& u, const LabelData& labels);

}  // namespace seglearn
