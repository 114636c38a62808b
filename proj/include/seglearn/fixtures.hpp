#pragma once

#include <cstddef>
#include <vector>

#include "seglearn/graph.hpp"
#include "seglearn/rng.hpp"

// Small reference instances shared by the verification command and tests.

namespace seglearn {

struct Instance {
  WeightedGraph graph;
  LabelData labels;
};

/// Cycle A-B-C-D-A with unit weights, A labeled class 0 and C class 1.
/// `w_ab` overrides the weight of edge A-B.
Instance four_cycle(double w_ab = 1.0);

/// Path on n vertices with unit weights, first vertex class 0 and last
/// vertex class 1.
Instance labeled_path(std::size_t n);

/// Connected graph: a random spanning tree plus each remaining pair with
/// probability `density`, weights uniform on [0.1, 1].
WeightedGraph random_connected_graph(std::size_t n, double density, Rng& rng);

/// Random boundary of `boundary_size` distinct vertices covering all k
/// classes (boundary_size >= k).
LabelData random_labels(std::size_t n, std::size_t k, std::size_t boundary_size, Rng& rng);

/// Nonnegative segregated state equal to phi on the boundary; each interior
/// row is zero with probability 1/(k+1), otherwise one random class holds a
/// uniform value in (0, 1].
StateField random_segregated_state(const LabelData& labels, Rng& rng);

}  // namespace seglearn
