#include "seglearn/fixtures.hpp"

#include <algorithm>

namespace seglearn {

Instance four_cycle(double w_ab) {
  const std::vector<WeightedEdge> edges{{0, 1, w_ab}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}};
  return {WeightedGraph::from_edges(4, edges), LabelData(4, {0, 2}, {0, 1}, 2)};
}

Instance labeled_path(std::size_t n) {
  if (n < 2) throw ParameterError("path needs at least two vertices");
  std::vector<WeightedEdge> edges;
  for (std::size_t x = 0; x + 1 < n; ++x) edges.push_back({x, x + 1, 1.0});
  return {WeightedGraph::from_edges(n, edges), LabelData(n, {0, n - 1}, {0, 1}, 2)};
}

WeightedGraph random_connected_graph(std::size_t n, double density, Rng& rng) {
  std::vector<char> present(n * n, 0);
  std::vector<WeightedEdge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (present[a * n + b]) return;
    present[a * n + b] = present[b * n + a] = 1;
    edges.push_back({a, b, rng.uniform(0.1, 1.0)});
  };
  for (std::size_t x = 1; x < n; ++x) add(x, rng.below(x));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.uniform() < density) add(a, b);
  return WeightedGraph::from_edges(n, edges);
}

LabelData random_labels(std::size_t n, std::size_t k, std::size_t boundary_size, Rng& rng) {
  if (boundary_size < k || boundary_size > n) throw ParameterError("invalid boundary size");
  std::vector<std::size_t> gamma = rng.sample_without_replacement(n, boundary_size);
  std::vector<int> cls(boundary_size);
  for (std::size_t p = 0; p < boundary_size; ++p)
    cls[p] = static_cast<int>(p < k ? p : rng.below(k));
  return LabelData(n, std::move(gamma), std::move(cls), k);
}

StateField random_segregated_state(const LabelData& labels, Rng& rng) {
  const std::size_t k = labels.num_classes();
  StateField u = labels.initial_state();
  for (std::size_t x = 0; x < u.size(); ++x) {
    if (labels.is_boundary(x)) continue;
    const std::size_t c = rng.below(k + 1);
    if (c < k) u(x, c) = 1.0 - rng.uniform();
  }
  return u;
}

}  // namespace seglearn
