#include "seglearn/graph_build.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace seglearn {

void PointCloud::validate() const {
  if (dim == 0) throw FormatError("point cloud has zero dimension");
  if (coords.size() % dim != 0) throw FormatError("coordinate count is not a multiple of dim");
  if (size() < 2) throw FormatError("point cloud needs at least two points");
  for (double c : coords)
    if (!std::isfinite(c)) throw FormatError("non-finite coordinate");
  if (!labels.empty() && labels.size() != size())
    throw FormatError("label count does not match point count");
}

namespace {

double squared_distance(const PointCloud& pc, std::size_t i, std::size_t j) {
  const double* a = pc.point(i);
  const double* b = pc.point(j);
  double s = 0.0;
  for (std::size_t c = 0; c < pc.dim; ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("sigma must be positive, got " + std::to_string(sigma));
}

// For each point, its k nearest others sorted by (distance, index).
std::vector<std::vector<std::pair<double, std::size_t>>> nearest(const PointCloud& pc,
                                                                  std::size_t k) {
  const std::size_t n = pc.size();
  std::vector<std::vector<std::pair<double, std::size_t>>> out(n);
  std::vector<std::pair<double, std::size_t>> row;
  row.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.emplace_back(squared_distance(pc, i, j), j);
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    out[i].assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

}  // namespace

double gaussian_weight(double distance, double sigma, KernelForm form) {
  check_sigma(sigma);
  const double r = form == KernelForm::squared ? distance * distance : distance;
  return std::exp(-r / (2.0 * sigma * sigma));
}

WeightedGraph gaussian_weights(const PointCloud& pc, double sigma, KernelForm form) {
  check_sigma(sigma);
  pc.validate();
  const std::size_t n = pc.size();
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = gaussian_weight(std::sqrt(squared_distance(pc, i, j)), sigma, form);
      if (w > 0.0) edges.push_back({i, j, w});
    }
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph knn_graph(const PointCloud& pc, std::size_t k, double sigma, KernelForm form) {
  check_sigma(sigma);
  pc.validate();
  const std::size_t n = pc.size();
  if (k < 1 || k >= n)
    throw ParameterError("k must satisfy 1 <= k < n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  const auto nn = nearest(pc, k);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [d2, j] : nn[i]) pairs.emplace_back(std::min(i, j), std::max(i, j));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const double w = gaussian_weight(std::sqrt(squared_distance(pc, i, j)), sigma, form);
    if (w > 0.0) edges.push_back({i, j, w});
  }
  return WeightedGraph::from_edges(n, edges);
}

double median_knn_distance(const PointCloud& pc, std::size_t k) {
  pc.validate();
  if (k < 1 || k >= pc.size()) throw ParameterError("k must satisfy 1 <= k < n");
  const auto nn = nearest(pc, k);
  std::vector<double> d;
  d.reserve(pc.size() * k);
  for (const auto& row : nn)
    for (const auto& [d2, j] : row) d.push_back(std::sqrt(d2));
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

double default_sigma(const PointCloud& pc, std::size_t k, KernelForm form) {
  double m = median_knn_distance(pc, k);
  if (!(m > 0.0)) m = 1.0;
  return form == KernelForm::squared ? m / std::sqrt(2.0) : std::sqrt(m / 2.0);
}

bool is_connected(const WeightedGraph& g) {
  const std::size_t n = g.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t x = frontier.front();
    frontier.pop();
    const auto nb = g.neighbors(x);
    const auto wt = g.weights(x);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (!(wt[p] > 0.0) || seen[nb[p]]) continue;
      seen[nb[p]] = 1;
      ++reached;
      frontier.push(nb[p]);
    }
  }
  return reached == n;
}

}  // namespace seglearn
