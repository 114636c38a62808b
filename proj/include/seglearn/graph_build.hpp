#pragma once

#include <cstddef>
#include <vector>

#include "seglearn/graph.hpp"

namespace seglearn {

/// n points in R^d stored row-major, with optional ground-truth labels
/// (-1 for unknown) used only for scoring.
struct PointCloud {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<int> labels;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  const double* point(std::size_t i) const { return coords.data() + i * dim; }
  bool has_labels() const { return labels.size() == size() && !labels.empty(); }

  /// Throws FormatError unless coordinates are finite, n >= 2 and the
  /// label column (if any) has one entry per point.
  void validate() const;
};

enum class KernelForm {
  unsquared,  // exp(-|x - y| / (2 sigma^2))
  squared,    // exp(-|x - y|^2 / (2 sigma^2))
};

double gaussian_weight(double distance, double sigma, KernelForm form);

/// Complete graph on the cloud with Gaussian weights. Pairs whose weight
/// underflows to zero are left unconnected.
WeightedGraph gaussian_weights(const PointCloud& pc, double sigma,
                               KernelForm form = KernelForm::unsquared);

/// Union-symmetrized k-nearest-neighbor graph with Gaussian edge weights.
/// Distance ties go to the lower vertex index.
WeightedGraph knn_graph(const PointCloud& pc, std::size_t k, double sigma,
                        KernelForm form = KernelForm::unsquared);

/// Median distance from each point to its k nearest neighbors, pooled over
/// all points.
double median_knn_distance(const PointCloud& pc, std::size_t k);

/// Bandwidth giving weight exp(-1) at the median k-NN distance.
double default_sigma(const PointCloud& pc, std::size_t k, KernelForm form);

/// Breadth-first traversal from vertex 0 over positive-weight edges.
bool is_connected(const WeightedGraph& g);

}  // namespace seglearn
