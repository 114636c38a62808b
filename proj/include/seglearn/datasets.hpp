#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seglearn/graph.hpp"
#include "seglearn/graph_build.hpp"

namespace seglearn {

/// k interleaved half-moons. Class j lies on the unit upper half circle
/// centered at (j, 0); odd classes are flipped vertically and lifted by 0.3.
/// Points are emitted class by class.
PointCloud make_moons(std::size_t classes, std::size_t per_class, double noise_sd,
                      std::uint64_t seed);

struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols, row-major
};

/// IDX image file, magic 0x00000803. Errors name the byte offset.
IdxImages load_idx_images(const std::filesystem::path& path);
/// IDX label file, magic 0x00000801.
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

/// Images flattened to rows of reals in [0, 1] with the digit labels
/// attached. Throws FormatError when the counts disagree.
PointCloud mnist_cloud(const IdxImages& images, std::span<const std::uint8_t> labels);

/// Uniform sample without replacement of per_class indices from each listed
/// class, returned class by class and ascending within a class.
std::vector<std::size_t> subset_by_class(std::span<const int> labels,
                                         std::span<const int> classes,
                                         std::size_t per_class, std::uint64_t seed);

/// Rows of pc at the given indices, labels remapped through `classes`
/// (label classes[c] becomes c).
PointCloud select_points(const PointCloud& pc, std::span<const std::size_t> indices,
                         std::span<const int> classes);

/// Project onto the leading principal components.
PointCloud pca_reduce(const PointCloud& pc, std::size_t components);

/// One trial's labeled set: per class, the chosen vertex indices.
struct TrialSplit {
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> labeled;

  LabelData to_labels(std::size_t num_vertices) const;
};

/// Draw labels_per_class vertices per class from the ground truth
/// (labels in [0, num_classes)).
TrialSplit sample_split(std::span<const int> truth, std::size_t num_classes,
                        std::size_t labels_per_class, std::uint64_t seed);

/// Rows `x_0,...,x_{d-1},label`. A first row whose first token is not a
/// number is treated as a header; a column headed `predicted` is dropped.
PointCloud csv_read(const std::filesystem::path& path);

/// Writes a header row, then coordinates in shortest round-trip form, the
/// label (-1 unknown) and, when predictions are given, a `predicted` column.
void csv_write(const std::filesystem::path& path, const PointCloud& pc,
               std::span<const int> predictions = {});

}  // namespace seglearn
