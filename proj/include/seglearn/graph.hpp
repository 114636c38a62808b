#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seglearn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched array lengths or class counts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Structural graph problem, e.g. a solver was handed a disconnected graph.
class GraphError : public Error {
 public:
  using Error::Error;
};

struct WeightedEdge {
  std::size_t u;
  std::size_t v;
  double w;
};

/// Undirected graph with nonnegative symmetric weights stored as CSR with
/// both directions present and neighbor lists sorted by index.
///
/// Zero weights are dropped, self loops and repeated pairs are rejected, and
/// every vertex must have positive degree. The one exception is the
/// single-vertex graph, which is admitted with degree 0.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Each undirected pair may appear once, in either orientation.
  static WeightedGraph from_edges(std::size_t n,
                                  std::span<const WeightedEdge> edges);

  /// Row-major n*n matrix; must be exactly symmetric with a zero diagonal.
  static WeightedGraph from_dense(std::size_t n, std::span<const double> w);

  std::size_t size() const { return n_; }
  std::size_t num_edges() const { return cols_.size() / 2; }

  double degree(std::size_t x) const { return degree_[x]; }
  std::span<const double> degrees() const { return degree_; }

  std::span<const std::size_t> neighbors(std::size_t x) const {
    return {cols_.data() + row_ptr_[x], row_ptr_[x + 1] - row_ptr_[x]};
  }
  std::span<const double> weights(std::size_t x) const {
    return {vals_.data() + row_ptr_[x], row_ptr_[x + 1] - row_ptr_[x]};
  }

  /// w_xy, zero when there is no edge.
  double weight(std::size_t x, std::size_t y) const;

  bool connected() const { return connected_; }

  /// Copy with every weight multiplied by c > 0.
  WeightedGraph scaled(double c) const;

  /// Undirected edge list with u < v, in row order.
  std::vector<WeightedEdge> edges() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
  std::vector<double> degree_;
  bool connected_ = true;

  void finalize();
};

/// n x k array of per-vertex class values, row-major.
class StateField {
 public:
  StateField() = default;
  StateField(std::size_t n, std::size_t k, double fill = 0.0)
      : n_(n), k_(k), values_(n * k, fill) {}

  std::size_t size() const { return n_; }
  std::size_t classes() const { return k_; }

  double& operator()(std::size_t x, std::size_t i) { return values_[x * k_ + i]; }
  double operator()(std::size_t x, std::size_t i) const { return values_[x * k_ + i]; }

  std::span<double> row(std::size_t x) { return {values_.data() + x * k_, k_}; }
  std::span<const double> row(std::size_t x) const {
    return {values_.data() + x * k_, k_};
  }

  std::vector<double> column(std::size_t i) const;
  void set_column(std::size_t i, std::span<const double> values);

  std::span<const double> data() const { return values_; }
  std::span<double> data() { return values_; }

  bool all_finite() const;

  /// Exact check: every entry >= 0 and at most one nonzero entry per row.
  bool is_segregated() const;

  /// Max-norm distance; throws DimensionError on shape mismatch.
  double max_abs_diff(const StateField& other) const;

  bool operator==(const StateField&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<double> values_;
};

enum class ClassCoverage { require_all, allow_missing };

/// Labeled boundary set with one-hot boundary data.
class LabelData {
 public:
  LabelData() = default;
  LabelData(std::size_t num_vertices, std::vector<std::size_t> boundary,
            std::vector<int> classes, std::size_t num_classes,
            ClassCoverage coverage = ClassCoverage::require_all);

  std::size_t num_vertices() const { return class_at_.size(); }
  std::size_t num_classes() const { return k_; }
  std::span<const std::size_t> boundary() const { return boundary_; }
  std::span<const int> boundary_classes() const { return classes_; }

  bool is_boundary(std::size_t x) const { return class_at_[x] >= 0; }
  /// Class of a boundary vertex, -1 for interior vertices.
  int class_at(std::size_t x) const { return class_at_[x]; }
  double phi(std::size_t x, std::size_t i) const {
    return class_at_[x] == static_cast<int>(i) ? 1.0 : 0.0;
  }

  /// phi on the boundary, zero elsewhere.
  StateField initial_state() const;
  /// Overwrite boundary rows with phi.
  void impose(StateField& u) const;

  std::size_t num_interior() const { return class_at_.size() - boundary_.size(); }

 private:
  std::size_t k_ = 0;
  std::vector<std::size_t> boundary_;
  std::vector<int> classes_;
  std::vector<int> class_at_;
};

struct SolveReport {
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> energy_trace;
};

void require_connected(const WeightedGraph& g);
void require_compatible(const WeightedGraph& g, const LabelData& labels);

}  // namespace seglearn
