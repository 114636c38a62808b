#include "seglearn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace seglearn {

namespace detail {

bool reaches_all(std::size_t n, std::span<const std::size_t> row_ptr,
                 std::span<const std::size_t> cols) {
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t x = frontier.front();
    frontier.pop();
    for (std::size_t p = row_ptr[x]; p < row_ptr[x + 1]; ++p) {
      const std::size_t y = cols[p];
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        frontier.push(y);
      }
    }
  }
  return reached == n;
}

}  // namespace detail

WeightedGraph WeightedGraph::from_edges(std::size_t n,
                                        std::span<const WeightedEdge> edges) {
  if (n == 0) throw ParameterError("graph must have at least one vertex");
  struct Entry {
    std::size_t row, col;
    double w;
  };
  std::vector<Entry> entries;
  entries.reserve(2 * edges.size());
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw DimensionError("edge endpoint out of range");
    if (!std::isfinite(e.w) || e.w < 0.0)
      throw ParameterError("edge weights must be finite and nonnegative");
    if (e.u == e.v) throw ParameterError("self loops are not allowed");
    if (e.w == 0.0) continue;
    entries.push_back({e.u, e.v, e.w});
    entries.push_back({e.v, e.u, e.w});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t p = 1; p < entries.size(); ++p) {
    if (entries[p].row == entries[p - 1].row && entries[p].col == entries[p - 1].col)
      throw ParameterError("edge (" + std::to_string(entries[p].row) + "," +
                           std::to_string(entries[p].col) + ") listed twice");
  }

  WeightedGraph g;
  g.n_ = n;
  g.row_ptr_.assign(n + 1, 0);
  g.cols_.reserve(entries.size());
  g.vals_.reserve(entries.size());
  for (const auto& e : entries) {
    ++g.row_ptr_[e.row + 1];
    g.cols_.push_back(e.col);
    g.vals_.push_back(e.w);
  }
  std::partial_sum(g.row_ptr_.begin(), g.row_ptr_.end(), g.row_ptr_.begin());
  g.finalize();
  return g;
}

WeightedGraph WeightedGraph::from_dense(std::size_t n, std::span<const double> w) {
  if (w.size() != n * n) throw DimensionError("dense weight matrix must be n*n");
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i * n + i] != 0.0) throw ParameterError("diagonal weights must be zero");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w[i * n + j] != w[j * n + i])
        throw ParameterError("weight matrix is not symmetric at (" + std::to_string(i) +
                             "," + std::to_string(j) + ")");
      if (w[i * n + j] != 0.0) edges.push_back({i, j, w[i * n + j]});
    }
  }
  return from_edges(n, edges);
}

void WeightedGraph::finalize() {
  degree_.assign(n_, 0.0);
  for (std::size_t x = 0; x < n_; ++x) {
    double d = 0.0;
    for (std::size_t p = row_ptr_[x]; p < row_ptr_[x + 1]; ++p) d += vals_[p];
    degree_[x] = d;
    if (n_ > 1 && !(d > 0.0))
      throw GraphError("vertex " + std::to_string(x) + " is isolated (zero degree)");
  }
  connected_ = detail::reaches_all(n_, row_ptr_, cols_);
}

double WeightedGraph::weight(std::size_t x, std::size_t y) const {
  const auto nb = neighbors(x);
  const auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return 0.0;
  return weights(x)[static_cast<std::size_t>(it - nb.begin())];
}

WeightedGraph WeightedGraph::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("scale must be positive");
  WeightedGraph g = *this;
  for (auto& v : g.vals_) v *= c;
  g.finalize();
  return g;
}

std::vector<WeightedEdge> WeightedGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(num_edges());
  for (std::size_t x = 0; x < n_; ++x) {
    const auto nb = neighbors(x);
    const auto wt = weights(x);
    for (std::size_t p = 0; p < nb.size(); ++p)
      if (x < nb[p]) out.push_back({x, nb[p], wt[p]});
  }
  return out;
}

std::vector<double> StateField::column(std::size_t i) const {
  std::vector<double> out(n_);
  for (std::size_t x = 0; x < n_; ++x) out[x] = values_[x * k_ + i];
  return out;
}

void StateField::set_column(std::size_t i, std::span<const double> values) {
  if (values.size() != n_ || i >= k_) throw DimensionError("column shape mismatch");
  for (std::size_t x = 0; x < n_; ++x) values_[x * k_ + i] = values[x];
}

bool StateField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool StateField::is_segregated() const {
  for (std::size_t x = 0; x < n_; ++x) {
    int nonzero = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      const double v = values_[x * k_ + i];
      if (v < 0.0 || std::isnan(v)) return false;
      if (v != 0.0) ++nonzero;
    }
    if (nonzero > 1) return false;
  }
  return true;
}

double StateField::max_abs_diff(const StateField& other) const {
  if (other.n_ != n_ || other.k_ != k_) throw DimensionError("state shape mismatch");
  double m = 0.0;
  for (std::size_t p = 0; p < values_.size(); ++p)
    m = std::max(m, std::abs(values_[p] - other.values_[p]));
  return m;
}

LabelData::LabelData(std::size_t num_vertices, std::vector<std::size_t> boundary,
                     std::vector<int> classes, std::size_t num_classes,
                     ClassCoverage coverage)
    : k_(num_classes),
      boundary_(std::move(boundary)),
      classes_(std::move(classes)),
      class_at_(num_vertices, -1) {
  if (k_ == 0) throw ParameterError("at least one class is required");
  if (boundary_.empty()) throw ParameterError("boundary set must be nonempty");
  if (boundary_.size() != classes_.size())
    throw DimensionError("boundary and class lists differ in length");
  std::vector<char> present(k_, 0);
  for (std::size_t p = 0; p < boundary_.size(); ++p) {
    const std::size_t x = boundary_[p];
    const int c = classes_[p];
    if (x >= num_vertices) throw DimensionError("boundary vertex out of range");
    if (c < 0 || static_cast<std::size_t>(c) >= k_)
      throw ParameterError("boundary class out of range");
    if (class_at_[x] >= 0)
      throw ParameterError("vertex " + std::to_string(x) + " labeled twice");
    class_at_[x] = c;
    present[static_cast<std::size_t>(c)] = 1;
  }
  if (coverage == ClassCoverage::require_all) {
    for (std::size_t i = 0; i < k_; ++i)
      if (!present[i])
        throw ParameterError("class " + std::to_string(i + 1) + " has no labeled vertex");
  }
}

StateField LabelData::initial_state() const {
  StateField u(num_vertices(), k_);
  impose(u);
  return u;
}

void LabelData::impose(StateField& u) const {
  for (std::size_t p = 0; p < boundary_.size(); ++p) {
    auto r = u.row(boundary_[p]);
    std::fill(r.begin(), r.end(), 0.0);
    r[static_cast<std::size_t>(classes_[p])] = 1.0;
  }
}

void require_connected(const WeightedGraph& g) {
  if (!g.connected()) throw GraphError("graph not connected");
}

void require_compatible(const WeightedGraph& g, const LabelData& labels) {
  if (labels.num_vertices() != g.size())
    throw DimensionError("label data and graph disagree on vertex count");
}

}  // namespace seglearn
