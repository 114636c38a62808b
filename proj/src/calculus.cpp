#include "seglearn/calculus.hpp"

namespace seglearn {

namespace {

void check_length(const WeightedGraph& g, std::span<const double> u) {
  if (u.size() != g.size())
    throw DimensionError("function has length " + std::to_string(u.size()) +
                         ", graph has " + std::to_string(g.size()) + " vertices");
}

void check_state(const WeightedGraph& g, const StateField& u) {
  if (u.size() != g.size()) throw DimensionError("state and graph sizes differ");
}

}  // namespace

double laplacian_at(const WeightedGraph& g, std::span<const double> u, std::size_t x) {
  const auto nb = g.neighbors(x);
  const auto wt = g.weights(x);
  double s = 0.0;
  for (std::size_t p = 0; p < nb.size(); ++p) s += wt[p] * (u[x] - u[nb[p]]);
  return s;
}

std::vector<double> laplacian_apply(const WeightedGraph& g, std::span<const double> u) {
  check_length(g, u);
  std::vector<double> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = laplacian_at(g, u, x);
  return out;
}

std::vector<double> average(const WeightedGraph& g, std::span<const double> u) {
  check_length(g, u);
  std::vector<double> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto nb = g.neighbors(x);
    const auto wt = g.weights(x);
    double s = 0.0;
    for (std::size_t p = 0; p < nb.size(); ++p) s += wt[p] * u[nb[p]];
    // Single-vertex graph: no neighbors, keep the value.
    out[x] = nb.empty() ? u[x] : s / g.degree(x);
  }
  return out;
}

double cross_energy(const WeightedGraph& g, std::span<const double> u,
                    std::span<const double> v) {
  check_length(g, u);
  check_length(g, v);
  double s = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto nb = g.neighbors(x);
    const auto wt = g.weights(x);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const std::size_t y = nb[p];
      if (y <= x) continue;
      s += wt[p] * (u[y] - u[x]) * (v[y] - v[x]);
    }
  }
  return s;
}

double dirichlet_energy(const WeightedGraph& g, std::span<const double> u) {
  return cross_energy(g, u, u);
}

StateField hat_transform(const StateField& z) {
  const std::size_t k = z.classes();
  StateField out(z.size(), k);
  for (std::size_t x = 0; x < z.size(); ++x) {
    const auto r = z.row(x);
    for (std::size_t q = 0; q < k; ++q) {
      double others = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != q) others += r[j];
      out(x, q) = r[q] - others;
    }
  }
  return out;
}

StateField hat_inverse(const StateField& zhat) {
  const std::size_t k = zhat.classes();
  if (k == 2) throw ParameterError("hat transform is singular for two classes");
  StateField out(zhat.size(), k);
  // zhat_q = 2 z_q - S and sum_q zhat_q = (2 - k) S.
  const double denom = 2.0 - static_cast<double>(k);
  for (std::size_t x = 0; x < zhat.size(); ++x) {
    const auto r = zhat.row(x);
    double total = 0.0;
    for (double v : r) total += v;
    const double s = total / denom;
    for (std::size_t q = 0; q < k; ++q) out(x, q) = 0.5 * (r[q] + s);
  }
  return out;
}

double l2_energy(const WeightedGraph& g, const StateField& u) {
  check_state(g, u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.classes(); ++i) s += dirichlet_energy(g, u.column(i));
  return s;
}

double segregation_energy(const WeightedGraph& g, const StateField& u) {
  check_state(g, u);
  const std::size_t k = u.classes();
  std::vector<std::vector<double>> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = u.column(i);
  double diagonal = 0.0;
  double off = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    diagonal += dirichlet_energy(g, cols[i]);
    for (std::size_t j = i + 1; j < k; ++j) off += cross_energy(g, cols[i], cols[j]);
  }
  return 0.5 * diagonal - 2.0 * off;
}

double inner(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionError("inner product length mismatch");
  double s = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) s += u[x] * v[x];
  return s;
}

}  // namespace seglearn
