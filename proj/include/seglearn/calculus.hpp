#pragma once

#include <span>
#include <vector>

#include "seglearn/graph.hpp"

// Difference calculus on a weighted graph. With grad u(x,y) = u(y) - u(x)
// and the edge inner product (V1,V2) = 1/2 sum_{x,y} w_xy V1 V2, the
// unnormalized Laplacian L u(x) = sum_y w_xy (u(x) - u(y)) satisfies
// (L u, v) = (grad u, grad v).

namespace seglearn {

std::vector<double> laplacian_apply(const WeightedGraph& g, std::span<const double> u);

/// Degree-normalized neighbor mean, A u = u - D^-1 L u.
std::vector<double> average(const WeightedGraph& g, std::span<const double> u);

/// L u at a single vertex.
double laplacian_at(const WeightedGraph& g, std::span<const double> u, std::size_t x);

/// ||grad u||^2, summed once per undirected edge.
double dirichlet_energy(const WeightedGraph& g, std::span<const double> u);

/// (grad u, grad v).
double cross_energy(const WeightedGraph& g, std::span<const double> u,
                    std::span<const double> v);

/// Per-vertex z_q - sum_{j != q} z_j.
StateField hat_transform(const StateField& z);

/// Inverse of hat_transform. The per-vertex map is singular for exactly
/// two classes, so k == 2 throws ParameterError.
StateField hat_inverse(const StateField& zhat);

/// sum_i ||grad u_i||^2
double l2_energy(const WeightedGraph& g, const StateField& u);

/// 1/2 sum_i ||grad u_i||^2 - sum_{i != j} (grad u_i, grad u_j),
/// the cross sum running over ordered pairs.
double segregation_energy(const WeightedGraph& g, const StateField& u);

/// (u, v) in l2(X).
double inner(std::span<const double> u, std::span<const double> v);

}  // namespace seglearn
