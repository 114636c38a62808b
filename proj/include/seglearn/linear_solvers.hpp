#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seglearn/graph.hpp"

namespace seglearn {

enum class SolverMethod { jacobi, gauss_seidel, conjugate_gradient };

SolverMethod parse_solver_method(const std::string& name);
const char* to_string(SolverMethod m);

/// Result of one scalar linear solve.
struct ScalarSolve {
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

enum class ResidualScale { absolute, per_degree };

/// Solves (L + diag(p)) u = 0 at every vertex with fixed[x] == 0, keeping
/// u unchanged where fixed[x] != 0. `potential` may be empty (p = 0).
/// Residual is max |(d + p) u - sum w u| over free vertices, optionally
/// divided by d(x). `u` holds the starting guess and receives the result.
ScalarSolve solve_dirichlet(const WeightedGraph& g, std::span<const char> fixed,
                            std::span<const double> potential, std::span<double> u,
                            SolverMethod method, double tol, std::size_t max_iter,
                            ResidualScale scale);

/// Solves L u = b on the whole graph subject to sum d(x) u(x) = 0. Requires
/// sum b = 0. Jacobi is the lazy variant u += D^-1 (b - L u) / 2, since the
/// undamped sweep oscillates on bipartite graphs. Every sweep re-projects onto
/// the mean constraint. Residual is max |b - L u| / d(x).
ScalarSolve solve_poisson(const WeightedGraph& g, std::span<const double> b, std::span<double> u,
                          SolverMethod method, double tol, std::size_t max_iter);

/// Subtract the degree-weighted mean so that sum d u = 0.
void project_zero_mean(const WeightedGraph& g, std::span<double> u);

}  // namespace seglearn
