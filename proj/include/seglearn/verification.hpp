#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seglearn/graph.hpp"

namespace seglearn {

/// sqrt of the smallest eigenvalue of the Laplacian restricted to X \ gamma
/// (degrees kept in full). Inverse power iteration to relative tolerance
/// `rel_tol`. Infinity when gamma covers every vertex.
double poincare_lambda1(const WeightedGraph& g, std::span<const std::size_t> gamma,
                        double rel_tol = 1e-10);

enum class MaxPrincipleStatus { pass, hypothesis_violated, principle_failure };

struct MaxPrincipleResult {
  MaxPrincipleStatus status = MaxPrincipleStatus::pass;
  std::size_t vertex = 0;  // offending vertex when status != pass
  double value = 0.0;      // offending quantity at that vertex
  std::string message;

  bool passed() const { return status == MaxPrincipleStatus::pass; }
};

/// Checks the hypotheses L u + p u >= -hyp_tol on X \ gamma and u >= -hyp_tol
/// on gamma, then the conclusion min u >= -concl_tol.
MaxPrincipleResult check_max_principle(const WeightedGraph& g, std::span<const std::size_t> gamma,
                                       std::span<const double> p, std::span<const double> u,
                                       double hyp_tol = 1e-12, double concl_tol = 1e-10);

struct MinimizerReport {
  bool zero_set_subharmonic = true;  // L u_i <= tol d where u_i = 0
  bool harmonic_on_support = true;   // |L u_i| <= tol d where u_i > 0
  bool covered = true;               // some u_i > 0 at every interior vertex (advisory)
  double worst_zero_set = 0.0;       // max L u_i / d over the zero set
  double worst_support = 0.0;        // max |L u_i| / d over the support
  std::size_t uncovered = 0;

  bool required_pass() const { return zero_set_subharmonic && harmonic_on_support; }
};

/// Interior optimality conditions for the constrained l2 problem, measured
/// relative to d(x).
MinimizerReport check_minimizer_properties(const WeightedGraph& g, const LabelData& labels,
                                           const StateField& u, double tol);

struct SegregationConditionReport {
  bool harmonic_on_support = true;  // |L uhat_i| <= tol d where u_i > 0
  bool superharmonic = true;        // L uhat_i >= -tol d on X \ gamma
  double worst_support = 0.0;       // max |L uhat_i| / d over the support
  double worst_negative = 0.0;      // max -L uhat_i / d over the interior

  bool passed() const { return harmonic_on_support && superharmonic; }
};

/// Conditions satisfied by minimizers of the segregation functional, stated
/// for the hat transform uhat_i = u_i - sum_{j != i} u_j.
SegregationConditionReport check_segregation_conditions(const WeightedGraph& g,
                                                        const LabelData& labels,
                                                        const StateField& u, double tol);

enum class Functional { l2, segregation };

struct BruteForceResult {
  double energy = 0.0;
  std::vector<StateField> minimizers;  // every state within 1e-9 of `energy`
  std::size_t evaluated = 0;
};

/// Exhaustive search over segregated states: each interior vertex is either
/// zero or carries one class at a value in {step, 2 step, ..., 1}. At most
/// four interior vertices and three classes; 1/step must be an integer.
BruteForceResult brute_force(const WeightedGraph& g, const LabelData& labels,
                             Functional functional, double grid_step = 1.0 / 64.0);

}  // namespace seglearn
