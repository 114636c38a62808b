#include "seglearn/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seglearn {

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "jacobi") return SolverMethod::jacobi;
  if (name == "gauss_seidel" || name == "gs") return SolverMethod::gauss_seidel;
  if (name == "conjugate_gradient" || name == "cg") return SolverMethod::conjugate_gradient;
  throw ParameterError("unknown solver method '" + name + "'");
}

const char* to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::jacobi: return "jacobi";
    case SolverMethod::gauss_seidel: return "gauss_seidel";
    case SolverMethod::conjugate_gradient: return "conjugate_gradient";
  }
  return "?";
}

namespace {

double neighbor_sum(const WeightedGraph& g, std::span<const double> u, std::size_t x) {
  const auto nb = g.neighbors(x);
  const auto wt = g.weights(x);
  double s = 0.0;
  for (std::size_t p = 0; p < nb.size(); ++p) s += wt[p] * u[nb[p]];
  return s;
}

struct DirichletProblem {
  const WeightedGraph& g;
  std::span<const char> fixed;
  std::span<const double> potential;
  ResidualScale scale;

  double diag(std::size_t x) const {
    return g.degree(x) + (potential.empty() ? 0.0 : potential[x]);
  }
  double residual_at(std::span<const double> u, std::size_t x) const {
    const double r = std::abs(diag(x) * u[x] - neighbor_sum(g, u, x));
    return scale == ResidualScale::per_degree ? r / g.degree(x) : r;
  }
  double residual(std::span<const double> u) const {
    double m = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x)
      if (!fixed[x]) m = std::max(m, residual_at(u, x));
    return m;
  }
};

ScalarSolve dirichlet_jacobi(const DirichletProblem& pb, std::span<double> u, double tol,
                             std::size_t max_iter) {
  const std::size_t n = pb.g.size();
  std::vector<double> next(u.begin(), u.end());
  ScalarSolve out;
  for (std::size_t it = 0;; ++it) {
    double res = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (pb.fixed[x]) continue;
      const double s = neighbor_sum(pb.g, u, x);
      const double dg = pb.diag(x);
      double r = std::abs(dg * u[x] - s);
      if (pb.scale == ResidualScale::per_degree) r /= pb.g.degree(x);
      res = std::max(res, r);
      next[x] = s / dg;
    }
    out.iterations = it;
    out.residual = res;
    if (res <= tol) {
      out.converged = true;
      return out;
    }
    if (it == max_iter) return out;
    std::copy(next.begin(), next.end(), u.begin());
  }
}

ScalarSolve dirichlet_gauss_seidel(const DirichletProblem& pb, std::span<double> u, double tol,
                                   std::size_t max_iter) {
  ScalarSolve out;
  for (std::size_t it = 0;; ++it) {
    out.iterations = it;
    out.residual = pb.residual(u);
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    if (it == max_iter) return out;
    for (std::size_t x = 0; x < pb.g.size(); ++x)
      if (!pb.fixed[x]) u[x] = neighbor_sum(pb.g, u, x) / pb.diag(x);
  }
}

ScalarSolve dirichlet_cg(const DirichletProblem& pb, std::span<double> u, double tol,
                         std::size_t max_iter) {
  const std::size_t n = pb.g.size();
  std::vector<double> r(n, 0.0), dir(n, 0.0), ad(n, 0.0);
  // Operator restricted to free vertices; fixed entries of v are ignored.
  auto apply_free = [&](const std::vector<double>& v, std::vector<double>& outv) {
    for (std::size_t x = 0; x < n; ++x) {
      if (pb.fixed[x]) {
        outv[x] = 0.0;
        continue;
      }
      const auto nb = pb.g.neighbors(x);
      const auto wt = pb.g.weights(x);
      double s = 0.0;
      for (std::size_t p = 0; p < nb.size(); ++p)
        if (!pb.fixed[nb[p]]) s += wt[p] * v[nb[p]];
      outv[x] = pb.diag(x) * v[x] - s;
    }
  };
  auto scaled_max = [&](const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (pb.fixed[x]) continue;
      double a = std::abs(v[x]);
      if (pb.scale == ResidualScale::per_degree) a /= pb.g.degree(x);
      m = std::max(m, a);
    }
    return m;
  };
  auto true_residual = [&] {
    for (std::size_t x = 0; x < n; ++x)
      r[x] = pb.fixed[x] ? 0.0 : neighbor_sum(pb.g, u, x) - pb.diag(x) * u[x];
    return scaled_max(r);
  };

  ScalarSolve out;
  std::size_t it = 0;
  double best = true_residual();
  // Restarts from the true residual guard against drift of the recurrence.
  for (int restart = 0; restart < 20 && best > tol && it < max_iter; ++restart) {
    dir = r;
    double rr = 0.0;
    for (double v : r) rr += v * v;
    while (it < max_iter) {
      apply_free(dir, ad);
      double dad = 0.0;
      for (std::size_t x = 0; x < n; ++x) dad += dir[x] * ad[x];
      if (!(dad > 0.0)) break;
      const double alpha = rr / dad;
      for (std::size_t x = 0; x < n; ++x) {
        if (pb.fixed[x]) continue;
        u[x] += alpha * dir[x];
        r[x] -= alpha * ad[x];
      }
      ++it;
      if (scaled_max(r) <= tol) break;
      double rr_new = 0.0;
      for (double v : r) rr_new += v * v;
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t x = 0; x < n; ++x) dir[x] = r[x] + beta * dir[x];
    }
    const double now = true_residual();
    if (now > tol && now >= best) {
      best = now;
      break;
    }
    best = now;
  }
  out.iterations = it;
  out.residual = best;
  out.converged = best <= tol;
  return out;
}

}  // namespace

ScalarSolve solve_dirichlet(const WeightedGraph& g, std::span<const char> fixed,
                            std::span<const double> potential, std::span<double> u,
                            SolverMethod method, double tol, std::size_t max_iter,
                            ResidualScale scale) {
  if (fixed.size() != g.size() || u.size() != g.size() ||
      (!potential.empty() && potential.size() != g.size()))
    throw DimensionError("dirichlet solve: length mismatch");
  const DirichletProblem pb{g, fixed, potential, scale};
  switch (method) {
    case SolverMethod::jacobi: return dirichlet_jacobi(pb, u, tol, max_iter);
    case SolverMethod::gauss_seidel: return dirichlet_gauss_seidel(pb, u, tol, max_iter);
    case SolverMethod::conjugate_gradient: return dirichlet_cg(pb, u, tol, max_iter);
  }
  throw ParameterError("unknown solver method");
}

void project_zero_mean(const WeightedGraph& g, std::span<double> u) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    num += g.degree(x) * u[x];
    den += g.degree(x);
  }
  const double c = num / den;
  for (double& v : u) v -= c;
}

namespace {

double poisson_residual(const WeightedGraph& g, std::span<const double> b,
                        std::span<const double> u) {
  double m = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double lu = g.degree(x) * u[x] - neighbor_sum(g, u, x);
    m = std::max(m, std::abs(b[x] - lu) / g.degree(x));
  }
  return m;
}

}  // namespace

ScalarSolve solve_poisson(const WeightedGraph& g, std::span<const double> b, std::span<double> u,
                          SolverMethod method, double tol, std::size_t max_iter) {
  const std::size_t n = g.size();
  if (b.size() != n || u.size() != n) throw DimensionError("poisson solve: length mismatch");
  ScalarSolve out;
  project_zero_mean(g, u);

  if (method == SolverMethod::conjugate_gradient) {
    std::vector<double> r(n), dir(n), ad(n);
    auto lap = [&](const std::vector<double>& v, std::vector<double>& outv) {
      for (std::size_t x = 0; x < n; ++x) outv[x] = g.degree(x) * v[x] - neighbor_sum(g, v, x);
    };
    std::vector<double> uu(u.begin(), u.end());
    std::size_t it = 0;
    for (int restart = 0; restart < 50; ++restart) {
      lap(uu, ad);
      double rsum = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        r[x] = b[x] - ad[x];
        rsum += r[x];
      }
      // Keep the residual orthogonal to constants (the null space of L).
      for (double& v : r) v -= rsum / static_cast<double>(n);
      out.residual = poisson_residual(g, b, uu);
      if (out.residual <= tol || it >= max_iter) break;
      dir = r;
      double rr = 0.0;
      for (double v : r) rr += v * v;
      while (it < max_iter) {
        lap(dir, ad);
        double dad = 0.0;
        for (std::size_t x = 0; x < n; ++x) dad += dir[x] * ad[x];
        if (!(dad > 0.0)) break;
        const double alpha = rr / dad;
        double m = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
          uu[x] += alpha * dir[x];
          r[x] -= alpha * ad[x];
          m = std::max(m, std::abs(r[x]) / g.degree(x));
        }
        ++it;
        if (m <= tol) break;
        double rr_new = 0.0;
        for (double v : r) rr_new += v * v;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t x = 0; x < n; ++x) dir[x] = r[x] + beta * dir[x];
      }
    }
    std::copy(uu.begin(), uu.end(), u.begin());
    project_zero_mean(g, u);
    out.iterations = it;
    out.residual = poisson_residual(g, b, u);
    out.converged = out.residual <= tol;
    return out;
  }

  std::vector<double> next(u.begin(), u.end());
  for (std::size_t it = 0;; ++it) {
    out.iterations = it;
    out.residual = poisson_residual(g, b, u);
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    if (it == max_iter) return out;
    if (method == SolverMethod::jacobi) {
      for (std::size_t x = 0; x < n; ++x)
        next[x] = 0.5 * u[x] + 0.5 * (b[x] + neighbor_sum(g, u, x)) / g.degree(x);
      std::copy(next.begin(), next.end(), u.begin());
    } else {
      for (std::size_t x = 0; x < n; ++x) u[x] = (b[x] + neighbor_sum(g, u, x)) / g.degree(x);
    }
    project_zero_mean(g, u);
  }
}

}  // namespace seglearn
