#include <cmath>
#include <ostream>
#include <string>

#include "seglearn/baseline.hpp"
#include "seglearn/calculus.hpp"
#include "seglearn/fixtures.hpp"
#include "seglearn/harness.hpp"
#include "seglearn/relaxed.hpp"
#include "seglearn/segregation.hpp"
#include "seglearn/verification.hpp"

namespace seglearn {

namespace {

struct Tally {
  std::ostream& out;
  bool all = true;

  void check(bool ok, const std::string& name, const std::string& detail = {}) {
    out << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) out << "  (" << detail << ')';
    out << '\n';
    all = all && ok;
  }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

bool run_verification_suite(std::ostream& out) {
  Tally t{out};

  {
    const Instance c = four_cycle();
    const BruteForceResult l2 = brute_force(c.graph, c.labels, Functional::l2);
    t.check(l2.minimizers.size() == 4 && near(l2.energy, 3.0, 1e-9),
            "four-cycle l2 oracle: four minimizers at energy 3",
            std::to_string(l2.minimizers.size()) + " minimizers");
    const BruteForceResult seg = brute_force(c.graph, c.labels, Functional::segregation);
    t.check(seg.minimizers.size() == 1 && near(seg.energy, 2.0, 1e-9),
            "four-cycle segregation oracle: unique minimizer at energy 2");

    const auto [gp, gp_rep] = gradient_projection_solve(c.graph, c.labels);
    t.check(gp_rep.converged && l2_energy(c.graph, gp) <= 3.0 + 1e-6,
            "four-cycle gradient projection reaches energy 3");

    SegregationConfig tight;
    tight.tol = 1e-12;
    const auto [s, s_rep] = segregation_solve(c.graph, c.labels, tight);
    t.check(s_rep.converged && s.max_abs_diff(seg.minimizers.front()) <= 1e-8,
            "four-cycle segregation solve matches the oracle");

    LinearSolveConfig lin{1e-13, 0, SolverMethod::conjugate_gradient};
    const auto [h, h_rep] = laplace_learn(c.graph, c.labels, lin);
    bool ok = h_rep.converged;
    for (std::size_t i = 0; i < 2; ++i)
      ok = ok && check_max_principle(c.graph, c.labels.boundary(), {}, h.column(i)).passed();
    t.check(ok, "harmonic extension satisfies the maximum principle");
  }

  {
    const Instance p = labeled_path(4);
    SegregationConfig tight;
    tight.tol = 1e-12;
    const auto [u, rep] = segregation_solve(p.graph, p.labels, tight);
    t.check(rep.converged && near(u(1, 0), 1.0 / 3.0, 1e-8) && near(u(2, 1), 1.0 / 3.0, 1e-8),
            "path A-B-C-D segregation fixed point 1/3");
    t.check(check_segregation_conditions(p.graph, p.labels, u, 1e-8).passed(),
            "path fixed point satisfies the hat-Laplacian conditions");
  }

  {
    const Instance p = labeled_path(3);
    PenalizationConfig cfg;
    cfg.epsilon = 0.25;
    cfg.inner_tol = 1e-15;
    cfg.max_outer = 2;
    cfg.sweep = PenaltySweep::alternating;
    std::vector<double> b;
    penalized_solve(p.graph, p.labels, cfg, std::nullopt,
                    [&](std::size_t, const StateField& u) { b.push_back(u(1, 0)); });
    t.check(b.size() == 3 && near(b[0], 0.5, 1e-12) && near(b[1], 1.0 / 3.0, 1e-12) &&
                near(b[2], 9.0 / 22.0, 1e-12),
            "path A-B-C penalization chain 1/2, 1/3, 9/22");
  }

  {
    const WeightedGraph two = WeightedGraph::from_edges(2, std::vector<WeightedEdge>{{0, 1, 1.0}});
    const std::size_t gamma[] = {0};
    t.check(near(poincare_lambda1(two, gamma), 1.0, 1e-10), "two-vertex Poincare constant is 1");
  }
  return t.all;
}

}  // namespace seglearn
