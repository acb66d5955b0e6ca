#include "fracstab/logistic.hpp"

#include "fracstab/dynamics.hpp"
#include "fracstab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracstab {

LogisticAnalysis equilibria(double mu) {
  if (mu == 0.0) throw std::domain_error("mu = 0 has no nontrivial equilibrium");
  LogisticAnalysis r;
  r.mu = mu;
  r.x1_star = 0.0;
  r.x2_star = 1.0 - 1.0 / mu;
  r.b1 = mu;
  r.b2 = 2.0 - mu;
  return r;
}

StabilityVerdict classify_equilibrium(const FractionalOrderPair& orders, double a, double mu, int which,
                                      const ClassifyOptions& options) {
  if (which != 1 && which != 2) throw std::invalid_argument("equilibrium index must be 1 or 2");
  if (!(a > 0.0)) throw std::invalid_argument("classify_equilibrium requires a > 0");
  const double b = which == 1 ? mu : 2.0 - mu;
  return classify_point(TwoTermFamily{orders, a}, cplx(b, 0.0), options);
}

std::optional<std::pair<double, double>> stable_mu_interval(const FractionalOrderPair& orders, double a, int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("equilibrium index must be 1 or 2");
  const auto iv = real_interval(orders, a);
  if (!iv) return std::nullopt;
  if (which == 1) return std::pair{iv->left, iv->right};
  return std::pair{2.0 - iv->right, 2.0 - iv->left};
}

bool settles_at(std::span<const double> x, double target, const AStarOptions& o) {
  if (x.size() < 8) return false;
  const std::size_t n = x.size() - 1;
  auto envelope = [&](std::size_t from, std::size_t to) {
    double m = 0.0;
    for (std::size_t i = from; i < to; ++i) m = std::max(m, std::abs(x[i] - target));
    return m;
  };
  const auto tail_start = static_cast<std::size_t>((1.0 - o.tail_fraction) * static_cast<double>(n));
  if (envelope(tail_start, n + 1) < o.tol) return true;
  return envelope(3 * n / 4, n + 1) < o.decay_ratio * envelope(n / 2, 3 * n / 4);
}

ProbeResult probe_equilibrium(const FractionalOrderPair& orders, double a, double mu, const AStarOptions& o) {
  ProbeResult r;
  r.mu = mu;
  const double xs = equilibria(mu).x2_star;
  const TwoTermSystem sys{orders, a, LogisticForcing{mu}};
  SimOptions sim;
  sim.halt_above = 1e6;
  const auto x = simulate_two_term_real(sys, xs + o.offset, xs - o.offset, o.n_steps, sim);
  r.escaped = x.size() != o.n_steps + 1 || !std::isfinite(x.back()) || std::abs(x.back()) > sim.halt_above;
  if (!r.escaped) {
    const auto tail_start = static_cast<std::size_t>((1.0 - o.tail_fraction) * static_cast<double>(o.n_steps));
    for (std::size_t i = tail_start; i < x.size(); ++i) r.tail_error = std::max(r.tail_error, std::abs(x[i] - xs));
    r.converged = settles_at(x, xs, o);
  } else {
    r.tail_error = std::numeric_limits<double>::infinity();
  }
  return r;
}

AStarEstimate estimate_a_star(const FractionalOrderPair& orders, const AStarOptions& o) {
  if (!(o.a_step > 0.0 && o.a_step <= 0.1 + 1e-12)) throw std::invalid_argument("a grid step must lie in (0, 0.1]");
  if (!(o.a_start > 0.0)) throw std::invalid_argument("a grid must start above 0");
  const BifurcationReport bif = bifurcation_values(orders);

  AStarEstimate est;
  est.orders = orders;
  est.grid_step = o.a_step;
  est.mu_grid = "x2* interval midpoint, ends -/+ " + std::to_string(o.offset) + ", " +
                std::to_string(o.uniform_probes) + " evenly spaced interior points";

  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double a = o.a_start + k * o.a_step;
    // round away the accumulated drift so the grid values print cleanly
    const double rounded = std::round(a * 1e9) / 1e9;
    if (rounded >= bif.a2) break;
    grid.push_back(rounded);
  }
  est.rows.resize(grid.size());

  parallel_for(grid.size(), o.jobs, [&](std::size_t idx) {
    AStarRow& row = est.rows[idx];
    row.a = grid[idx];
    const auto iv = stable_mu_interval(orders, row.a, 2);
    if (!iv) return;
    row.mu_lo = iv->first;
    row.mu_hi = iv->second;

    std::vector<double> inside{0.5 * (row.mu_lo + row.mu_hi)};
    for (double mu : {row.mu_lo + o.offset, row.mu_hi - o.offset}) {
      if (mu > row.mu_lo && mu < row.mu_hi) inside.push_back(mu);
    }
    for (int i = 1; i <= o.uniform_probes; ++i) {
      inside.push_back(row.mu_lo + (row.mu_hi - row.mu_lo) * i / (o.uniform_probes + 1.0));
    }
    for (double mu : inside) {
      ProbeResult p = probe_equilibrium(orders, row.a, mu, o);
      p.inside = true;
      row.probes.push_back(p);
      if (p.converged) {
        row.any_inside_converged = true;
        break;
      }
    }
    // outside probes are diagnostics only
    for (double mu : {row.mu_lo - o.offset, row.mu_hi + o.offset}) {
      if (mu == 0.0) continue;
      row.probes.push_back(probe_equilibrium(orders, row.a, mu, o));
    }
  });

  est.a_star = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : est.rows) {
    if (row.any_inside_converged) est.a_star = row.a;
  }
  return est;
}

}  // namespace fracstab
