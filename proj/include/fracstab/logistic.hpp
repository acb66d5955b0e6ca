#pragma once

#include "fracstab/core_math.hpp"
#include "fracstab/stability.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fracstab {

/// Equilibria of the logistic forcing f(x) = mu x (1 - x) and the slopes
/// f'(x*) that the linear theory sees as b.
struct LogisticAnalysis {
  double mu = 0.0;
  double x1_star = 0.0;
  double x2_star = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Throws std::domain_error for mu = 0.
LogisticAnalysis equilibria(double mu);

/// classify_point on the real axis with b = mu (which = 1) or b = 2 - mu (which = 2).
StabilityVerdict classify_equilibrium(const FractionalOrderPair& orders, double a, double mu, int which,
                                      const ClassifyOptions& options = {});

/// Linearly stable mu values for equilibrium 1 or 2, or nullopt when none exist.
std::optional<std::pair<double, double>> stable_mu_interval(const FractionalOrderPair& orders, double a, int which);

struct AStarOptions {
  double a_start = 0.1;
  double a_step = 0.1;
  std::size_t n_steps = 2000;
  /// Evenly spaced interior probes, in addition to the midpoint and the
  /// points 0.1 inside each end.
  int uniform_probes = 49;
  double offset = 0.1;
  double tol = 1e-3;
  double tail_fraction = 0.2;
  /// A run also counts as settling when its deviation envelope over the last
  /// quarter is below this fraction of the one over the quarter before.
  double decay_ratio = 0.95;
  unsigned jobs = 1;
};

struct ProbeResult {
  double mu = 0.0;
  bool inside = false;
  bool converged = false;
  bool escaped = false;
  double tail_error = 0.0;
};

struct AStarRow {
  double a = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  bool any_inside_converged = false;
  std::vector<ProbeResult> probes;
};

struct AStarEstimate {
  FractionalOrderPair orders{};
  /// NaN when no grid value produced a converging probe.
  double a_star = 0.0;
  double grid_step = 0.1;
  std::string mu_grid;
  std::vector<AStarRow> rows;
};

/// True when x settles at target: the final tail stays within tol, or the
/// deviation envelope is still shrinking at the end of the run.
bool settles_at(std::span<const double> x, double target, const AStarOptions& options);

/// Simulates from x2* + offset, x2* - offset and tests settles_at.
ProbeResult probe_equilibrium(const FractionalOrderPair& orders, double a, double mu, const AStarOptions& options);

/// Scans a from a_start in a_step increments up to a2. At each a the linearly
/// stable mu interval of x2* is probed; a* is the largest a at which some
/// probe inside the interval settles at x2*.
AStarEstimate estimate_a_star(const FractionalOrderPair& orders, const AStarOptions& options = {});

}  // namespace fracstab
