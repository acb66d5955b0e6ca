#pragma once

#include "fracstab/core_math.hpp"

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace fracstab {

using cplx = std::complex<double>;

/// f(x) = b x
struct LinearForcing {
  cplx b;
};

/// f(x) = mu x (1 - x)
struct LogisticForcing {
  double mu;
};

using Forcing = std::variant<LinearForcing, LogisticForcing>;

/// Delta^alpha x(t) + a Delta^beta x(t + alpha - beta - 1) = f(x(t + alpha - 2)) - x(t + alpha - 2)
struct TwoTermSystem {
  FractionalOrderPair orders;
  double a = 0.0;
  Forcing forcing = LinearForcing{1.0};
};

/// Delta^alpha x(t) = (c - 1) x(t + alpha - N), N - 1 < alpha <= N.
struct OneTermSystem {
  double alpha = 0.5;
  int order = 1;
  cplx c = 0.0;

  /// Throws std::invalid_argument unless N >= 1 and N - 1 < alpha <= N.
  void validate() const;
};

/// How the memory sums treat the time before the first sample.
///
/// ZeroExtended runs the operator sums from s = -m over the sequence extended
/// by zeros (m = 2 for the two-term model, m = N for the one-term model). For
/// the two-term model this is exactly the explicit recurrence with weights W(k)
/// summed over s = 0..n-3. Caputo runs every sum from s = 0 as in the plain
/// operator definitions. Both share the same characteristic equation; they
/// differ only in an initial-data forcing that decays in n.
enum class History { ZeroExtended, Caputo };

struct SimOptions {
  History history = History::ZeroExtended;
  /// Stop iterating once |x(n)| exceeds this (or turns non-finite).
  double halt_above = std::numeric_limits<double>::infinity();
};

enum class ScalarKind { Real, Complex };

struct Trajectory {
  std::vector<cplx> initial;
  std::vector<cplx> values;
  ScalarKind kind = ScalarKind::Complex;
  std::size_t n_steps = 0;
  /// True when the run stopped early on SimOptions::halt_above; values then
  /// holds x(0..k) where x(k) is the first value over the limit.
  bool halted = false;
};

/// Two-term IVP with x(0) = x0, x(1) = x1, for n = 2..n_steps.
/// Throws std::invalid_argument when n_steps < 1.
Trajectory simulate_two_term(const TwoTermSystem& sys, cplx x0, cplx x1, std::size_t n_steps,
                             const SimOptions& options = {});

/// Real-valued wrapper; requires real linear forcing or logistic forcing.
std::vector<double> simulate_two_term_real(const TwoTermSystem& sys, double x0, double x1,
                                           std::size_t n_steps, const SimOptions& options = {});

/// One-term IVP with x(0..N-1) = initial, iterated up to x(n_steps).
/// Throws std::invalid_argument when initial.size() != N or n_steps < 1.
Trajectory simulate_one_term(const OneTermSystem& sys, std::span<const cplx> initial,
                             std::size_t n_steps, const SimOptions& options = {});

enum class TrajectoryKind { ConvergedToZero, ConvergedTo, Bounded, Unbounded };

const char* to_string(TrajectoryKind kind);

struct TrajectoryVerdict {
  TrajectoryKind kind = TrajectoryKind::Bounded;
  /// Index of the first escaping sample for Unbounded, otherwise the last index.
  std::size_t n_used = 0;
  double final_magnitude = 0.0;
  /// Tail mean for ConvergedTo.
  cplx value = 0.0;
};

/// The convergence tolerance is 1e-3: stable trajectories of these systems
/// decay algebraically, and 1e-4 is not reached within 500 steps.
struct ClassifyThresholds {
  double tol_converge = 1e-3;
  double bound_escape = 1e6;
  double tail_fraction = 0.2;
};

/// Unbounded if any |x| > bound_escape; ConvergedToZero if the tail stays under
/// tol_converge; ConvergedTo if the tail's successive differences do; else
/// Bounded. Throws std::invalid_argument for fewer than 20 samples unless the
/// samples already escape.
TrajectoryVerdict classify_trajectory(std::span<const cplx> values, const ClassifyThresholds& thresholds = {});

inline TrajectoryVerdict classify_trajectory(const Trajectory& traj, const ClassifyThresholds& thresholds = {}) {
  return classify_trajectory(std::span<const cplx>(traj.values), thresholds);
}

}  // namespace fracstab
