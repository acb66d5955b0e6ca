#include "fracstab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace fracstab {

namespace {

template <class T>
bool escaped(const T& v, double halt_above) {
  const double m = std::abs(v);
  return !std::isfinite(m) || m > halt_above;
}

template <class T>
T apply_forcing(const Forcing& forcing, const T& x) {
  if (const auto* lin = std::get_if<LinearForcing>(&forcing)) {
    if constexpr (std::is_same_v<T, double>) {
      return lin->b.real() * x;
    } else {
      return lin->b * x;
    }
  }
  const double mu = std::get<LogisticForcing>(forcing).mu;
  return mu * x * (T(1) - x);
}

// Returns true when the run finished without halting.
template <class T>
bool run_two_term(const TwoTermSystem& sys, std::vector<T>& x, std::size_t n_steps, const SimOptions& opt) {
  const double alpha = sys.orders.alpha;
  const double beta = sys.orders.beta;
  const double a = sys.a;
  const double c1 = alpha - a;
  const double c2 = (alpha - alpha * alpha + 2.0 * a * beta - 2.0) / 2.0;

  WeightTable weights(sys.orders, a);
  weights.ensure(n_steps);
  const std::vector<double>& w = weights.values();

  std::vector<double> phi2, phi1;
  if (opt.history == History::Caputo) {
    phi2 = binom_phi_table(2.0 - alpha, n_steps + 1);
    phi1 = binom_phi_table(1.0 - beta, n_steps + 1);
  }
  const T x0 = x[0];
  const T x1 = x[1];

  x.reserve(n_steps + 1);
  for (std::size_t n = 2; n <= n_steps; ++n) {
    T next = c1 * x[n - 1] + c2 * x[n - 2] + apply_forcing(sys.forcing, x[n - 2]);
    // sum_{s=0}^{n-3} W(n-s) x(s)
    T memory{};
    for (std::size_t s = 0; s + 3 <= n; ++s) memory += w[n - s] * x[s];
    next += memory;
    if (opt.history == History::Caputo) {
      // drop the two zero-extended history terms the explicit form carries
      next += phi2[n] * x0 + phi2[n - 1] * (x1 - 2.0 * x0) + a * phi1[n - 1] * x0;
    }
    x.push_back(next);
    if (escaped(next, opt.halt_above)) return false;
  }
  return true;
}

template <class T>
bool run_one_term(const OneTermSystem& sys, std::vector<T>& x, std::size_t n_steps, const SimOptions& opt) {
  const std::size_t N = static_cast<std::size_t>(sys.order);
  // shift = number of zero samples prepended to the history
  const std::size_t shift = opt.history == History::ZeroExtended ? N : 0;
  std::vector<T> xs(shift, T{});
  xs.insert(xs.end(), x.begin(), x.end());

  // (-1)^(N-k) C(N, k), k = 0..N
  std::vector<double> diff(N + 1);
  double binom = 1.0;
  for (std::size_t k = 0; k <= N; ++k) {
    diff[k] = ((N - k) % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * static_cast<double>(N - k) / static_cast<double>(k + 1);
  }

  const std::vector<double> phi = binom_phi_table(static_cast<double>(sys.order) - sys.alpha, n_steps + shift + 1);
  const T cm1 = [&] {
    if constexpr (std::is_same_v<T, double>) {
      return sys.c.real() - 1.0;
    } else {
      return sys.c - 1.0;
    }
  }();

  std::vector<T> D;
  D.reserve(n_steps + shift + 1);
  for (std::size_t j = 0; j < shift; ++j) {
    T d{};
    for (std::size_t k = 0; k <= N; ++k) d += diff[k] * xs[j + k];
    D.push_back(d);
  }

  bool ok = true;
  for (std::size_t m = shift; m + N <= n_steps + shift; ++m) {
    T hist{};
    for (std::size_t j = 0; j < m; ++j) hist += phi[m - j] * D[j];
    const T d = cm1 * xs[m] - hist;
    D.push_back(d);
    T next = d;
    for (std::size_t k = 0; k < N; ++k) next -= diff[k] * xs[m + k];
    xs.push_back(next);
    if (escaped(next, opt.halt_above)) {
      ok = false;
      break;
    }
  }
  x.assign(xs.begin() + static_cast<std::ptrdiff_t>(shift), xs.end());
  return ok;
}

template <class T>
Trajectory finish(std::vector<T>&& values, std::size_t n_steps, bool complete, std::size_t m) {
  Trajectory t;
  t.kind = std::is_same_v<T, double> ? ScalarKind::Real : ScalarKind::Complex;
  t.n_steps = n_steps;
  t.halted = !complete;
  t.values.assign(values.begin(), values.end());
  t.initial.assign(t.values.begin(), t.values.begin() + static_cast<std::ptrdiff_t>(std::min(m, t.values.size())));
  return t;
}

bool forcing_is_real(const Forcing& f) {
  if (const auto* lin = std::get_if<LinearForcing>(&f)) return lin->b.imag() == 0.0;
  return true;
}

void check_two_term(const TwoTermSystem& sys, std::size_t n_steps) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be at least 1");
  if (!sys.orders.valid()) {
    (void)FractionalOrderPair::make(sys.orders.alpha, sys.orders.beta);
  }
}

}  // namespace

void OneTermSystem::validate() const {
  if (order < 1) throw std::invalid_argument("N must be at least 1");
  if (!(alpha > order - 1.0 && alpha <= static_cast<double>(order))) {
    throw std::invalid_argument("one-term order must satisfy N-1 < alpha <= N, got alpha=" + std::to_string(alpha) +
                                " N=" + std::to_string(order));
  }
}

Trajectory simulate_two_term(const TwoTermSystem& sys, cplx x0, cplx x1, std::size_t n_steps,
                             const SimOptions& options) {
  check_two_term(sys, n_steps);
  if (forcing_is_real(sys.forcing) && x0.imag() == 0.0 && x1.imag() == 0.0) {
    std::vector<double> x{x0.real(), x1.real()};
    const bool ok = run_two_term(sys, x, n_steps, options);
    return finish(std::move(x), n_steps, ok, 2);
  }
  std::vector<cplx> x{x0, x1};
  const bool ok = run_two_term(sys, x, n_steps, options);
  return finish(std::move(x), n_steps, ok, 2);
}

std::vector<double> simulate_two_term_real(const TwoTermSystem& sys, double x0, double x1, std::size_t n_steps,
                                           const SimOptions& options) {
  check_two_term(sys, n_steps);
  if (!forcing_is_real(sys.forcing)) throw std::invalid_argument("real simulation needs a real forcing parameter");
  std::vector<double> x{x0, x1};
  run_two_term(sys, x, n_steps, options);
  return x;
}

Trajectory simulate_one_term(const OneTermSystem& sys, std::span<const cplx> initial, std::size_t n_steps,
                             const SimOptions& options) {
  sys.validate();
  const std::size_t N = static_cast<std::size_t>(sys.order);
  if (initial.size() != N) {
    throw std::invalid_argument("one-term system of order " + std::to_string(N) + " needs " + std::to_string(N) +
                                " initial values, got " + std::to_string(initial.size()));
  }
  if (n_steps < 1) throw std::invalid_argument("n_steps must be at least 1");
  if (n_steps + 1 < N) throw std::invalid_argument("n_steps shorter than the initial data");

  const bool real = sys.c.imag() == 0.0 &&
                    std::all_of(initial.begin(), initial.end(), [](const cplx& v) { return v.imag() == 0.0; });
  if (real) {
    std::vector<double> x;
    for (const auto& v : initial) x.push_back(v.real());
    const bool ok = run_one_term(sys, x, n_steps, options);
    return finish(std::move(x), n_steps, ok, N);
  }
  std::vector<cplx> x(initial.begin(), initial.end());
  const bool ok = run_one_term(sys, x, n_steps, options);
  return finish(std::move(x), n_steps, ok, N);
}

const char* to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::ConvergedToZero: return "ConvergedToZero";
    case TrajectoryKind::ConvergedTo: return "ConvergedTo";
    case TrajectoryKind::Bounded: return "Bounded";
    case TrajectoryKind::Unbounded: return "Unbounded";
  }
  return "?";
}

TrajectoryVerdict classify_trajectory(std::span<const cplx> values, const ClassifyThresholds& th) {
  TrajectoryVerdict v;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (escaped(values[i], th.bound_escape)) {
      v.kind = TrajectoryKind::Unbounded;
      v.n_used = i;
      v.final_magnitude = std::abs(values[i]);
      return v;
    }
  }
  if (values.size() < 20) throw std::invalid_argument("classify_trajectory needs at least 20 samples");
  if (!(th.tail_fraction > 0.0 && th.tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  }

  const std::size_t len = values.size();
  const auto tail_len = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(th.tail_fraction * len)));
  const std::span<const cplx> tail = values.subspan(len - std::min(tail_len, len));
  v.n_used = len - 1;
  v.final_magnitude = std::abs(values.back());

  double max_mag = 0.0, max_step = 0.0;
  cplx sum = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    max_mag = std::max(max_mag, std::abs(tail[i]));
    sum += tail[i];
    if (i > 0) max_step = std::max(max_step, std::abs(tail[i] - tail[i - 1]));
  }
  if (max_mag < th.tol_converge) {
    v.kind = TrajectoryKind::ConvergedToZero;
  } else if (max_step < th.tol_converge) {
    v.kind = TrajectoryKind::ConvergedTo;
    v.value = sum / static_cast<double>(tail.size());
  } else {
    v.kind = TrajectoryKind::Bounded;
  }
  return v;
}

}  // namespace fracstab
