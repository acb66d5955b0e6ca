#include "fracstab/reference.hpp"

#include "fracstab/dynamics.hpp"
#include "fracstab/io.hpp"
#include "fracstab/logistic.hpp"
#include "fracstab/parallel.hpp"
#include "fracstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace fracstab {

namespace {

using Check = std::function<CheckResult()>;

CheckResult near(std::string name, double got, double want, double tol) {
  return {std::move(name), std::abs(got - want) <= tol,
          "got " + format_double(got) + ", want " + format_double(want) + " +/- " + format_double(tol)};
}

TrajectoryKind two_term_kind(double alpha, double beta, double a, const Forcing& f, cplx x0, cplx x1,
                             std::size_t steps) {
  SimOptions opt;
  opt.halt_above = 1e6;
  const TwoTermSystem sys{FractionalOrderPair::make(alpha, beta), a, f};
  return classify_trajectory(simulate_two_term(sys, x0, x1, steps, opt)).kind;
}

TrajectoryKind one_term_kind(double alpha, int order, cplx c, const std::vector<cplx>& init, std::size_t steps) {
  SimOptions opt;
  opt.halt_above = 1e6;
  return classify_trajectory(simulate_one_term(OneTermSystem{alpha, order, c}, init, steps, opt)).kind;
}

CheckResult expect_kind(std::string name, TrajectoryKind got, bool want_zero) {
  const bool ok = want_zero ? got == TrajectoryKind::ConvergedToZero : got != TrajectoryKind::ConvergedToZero;
  return {std::move(name), ok, std::string("trajectory ") + to_string(got)};
}

CheckResult expect_verdict(std::string name, const Family& fam, cplx param, bool want_stable) {
  const StabilityVerdict v = classify_point(fam, param);
  const bool ok = want_stable ? v.kind == VerdictKind::Stable : v.kind == VerdictKind::Unstable;
  return {std::move(name), ok, std::string(to_string(v.kind)) + ", winding " + std::to_string(v.winding)};
}

void add_bifurcations(std::vector<Check>& out) {
  struct Row { double alpha, beta, a1, a2; };
  for (Row r : {Row{1.9, 0.2, 3.24901, 3.79051}, Row{1.8, 0.5, 2.46229, 3.61136}, Row{1.2, 0.8, 1.31951, 3.07885}}) {
    const std::string tag = "bifurcations alpha=" + format_double(r.alpha) + " beta=" + format_double(r.beta);
    out.emplace_back([=] {
      const auto rep = bifurcation_values(FractionalOrderPair::make(r.alpha, r.beta));
      CheckResult c1 = near(tag + " a1", rep.a1, r.a1, 1e-5);
      CheckResult c2 = near(tag + " a2", rep.a2, r.a2, 1e-5);
      return CheckResult{tag, c1.passed && c2.passed, c1.detail + "; " + c2.detail};
    });
  }
}

void add_intervals(std::vector<Check>& out) {
  const auto o = FractionalOrderPair::make(1.8, 0.5);
  out.emplace_back([=] {
    const auto iv = real_interval(o, 1.0);
    return near("real interval alpha=1.8 beta=0.5 a=1 left", iv->left, 0.210772, 1e-5);
  });
  out.emplace_back([=] {
    const auto iv = real_interval(o, 1.0);
    return CheckResult{"real interval alpha=1.8 beta=0.5 a=1 right", iv->right == 1.0, "got " + format_double(iv->right)};
  });
  out.emplace_back([=] {
    const auto iv = real_interval(o, 3.0);
    CheckResult l = near("", iv->left, -0.464274, 1e-5);
    CheckResult r = near("", iv->right, 1.0 + std::exp2(1.8) - 3.0 * std::exp2(0.5), 0.0);
    CheckResult p = near("", iv->right, 0.239562, 1e-5);
    return CheckResult{"real interval alpha=1.8 beta=0.5 a=3", l.passed && r.passed && p.passed,
                       l.detail + "; " + p.detail};
  });
  out.emplace_back([=] {
    return CheckResult{"real interval alpha=1.8 beta=0.5 a=4 empty", !real_interval(o, 4.0).has_value(), ""};
  });

  const auto lo = FractionalOrderPair::make(1.2, 0.8);
  struct Mu { double a; int which; double lo, hi; };
  for (Mu m : {Mu{0.5, 1, -0.284222, 1.0}, Mu{2.3, 1, -1.57005, -0.707136}, Mu{0.5, 2, 1.0, 2.284222}}) {
    out.emplace_back([=] {
      const auto iv = stable_mu_interval(lo, m.a, m.which);
      const std::string name = "mu interval x" + std::to_string(m.which) + "* a=" + format_double(m.a);
      if (!iv) return CheckResult{name, false, "empty"};
      CheckResult l = near(name, iv->first, m.lo, 1e-5);
      CheckResult h = near(name, iv->second, m.hi, 1e-5);
      return CheckResult{name, l.passed && h.passed, l.detail + "; " + h.detail};
    });
  }
  out.emplace_back([] {
    const auto [l, r] = one_term_real_interval(0.55);
    const double want = 1.0 - std::exp2(0.55);
    return CheckResult{"first-order interval alpha=0.55", l == want && r == 1.0,
                       "got (" + format_double(l) + ", " + format_double(r) + "), want (" + format_double(want) + ", 1)"};
  });
}

void add_complex_table(std::vector<Check>& out) {
  struct Row { double a; cplx b; bool stable; };
  const Row rows[] = {
      {2.0, {1.891, -0.624}, true},      {2.0, {1.661, 0.9917}, false},     {2.0, {2.168, -0.7312}, false},
      {2.0, {2.0, 0.0}, false},          {3.24901, {0.7, 0.0}, true},       {3.24901, {1.489, 1.224}, false},
      {3.24901, {0.3925, -0.1999}, false}, {3.5, {0.6, 0.0}, true},       {3.5, {0.9, 0.0}, false},
      {3.79051, {-0.08687, -0.9862}, false},
  };
  const auto o = FractionalOrderPair::make(1.9, 0.2);
  for (const Row& r : rows) {
    const std::string tag = "alpha=1.9 beta=0.2 a=" + format_double(r.a) + " b=" + format_complex(r.b);
    out.emplace_back([=] { return expect_verdict("winding " + tag, TwoTermFamily{o, r.a}, r.b, r.stable); });
    out.emplace_back([=] {
      return expect_kind("simulation " + tag, two_term_kind(1.9, 0.2, r.a, LinearForcing{r.b}, 0.1, 0.2, 500), r.stable);
    });
  }
}

void add_two_term_examples(std::vector<Check>& out) {
  struct Run { double a, b, x0, x1; bool zero; };
  const Run runs[] = {
      {1.0, 0.3, 0.1, 0.2, true},   {1.0, 0.8, 0.1, 0.2, true},   {1.0, 0.1, 0.1, 0.2, false},
      {1.0, 1.1, 0.1, 0.2, false},  {3.0, -0.3, 0.2, 0.3, true},  {3.0, 0.2, 0.2, 0.3, true},
      {3.0, -0.5, 0.2, 0.3, false}, {3.0, 0.3, 0.2, 0.3, false},  {4.0, -3.0, 0.3, 0.4, false},
      {4.0, 6.0, 0.3, 0.4, false},
  };
  for (const Run& r : runs) {
    const std::string name = "simulation alpha=1.8 beta=0.5 a=" + format_double(r.a) + " b=" + format_double(r.b);
    out.emplace_back([=] {
      return expect_kind(name, two_term_kind(1.8, 0.5, r.a, LinearForcing{r.b}, r.x0, r.x1, 2000), r.zero);
    });
  }

  // logistic forcing around the trivial equilibrium
  struct Log { double a, mu; TrajectoryKind want; };
  const Log logs[] = {
      {0.5, -0.27, TrajectoryKind::ConvergedToZero}, {0.5, -1.0, TrajectoryKind::Bounded},
      {2.3, -1.4, TrajectoryKind::ConvergedToZero},  {2.3, -1.7, TrajectoryKind::Unbounded},
      {3.5, -1.1, TrajectoryKind::Unbounded},        {3.5, 2.7, TrajectoryKind::Unbounded},
  };
  for (const Log& l : logs) {
    const std::string name = "logistic alpha=1.2 beta=0.8 a=" + format_double(l.a) + " mu=" + format_double(l.mu);
    out.emplace_back([=] {
      const TrajectoryKind k = two_term_kind(1.2, 0.8, l.a, LogisticForcing{l.mu}, 0.1, 0.2, 2000);
      // leaving the equilibrium may end bounded or unbounded; both count
      const bool ok = l.want == TrajectoryKind::Unbounded ? k != TrajectoryKind::ConvergedToZero : k == l.want;
      return CheckResult{name, ok, std::string("trajectory ") + to_string(k)};
    });
  }

  // logistic forcing around the nontrivial equilibrium
  struct Eq { double a, mu; bool settles; };
  for (Eq e : {Eq{0.5, 2.2, true}, Eq{0.5, 3.0, false}, Eq{2.3, -5.0, false}, Eq{2.3, 9.0, false}}) {
    const std::string name = "logistic x2* alpha=1.2 beta=0.8 a=" + format_double(e.a) + " mu=" + format_double(e.mu);
    out.emplace_back([=] {
      AStarOptions opt;
      opt.n_steps = 2000;
      const ProbeResult p = probe_equilibrium(FractionalOrderPair::make(1.2, 0.8), e.a, e.mu, opt);
      const bool settled = !p.escaped && p.tail_error < 1e-3;
      return CheckResult{name, settled == e.settles,
                         p.escaped ? "escaped" : "tail error " + format_double(p.tail_error)};
    });
  }
}

void add_one_term(std::vector<Check>& out) {
  struct Case { double alpha; int order; cplx c; std::vector<cplx> init; bool stable; };
  const std::vector<Case> cases = {
      {0.55, 1, {0.982, 0.4906}, {0.4}, true},
      {0.55, 1, {0.1346, -1.101}, {0.4}, false},
      {1.1, 2, {0.2415, -0.06215}, {0.1, 0.2}, true},
      {1.1, 2, {0.1346, -0.8733}, {0.1, 0.2}, false},
      {2.5, 3, {0.3839, 4.832}, {0.01, 0.02, 0.03}, false},
      {2.5, 3, {0.6667, -0.6024}, {0.01, 0.02, 0.03}, false},
      {2.5, 3, {-4.02, -3.168}, {0.01, 0.02, 0.03}, false},
      {2.5, 3, {-2.168, 1.798}, {0.01, 0.02, 0.03}, false},
      {5.3, 6, {1.948, 0.06482}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, false},
      {5.3, 6, {-4.692, 2.35}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, false},
      {5.3, 6, {-7.879, -23.47}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, false},
      {5.3, 6, {1.517, -0.3911}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, false},
  };
  for (const Case& c : cases) {
    const std::string tag =
        "one-term alpha=" + format_double(c.alpha) + " N=" + std::to_string(c.order) + " c=" + format_complex(c.c);
    out.emplace_back([=] { return expect_verdict("winding " + tag, OneTermFamily{c.alpha, c.order}, c.c, c.stable); });
    out.emplace_back([=] {
      const TrajectoryKind k = one_term_kind(c.alpha, c.order, c.c, c.init, 500);
      const bool ok = c.stable ? k == TrajectoryKind::ConvergedToZero : k == TrajectoryKind::Unbounded;
      return CheckResult{"simulation " + tag, ok, std::string("trajectory ") + to_string(k)};
    });
  }
}

}  // namespace

bool ReferenceReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; }) &&
         std::all_of(a_star.begin(), a_star.end(), [](const AStarRowReport& r) { return r.agree; });
}

ReferenceReport run_reference_checks(unsigned jobs, bool include_a_star) {
  std::vector<Check> checks;
  add_bifurcations(checks);
  add_intervals(checks);
  add_complex_table(checks);
  add_two_term_examples(checks);
  add_one_term(checks);

  ReferenceReport report;
  report.checks.resize(checks.size());
  parallel_for(checks.size(), jobs, [&](std::size_t i) {
    try {
      report.checks[i] = checks[i]();
    } catch (const std::exception& e) {
      report.checks[i] = {"check " + std::to_string(i), false, std::string("error: ") + e.what()};
    }
  });

  if (include_a_star) {
    struct Row { double alpha, beta, a_star; };
    const Row rows[] = {{1.8, 0.5, 2.3}, {1.2, 0.8, 2.2}, {1.4, 0.7, 2.2},
                        {1.6, 0.3, 2.2}, {1.5, 0.5, 1.9}, {1.1, 0.9, 2.4}};
    AStarOptions opt;
    opt.jobs = jobs;
    for (const Row& r : rows) {
      const AStarEstimate est = estimate_a_star(FractionalOrderPair::make(r.alpha, r.beta), opt);
      AStarRowReport row{r.alpha, r.beta, r.a_star, est.a_star, false};
      row.agree = std::abs(est.a_star - r.a_star) <= 0.1 + 1e-9;
      report.a_star.push_back(row);
    }
  }
  return report;
}

}  // namespace fracstab
