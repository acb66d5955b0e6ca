#include "fracstab/stability.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fracstab {

namespace {

constexpr double pi = std::numbers::pi;

// (2 sin(theta/2))^p, clamped so rounding near theta = 2pi cannot go negative
double chord_pow(double theta, double p) {
  return std::pow(std::max(0.0, 2.0 * std::sin(theta / 2.0)), p);
}

double segment_distance(cplx a, cplx b, cplx p) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Signed angle swept by locus - z between t0 and t1, bisecting theta while the
// chord-based increment is too large to trust.
double sweep(const Family* family, double t0, double t1, cplx p0, cplx p1, cplx z, int depth) {
  double d = std::arg((p1 - z) / (p0 - z));
  if (!std::isfinite(d)) return 0.0;
  if (family && std::abs(d) > pi / 2 && depth < 40) {
    const double tm = 0.5 * (t0 + t1);
    const cplx pm = locus_point(*family, tm);
    return sweep(family, t0, tm, p0, pm, z, depth + 1) + sweep(family, tm, t1, pm, p1, z, depth + 1);
  }
  return d;
}

}  // namespace

void validate(const Family& family) {
  if (const auto* two = std::get_if<TwoTermFamily>(&family)) {
    (void)FractionalOrderPair::make(two->orders.alpha, two->orders.beta);
    if (!std::isfinite(two->a)) throw std::invalid_argument("a must be finite");
    return;
  }
  const auto& one = std::get<OneTermFamily>(family);
  if (one.order < 1 || !(one.alpha > one.order - 1.0 && one.alpha <= static_cast<double>(one.order))) {
    throw std::invalid_argument("one-term order must satisfy N-1 < alpha <= N, got alpha=" +
                                std::to_string(one.alpha) + " N=" + std::to_string(one.order));
  }
}

int stable_winding(const Family& family) {
  if (const auto* one = std::get_if<OneTermFamily>(&family)) return one->order;
  return 2;
}

cplx gamma_locus(const FractionalOrderPair& orders, double a, double theta) {
  const double alpha = orders.alpha;
  const double beta = orders.beta;
  return std::polar(chord_pow(theta, alpha), alpha * pi / 2 + theta * (2.0 - alpha / 2)) +
         a * std::polar(chord_pow(theta, beta), beta * pi / 2 + theta * (1.0 - beta / 2)) + 1.0;
}

cplx capital_gamma_locus(double alpha, int order, double theta) {
  return std::polar(chord_pow(theta, alpha), alpha * pi / 2 + theta * (order - alpha / 2)) + 1.0;
}

cplx locus_point(const Family& family, double theta) {
  if (const auto* two = std::get_if<TwoTermFamily>(&family)) return gamma_locus(two->orders, two->a, theta);
  const auto& one = std::get<OneTermFamily>(family);
  return capital_gamma_locus(one.alpha, one.order, theta);
}

BoundaryCurve BoundaryCurve::polygon(std::vector<cplx> pts) {
  BoundaryCurve c;
  if (pts.empty()) return c;
  if (pts.front() != pts.back()) pts.push_back(pts.front());
  const std::size_t m = pts.size() - 1;
  c.thetas.resize(pts.size());
  for (std::size_t i = 0; i <= m; ++i) c.thetas[i] = m == 0 ? 0.0 : 2 * pi * static_cast<double>(i) / m;
  c.points = std::move(pts);
  return c;
}

BoundaryCurve sample_boundary(const Family& family, std::size_t resolution) {
  validate(family);
  if (resolution < 1024) throw std::invalid_argument("boundary resolution must be at least 1024");

  const std::size_t half = resolution / 2;
  std::vector<double> th(half + 1);
  std::vector<cplx> pt(half + 1);
  for (std::size_t i = 0; i <= half; ++i) {
    th[i] = i == half ? pi : pi * static_cast<double>(i) / half;
    pt[i] = locus_point(family, th[i]);
  }

  double xmin = pt[0].real(), xmax = xmin, ymax = 0.0;
  for (const auto& p : pt) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymax = std::max(ymax, std::abs(p.imag()));
  }
  const double step = std::hypot(xmax - xmin, 2 * ymax) / static_cast<double>(resolution);

  std::vector<double> upper_th{th[0]};
  std::vector<cplx> upper_pt{pt[0]};
  auto refine = [&](auto&& self, double t0, double t1, cplx p0, cplx p1, int depth) -> void {
    if (depth < 16 && std::abs(p1 - p0) > step) {
      const double tm = 0.5 * (t0 + t1);
      const cplx pm = locus_point(family, tm);
      self(self, t0, tm, p0, pm, depth + 1);
      self(self, tm, t1, pm, p1, depth + 1);
      return;
    }
    upper_th.push_back(t1);
    upper_pt.push_back(p1);
  };
  for (std::size_t i = 0; i < half; ++i) refine(refine, th[i], th[i + 1], pt[i], pt[i + 1], 0);

  BoundaryCurve c;
  c.family = family;
  c.thetas = upper_th;
  c.points = upper_pt;
  for (std::size_t i = upper_th.size() - 1; i-- > 0;) {
    c.thetas.push_back(2 * pi - upper_th[i]);
    c.points.push_back(std::conj(upper_pt[i]));
  }
  c.thetas.back() = 2 * pi;
  return c;
}

WindingResult winding_number(const BoundaryCurve& curve, cplx point, double boundary_margin) {
  WindingResult r;
  const auto& p = curve.points;
  if (p.size() < 2) throw std::invalid_argument("curve needs at least two points");
  const Family* family = curve.family ? &*curve.family : nullptr;

  double total = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    dmin = std::min(dmin, segment_distance(p[i], p[i + 1], point));
    total += sweep(family, curve.thetas[i], curve.thetas[i + 1], p[i], p[i + 1], point, 0);
  }
  r.winding = static_cast<int>(std::lround(total / (2 * pi)));
  r.min_distance = dmin;
  r.boundary = dmin < boundary_margin;
  return r;
}

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Stable: return "Stable";
    case VerdictKind::Unstable: return "Unstable";
    case VerdictKind::Boundary: return "Boundary";
  }
  return "?";
}

StabilityVerdict classify_point(const BoundaryCurve& curve, int target_winding, cplx param, double boundary_margin) {
  const WindingResult w = winding_number(curve, param, boundary_margin);
  StabilityVerdict v;
  v.winding = w.winding;
  v.min_distance = w.min_distance;
  if (w.boundary) {
    v.kind = VerdictKind::Boundary;
  } else {
    v.kind = w.winding == target_winding ? VerdictKind::Stable : VerdictKind::Unstable;
  }
  return v;
}

StabilityVerdict classify_point(const Family& family, cplx param, const ClassifyOptions& options) {
  const BoundaryCurve curve = sample_boundary(family, options.resolution);
  return classify_point(curve, stable_winding(family), param, options.boundary_margin);
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::PreA1: return "PreA1";
    case Regime::AtA1: return "AtA1";
    case Regime::Between: return "Between";
    case Regime::AtA2: return "AtA2";
    case Regime::PostA2: return "PostA2";
  }
  return "?";
}

Regime BifurcationReport::regime_of(double a, double tol) const noexcept {
  if (std::abs(a - a1) <= tol) return Regime::AtA1;
  if (std::abs(a - a2) <= tol) return Regime::AtA2;
  if (a < a1) return Regime::PreA1;
  if (a < a2) return Regime::Between;
  return Regime::PostA2;
}

BifurcationReport bifurcation_values(const FractionalOrderPair& orders) {
  const auto o = FractionalOrderPair::make(orders.alpha, orders.beta);
  BifurcationReport r;
  r.a1 = std::exp2(o.alpha - o.beta);
  r.a2 = r.a1 * (o.alpha - 4.0) / (o.beta - 2.0);
  return r;
}

std::optional<RealInterval> real_interval(const FractionalOrderPair& orders, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("real_interval requires a > 0");
  const BifurcationReport bif = bifurcation_values(orders);
  if (a >= bif.a2) return std::nullopt;

  auto im = [&](double t) { return gamma_locus(orders, a, t).imag(); };
  constexpr int scan = 512;
  RealInterval best;
  bool found = false;
  double prev_t = pi / scan;
  double prev = im(prev_t);
  for (int i = 2; i < scan; ++i) {
    const double t = pi * i / scan;
    const double g = im(t);
    double root;
    if (prev == 0.0) {
      root = prev_t;
    } else if (prev * g < 0.0) {
      boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
      std::uintmax_t iters = 200;
      const auto [lo, hi] = boost::math::tools::toms748_solve(im, prev_t, t, prev, g, tol, iters);
      root = std::abs(im(lo)) <= std::abs(im(hi)) ? lo : hi;
    } else {
      prev_t = t;
      prev = g;
      continue;
    }
    ++best.sign_changes;
    const double left = gamma_locus(orders, a, root).real();
    if (!found || left < best.left) {
      best.left = left;
      best.theta = root;
      found = true;
    }
    prev_t = t;
    prev = g;
  }
  if (!found) {
    throw RootNotFound("imaginary part of the boundary has no sign change on (0, pi) for a=" + std::to_string(a));
  }
  best.right = a < bif.a1 ? 1.0 : 1.0 + std::exp2(orders.alpha) - a * std::exp2(orders.beta);
  return best;
}

std::pair<double, double> one_term_real_interval(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("one_term_real_interval requires 0 < alpha <= 1");
  return {1.0 - std::exp2(alpha), 1.0};
}

}  // namespace fracstab
