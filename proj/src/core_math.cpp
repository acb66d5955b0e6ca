#include "fracstab/core_math.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracstab {

namespace {

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::floor(x) == x;
}

}  // namespace

FractionalOrderPair FractionalOrderPair::make(double alpha, double beta) {
  FractionalOrderPair p{alpha, beta};
  if (!p.valid()) {
    throw std::invalid_argument("fractional orders must satisfy 0 < beta <= 1 < alpha <= 2, got alpha=" +
                                std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
  return p;
}

bool FractionalOrderPair::valid() const noexcept {
  return alpha > 1.0 && alpha <= 2.0 && beta > 0.0 && beta <= 1.0;
}

double gamma_ratio(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("gamma_ratio requires positive arguments");
  }
  if (x == y) return 1.0;
  return boost::math::tgamma_ratio(x, y);
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 170.0) return std::exp(-boost::math::lgamma(x));
  return 1.0 / boost::math::tgamma(x);
}

double binom_phi(double mu, std::int64_t n) {
  if (n < 0) return 0.0;
  if (n == 0) return 1.0;
  if (is_nonpositive_integer(mu)) {
    throw std::domain_error("binom_phi: Gamma(mu) has a pole at mu=" + std::to_string(mu));
  }
  const double nd = static_cast<double>(n);
  if (mu > 0.0) {
    // Gamma(n+mu) / (Gamma(mu) Gamma(n+1)) = 1 / ((n+mu) B(mu, n+1))
    return 1.0 / ((nd + mu) * boost::math::beta(mu, nd + 1.0));
  }
  if (nd + mu > 0.0) {
    return boost::math::tgamma_ratio(nd + mu, nd + 1.0) * reciprocal_gamma(mu);
  }
  // both gamma arguments negative; n < |mu| so the factorial is small
  return boost::math::tgamma(nd + mu) * reciprocal_gamma(mu) * reciprocal_gamma(nd + 1.0);
}

std::vector<double> binom_phi_table(double mu, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  PhiSequence seq(mu);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i == 0 ? seq.value() : seq.next());
  }
  return out;
}

double two_term_weight(const FractionalOrderPair& orders, double a, std::int64_t k) {
  if (k < 3) {
    throw std::domain_error("two_term_weight requires k >= 3");
  }
  const double kd = static_cast<double>(k);
  const double alpha = orders.alpha;
  const double beta = orders.beta;

  double second = 0.0;
  if (const double r = reciprocal_gamma(2.0 - alpha); r != 0.0) {
    second = r * (-gamma_ratio(kd - alpha, kd - 1.0) + 2.0 * gamma_ratio(kd + 1.0 - alpha, kd) -
                  gamma_ratio(kd + 2.0 - alpha, kd + 1.0));
  }
  double first = 0.0;
  if (const double r = reciprocal_gamma(1.0 - beta); r != 0.0) {
    first = a * r * (-gamma_ratio(kd - 1.0 - beta, kd - 1.0) + gamma_ratio(kd - beta, kd));
  }
  return second - first;
}

WeightTable::WeightTable(const FractionalOrderPair& orders, double a)
    : a_(a), alpha_seq_(-orders.alpha), beta_seq_(-orders.beta) {}

void WeightTable::ensure(std::size_t k_max) {
  if (weights_.size() > k_max) return;
  weights_.reserve(k_max + 1);
  while (weights_.size() <= k_max) {
    const std::size_t k = weights_.size();
    // keep alpha_seq_ at index k and beta_seq_ at index k - 1
    if (k >= 1) alpha_seq_.next();
    if (k >= 2) beta_seq_.next();
    weights_.push_back(k < 3 ? 0.0 : -alpha_seq_.value() - a_ * beta_seq_.value());
  }
}

double WeightTable::operator()(std::size_t k) {
  ensure(k);
  return weights_[k];
}

}  // namespace fracstab
