#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fracstab {

/// Orders of the two-term operator: 1 < alpha <= 2, 0 < beta <= 1.
struct FractionalOrderPair {
  double alpha;
  double beta;

  /// Throws std::invalid_argument when the pair violates the order bounds.
  static FractionalOrderPair make(double alpha, double beta);

  bool valid() const noexcept;
};

/// Gamma(x) / Gamma(y) for x, y > 0. Accurate for arguments well beyond 1e6.
double gamma_ratio(double x, double y);

/// 1 / Gamma(x), with the value 0 at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// Generalized binomial C(n + mu - 1, n) = Gamma(n + mu) / (Gamma(mu) Gamma(n + 1)).
/// Zero for n < 0. Throws std::domain_error when mu is a non-positive integer
/// and n >= 1 (Gamma(mu) has a pole).
double binom_phi(double mu, std::int64_t n);

/// Sequential form of binom_phi: phi(n) = phi(n - 1) * (n + mu - 1) / n.
///
/// Unlike the direct formula this is a polynomial in mu, so it also covers the
/// pole cases; for mu = 0 it yields the Kronecker delta.
class PhiSequence {
public:
  explicit PhiSequence(double mu) noexcept : mu_(mu) {}

  double value() const noexcept { return value_; }
  std::int64_t index() const noexcept { return n_; }

  /// Advance to the next index and return the new value.
  double next() noexcept {
    ++n_;
    value_ *= (static_cast<double>(n_) + mu_ - 1.0) / static_cast<double>(n_);
    return value_;
  }

private:
  double mu_;
  std::int64_t n_ = 0;
  double value_ = 1.0;
};

/// phi_mu(0..count-1) via PhiSequence.
std::vector<double> binom_phi_table(double mu, std::size_t count);

/// Memory weight of x(n - k) in the explicit two-term recurrence, k >= 3,
/// evaluated from its gamma-ratio form. The reciprocal-gamma prefactors vanish
/// at alpha = 2 and beta = 1. Throws std::domain_error for k < 3.
double two_term_weight(const FractionalOrderPair& orders, double a, std::int64_t k);

/// Incrementally grown table of two-term memory weights.
///
/// Uses the identity W(k) = -phi_{-alpha}(k) - a * phi_{-beta}(k - 1), which is
/// the gamma-ratio form with the second and first differences of phi folded in.
/// The product form avoids the cancellation that the three-term difference
/// suffers for large k. Entries 0..2 are zero. Not synchronized: keep one
/// table per trajectory computation.
class WeightTable {
public:
  WeightTable(const FractionalOrderPair& orders, double a);

  /// Make W(0..k_max) available.
  void ensure(std::size_t k_max);

  /// W(k), extending the table when needed.
  double operator()(std::size_t k);

  /// Entries computed so far, W(0..size()-1).
  const std::vector<double>& values() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }

private:
  double a_;
  PhiSequence alpha_seq_;
  PhiSequence beta_seq_;
  std::vector<double> weights_;
};

}  // namespace fracstab
