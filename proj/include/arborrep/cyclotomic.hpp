#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace arborrep {

/// Coefficients of the e-th cyclotomic polynomial, constant term first.
/// Computed by exact division of x^e - 1 by the lower cyclotomic factors.
inline std::vector<long long> cyclotomic_polynomial(int e) {
  if (e < 1) throw std::invalid_argument("cyclotomic_polynomial: order must be positive");
  std::map<int, std::vector<long long>> phi;
  for (int d = 1; d <= e; ++d) {
    if (e % d != 0) continue;
    // f = x^d - 1
    std::vector<long long> f(static_cast<size_t>(d) + 1, 0);
    f[0] = -1;
    f[static_cast<size_t>(d)] = 1;
    for (const auto& [c, g] : phi) {
      if (d % c != 0 || c == d) continue;
      // exact division by the monic polynomial g
      std::vector<long long> q(f.size() - g.size() + 1, 0);
      std::vector<long long> rem = f;
      for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
        long long coef = rem[static_cast<size_t>(k) + g.size() - 1];
        q[static_cast<size_t>(k)] = coef;
        if (coef == 0) continue;
        for (size_t t = 0; t < g.size(); ++t) rem[static_cast<size_t>(k) + t] -= coef * g[t];
      }
      for (long long c2 : rem)
        if (c2 != 0) throw std::logic_error("cyclotomic_polynomial: division was not exact");
      f = std::move(q);
    }
    phi[d] = std::move(f);
  }
  return phi[e];
}

namespace detail {

struct CycloTable {
  int order = 1;
  int degree = 1;                               // phi(order)
  std::vector<std::vector<long long>> power;    // x^k mod Phi_order for k = 0 .. 2*order
};

inline const CycloTable& cyclo_table(int e) {
  static std::mutex mu;
  static std::map<int, CycloTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(e);
  if (it != cache.end()) return it->second;
  CycloTable table;
  table.order = e;
  std::vector<long long> phi = cyclotomic_polynomial(e);
  table.degree = static_cast<int>(phi.size()) - 1;
  int d = table.degree;
  table.power.assign(static_cast<size_t>(2 * e + 1), std::vector<long long>(static_cast<size_t>(d), 0));
  std::vector<long long> cur(static_cast<size_t>(d), 0);
  cur[0] = 1;
  table.power[0] = cur;
  for (int k = 1; k <= 2 * e; ++k) {
    long long overflow = d > 0 ? cur[static_cast<size_t>(d - 1)] : 0;
    for (int i = d - 1; i >= 1; --i) cur[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
    if (d > 0) cur[0] = 0;
    if (overflow != 0)
      for (int i = 0; i < d; ++i) cur[static_cast<size_t>(i)] -= overflow * phi[static_cast<size_t>(i)];
    table.power[static_cast<size_t>(k)] = cur;
  }
  return cache.emplace(e, std::move(table)).first->second;
}

}  // namespace detail

/// Exact element of the cyclotomic integer ring Z[zeta_e], stored on the
/// power basis 1, zeta, ..., zeta^{phi(e)-1} after reduction modulo the e-th
/// cyclotomic polynomial. Representations are canonical, so equality is
/// coefficient equality.
class Cyclotomic {
public:
  explicit Cyclotomic(int order = 1)
      : order_(order), coeffs_(static_cast<size_t>(detail::cyclo_table(order).degree), 0) {}

  static Cyclotomic integer(int order, long long n) {
    Cyclotomic c(order);
    c.coeffs_[0] = n;
    return c;
  }

  /// zeta_order ^ k.
  static Cyclotomic root_power(int order, long long k) {
    Cyclotomic c(order);
    long long r = ((k % order) + order) % order;
    c.coeffs_ = detail::cyclo_table(order).power[static_cast<size_t>(r)];
    return c;
  }

  int order() const { return order_; }
  const std::vector<long long>& coefficients() const { return coeffs_; }

  bool is_zero() const {
    for (long long c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  bool is_integer() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }

  long long integer_value() const {
    if (!is_integer()) throw std::invalid_argument("Cyclotomic::integer_value: not a rational integer");
    return coeffs_[0];
  }

  /// Galois conjugate zeta -> zeta^{-1} (complex conjugation).
  Cyclotomic conjugate() const {
    const auto& table = detail::cyclo_table(order_);
    Cyclotomic out(order_);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      long long k = (order_ - static_cast<long long>(i)) % order_;
      const auto& row = table.power[static_cast<size_t>(k)];
      for (size_t j = 0; j < out.coeffs_.size(); ++j) out.coeffs_[j] += coeffs_[i] * row[j];
    }
    return out;
  }

  Cyclotomic scaled(long long n) const {
    Cyclotomic out = *this;
    for (long long& c : out.coeffs_) c *= n;
    return out;
  }

  /// Exact division by a rational integer; throws when not divisible.
  Cyclotomic divided_by(long long n) const {
    if (n == 0) throw std::invalid_argument("Cyclotomic::divided_by: zero divisor");
    Cyclotomic out = *this;
    for (long long& c : out.coeffs_) {
      if (c % n != 0) throw std::invalid_argument("Cyclotomic::divided_by: not divisible");
      c /= n;
    }
    return out;
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    a.check_same_order(b);
    Cyclotomic out = a;
    for (size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
    return out;
  }

  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    a.check_same_order(b);
    Cyclotomic out = a;
    for (size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] -= b.coeffs_[i];
    return out;
  }

  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    a.check_same_order(b);
    const auto& table = detail::cyclo_table(a.order_);
    size_t d = a.coeffs_.size();
    std::vector<long long> prod(2 * d, 0);
    for (size_t i = 0; i < d; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (size_t j = 0; j < d; ++j) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    Cyclotomic out(a.order_);
    for (size_t k = 0; k < 2 * d; ++k) {
      if (prod[k] == 0) continue;
      if (k < d) {
        out.coeffs_[k] += prod[k];
      } else {
        const auto& row = table.power[k];
        for (size_t j = 0; j < d; ++j) out.coeffs_[j] += prod[k] * row[j];
      }
    }
    return out;
  }

  bool operator==(const Cyclotomic& other) const { return order_ == other.order_ && coeffs_ == other.coeffs_; }

  /// Deterministic total order, used only to canonicalize row orderings.
  bool operator<(const Cyclotomic& other) const {
    if (order_ != other.order_) return order_ < other.order_;
    return coeffs_ < other.coeffs_;
  }

private:
  void check_same_order(const Cyclotomic& other) const {
    if (order_ != other.order_) throw std::invalid_argument("Cyclotomic: mixed root orders");
  }

  int order_;
  std::vector<long long> coeffs_;
};

}  // namespace arborrep
