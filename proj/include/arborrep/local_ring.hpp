#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace arborrep {

/// Truncated compact discrete valuation rings with residue field F_p: either
/// Z/p^r (uniformiser p) or F_p[t]/(t^r) (uniformiser t). Elements are digit
/// vectors of length r in base p, lowest pi-power first; arithmetic differs
/// only in carry handling.
enum class RingKind { padic, laurent };

struct LocalRingSpec {
  RingKind kind = RingKind::padic;
  int prime = 2;
  int precision = 1;

  bool operator==(const LocalRingSpec& other) const {
    return kind == other.kind && prime == other.prime && precision == other.precision;
  }
};

using RingElem = std::vector<int>;

namespace detail {

inline bool is_prime_number(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void check_ring(const LocalRingSpec& spec) {
  if (!is_prime_number(spec.prime)) throw std::invalid_argument("LocalRingSpec: prime required");
  if (spec.precision < 1) throw std::invalid_argument("LocalRingSpec: positive precision required");
}

inline void check_elem(const LocalRingSpec& spec, const RingElem& a) {
  if (static_cast<int>(a.size()) != spec.precision)
    throw std::invalid_argument("ring element has wrong precision");
  for (int d : a)
    if (d < 0 || d >= spec.prime) throw std::invalid_argument("ring element digit out of range");
}

}  // namespace detail

inline RingElem ring_zero(const LocalRingSpec& spec) {
  detail::check_ring(spec);
  return RingElem(static_cast<size_t>(spec.precision), 0);
}

inline RingElem ring_from_int(const LocalRingSpec& spec, long long value) {
  RingElem out = ring_zero(spec);
  if (spec.kind == RingKind::laurent) {
    long long d = value % spec.prime;
    if (d < 0) d += spec.prime;
    out[0] = static_cast<int>(d);
    return out;
  }
  // Base-p expansion of the least nonnegative residue modulo p^r.
  long long p = spec.prime;
  for (int i = 0; i < spec.precision; ++i) {
    long long d = value % p;
    if (d < 0) d += p;
    out[static_cast<size_t>(i)] = static_cast<int>(d);
    value = (value - d) / p;
  }
  return out;
}

inline RingElem ring_one(const LocalRingSpec& spec) { return ring_from_int(spec, 1); }

inline bool ring_is_zero(const RingElem& a) {
  for (int d : a)
    if (d != 0) return false;
  return true;
}

/// Units are exactly the elements with nonzero residue digit.
inline bool ring_is_unit(const LocalRingSpec& spec, const RingElem& a) {
  detail::check_elem(spec, a);
  return a[0] != 0;
}

inline RingElem ring_add(const LocalRingSpec& spec, const RingElem& a, const RingElem& b) {
  detail::check_elem(spec, a);
  detail::check_elem(spec, b);
  RingElem out(a.size());
  int carry = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int s = a[i] + b[i] + carry;
    carry = spec.kind == RingKind::padic && s >= spec.prime ? 1 : 0;
    out[i] = s % spec.prime;
  }
  return out;
}

inline RingElem ring_neg(const LocalRingSpec& spec, const RingElem& a) {
  detail::check_elem(spec, a);
  RingElem out(a.size(), 0);
  if (spec.kind == RingKind::laurent) {
    for (size_t i = 0; i < a.size(); ++i) out[i] = (spec.prime - a[i]) % spec.prime;
    return out;
  }
  // p^r - a, digit by digit with borrow.
  int borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int d = -a[i] - borrow;
    borrow = d < 0 ? 1 : 0;
    out[i] = (d + spec.prime) % spec.prime;
  }
  return out;
}

inline RingElem ring_sub(const LocalRingSpec& spec, const RingElem& a, const RingElem& b) {
  return ring_add(spec, a, ring_neg(spec, b));
}

inline RingElem ring_mul(const LocalRingSpec& spec, const RingElem& a, const RingElem& b) {
  detail::check_elem(spec, a);
  detail::check_elem(spec, b);
  std::vector<long long> acc(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < b.size(); ++j) acc[i + j] += static_cast<long long>(a[i]) * b[j];
  }
  RingElem out(a.size());
  long long carry = 0;
  for (size_t i = 0; i < acc.size(); ++i) {
    long long s = acc[i] + carry;
    carry = spec.kind == RingKind::padic ? s / spec.prime : 0;
    out[i] = static_cast<int>(s % spec.prime);
  }
  return out;
}

/// Multiplication by the uniformiser: shift digits up, dropping the top one.
inline RingElem ring_shift_up(const LocalRingSpec& spec, const RingElem& a) {
  detail::check_elem(spec, a);
  RingElem out(a.size(), 0);
  for (size_t i = 1; i < a.size(); ++i) out[i] = a[i - 1];
  return out;
}

/// Exact division by the uniformiser; requires residue digit zero. The top
/// digit of the result is unconstrained by the input and is set to zero.
inline RingElem ring_shift_down(const LocalRingSpec& spec, const RingElem& a) {
  detail::check_elem(spec, a);
  if (a[0] != 0) throw std::invalid_argument("ring_shift_down: element is not divisible");
  RingElem out(a.size(), 0);
  for (size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i];
  return out;
}

/// Reduction modulo pi^k: zeroes all digits from position k on.
inline RingElem ring_reduce(const LocalRingSpec& spec, const RingElem& a, int k) {
  detail::check_elem(spec, a);
  if (k < 0 || k > spec.precision) throw std::invalid_argument("ring_reduce: bad cutoff");
  RingElem out = a;
  for (size_t i = static_cast<size_t>(k); i < out.size(); ++i) out[i] = 0;
  return out;
}

/// Inverse of a unit by Newton iteration x <- x(2 - ax), which squares the
/// error term 1 - ax in any ring.
inline RingElem ring_inv(const LocalRingSpec& spec, const RingElem& a) {
  if (!ring_is_unit(spec, a)) throw std::invalid_argument("ring_inv: element is not a unit");
  // Inverse of the residue digit modulo p by Fermat.
  long long inv0 = 1;
  {
    long long base = a[0] % spec.prime;
    long long e = spec.prime - 2;
    while (e > 0) {
      if (e & 1) inv0 = inv0 * base % spec.prime;
      base = base * base % spec.prime;
      e >>= 1;
    }
  }
  RingElem x = ring_from_int(spec, inv0);
  RingElem two = ring_from_int(spec, 2);
  int correct = 1;
  while (correct < spec.precision) {
    x = ring_mul(spec, x, ring_sub(spec, two, ring_mul(spec, a, x)));
    correct *= 2;
  }
  return x;
}

}  // namespace arborrep
