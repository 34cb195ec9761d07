#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace arborrep {

/// Permutation of {0, ..., degree-1}, stored as its image table.
class Permutation {
public:
  Permutation() = default;

  /// Identity of the given degree.
  explicit Permutation(int degree) : img_(static_cast<size_t>(degree)) {
    for (int i = 0; i < degree; ++i) img_[static_cast<size_t>(i)] = i;
  }

  /// From an image table; rejects anything that is not a bijection.
  explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (int x : img_) {
      if (x < 0 || static_cast<size_t>(x) >= img_.size() || seen[static_cast<size_t>(x)])
        throw std::invalid_argument("Permutation: image table is not a bijection");
      seen[static_cast<size_t>(x)] = 1;
    }
  }

  int degree() const { return static_cast<int>(img_.size()); }

  int operator()(int x) const { return img_[static_cast<size_t>(x)]; }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (img_[static_cast<size_t>(i)] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(img_.size());
    for (int i = 0; i < degree(); ++i) inv[static_cast<size_t>(img_[static_cast<size_t>(i)])] = i;
    Permutation p;
    p.img_ = std::move(inv);
    return p;
  }

  const std::vector<int>& images() const { return img_; }

  bool operator==(const Permutation& other) const { return img_ == other.img_; }

  /// Smallest point moved, or -1 for the identity.
  int first_moved_point() const {
    for (int i = 0; i < degree(); ++i)
      if (img_[static_cast<size_t>(i)] != i) return i;
    return -1;
  }

  /// Multiplicative order.
  long long order() const {
    std::vector<char> seen(img_.size(), 0);
    long long ord = 1;
    for (int i = 0; i < degree(); ++i) {
      if (seen[static_cast<size_t>(i)]) continue;
      long long len = 0;
      int x = i;
      while (!seen[static_cast<size_t>(x)]) {
        seen[static_cast<size_t>(x)] = 1;
        x = img_[static_cast<size_t>(x)];
        ++len;
      }
      long long g = gcd_ll(ord, len);
      ord = ord / g * len;
    }
    return ord;
  }

private:
  static long long gcd_ll(long long a, long long b) { return b == 0 ? a : gcd_ll(b, a % b); }

  std::vector<int> img_;
};

/// outer(inner(x)); the right factor acts first.
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.degree() != inner.degree()) throw std::invalid_argument("compose: degree mismatch");
  std::vector<int> img(static_cast<size_t>(outer.degree()));
  for (int x = 0; x < outer.degree(); ++x) img[static_cast<size_t>(x)] = outer(inner(x));
  return Permutation(std::move(img));
}

/// Build from disjoint-cycle notation; unlisted points are fixed.
inline Permutation from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(static_cast<size_t>(degree));
  for (int i = 0; i < degree; ++i) img[static_cast<size_t>(i)] = i;
  for (const auto& cyc : cycles) {
    for (size_t i = 0; i < cyc.size(); ++i) {
      int from = cyc[i];
      int to = cyc[(i + 1) % cyc.size()];
      if (from < 0 || from >= degree || to < 0 || to >= degree)
        throw std::invalid_argument("from_cycles: point out of range");
      img[static_cast<size_t>(from)] = to;
    }
  }
  return Permutation(std::move(img));
}

struct PermutationHash {
  size_t operator()(const Permutation& p) const {
    size_t h = 1469598103934665603ull;
    for (int x : p.images()) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace arborrep
