#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arborrep/cyclotomic.hpp"
#include "arborrep/errors.hpp"
#include "arborrep/perm.hpp"
#include "arborrep/stab_chain.hpp"
#include "arborrep/tree_group.hpp"

namespace arborrep {

/// Largest group order accepted by the exact character-table machinery.
inline constexpr unsigned long long kCharTableOrderCap = 20'000;

/// Conjugacy class data of an explicitly enumerated finite group.
struct ClassData {
  std::vector<Permutation> elements;   // the whole group, identity first
  std::vector<int> class_of;           // element index -> class index
  std::vector<long long> class_size;   // class index -> size
  std::vector<int> class_rep;          // class index -> element index of representative
  std::vector<int> inverse_class;      // class index -> class of inverses
  long long exponent = 1;              // lcm of element orders

  long long order() const { return static_cast<long long>(elements.size()); }
  int class_count() const { return static_cast<int>(class_rep.size()); }
};

namespace detail {

inline std::unordered_map<Permutation, int, PermutationHash> element_index(
    const std::vector<Permutation>& elements) {
  std::unordered_map<Permutation, int, PermutationHash> idx;
  idx.reserve(elements.size() * 2);
  for (size_t i = 0; i < elements.size(); ++i) {
    if (!idx.emplace(elements[i], static_cast<int>(i)).second)
      throw std::invalid_argument("conjugacy_classes: duplicate element in listing");
  }
  return idx;
}

}  // namespace detail

/// Partitions a fully enumerated group into conjugacy classes. The class of
/// each element is its orbit under conjugation by the given conjugators,
/// which must generate the group; when omitted, all elements are used.
/// Identity is placed in class 0. Closure of the listing is spot checked.
inline ClassData conjugacy_classes(std::vector<Permutation> elements,
                                   const std::vector<Permutation>& conjugators = {}) {
  if (elements.empty()) throw std::invalid_argument("conjugacy_classes: empty element list");
  int degree = elements[0].degree();
  for (const auto& g : elements)
    if (g.degree() != degree) throw std::invalid_argument("conjugacy_classes: mixed degrees");

  // Identity first.
  for (size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].is_identity()) {
      std::swap(elements[0], elements[i]);
      break;
    }
  }
  if (!elements[0].is_identity()) throw std::invalid_argument("conjugacy_classes: identity missing");

  auto idx = detail::element_index(elements);
  int n = static_cast<int>(elements.size());

  std::vector<int> inverse_of(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    auto it = idx.find(elements[static_cast<size_t>(i)].inverse());
    if (it == idx.end()) throw std::invalid_argument("conjugacy_classes: listing not closed under inverse");
    inverse_of[static_cast<size_t>(i)] = it->second;
  }
  // Spot check closure under products on a deterministic sample.
  int sample = std::min(n, 24);
  for (int i = 0; i < sample; ++i) {
    for (int j = 0; j < sample; ++j) {
      Permutation p = compose(elements[static_cast<size_t>(i)], elements[static_cast<size_t>(j)]);
      if (idx.find(p) == idx.end())
        throw std::invalid_argument("conjugacy_classes: listing not closed under products");
    }
  }

  std::vector<Permutation> conj = conjugators.empty() ? elements : conjugators;
  std::vector<Permutation> conj_inv;
  conj_inv.reserve(conj.size());
  for (const auto& c : conj) {
    if (c.degree() != degree) throw std::invalid_argument("conjugacy_classes: conjugator degree mismatch");
    if (idx.find(c) == idx.end())
      throw std::invalid_argument("conjugacy_classes: conjugator outside the group");
    conj_inv.push_back(c.inverse());
  }

  ClassData data;
  data.elements = std::move(elements);
  data.class_of.assign(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (data.class_of[static_cast<size_t>(i)] != -1) continue;
    int cls = data.class_count();
    data.class_rep.push_back(i);
    data.class_of[static_cast<size_t>(i)] = cls;
    long long size = 0;
    std::vector<int> queue{i};
    ++size;
    while (!queue.empty()) {
      int cur = queue.back();
      queue.pop_back();
      for (size_t c = 0; c < conj.size(); ++c) {
        Permutation image = compose(conj[c], compose(data.elements[static_cast<size_t>(cur)], conj_inv[c]));
        int target = idx.at(image);
        if (data.class_of[static_cast<size_t>(target)] == -1) {
          data.class_of[static_cast<size_t>(target)] = cls;
          queue.push_back(target);
          ++size;
        }
      }
    }
    data.class_size.push_back(size);
  }

  data.inverse_class.resize(static_cast<size_t>(data.class_count()));
  for (int k = 0; k < data.class_count(); ++k) {
    int rep = data.class_rep[static_cast<size_t>(k)];
    data.inverse_class[static_cast<size_t>(k)] = data.class_of[static_cast<size_t>(inverse_of[static_cast<size_t>(rep)])];
  }

  data.exponent = 1;
  for (int k = 0; k < data.class_count(); ++k) {
    long long ord = data.elements[static_cast<size_t>(data.class_rep[static_cast<size_t>(k)])].order();
    data.exponent = std::lcm(data.exponent, ord);
  }
  return data;
}

/// Exact character table: one row per irreducible character, one column per
/// conjugacy class, with values in the cyclotomic integers of the group
/// exponent. Rows are sorted by degree, then by value columns; class order
/// follows ClassData.
struct CharacterTable {
  long long group_order = 1;
  long long exponent = 1;
  std::vector<long long> class_size;
  std::vector<int> inverse_class;
  std::vector<long long> degree;                 // per row
  std::vector<std::vector<Cyclotomic>> value;    // value[row][class]

  int row_count() const { return static_cast<int>(degree.size()); }
  int class_count() const { return static_cast<int>(class_size.size()); }

  /// Row index of the trivial character (all values 1).
  int trivial_row() const {
    for (int r = 0; r < row_count(); ++r) {
      bool all_one = true;
      for (const auto& v : value[static_cast<size_t>(r)])
        if (!(v.is_integer() && v.integer_value() == 1)) { all_one = false; break; }
      if (all_one) return r;
    }
    throw std::logic_error("CharacterTable: trivial character missing");
  }
};

namespace detail {

// ----- modular arithmetic over a word-sized prime -----------------------

inline long long mod_mul(long long a, long long b, long long m) { return (a % m) * (b % m) % m; }

inline long long mod_pow(long long a, long long e, long long m) {
  long long r = 1 % m;
  a %= m;
  if (a < 0) a += m;
  while (e > 0) {
    if (e & 1) r = mod_mul(r, a, m);
    a = mod_mul(a, a, m);
    e >>= 1;
  }
  return r;
}

inline long long mod_inv(long long a, long long p) { return mod_pow(a, p - 2, p); }

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Smallest prime l with l = 1 mod e and l > bound.
inline long long splitting_prime(long long e, long long bound) {
  long long l = ((bound / e) + 1) * e + 1;
  while (!is_prime(l)) l += e;
  return l;
}

inline std::vector<long long> prime_factors(long long n) {
  std::vector<long long> out;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline long long primitive_root(long long p) {
  std::vector<long long> qs = prime_factors(p - 1);
  for (long long g = 2; g < p; ++g) {
    bool ok = true;
    for (long long q : qs)
      if (mod_pow(g, (p - 1) / q, p) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: search failed");
}

/// Square root modulo an odd prime (Tonelli-Shanks); throws when a is not a
/// quadratic residue.
inline long long mod_sqrt(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (mod_pow(a, (p - 1) / 2, p) != 1)
    throw std::invalid_argument("mod_sqrt: not a quadratic residue");
  if (p % 4 == 3) return mod_pow(a, (p + 1) / 4, p);
  long long q = p - 1;
  long long s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  long long z = 2;
  while (mod_pow(z, (p - 1) / 2, p) == 1) ++z;
  long long m = s;
  long long c = mod_pow(z, q, p);
  long long t = mod_pow(a, q, p);
  long long r = mod_pow(a, (q + 1) / 2, p);
  while (t != 1) {
    long long i = 0;
    long long t2 = t;
    while (t2 != 1) { t2 = mod_mul(t2, t2, p); ++i; }
    long long b = mod_pow(c, 1LL << (m - i - 1), p);
    m = i;
    c = mod_mul(b, b, p);
    t = mod_mul(t, c, p);
    r = mod_mul(r, b, p);
  }
  return r;
}

// ----- linear algebra over GF(l) -----------------------------------------

using ModVec = std::vector<long long>;
using ModMat = std::vector<ModVec>;

/// Basis of the kernel of a (not necessarily square) matrix.
inline std::vector<ModVec> kernel_basis(ModMat a, long long p) {
  if (a.empty()) return {};
  size_t rows = a.size();
  size_t cols = a[0].size();
  std::vector<int> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t sel = rank;
    while (sel < rows && a[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[rank], a[sel]);
    long long inv = mod_inv(a[rank][col], p);
    for (size_t j = col; j < cols; ++j) a[rank][j] = mod_mul(a[rank][j], inv, p);
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      long long f = a[i][col];
      for (size_t j = col; j < cols; ++j) {
        a[i][j] = (a[i][j] - mod_mul(f, a[rank][j], p) % p + p) % p;
      }
    }
    pivot_col.push_back(static_cast<int>(col));
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<ModVec> basis;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    ModVec v(cols, 0);
    v[free_col] = 1;
    for (size_t r = 0; r < rank; ++r) {
      long long coef = a[r][free_col];
      if (coef != 0) v[static_cast<size_t>(pivot_col[r])] = (p - coef) % p;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Coordinates of each column of y in the basis b (columns are vectors).
inline ModMat solve_in_basis(const std::vector<ModVec>& b, const std::vector<ModVec>& y, long long p) {
  size_t dim = b[0].size();
  size_t d = b.size();
  size_t m = y.size();
  ModMat aug(dim, ModVec(d + m, 0));
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < d; ++j) aug[i][j] = b[j][i];
    for (size_t j = 0; j < m; ++j) aug[i][d + j] = y[j][i];
  }
  size_t rank = 0;
  std::vector<int> pivot_row_of_col(d, -1);
  for (size_t col = 0; col < d && rank < dim; ++col) {
    size_t sel = rank;
    while (sel < dim && aug[sel][col] == 0) ++sel;
    if (sel == dim) throw std::logic_error("solve_in_basis: basis is degenerate");
    std::swap(aug[rank], aug[sel]);
    long long inv = mod_inv(aug[rank][col], p);
    for (size_t j = col; j < d + m; ++j) aug[rank][j] = mod_mul(aug[rank][j], inv, p);
    for (size_t i = 0; i < dim; ++i) {
      if (i == rank || aug[i][col] == 0) continue;
      long long f = aug[i][col];
      for (size_t j = col; j < d + m; ++j)
        aug[i][j] = (aug[i][j] - mod_mul(f, aug[rank][j], p) % p + p) % p;
    }
    pivot_row_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  for (size_t i = rank; i < dim; ++i)
    for (size_t j = 0; j < m; ++j)
      if (aug[i][d + j] != 0) throw std::logic_error("solve_in_basis: vector outside subspace");
  ModMat coords(m, ModVec(d, 0));
  for (size_t j = 0; j < m; ++j)
    for (size_t c = 0; c < d; ++c) coords[j][c] = aug[static_cast<size_t>(pivot_row_of_col[c])][d + j];
  return coords;
}

/// Characteristic polynomial of a square matrix over GF(p), lowest
/// coefficient first, via Hessenberg reduction.
inline ModVec char_poly(ModMat a, long long p) {
  size_t n = a.size();
  // Similarity reduction to upper Hessenberg form.
  for (size_t col = 0; col + 2 < n; ++col) {
    size_t piv = col + 1;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) continue;
    if (piv != col + 1) {
      std::swap(a[piv], a[col + 1]);
      for (size_t i = 0; i < n; ++i) std::swap(a[i][piv], a[i][col + 1]);
    }
    long long inv = mod_inv(a[col + 1][col], p);
    for (size_t i = col + 2; i < n; ++i) {
      if (a[i][col] == 0) continue;
      long long f = mod_mul(a[i][col], inv, p);
      for (size_t j = 0; j < n; ++j) a[i][j] = (a[i][j] - mod_mul(f, a[col + 1][j], p) % p + p) % p;
      for (size_t i2 = 0; i2 < n; ++i2) a[i2][col + 1] = (a[i2][col + 1] + mod_mul(f, a[i2][i], p)) % p;
    }
  }
  // p_k = det(x I - H_k) for the leading k x k block, by last-column expansion.
  std::vector<ModVec> polys(n + 1);
  polys[0] = {1};
  for (size_t k = 1; k <= n; ++k) {
    ModVec cur(k + 1, 0);
    // (x - h[k-1][k-1]) * p_{k-1}
    for (size_t t = 0; t < polys[k - 1].size(); ++t) {
      cur[t + 1] = (cur[t + 1] + polys[k - 1][t]) % p;
      cur[t] = (cur[t] - mod_mul(a[k - 1][k - 1], polys[k - 1][t], p) % p + p) % p;
    }
    long long subdiag = 1;
    for (size_t m = 1; m < k; ++m) {
      subdiag = mod_mul(subdiag, a[k - m][k - m - 1], p);
      if (subdiag == 0) break;
      long long coef = mod_mul(subdiag, a[k - 1 - m][k - 1], p);
      if (coef == 0) continue;
      for (size_t t = 0; t < polys[k - 1 - m].size(); ++t)
        cur[t] = (cur[t] - mod_mul(coef, polys[k - 1 - m][t], p) % p + p) % p;
    }
    polys[k] = std::move(cur);
  }
  return polys[n];
}

inline long long eval_poly(const ModVec& poly, long long x, long long p) {
  long long r = 0;
  for (size_t k = poly.size(); k-- > 0;) r = (mod_mul(r, x, p) + poly[k]) % p;
  return r;
}

// ----- abelian groups: basis extraction ----------------------------------

/// Abstract finite abelian group on canonical element ids.
struct IdGroup {
  std::vector<int> elems;  // ascending ids
  std::function<int(int, int)> mul;
  int id = 0;
};

inline int id_pow(const IdGroup& g, int a, long long k) {
  int r = g.id;
  int base = a;
  while (k > 0) {
    if (k & 1) r = g.mul(r, base);
    base = g.mul(base, base);
    k >>= 1;
  }
  return r;
}

inline long long id_order(const IdGroup& g, int a) {
  long long ord = 1;
  int cur = a;
  while (cur != g.id) {
    cur = g.mul(cur, a);
    ++ord;
  }
  return ord;
}

/// Basis of a finite abelian p-group given by explicit ids: returns pairs
/// (element, order) whose cyclic spans decompose the group as a direct sum.
/// Works by taking a maximal-order element and lifting a basis of the
/// quotient.
inline std::vector<std::pair<int, long long>> pgroup_basis(const IdGroup& g) {
  if (g.elems.size() == 1) return {};
  int best = g.id;
  long long best_ord = 1;
  for (int a : g.elems) {
    long long ord = id_order(g, a);
    if (ord > best_ord) { best = a; best_ord = ord; }
  }
  const long long D = best_ord;
  // Canonical coset representatives of <best>: smallest id in the coset.
  std::unordered_map<int, int> rep;
  rep.reserve(g.elems.size() * 2);
  for (int a : g.elems) {
    if (rep.count(a)) continue;
    std::vector<int> coset;
    int cur = a;
    for (long long t = 0; t < D; ++t) {
      coset.push_back(cur);
      cur = g.mul(cur, best);
    }
    int low = *std::min_element(coset.begin(), coset.end());
    for (int c : coset) rep[c] = low;
  }
  IdGroup quotient;
  for (int a : g.elems)
    if (rep.at(a) == a) quotient.elems.push_back(a);
  std::sort(quotient.elems.begin(), quotient.elems.end());
  quotient.id = rep.at(g.id);
  auto rep_map = std::make_shared<std::unordered_map<int, int>>(std::move(rep));
  auto base_mul = g.mul;
  quotient.mul = [rep_map, base_mul](int x, int y) { return rep_map->at(base_mul(x, y)); };

  std::vector<std::pair<int, long long>> basis{{best, D}};
  for (const auto& [h, d] : pgroup_basis(quotient)) {
    // h^d lies in <best>; adjust so the lift has exact order d.
    int hd = id_pow(g, h, d);
    long long s = -1;
    int cur = g.id;
    for (long long t = 0; t < D; ++t) {
      if (cur == hd) { s = t; break; }
      cur = g.mul(cur, best);
    }
    if (s < 0 || s % d != 0) throw std::logic_error("pgroup_basis: lift failed");
    int adjusted = g.mul(h, id_pow(g, best, D - (s / d) % D));
    if (id_order(g, adjusted) != d) throw std::logic_error("pgroup_basis: lifted order mismatch");
    basis.emplace_back(adjusted, d);
  }
  return basis;
}

}  // namespace detail

/// Computes the exact character table of the group described by the class
/// data. Abelian groups are handled by explicit basis decomposition; other
/// groups go through eigenspace splitting of the class algebra over a prime
/// field, with values lifted to cyclotomic integers. Row orthogonality is
/// verified before returning.
inline CharacterTable character_table(const ClassData& classes) {
  const long long n = classes.order();
  if (static_cast<unsigned long long>(n) > kCharTableOrderCap)
    throw CapExceeded("character_table: group order " + std::to_string(n) + " exceeds cap");
  const int r = classes.class_count();
  const long long e = classes.exponent;

  CharacterTable table;
  table.group_order = n;
  table.exponent = e;
  table.class_size = classes.class_size;
  table.inverse_class = classes.inverse_class;

  auto idx = detail::element_index(classes.elements);
  auto mul_idx = [&](int a, int b) {
    return idx.at(compose(classes.elements[static_cast<size_t>(a)], classes.elements[static_cast<size_t>(b)]));
  };

  std::vector<std::pair<long long, std::vector<Cyclotomic>>> rows;

  if (r == static_cast<int>(n)) {
    // Abelian: decompose into a direct sum of cyclic groups, then read the
    // characters off as root-of-unity homomorphisms.
    std::vector<std::pair<int, long long>> basis;
    for (long long p : detail::prime_factors(n)) {
      long long rest = n;
      while (rest % p == 0) rest /= p;
      // Image of the power map kills all other primary parts.
      std::vector<int> part;
      for (int a = 0; a < n; ++a)
        part.push_back(detail::id_pow({std::vector<int>{}, mul_idx, 0}, a, rest));
      std::sort(part.begin(), part.end());
      part.erase(std::unique(part.begin(), part.end()), part.end());
      detail::IdGroup sylow{std::move(part), mul_idx, 0};
      for (auto& bv : detail::pgroup_basis(sylow)) basis.push_back(bv);
    }
    // Discrete logarithms: enumerate all exponent tuples.
    size_t k = basis.size();
    std::vector<std::vector<long long>> dlog(static_cast<size_t>(n));
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<long long> tuple(k, 0);
    long long covered = 0;
    while (true) {
      int prod = 0;
      for (size_t i = 0; i < k; ++i) prod = mul_idx(prod, detail::id_pow({std::vector<int>{}, mul_idx, 0}, basis[i].first, tuple[i]));
      if (seen[static_cast<size_t>(prod)]) throw std::logic_error("character_table: abelian basis is not independent");
      seen[static_cast<size_t>(prod)] = true;
      dlog[static_cast<size_t>(prod)] = tuple;
      ++covered;
      size_t pos = 0;
      while (pos < k && ++tuple[pos] == basis[pos].second) tuple[pos++] = 0;
      if (pos == k) break;
    }
    if (covered != n) throw std::logic_error("character_table: abelian basis does not span");

    std::vector<long long> chi_tuple(k, 0);
    while (true) {
      std::vector<Cyclotomic> row;
      row.reserve(static_cast<size_t>(r));
      for (int c = 0; c < r; ++c) {
        int elem = classes.class_rep[static_cast<size_t>(c)];
        long long arg = 0;
        for (size_t i = 0; i < k; ++i)
          arg = (arg + chi_tuple[i] * dlog[static_cast<size_t>(elem)][i] % e * (e / basis[i].second)) % e;
        row.push_back(Cyclotomic::root_power(static_cast<int>(e), arg));
      }
      rows.emplace_back(1, std::move(row));
      size_t pos = 0;
      while (pos < k && ++chi_tuple[pos] == basis[pos].second) chi_tuple[pos++] = 0;
      if (pos == k) break;
    }
  } else {
    // Class algebra eigenvector method over GF(l) with l = 1 mod e.
    const long long l = detail::splitting_prime(e, 2 * n);

    std::vector<std::vector<int>> class_members(static_cast<size_t>(r));
    for (int i = 0; i < static_cast<int>(n); ++i)
      class_members[static_cast<size_t>(classes.class_of[static_cast<size_t>(i)])].push_back(i);
    std::vector<int> inverse_of(static_cast<size_t>(n));
    for (int i = 0; i < static_cast<int>(n); ++i)
      inverse_of[static_cast<size_t>(i)] = idx.at(classes.elements[static_cast<size_t>(i)].inverse());

    // Structure-constant matrix of class i acting on the class algebra.
    auto class_matrix = [&](int i) {
      detail::ModMat m(static_cast<size_t>(r), detail::ModVec(static_cast<size_t>(r), 0));
      for (int k = 0; k < r; ++k) {
        int z = classes.class_rep[static_cast<size_t>(k)];
        for (int x : class_members[static_cast<size_t>(i)]) {
          int y = mul_idx(inverse_of[static_cast<size_t>(x)], z);
          int j = classes.class_of[static_cast<size_t>(y)];
          m[static_cast<size_t>(j)][static_cast<size_t>(k)] += 1;
        }
      }
      for (auto& row : m)
        for (auto& v : row) v %= l;
      return m;
    };

    std::vector<std::vector<detail::ModVec>> spaces;
    {
      std::vector<detail::ModVec> full;
      for (int i = 0; i < r; ++i) {
        detail::ModVec v(static_cast<size_t>(r), 0);
        v[static_cast<size_t>(i)] = 1;
        full.push_back(std::move(v));
      }
      spaces.push_back(std::move(full));
    }
    for (int i = 1; i < r; ++i) {
      bool split_done = true;
      for (const auto& s : spaces)
        if (s.size() > 1) split_done = false;
      if (split_done) break;
      detail::ModMat mi = class_matrix(i);
      std::vector<std::vector<detail::ModVec>> next;
      for (auto& space : spaces) {
        if (space.size() == 1) {
          next.push_back(std::move(space));
          continue;
        }
        size_t d = space.size();
        // Restriction of mi to the subspace in its own coordinates.
        std::vector<detail::ModVec> images;
        images.reserve(d);
        for (const auto& b : space) {
          detail::ModVec y(static_cast<size_t>(r), 0);
          for (int row = 0; row < r; ++row) {
            long long acc = 0;
            for (int col = 0; col < r; ++col)
              acc = (acc + detail::mod_mul(mi[static_cast<size_t>(row)][static_cast<size_t>(col)],
                                           b[static_cast<size_t>(col)], l)) % l;
            y[static_cast<size_t>(row)] = acc;
          }
          images.push_back(std::move(y));
        }
        detail::ModMat coords = detail::solve_in_basis(space, images, l);
        detail::ModMat a(d, detail::ModVec(d, 0));
        for (size_t col = 0; col < d; ++col)
          for (size_t row = 0; row < d; ++row) a[row][col] = coords[col][row];
        detail::ModVec poly = detail::char_poly(a, l);
        std::vector<long long> roots;
        for (long long x = 0; x < l; ++x)
          if (detail::eval_poly(poly, x, l) == 0) roots.push_back(x);
        size_t total = 0;
        for (long long lambda : roots) {
          detail::ModMat shifted = a;
          for (size_t t = 0; t < d; ++t) shifted[t][t] = (shifted[t][t] - lambda % l + l) % l;
          auto ker = detail::kernel_basis(shifted, l);
          if (ker.empty()) continue;
          std::vector<detail::ModVec> sub;
          for (const auto& kv : ker) {
            detail::ModVec ambient(static_cast<size_t>(r), 0);
            for (size_t t = 0; t < d; ++t)
              for (int row = 0; row < r; ++row)
                ambient[static_cast<size_t>(row)] =
                    (ambient[static_cast<size_t>(row)] +
                     detail::mod_mul(kv[t], space[t][static_cast<size_t>(row)], l)) % l;
            sub.push_back(std::move(ambient));
          }
          total += sub.size();
          next.push_back(std::move(sub));
        }
        if (total != d) throw std::logic_error("character_table: class algebra failed to diagonalize");
      }
      spaces = std::move(next);
    }
    for (const auto& s : spaces)
      if (s.size() != 1) throw std::logic_error("character_table: eigenspaces not fully split");

    // Primitive e-th root of unity in GF(l).
    const long long z = detail::mod_pow(detail::primitive_root(l), (l - 1) / e, l);
    std::vector<long long> zpow(static_cast<size_t>(e));
    for (long long t = 0; t < e; ++t) zpow[static_cast<size_t>(t)] = detail::mod_pow(z, t, l);
    if (e > 1 && zpow[1] == 1) throw std::logic_error("character_table: root of unity is not primitive");

    // Power maps for class representatives: class of rep^j.
    std::vector<std::vector<int>> pow_class(static_cast<size_t>(r), std::vector<int>(static_cast<size_t>(e)));
    for (int k = 0; k < r; ++k) {
      int cur = 0;
      for (long long j = 0; j < e; ++j) {
        pow_class[static_cast<size_t>(k)][static_cast<size_t>(j)] = classes.class_of[static_cast<size_t>(cur)];
        cur = mul_idx(cur, classes.class_rep[static_cast<size_t>(k)]);
      }
    }

    const long long inv_e = detail::mod_inv(e % l, l);
    for (const auto& space : spaces) {
      detail::ModVec w = space[0];
      if (w[0] == 0) throw std::logic_error("character_table: eigenvector vanishes at the identity class");
      long long scale = detail::mod_inv(w[0], l);
      for (auto& v : w) v = detail::mod_mul(v, scale, l);
      // Degree from the second orthogonality of central characters.
      long long s = 0;
      for (int k = 0; k < r; ++k) {
        long long wk = w[static_cast<size_t>(k)];
        long long wkc = w[static_cast<size_t>(classes.inverse_class[static_cast<size_t>(k)])];
        s = (s + detail::mod_mul(detail::mod_mul(wk, wkc, l),
                                 detail::mod_inv(classes.class_size[static_cast<size_t>(k)] % l, l), l)) % l;
      }
      long long deg_sq = detail::mod_mul(n % l, detail::mod_inv(s, l), l);
      long long deg = detail::mod_sqrt(deg_sq, l);
      deg = std::min(deg, l - deg);
      // Character values modulo l, then lifted digit by digit.
      detail::ModVec chi_mod(static_cast<size_t>(r));
      for (int k = 0; k < r; ++k)
        chi_mod[static_cast<size_t>(k)] =
            detail::mod_mul(detail::mod_mul(deg % l, w[static_cast<size_t>(k)], l),
                            detail::mod_inv(classes.class_size[static_cast<size_t>(k)] % l, l), l);
      std::vector<Cyclotomic> row;
      row.reserve(static_cast<size_t>(r));
      for (int k = 0; k < r; ++k) {
        Cyclotomic value(static_cast<int>(e));
        for (long long t = 0; t < e; ++t) {
          long long c = 0;
          for (long long j = 0; j < e; ++j) {
            long long term = chi_mod[static_cast<size_t>(pow_class[static_cast<size_t>(k)][static_cast<size_t>(j)])];
            long long tw = zpow[static_cast<size_t>((((e - t) % e) * j) % e)];
            c = (c + detail::mod_mul(term, tw, l)) % l;
          }
          c = detail::mod_mul(c, inv_e, l);
          if (c > deg) throw std::logic_error("character_table: lifted multiplicity out of range");
          if (c != 0) value = value + Cyclotomic::root_power(static_cast<int>(e), t).scaled(c);
        }
        row.push_back(std::move(value));
      }
      rows.emplace_back(deg, std::move(row));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    for (size_t k = 0; k < a.second.size(); ++k) {
      if (!(a.second[k] == b.second[k])) return a.second[k] < b.second[k];
    }
    return false;
  });
  for (auto& [deg, row] : rows) {
    table.degree.push_back(deg);
    table.value.push_back(std::move(row));
  }

  if (table.row_count() != r) throw std::logic_error("character_table: row count mismatch");
  long long deg_sq_sum = 0;
  for (long long d : table.degree) deg_sq_sum += d * d;
  if (deg_sq_sum != n) throw std::logic_error("character_table: degree squares do not sum to the order");
  // Exact row orthogonality; limited to modest sizes off the diagonal.
  for (int i = 0; i < r; ++i) {
    int jmax = r <= 64 ? r : i + 1;
    for (int j = i; j < jmax; ++j) {
      Cyclotomic acc(static_cast<int>(e));
      for (int k = 0; k < r; ++k) {
        Cyclotomic prod = table.value[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                          table.value[static_cast<size_t>(j)][static_cast<size_t>(classes.inverse_class[static_cast<size_t>(k)])];
        acc = acc + prod.scaled(classes.class_size[static_cast<size_t>(k)]);
      }
      Cyclotomic expected = Cyclotomic::integer(static_cast<int>(e), i == j ? n : 0);
      if (!(acc == expected)) throw std::logic_error("character_table: row orthogonality failed");
    }
  }
  return table;
}

/// Values of the permutation character (fixed-point counts) of the given
/// action, one entry per conjugacy class. The action must assign one
/// permutation per group element, in element order; constancy on classes is
/// verified.
inline std::vector<long long> permutation_character(const ClassData& classes,
                                                    const std::vector<Permutation>& action) {
  if (action.size() != classes.elements.size())
    throw std::invalid_argument("permutation_character: one permutation per element required");
  auto fixed = [](const Permutation& p) {
    long long f = 0;
    for (int x = 0; x < p.degree(); ++x)
      if (p(x) == x) ++f;
    return f;
  };
  std::vector<long long> chi(static_cast<size_t>(classes.class_count()), -1);
  for (size_t i = 0; i < action.size(); ++i) {
    long long f = fixed(action[i]);
    long long& slot = chi[static_cast<size_t>(classes.class_of[i])];
    if (slot == -1) slot = f;
    else if (slot != f)
      throw std::invalid_argument("permutation_character: fixed points not constant on a class");
  }
  return chi;
}

/// Permutation character of the group acting on its own stored domain.
inline std::vector<long long> permutation_character(const ClassData& classes) {
  return permutation_character(classes, classes.elements);
}

/// Multiset of irreducible constituents of a character, as sorted
/// (degree, multiplicity) pairs.
struct DecompositionRecord {
  std::vector<std::pair<long long, long long>> parts;
  bool trivial_removed = false;

  long long total_dimension() const {
    long long s = 0;
    for (const auto& [d, m] : parts) s += d * m;
    return s;
  }
  long long multiplicity_square_sum() const {
    long long s = 0;
    for (const auto& [d, m] : parts) s += m * m;
    return s;
  }
  bool operator==(const DecompositionRecord& other) const {
    return parts == other.parts && trivial_removed == other.trivial_removed;
  }
};

namespace detail {

/// Multiplicity of every irreducible row in an integer-valued character.
inline std::vector<long long> multiplicities(const CharacterTable& table,
                                             const std::vector<long long>& chi) {
  if (static_cast<int>(chi.size()) != table.class_count())
    throw std::invalid_argument("decompose_character: one value per class required");
  int e = static_cast<int>(table.exponent);
  std::vector<long long> mult;
  mult.reserve(static_cast<size_t>(table.row_count()));
  long long total = 0;
  for (int i = 0; i < table.row_count(); ++i) {
    Cyclotomic acc(e);
    for (int k = 0; k < table.class_count(); ++k) {
      const Cyclotomic& conj_val =
          table.value[static_cast<size_t>(i)][static_cast<size_t>(table.inverse_class[static_cast<size_t>(k)])];
      acc = acc + conj_val.scaled(table.class_size[static_cast<size_t>(k)] * chi[static_cast<size_t>(k)]);
    }
    Cyclotomic m = acc.divided_by(table.group_order);
    if (!m.is_integer() || m.integer_value() < 0)
      throw std::invalid_argument("decompose_character: character is not a nonnegative integral combination");
    mult.push_back(m.integer_value());
    total += m.integer_value() * table.degree[static_cast<size_t>(i)];
  }
  if (total != chi[0])
    throw std::invalid_argument("decompose_character: constituent dimensions do not sum to the degree");
  return mult;
}

inline DecompositionRecord record_from(const CharacterTable& table, const std::vector<long long>& mult,
                                       bool drop_trivial) {
  DecompositionRecord rec;
  int skip = -1;
  if (drop_trivial) {
    skip = table.trivial_row();
    if (mult[static_cast<size_t>(skip)] != 1)
      throw std::logic_error("decompose: trivial constituent does not have multiplicity one");
    rec.trivial_removed = true;
  }
  for (int i = 0; i < table.row_count(); ++i) {
    if (mult[static_cast<size_t>(i)] == 0) continue;
    if (i == skip) continue;
    rec.parts.emplace_back(table.degree[static_cast<size_t>(i)], mult[static_cast<size_t>(i)]);
  }
  std::sort(rec.parts.begin(), rec.parts.end());
  return rec;
}

struct EnumeratedImage {
  std::vector<Permutation> generators;
  ClassData classes;
};

/// Enumerates the permutation group generated by gens (cap enforced) and
/// computes its conjugacy classes.
inline EnumeratedImage enumerate_image(const std::vector<Permutation>& gens, int degree,
                                       unsigned long long cap) {
  StabChain chain = schreier_sims(gens, degree);
  std::vector<Permutation> elements = enumerate_elements(chain, cap);
  EnumeratedImage image;
  image.generators = gens;
  image.classes = conjugacy_classes(std::move(elements), gens);
  return image;
}

}  // namespace detail

/// Decomposes an integer-valued character into irreducible constituents.
inline DecompositionRecord decompose_character(const CharacterTable& table,
                                               const std::vector<long long>& chi) {
  return detail::record_from(table, detail::multiplicities(table, chi), false);
}

/// Decomposition of the stabilizer of v acting on the children of v, with
/// the trivial constituent removed. The action must be transitive on the
/// children. The enumerated image is capped at cap elements.
inline DecompositionRecord local_decomposition(const TreeGroup& group, const Vertex& v,
                                               unsigned long long cap = kCharTableOrderCap) {
  validate_vertex(group.shape, v);
  if (v.level() >= group.shape.depth())
    throw std::invalid_argument("local_decomposition: vertex has no children");
  std::vector<Permutation> merged = merged_generators(group);
  int domain = domain_size(group.shape);
  std::vector<Permutation> stab_gens;
  if (v.is_root()) {
    stab_gens = merged;
  } else {
    StabChain chain = schreier_sims(merged, domain, {domain_point(group.shape, v)});
    stab_gens = stabilizer_generators(chain, {domain_point(group.shape, v)});
  }
  std::vector<int> children = child_points(group.shape, v);
  std::vector<Permutation> restricted = restrict_to(stab_gens, children);
  int m = static_cast<int>(children.size());
  if (orbits(restricted, m).count != 1)
    throw IntransitiveAction("local_decomposition: stabilizer is not transitive on the children");
  detail::EnumeratedImage image = detail::enumerate_image(restricted, m, cap);
  CharacterTable table = character_table(image.classes);
  std::vector<long long> chi = permutation_character(image.classes);
  return detail::record_from(table, detail::multiplicities(table, chi), true);
}

/// Decomposition of the permutation character of the group image on level n,
/// trivial constituent included. The enumerated image is capped at cap
/// elements.
inline DecompositionRecord decompose_level(const TreeGroup& group, int n,
                                           unsigned long long cap = kCharTableOrderCap) {
  if (n < 1 || n > group.shape.depth())
    throw std::invalid_argument("decompose_level: level out of range");
  std::vector<Permutation> gens = level_generators_of(group, n);
  detail::EnumeratedImage image = detail::enumerate_image(gens, group.shape.level_size(n), cap);
  CharacterTable table = character_table(image.classes);
  std::vector<long long> chi = permutation_character(image.classes);
  return detail::record_from(table, detail::multiplicities(table, chi), false);
}

}  // namespace arborrep
