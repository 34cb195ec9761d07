#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arborrep/chartab.hpp"
#include "arborrep/tree.hpp"
#include "arborrep/tree_group.hpp"

namespace arborrep {

/// Arbitrary-precision rational used for exact Dirichlet evaluations.
using Rational = boost::multiprecision::cpp_rational;

/// Truncated Dirichlet polynomial sum_i count_i * dimension_i^(-s). Terms are
/// stored sorted by strictly increasing dimension with positive counts, and
/// the truncation depth travels with the terms so that series computed to
/// different depths are never confused for one another.
struct DirichletPolynomial {
  int depth = 0;
  std::vector<std::pair<long long, long long>> terms;  // (dimension, count)

  bool operator==(const DirichletPolynomial&) const = default;
};

/// One dimension at which two Dirichlet polynomials disagree. A dimension
/// absent from a term list contributes count zero.
struct TermDifference {
  long long dimension = 0;
  long long count_a = 0;
  long long count_b = 0;
};

namespace detail {

/// Sorts raw (dimension, count) pairs, merges equal dimensions, and checks
/// that every surviving term has positive dimension and count.
inline std::vector<std::pair<long long, long long>> aggregate_terms(
    std::vector<std::pair<long long, long long>> raw) {
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<long long, long long>> out;
  for (const auto& [dimension, count] : raw) {
    if (dimension < 1) throw std::invalid_argument("dirichlet term has nonpositive dimension");
    if (!out.empty() && out.back().first == dimension)
      out.back().second += count;
    else
      out.emplace_back(dimension, count);
  }
  for (const auto& [dimension, count] : out)
    if (count < 1) throw std::invalid_argument("dirichlet term has nonpositive count");
  return out;
}

/// base^exponent in long long arithmetic, refusing to overflow silently.
inline long long checked_pow(long long base, int exponent) {
  long long result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > std::numeric_limits<long long>::max() / base)
      throw std::overflow_error("dirichlet dimension overflows 64-bit arithmetic");
    result *= base;
  }
  return result;
}

}  // namespace detail

/// Builds a polynomial from unaggregated terms, sorting and merging them.
inline DirichletPolynomial dirichlet_polynomial(
    int depth, std::vector<std::pair<long long, long long>> raw_terms) {
  if (depth < 0) throw std::invalid_argument("dirichlet_polynomial: negative depth");
  return {depth, detail::aggregate_terms(std::move(raw_terms))};
}

/// Dirichlet polynomial counting the irreducible constituents of the level
/// representations up to the truncation depth, computed from the nontrivial
/// local decompositions along the all-zero spine. The constant term (1, 1)
/// records the trivial constituent; each constituent (d, m) of the record at
/// the level-j spine vertex contributes the term (|L_j| * d, m). The formula
/// counts constituents with multiplicity; it enumerates distinct irreducible
/// representations exactly when every local decomposition at level < depth is
/// multiplicity-free and the action is locally 2-transitive there, which this
/// function does not itself verify.
inline DirichletPolynomial boundary_zeta(
    const std::vector<DecompositionRecord>& local_records,
    const std::vector<long long>& level_sizes, int depth) {
  if (depth < 0) throw std::invalid_argument("boundary_zeta: negative depth");
  if (static_cast<int>(local_records.size()) != depth)
    throw std::invalid_argument("boundary_zeta: need one local record per level below the depth");
  if (static_cast<int>(level_sizes.size()) != depth)
    throw std::invalid_argument("boundary_zeta: need one level size per level below the depth");
  std::vector<std::pair<long long, long long>> raw;
  raw.emplace_back(1, 1);
  for (int j = 0; j < depth; ++j) {
    if (level_sizes[static_cast<size_t>(j)] < 1)
      throw std::invalid_argument("boundary_zeta: level sizes must be positive");
    const DecompositionRecord& record = local_records[static_cast<size_t>(j)];
    if (!record.trivial_removed)
      throw std::invalid_argument(
          "boundary_zeta: local records must have the trivial constituent removed");
    for (const auto& [dimension, multiplicity] : record.parts)
      raw.emplace_back(level_sizes[static_cast<size_t>(j)] * dimension, multiplicity);
  }
  return {depth, detail::aggregate_terms(std::move(raw))};
}

/// Convenience form of boundary_zeta truncated at the group's own depth: the
/// local records are computed at the all-zero spine vertices of levels
/// 0 .. depth-1 and the level sizes are read from the tree shape.
inline DirichletPolynomial boundary_zeta(
    const TreeGroup& group, unsigned long long image_cap = kCharTableOrderCap) {
  int depth = group.depth();
  std::vector<DecompositionRecord> records;
  std::vector<long long> sizes;
  records.reserve(static_cast<size_t>(depth));
  sizes.reserve(static_cast<size_t>(depth));
  for (int j = 0; j < depth; ++j) {
    Vertex spine(std::vector<int>(static_cast<size_t>(j), 0));
    records.push_back(local_decomposition(group, spine, image_cap));
    sizes.push_back(group.shape.level_size(j));
  }
  return boundary_zeta(records, sizes, depth);
}

/// Closed form of the truncated series for the principal-congruence families
/// on the q^N-regular tree: the constant block (1, q^N) followed by the term
/// (q^(nN), q^N - 1) for each level 1 <= n < depth.
inline DirichletPolynomial gl_closed_form(long long q, int dimension, int depth) {
  if (q < 2) throw std::invalid_argument("gl_closed_form: alphabet base must be at least 2");
  if (dimension < 1) throw std::invalid_argument("gl_closed_form: dimension must be positive");
  if (depth < 1) throw std::invalid_argument("gl_closed_form: depth must be positive");
  long long alphabet = detail::checked_pow(q, dimension);
  std::vector<std::pair<long long, long long>> raw;
  raw.emplace_back(1, alphabet);
  for (int n = 1; n < depth; ++n)
    raw.emplace_back(detail::checked_pow(q, n * dimension), alphabet - 1);
  return {depth, detail::aggregate_terms(std::move(raw))};
}

/// Exact value of the polynomial at an integer argument s, as a rational
/// number: sum of count * dimension^(-s) over all terms.
inline Rational evaluate_exact(const DirichletPolynomial& poly, long long s) {
  namespace mp = boost::multiprecision;
  Rational sum = 0;
  for (const auto& [dimension, count] : poly.terms) {
    mp::cpp_int power = mp::pow(mp::cpp_int(dimension),
                                static_cast<unsigned>(s < 0 ? -s : s));
    if (s >= 0)
      sum += Rational(count) / Rational(power);
    else
      sum += Rational(count) * Rational(power);
  }
  return sum;
}

/// Floating-point value of the polynomial at a real argument s. The result
/// is approximate; use evaluate_exact for integer arguments.
inline double evaluate_approximate(const DirichletPolynomial& poly, double s) {
  double sum = 0.0;
  for (const auto& [dimension, count] : poly.terms)
    sum += static_cast<double>(count) * std::pow(static_cast<double>(dimension), -s);
  return sum;
}

/// Compares two polynomials of equal truncation depth termwise. Returns the
/// lowest dimension at which the counts differ, or nullopt when the term
/// lists coincide. Polynomials truncated at different depths are not
/// comparable and are rejected.
inline std::optional<TermDifference> compare(const DirichletPolynomial& a,
                                             const DirichletPolynomial& b) {
  if (a.depth != b.depth)
    throw std::invalid_argument("compare: truncation depths differ");
  size_t i = 0;
  size_t j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    long long dim_a = i < a.terms.size() ? a.terms[i].first
                                         : std::numeric_limits<long long>::max();
    long long dim_b = j < b.terms.size() ? b.terms[j].first
                                         : std::numeric_limits<long long>::max();
    long long dimension = std::min(dim_a, dim_b);
    long long count_a = dim_a == dimension ? a.terms[i++].second : 0;
    long long count_b = dim_b == dimension ? b.terms[j++].second : 0;
    if (count_a != count_b) return TermDifference{dimension, count_a, count_b};
  }
  return std::nullopt;
}

}  // namespace arborrep
