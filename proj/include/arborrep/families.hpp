#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "arborrep/errors.hpp"
#include "arborrep/level_action.hpp"
#include "arborrep/local_ring.hpp"
#include "arborrep/perm.hpp"
#include "arborrep/stab_chain.hpp"
#include "arborrep/tree.hpp"
#include "arborrep/tree_group.hpp"

namespace arborrep {

// ---------------------------------------------------------------------------
// GGS groups
// ---------------------------------------------------------------------------

/// Defining vector of a GGS group over the alphabet Z/m with m = p^k: entries
/// e_1, ..., e_m taken modulo m, with e_m = 0 and at least one entry not
/// divisible by p.
struct DefiningVector {
  int prime = 2;
  int exponent = 1;
  std::vector<int> entries;

  int alphabet() const { return static_cast<int>(entries.size()); }
};

inline DefiningVector defining_vector(int prime, int exponent, std::vector<int> entries) {
  if (!detail::is_prime_number(prime)) throw std::invalid_argument("defining_vector: prime required");
  if (exponent < 1) throw std::invalid_argument("defining_vector: positive exponent required");
  long long m = 1;
  for (int i = 0; i < exponent; ++i) {
    m *= prime;
    if (m > kMaxLevelSize) throw CapExceeded("defining_vector: alphabet exceeds the level cap");
  }
  if (static_cast<long long>(entries.size()) != m)
    throw std::invalid_argument("defining_vector: expected one entry per letter");
  for (int e : entries)
    if (e < 0 || e >= m) throw std::invalid_argument("defining_vector: entry out of range");
  if (entries.back() != 0) throw std::invalid_argument("defining_vector: last entry must be zero");
  bool has_unit = false;
  for (int e : entries)
    if (e % prime != 0) has_unit = true;
  if (!has_unit) throw std::invalid_argument("defining_vector: every entry is divisible by p");
  return DefiningVector{prime, exponent, std::move(entries)};
}

/// True when no nontrivial cyclic shift fixes the vector of residues: there
/// is no t in 1..m-1 with e_i = e_{i+t} modulo p for all i, indices cyclic.
inline bool ggs_is_aperiodic(const DefiningVector& e) {
  int m = e.alphabet();
  for (int t = 1; t < m; ++t) {
    bool shift_fixed = true;
    for (int i = 0; i < m && shift_fixed; ++i)
      shift_fixed = (e.entries[static_cast<size_t>(i)] - e.entries[static_cast<size_t>((i + t) % m)]) % e.prime == 0;
    if (shift_fixed) return false;
  }
  return true;
}

/// True when m is even and the middle entry e_{m/2} is the only entry that
/// generates Z/m, that is, the only one not divisible by p.
inline bool ggs_is_centered(const DefiningVector& e) {
  int m = e.alphabet();
  if (m % 2 != 0) return false;
  for (int i = 0; i < m; ++i) {
    bool generating = e.entries[static_cast<size_t>(i)] % e.prime != 0;
    if (generating != (i == m / 2 - 1)) return false;
  }
  return true;
}

enum class Verdict { yes, no, unknown };

/// Predicted local pair transitivity: aperiodic vectors give yes and periodic
/// ones no, except that for p = 2 a centered vector is left undecided.
inline Verdict ggs_prediction(const DefiningVector& e) {
  if (e.prime == 2 && ggs_is_centered(e)) return Verdict::unknown;
  return ggs_is_aperiodic(e) ? Verdict::yes : Verdict::no;
}

/// The generating automaton: states e and a^j (j = 1..m-1) are rooted with
/// trivial sections, and the directed state b fixes the first level, carries
/// the section a^{e_x} under letter x = 1..m-1 and recurses as b under
/// letter 0.
inline Automaton ggs_automaton(const DefiningVector& e) {
  int m = e.alphabet();
  Automaton aut;
  aut.degree = m;
  for (int j = 0; j < m; ++j) {
    Automaton::State st;
    st.name = j == 0 ? "e" : (j == 1 ? "a" : "a" + std::to_string(j));
    st.output.resize(static_cast<size_t>(m));
    for (int x = 0; x < m; ++x) st.output[static_cast<size_t>(x)] = (x + j) % m;
    st.transitions.assign(static_cast<size_t>(m), 0);
    aut.states.push_back(std::move(st));
  }
  Automaton::State b;
  b.name = "b";
  b.output.resize(static_cast<size_t>(m));
  b.transitions.resize(static_cast<size_t>(m));
  for (int x = 0; x < m; ++x) b.output[static_cast<size_t>(x)] = x;
  b.transitions[0] = m;
  for (int x = 1; x < m; ++x) b.transitions[static_cast<size_t>(x)] = e.entries[static_cast<size_t>(x - 1)] % m;
  aut.states.push_back(std::move(b));
  return aut;
}

inline TreeGroup ggs_build(const DefiningVector& e, int depth) {
  TreeShape shape = TreeShape::regular(e.alphabet(), depth);
  Automaton aut = ggs_automaton(e);
  return TreeGroup{shape, {"a", "b"}, {materialize(aut, "a", shape), materialize(aut, "b", shape)}};
}

/// The commutators b^k a^l b^-k a^-l for k, l = 1..m-1, in row-major order.
/// They generate a subgroup fixing the first level pointwise.
inline std::vector<LevelAction> ggs_H_generators(const DefiningVector& e, int depth) {
  TreeShape shape = TreeShape::regular(e.alphabet(), depth);
  Automaton aut = ggs_automaton(e);
  LevelAction a = materialize(aut, "a", shape);
  LevelAction b = materialize(aut, "b", shape);
  std::vector<LevelAction> out;
  for (int k = 1; k < e.alphabet(); ++k)
    for (int l = 1; l < e.alphabet(); ++l) out.push_back(commutator(power(b, k), power(a, l)));
  return out;
}

/// The dihedral pair on the binary tree: the rooted swap a and the directed
/// generator b whose sections are (a, b).
inline TreeGroup dihedral_build(int depth) { return ggs_build(defining_vector(2, 1, {1, 0}), depth); }

// ---------------------------------------------------------------------------
// Iterated wreath products
// ---------------------------------------------------------------------------

/// Iterated permutational wreath product: level n carries an independent copy
/// of the group generated by level_labels[n] at each of its vertices. The
/// result has one staged generator per vertex and label. Each level group
/// must be transitive on its alphabet.
inline TreeGroup wreath_build(const std::vector<std::vector<Permutation>>& level_labels) {
  if (level_labels.empty()) throw std::invalid_argument("wreath_build: at least one level expected");
  std::vector<int> valencies;
  for (size_t n = 0; n < level_labels.size(); ++n) {
    const std::vector<Permutation>& labels = level_labels[n];
    if (labels.empty()) throw std::invalid_argument("wreath_build: empty generator set");
    int m = labels[0].degree();
    for (const Permutation& p : labels)
      if (p.degree() != m) throw std::invalid_argument("wreath_build: mixed degrees on one level");
    if (orbits(labels, m).count != 1)
      throw IntransitiveAction("wreath_build: level " + std::to_string(n + 1) + " labels are not transitive");
    valencies.push_back(m);
  }
  TreeShape shape{valencies};
  TreeGroup group{shape, {}, {}};
  for (int n = 0; n < shape.depth(); ++n) {
    for (int i = 0; i < shape.level_size(n); ++i) {
      for (size_t t = 0; t < level_labels[static_cast<size_t>(n)].size(); ++t) {
        LevelStagedGenerator gen;
        gen.set_label(n, i, level_labels[static_cast<size_t>(n)][t]);
        group.generators.push_back(materialize(gen, shape));
        group.names.push_back("w" + std::to_string(n) + "_" + std::to_string(i) + "_" + std::to_string(t));
      }
    }
  }
  return group;
}

/// Left regular permutations of the group generated by the given labels, one
/// per label, with the element order fixed by breadth-first closure from the
/// identity.
inline std::vector<Permutation> regular_labels(const std::vector<Permutation>& gens) {
  if (gens.empty()) throw std::invalid_argument("regular_labels: no generators");
  std::vector<Permutation> elems{Permutation(gens[0].degree())};
  for (size_t i = 0; i < elems.size(); ++i) {
    for (const Permutation& g : gens) {
      Permutation h = compose(g, elems[i]);
      if (std::find(elems.begin(), elems.end(), h) == elems.end()) {
        if (static_cast<int>(elems.size()) >= kMaxLevelSize)
          throw CapExceeded("regular_labels: group exceeds the level cap");
        elems.push_back(std::move(h));
      }
    }
  }
  auto index_of = [&elems](const Permutation& p) {
    return static_cast<int>(std::find(elems.begin(), elems.end(), p) - elems.begin());
  };
  std::vector<Permutation> out;
  for (const Permutation& g : gens) {
    std::vector<int> img(elems.size());
    for (size_t i = 0; i < elems.size(); ++i) img[i] = index_of(compose(g, elems[i]));
    out.push_back(Permutation(std::move(img)));
  }
  return out;
}

/// Every level carries the regular representation of the symmetric group on
/// three letters, acting on its six elements.
inline TreeGroup s3_regular_wreath(int depth) {
  if (depth < 1) throw std::invalid_argument("s3_regular_wreath: depth must be at least 1");
  std::vector<Permutation> labels =
      regular_labels({from_cycles(3, {{0, 1}}), from_cycles(3, {{0, 1, 2}})});
  return wreath_build(std::vector<std::vector<Permutation>>(static_cast<size_t>(depth), labels));
}

/// Every level carries the full symmetric group on its child alphabet.
inline TreeGroup full_symmetric_wreath(const TreeShape& shape) {
  std::vector<std::vector<Permutation>> labels;
  for (int n = 1; n <= shape.depth(); ++n) {
    int m = shape.valency(n);
    std::vector<int> cyc(static_cast<size_t>(m));
    for (int x = 0; x < m; ++x) cyc[static_cast<size_t>(x)] = (x + 1) % m;
    std::vector<Permutation> gens{Permutation(std::move(cyc))};
    if (m > 2) gens.push_back(from_cycles(m, {{0, 1}}));
    labels.push_back(std::move(gens));
  }
  return wreath_build(labels);
}

// ---------------------------------------------------------------------------
// Projective congruence families
// ---------------------------------------------------------------------------

/// The level-n vertices of the projective family are the points of projective
/// N-space over the ring truncated at pi^{n+1} that reduce to
/// (1 : 0 : ... : 0) modulo pi. Such a point is represented by coordinates
/// (a_2, ..., a_{N+1}) modulo pi^n via (1 : pi a_2 : ... : pi a_{N+1}), and a
/// child extends every coordinate by one more digit. The letter of the step
/// that appends digits c_2, ..., c_{N+1} is sum_i c_i q^{i-2} with q = p.

inline std::vector<int> gl_letter_digits(int prime, int dimension, int letter) {
  std::vector<int> digits(static_cast<size_t>(dimension));
  for (int t = 0; t < dimension; ++t) {
    digits[static_cast<size_t>(t)] = letter % prime;
    letter /= prime;
  }
  return digits;
}

inline int gl_letter(int prime, int dimension, const std::vector<int>& digits) {
  if (static_cast<int>(digits.size()) != dimension)
    throw std::invalid_argument("gl_letter: one digit per coordinate expected");
  int letter = 0;
  for (int t = dimension - 1; t >= 0; --t) {
    if (digits[static_cast<size_t>(t)] < 0 || digits[static_cast<size_t>(t)] >= prime)
      throw std::invalid_argument("gl_letter: digit out of range");
    letter = letter * prime + digits[static_cast<size_t>(t)];
  }
  return letter;
}

/// Coordinates of a vertex: one digit vector of length v.level() per
/// projective coordinate a_2, ..., a_{N+1}, lowest pi-power first.
inline std::vector<RingElem> gl_vertex_coordinates(int prime, int dimension, const Vertex& v) {
  std::vector<RingElem> coords(static_cast<size_t>(dimension), RingElem(static_cast<size_t>(v.level()), 0));
  for (int j = 0; j < v.level(); ++j) {
    std::vector<int> digits = gl_letter_digits(prime, dimension, v.word[static_cast<size_t>(j)]);
    for (int t = 0; t < dimension; ++t) coords[static_cast<size_t>(t)][static_cast<size_t>(j)] = digits[static_cast<size_t>(t)];
  }
  return coords;
}

inline Vertex gl_coordinate_vertex(int prime, int dimension, const std::vector<RingElem>& coords) {
  if (static_cast<int>(coords.size()) != dimension)
    throw std::invalid_argument("gl_coordinate_vertex: one coordinate per dimension expected");
  size_t level = coords.empty() ? 0 : coords[0].size();
  std::vector<int> word(level);
  for (size_t j = 0; j < level; ++j) {
    std::vector<int> digits(static_cast<size_t>(dimension));
    for (int t = 0; t < dimension; ++t) {
      if (coords[static_cast<size_t>(t)].size() != level)
        throw std::invalid_argument("gl_coordinate_vertex: mixed coordinate precisions");
      digits[static_cast<size_t>(t)] = coords[static_cast<size_t>(t)][j];
    }
    word[j] = gl_letter(prime, dimension, digits);
  }
  return Vertex(std::move(word));
}

namespace detail {

/// Action of one matrix of the principal congruence subgroup on the whole
/// truncated tree: apply the matrix to the homogeneous column of each vertex,
/// normalize by the unit first coordinate and strip one pi from the rest.
inline LevelAction gl_matrix_action(const LocalRingSpec& ring, int dimension,
                                    const std::vector<std::vector<RingElem>>& mat, const TreeShape& shape) {
  std::vector<std::vector<int>> levels;
  for (int n = 1; n <= shape.depth(); ++n) {
    int size = shape.level_size(n);
    std::vector<int> tab(static_cast<size_t>(size));
    for (int idx = 0; idx < size; ++idx) {
      std::vector<RingElem> coords = gl_vertex_coordinates(ring.prime, dimension, vertex_at(shape, n, idx));
      std::vector<RingElem> col(static_cast<size_t>(dimension) + 1, ring_zero(ring));
      col[0] = ring_one(ring);
      for (int t = 0; t < dimension; ++t) {
        RingElem lifted = ring_zero(ring);
        for (int j = 0; j < n; ++j) lifted[static_cast<size_t>(j)] = coords[static_cast<size_t>(t)][static_cast<size_t>(j)];
        col[static_cast<size_t>(t) + 1] = ring_shift_up(ring, lifted);
      }
      std::vector<RingElem> y(static_cast<size_t>(dimension) + 1, ring_zero(ring));
      for (int r = 0; r <= dimension; ++r)
        for (int c = 0; c <= dimension; ++c)
          y[static_cast<size_t>(r)] =
              ring_add(ring, y[static_cast<size_t>(r)],
                       ring_mul(ring, mat[static_cast<size_t>(r)][static_cast<size_t>(c)], col[static_cast<size_t>(c)]));
      RingElem inv = ring_inv(ring, y[0]);
      std::vector<RingElem> image(static_cast<size_t>(dimension), RingElem(static_cast<size_t>(n), 0));
      for (int t = 0; t < dimension; ++t) {
        RingElem digits = ring_shift_down(ring, ring_mul(ring, y[static_cast<size_t>(t) + 1], inv));
        for (int j = 0; j < n; ++j) image[static_cast<size_t>(t)][static_cast<size_t>(j)] = digits[static_cast<size_t>(j)];
      }
      tab[static_cast<size_t>(idx)] = vertex_index(shape, gl_coordinate_vertex(ring.prime, dimension, image));
    }
    levels.push_back(std::move(tab));
  }
  return LevelAction(shape, std::move(levels));
}

}  // namespace detail

/// Principal congruence subgroup of GL_{N+1} over a truncated local ring with
/// odd residue characteristic, acting on the projective tree above. The
/// generators are the elementary matrices I + pi E_{ij} for all i, j, named
/// g{i}{j} with row and column 1-based.
inline TreeGroup gl_build(int prime, int dimension, RingKind kind, int depth) {
  if (!detail::is_prime_number(prime) || prime == 2)
    throw std::invalid_argument("gl_build: odd prime required");
  if (dimension < 1) throw std::invalid_argument("gl_build: dimension must be at least 1");
  if (depth < 1) throw std::invalid_argument("gl_build: depth must be at least 1");
  long long m = 1;
  for (int t = 0; t < dimension; ++t) {
    m *= prime;
    if (m > kMaxLevelSize) throw CapExceeded("gl_build: alphabet exceeds the level cap");
  }
  TreeShape shape = TreeShape::regular(static_cast<int>(m), depth);
  LocalRingSpec ring{kind, prime, depth + 1};
  TreeGroup group{shape, {}, {}};
  for (int i = 0; i <= dimension; ++i) {
    for (int j = 0; j <= dimension; ++j) {
      std::vector<std::vector<RingElem>> mat(static_cast<size_t>(dimension) + 1,
                                             std::vector<RingElem>(static_cast<size_t>(dimension) + 1, ring_zero(ring)));
      for (int d = 0; d <= dimension; ++d) mat[static_cast<size_t>(d)][static_cast<size_t>(d)] = ring_one(ring);
      mat[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          ring_add(ring, mat[static_cast<size_t>(i)][static_cast<size_t>(j)], ring_shift_up(ring, ring_one(ring)));
      group.generators.push_back(detail::gl_matrix_action(ring, dimension, mat, shape));
      group.names.push_back("g" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
  return group;
}

}  // namespace arborrep
