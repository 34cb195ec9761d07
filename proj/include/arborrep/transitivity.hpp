#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arborrep/chartab.hpp"
#include "arborrep/errors.hpp"
#include "arborrep/perm.hpp"
#include "arborrep/scheme.hpp"
#include "arborrep/stab_chain.hpp"
#include "arborrep/tree_group.hpp"

namespace arborrep {

namespace detail {

/// Generators of the group acting on the merged domain of the tree cut off
/// at depth d.
inline std::pair<TreeShape, std::vector<Permutation>> truncated_action(const TreeGroup& group, int d) {
  TreeShape shape = group.shape.truncated(d);
  std::vector<Permutation> gens;
  gens.reserve(group.generators.size());
  int dom = domain_size(shape);
  for (const LevelAction& g : group.generators) {
    std::vector<int> img(static_cast<size_t>(dom));
    int off = 0;
    for (int n = 1; n <= d; ++n) {
      const std::vector<int>& tab = g.level_table(n);
      for (size_t i = 0; i < tab.size(); ++i) img[static_cast<size_t>(off) + i] = off + tab[i];
      off += shape.level_size(n);
    }
    gens.emplace_back(std::move(img));
  }
  return {std::move(shape), std::move(gens)};
}

/// Orbit count of the generators on the product A x B, where A is the block
/// [0, a) and B the block [a, a+b) of the domain.
inline int product_orbit_count(const std::vector<Permutation>& gens, int a, int b) {
  int cells = a * b;
  std::vector<int> parent(static_cast<size_t>(cells));
  for (int i = 0; i < cells; ++i) parent[static_cast<size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  int count = cells;
  for (const Permutation& g : gens) {
    for (int x = 0; x < a; ++x) {
      for (int y = 0; y < b; ++y) {
        int from = x * b + y;
        int to = g(x) * b + (g(a + y) - a);
        int rf = find(from);
        int rt = find(to);
        if (rf != rt) {
          parent[static_cast<size_t>(rf)] = rt;
          --count;
        }
      }
    }
  }
  return count;
}

}  // namespace detail

/// Whether the group acts transitively on level n.
inline bool is_level_transitive(const TreeGroup& group, int n) {
  if (n < 1 || n > group.depth()) throw std::invalid_argument("is_level_transitive: level out of range");
  return orbits(level_generators_of(group, n), group.shape.level_size(n)).count == 1;
}

/// Whether the group acts transitively on every level of the truncated tree.
inline bool is_spherically_transitive(const TreeGroup& group) {
  for (int n = 1; n <= group.depth(); ++n)
    if (!is_level_transitive(group, n)) return false;
  return true;
}

/// Number of orbits of the group on ordered pairs of level-n vertices.
inline int level_rank(const TreeGroup& group, int n,
                      unsigned long long max_pair_cells = kDefaultPairCellCap) {
  if (n < 1 || n > group.depth()) throw std::invalid_argument("level_rank: level out of range");
  return orbits_on_pairs(level_generators_of(group, n), group.shape.level_size(n), max_pair_cells).count;
}

/// Evidence for a failed two-point transitivity check: a pair of distinct
/// level-n vertices whose joint stabilizer fails to act transitively on the
/// product of their child sets.
struct PairWitness {
  Vertex u;
  Vertex v;
  unsigned long long stabilizer_order = 0;  // image of the joint stabilizer on the children of u and v
  long long pair_count = 0;                 // |D(u)| * |D(v)|
  int orbit_count = 0;                      // orbits of the joint stabilizer on D(u) x D(v)
};

struct LocalTransitivityResult {
  bool transitive = false;
  std::optional<PairWitness> witness;
};

/// Checks whether for every pair of distinct level-n vertices u, v the joint
/// stabilizer acts transitively on D(u) x D(v). One representative pair per
/// pair orbit is examined; the first failing representative (in row-major
/// pair order) is reported as a witness. A group that is not transitive on
/// levels 1..n+1 fails with no witness.
inline LocalTransitivityResult is_locally_2_transitive(
    const TreeGroup& group, int n, unsigned long long max_pair_cells = kDefaultPairCellCap) {
  if (n < 1 || n >= group.depth())
    throw std::invalid_argument("is_locally_2_transitive: level must be between 1 and depth-1");
  for (int k = 1; k <= n + 1; ++k)
    if (!is_level_transitive(group, k)) return {false, std::nullopt};

  int size = group.shape.level_size(n);
  OrbitalScheme scheme = build_scheme(level_generators_of(group, n), size, max_pair_cells);

  // First row-major representative of every orbital. Since the action is
  // transitive, every orbital meets row zero, so representatives pair the
  // level spine with another vertex.
  std::vector<long long> rep(static_cast<size_t>(scheme.rank), -1);
  for (long long idx = 0; idx < static_cast<long long>(size) * size; ++idx) {
    int k = scheme.orbital[static_cast<size_t>(idx)];
    if (rep[static_cast<size_t>(k)] < 0) rep[static_cast<size_t>(k)] = idx;
  }

  auto [shape, merged] = detail::truncated_action(group, n + 1);
  std::vector<long long> order(rep.begin(), rep.end());
  std::sort(order.begin(), order.end());
  for (long long idx : order) {
    int x = static_cast<int>(idx / size);
    int y = static_cast<int>(idx % size);
    if (x == y) continue;
    Vertex u = vertex_at(shape, n, x);
    Vertex v = vertex_at(shape, n, y);
    int pu = domain_point(shape, u);
    int pv = domain_point(shape, v);
    StabChain chain = schreier_sims(merged, domain_size(shape), {pu, pv});
    std::vector<Permutation> stab = stabilizer_generators(chain, {pu, pv});
    std::vector<int> points = child_points(shape, u);
    std::vector<int> pv_children = child_points(shape, v);
    points.insert(points.end(), pv_children.begin(), pv_children.end());
    std::vector<Permutation> restricted = restrict_to(stab, points);
    int mu = static_cast<int>(points.size() - pv_children.size());
    int mv = static_cast<int>(pv_children.size());
    int orbit_count = detail::product_orbit_count(restricted, mu, mv);
    if (orbit_count != 1) {
      PairWitness witness;
      witness.u = u;
      witness.v = v;
      witness.stabilizer_order = schreier_sims(restricted, mu + mv).order();
      witness.pair_count = static_cast<long long>(mu) * mv;
      witness.orbit_count = orbit_count;
      return {false, std::move(witness)};
    }
  }
  return {true, std::nullopt};
}

/// Whether the orbits on ordered pairs of level-n vertices are exactly the
/// distance classes. Orbitals always refine distance classes, so this holds
/// precisely when the rank is n+1. Requires a transitive level action.
inline bool is_distance_transitive(const TreeGroup& group, int n,
                                   unsigned long long max_pair_cells = kDefaultPairCellCap) {
  if (!is_level_transitive(group, n))
    throw IntransitiveAction("is_distance_transitive: level action is not transitive");
  return level_rank(group, n, max_pair_cells) == n + 1;
}

/// Whether the orbital scheme of the level-n action is commutative.
inline bool is_level_commutative(const TreeGroup& group, int n,
                                 unsigned long long max_pair_cells = kDefaultPairCellCap) {
  if (n < 1 || n > group.depth()) throw std::invalid_argument("is_level_commutative: level out of range");
  int size = group.shape.level_size(n);
  OrbitalScheme scheme = build_scheme(level_generators_of(group, n), size, max_pair_cells);
  return is_commutative(intersection_numbers(scheme));
}

/// Whether every level action has a commutative orbital scheme, which is
/// equivalent to every level permutation representation being multiplicity
/// free.
inline bool is_boundary_gelfand(const TreeGroup& group,
                                unsigned long long max_pair_cells = kDefaultPairCellCap) {
  for (int n = 1; n <= group.depth(); ++n)
    if (!is_level_commutative(group, n, max_pair_cells)) return false;
  return true;
}

/// Whether the stabilizer of v acts on the children of v with a commutative
/// orbital scheme.
inline bool is_local_gelfand(const TreeGroup& group, const Vertex& v,
                             unsigned long long max_pair_cells = kDefaultPairCellCap) {
  validate_vertex(group.shape, v);
  if (v.level() >= group.depth()) throw std::invalid_argument("is_local_gelfand: vertex has no children");
  auto [shape, merged] = detail::truncated_action(group, v.level() + 1);
  std::vector<Permutation> stab;
  if (v.is_root()) {
    stab = merged;
  } else {
    int pt = domain_point(shape, v);
    StabChain chain = schreier_sims(merged, domain_size(shape), {pt});
    stab = stabilizer_generators(chain, {pt});
  }
  std::vector<Permutation> restricted = restrict_to(stab, child_points(shape, v));
  int m = shape.valency(v.level() + 1);
  OrbitalScheme scheme = build_scheme(restricted, m, max_pair_cells);
  return is_commutative(intersection_numbers(scheme));
}

/// Comparison of the level-n pair rank against the prediction from the local
/// decompositions along the spine: one plus, for each level j < n, the sum
/// of squared multiplicities of the nontrivial constituents at the level-j
/// spine vertex.
struct RankIdentity {
  int level = 0;
  long long rank = 0;
  long long predicted = 0;
  bool holds = false;
};

inline RankIdentity rank_identity(const TreeGroup& group, int n,
                                  unsigned long long image_cap = kCharTableOrderCap,
                                  unsigned long long max_pair_cells = kDefaultPairCellCap) {
  if (n < 1 || n > group.depth()) throw std::invalid_argument("rank_identity: level out of range");
  RankIdentity out;
  out.level = n;
  out.rank = level_rank(group, n, max_pair_cells);
  out.predicted = 1;
  for (int j = 0; j < n; ++j) {
    Vertex spine(std::vector<int>(static_cast<size_t>(j), 0));
    DecompositionRecord rec = local_decomposition(group, spine, image_cap);
    out.predicted += rec.multiplicity_square_sum();
  }
  out.holds = out.rank == out.predicted;
  return out;
}

}  // namespace arborrep
