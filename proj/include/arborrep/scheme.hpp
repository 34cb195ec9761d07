#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "arborrep/errors.hpp"
#include "arborrep/perm.hpp"
#include "arborrep/stab_chain.hpp"

namespace arborrep {

/// Association scheme of the orbitals (orbits on ordered pairs) of a
/// transitive permutation group. Orbital 0 is the diagonal; paired[i] is the
/// orbital of the transposed pairs of orbital i.
struct OrbitalScheme {
  int domain = 0;
  int rank = 0;
  std::vector<int> orbital;       // domain * domain table, pair (x, y) at x * domain + y
  std::vector<long long> valency; // per orbital
  std::vector<int> paired;

  int orbital_of(int x, int y) const { return orbital[static_cast<size_t>(x) * static_cast<size_t>(domain) + static_cast<size_t>(y)]; }
};

/// Structure constants p[k][i][j] = #{z : (x,z) in orbital i, (z,y) in
/// orbital j} for any representative pair (x,y) of orbital k.
struct IntersectionTensor {
  int rank = 0;
  std::vector<long long> p;  // rank^3, k major

  long long at(int k, int i, int j) const {
    return p[(static_cast<size_t>(k) * static_cast<size_t>(rank) + static_cast<size_t>(i)) * static_cast<size_t>(rank) + static_cast<size_t>(j)];
  }
};

inline OrbitalScheme build_scheme(const std::vector<Permutation>& generators, int degree,
                                  long long max_cells = kDefaultPairCellCap) {
  OrbitPartition point_orbits = orbits(generators, degree);
  if (point_orbits.count != 1)
    throw IntransitiveAction("build_scheme: the action has " + std::to_string(point_orbits.count) + " orbits");
  OrbitPartition pairs = orbits_on_pairs(generators, degree, max_cells);
  OrbitalScheme scheme;
  scheme.domain = degree;
  scheme.rank = pairs.count;
  // Reindex so the diagonal orbital is 0 and the rest keep first-appearance order.
  std::vector<int> relabel(static_cast<size_t>(pairs.count), -1);
  int diag = pairs.orbit_of[0];  // orbital of (0, 0); the diagonal is one orbital by transitivity
  relabel[static_cast<size_t>(diag)] = 0;
  int next = 1;
  for (int id : pairs.orbit_of) {
    if (relabel[static_cast<size_t>(id)] == -1) relabel[static_cast<size_t>(id)] = next++;
  }
  scheme.orbital.resize(pairs.orbit_of.size());
  for (size_t c = 0; c < pairs.orbit_of.size(); ++c) scheme.orbital[c] = relabel[static_cast<size_t>(pairs.orbit_of[c])];
  scheme.valency.assign(static_cast<size_t>(scheme.rank), 0);
  for (int y = 0; y < degree; ++y) ++scheme.valency[static_cast<size_t>(scheme.orbital_of(0, y))];
  scheme.paired.assign(static_cast<size_t>(scheme.rank), -1);
  for (int x = 0; x < degree && static_cast<int>(std::count(scheme.paired.begin(), scheme.paired.end(), -1)) > 0; ++x) {
    for (int y = 0; y < degree; ++y) {
      int k = scheme.orbital_of(x, y);
      if (scheme.paired[static_cast<size_t>(k)] == -1) scheme.paired[static_cast<size_t>(k)] = scheme.orbital_of(y, x);
    }
  }
  return scheme;
}

/// Computes the tensor from one representative pair per orbital. The result
/// does not depend on the representatives; tests verify that exhaustively at
/// small scales.
inline IntersectionTensor intersection_numbers(const OrbitalScheme& scheme) {
  IntersectionTensor tensor;
  tensor.rank = scheme.rank;
  tensor.p.assign(static_cast<size_t>(scheme.rank) * scheme.rank * scheme.rank, 0);
  std::vector<char> done(static_cast<size_t>(scheme.rank), 0);
  int found = 0;
  for (int x = 0; x < scheme.domain && found < scheme.rank; ++x) {
    for (int y = 0; y < scheme.domain && found < scheme.rank; ++y) {
      int k = scheme.orbital_of(x, y);
      if (done[static_cast<size_t>(k)]) continue;
      done[static_cast<size_t>(k)] = 1;
      ++found;
      for (int z = 0; z < scheme.domain; ++z) {
        int i = scheme.orbital_of(x, z);
        int j = scheme.orbital_of(z, y);
        ++tensor.p[(static_cast<size_t>(k) * scheme.rank + static_cast<size_t>(i)) * scheme.rank + static_cast<size_t>(j)];
      }
    }
  }
  return tensor;
}

/// A scheme is commutative exactly when p[k][i][j] = p[k][j][i] throughout.
inline bool is_commutative(const IntersectionTensor& tensor) {
  for (int k = 0; k < tensor.rank; ++k)
    for (int i = 0; i < tensor.rank; ++i)
      for (int j = i + 1; j < tensor.rank; ++j)
        if (tensor.at(k, i, j) != tensor.at(k, j, i)) return false;
  return true;
}

inline bool is_commutative(const OrbitalScheme& scheme) { return is_commutative(intersection_numbers(scheme)); }

}  // namespace arborrep
