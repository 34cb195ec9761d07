#pragma once

#include <string>
#include <vector>

#include "arborrep/level_action.hpp"
#include "arborrep/perm.hpp"
#include "arborrep/tree.hpp"

namespace arborrep {

/// Finitely generated group acting on a truncated tree.
///
/// Stabilizer chain computations use the merged domain: the disjoint union
/// L_1 | L_2 | ... | L_depth, with level n starting at offset
/// |L_1| + ... + |L_{n-1}|. Stabilizing a vertex is then a point stabilizer
/// and joint stabilizers come from base changes.
struct TreeGroup {
  TreeShape shape;
  std::vector<std::string> names;
  std::vector<LevelAction> generators;

  int depth() const { return shape.depth(); }
};

/// Offset of level n inside the merged domain.
inline int domain_offset(const TreeShape& shape, int level) {
  int off = 0;
  for (int j = 1; j < level; ++j) off += shape.level_size(j);
  return off;
}

inline int domain_size(const TreeShape& shape) { return domain_offset(shape, shape.depth() + 1); }

/// Merged-domain point of a vertex (level must be at least 1).
inline int domain_point(const TreeShape& shape, const Vertex& v) {
  if (v.is_root()) throw std::invalid_argument("domain_point: the root is not part of the domain");
  return domain_offset(shape, v.level()) + vertex_index(shape, v);
}

/// Merged-domain points of the children of v, in letter order.
inline std::vector<int> child_points(const TreeShape& shape, const Vertex& v) {
  validate_vertex(shape, v);
  if (v.level() >= shape.depth()) throw std::out_of_range("child_points: vertex at truncation depth");
  int m = shape.valency(v.level() + 1);
  int idx = v.is_root() ? 0 : vertex_index(shape, v);
  int off = domain_offset(shape, v.level() + 1);
  std::vector<int> out(static_cast<size_t>(m));
  for (int x = 0; x < m; ++x) out[static_cast<size_t>(x)] = off + idx * m + x;
  return out;
}

/// The action on the merged domain as a single permutation.
inline Permutation merged_permutation(const LevelAction& g) {
  std::vector<int> img(static_cast<size_t>(domain_size(g.shape())));
  int off = 0;
  for (int n = 1; n <= g.depth(); ++n) {
    const std::vector<int>& tab = g.level_table(n);
    for (size_t i = 0; i < tab.size(); ++i) img[static_cast<size_t>(off) + i] = off + tab[i];
    off += g.shape().level_size(n);
  }
  return Permutation(std::move(img));
}

inline std::vector<Permutation> merged_generators(const TreeGroup& group) {
  std::vector<Permutation> out;
  out.reserve(group.generators.size());
  for (const LevelAction& g : group.generators) out.push_back(merged_permutation(g));
  return out;
}

/// The action of the generators on the single level L_n.
inline std::vector<Permutation> level_generators_of(const TreeGroup& group, int n) {
  std::vector<Permutation> out;
  out.reserve(group.generators.size());
  for (const LevelAction& g : group.generators) out.push_back(Permutation(std::vector<int>(g.level_table(n))));
  return out;
}

}  // namespace arborrep
