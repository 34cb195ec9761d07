#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "arborrep/errors.hpp"

namespace arborrep {

inline constexpr int kMaxDepth = 12;
inline constexpr int kMaxLevelSize = 20000;

/// Spherically symmetric rooted tree truncated at a working depth.
///
/// valency(n) is the number of children of every vertex on level n-1, so
/// |L_n| = valency(1) * ... * valency(n). Vertices are words over the child
/// alphabets; the word (x_1, ..., x_n) sits on level n and its rank inside
/// the level is the big-endian mixed-radix value of the word.
class TreeShape {
public:
  explicit TreeShape(std::vector<int> valencies) : valencies_(std::move(valencies)) {
    if (valencies_.empty()) throw std::invalid_argument("TreeShape: depth must be at least 1");
    if (static_cast<int>(valencies_.size()) > kMaxDepth)
      throw CapExceeded("TreeShape: depth exceeds " + std::to_string(kMaxDepth));
    level_sizes_.assign(valencies_.size() + 1, 1);
    for (size_t i = 0; i < valencies_.size(); ++i) {
      if (valencies_[i] < 2) throw std::invalid_argument("TreeShape: every valency must be at least 2");
      long long next = static_cast<long long>(level_sizes_[i]) * valencies_[i];
      if (next > kMaxLevelSize)
        throw CapExceeded("TreeShape: level size exceeds " + std::to_string(kMaxLevelSize));
      level_sizes_[i + 1] = static_cast<int>(next);
    }
  }

  static TreeShape regular(int degree, int depth) {
    if (depth < 1) throw std::invalid_argument("TreeShape: depth must be at least 1");
    return TreeShape(std::vector<int>(static_cast<size_t>(depth), degree));
  }

  int depth() const { return static_cast<int>(valencies_.size()); }

  /// Number of children of a level (level-1) vertex, level in 1..depth.
  int valency(int level) const {
    if (level < 1 || level > depth()) throw std::out_of_range("TreeShape::valency: level out of range");
    return valencies_[static_cast<size_t>(level - 1)];
  }

  /// |L_n| for n in 0..depth.
  int level_size(int n) const {
    if (n < 0 || n > depth()) throw std::out_of_range("TreeShape::level_size: level out of range");
    return level_sizes_[static_cast<size_t>(n)];
  }

  const std::vector<int>& valencies() const { return valencies_; }

  bool operator==(const TreeShape& other) const { return valencies_ == other.valencies_; }

  /// Shape of the subtree hanging below a level-k vertex, truncated like the
  /// ambient tree. k must be strictly less than depth.
  TreeShape subtree_shape(int k) const {
    if (k < 0 || k >= depth()) throw std::out_of_range("TreeShape::subtree_shape: level out of range");
    return TreeShape(std::vector<int>(valencies_.begin() + k, valencies_.end()));
  }

  /// Same valencies, truncated to a shallower depth.
  TreeShape truncated(int new_depth) const {
    if (new_depth < 1 || new_depth > depth())
      throw std::out_of_range("TreeShape::truncated: depth out of range");
    return TreeShape(std::vector<int>(valencies_.begin(), valencies_.begin() + new_depth));
  }

private:
  std::vector<int> valencies_;
  std::vector<int> level_sizes_;
};

/// A vertex is the word of child letters along the path from the root.
struct Vertex {
  std::vector<int> word;

  Vertex() = default;
  explicit Vertex(std::vector<int> w) : word(std::move(w)) {}
  Vertex(std::initializer_list<int> letters) : word(letters) {}

  int level() const { return static_cast<int>(word.size()); }
  bool is_root() const { return word.empty(); }
  bool operator==(const Vertex& other) const { return word == other.word; }
};

inline void validate_vertex(const TreeShape& shape, const Vertex& v) {
  if (v.level() > shape.depth()) throw std::out_of_range("vertex deeper than tree");
  for (int i = 0; i < v.level(); ++i) {
    if (v.word[static_cast<size_t>(i)] < 0 || v.word[static_cast<size_t>(i)] >= shape.valency(i + 1))
      throw std::out_of_range("vertex letter out of range");
  }
}

/// Rank of v inside its level, big-endian: index = sum x_i * prod_{j>i} m_j.
inline int vertex_index(const TreeShape& shape, const Vertex& v) {
  validate_vertex(shape, v);
  int idx = 0;
  for (int i = 0; i < v.level(); ++i) idx = idx * shape.valency(i + 1) + v.word[static_cast<size_t>(i)];
  return idx;
}

/// Inverse of vertex_index.
inline Vertex vertex_at(const TreeShape& shape, int level, int index) {
  if (level < 0 || level > shape.depth()) throw std::out_of_range("vertex_at: level out of range");
  if (index < 0 || index >= shape.level_size(level)) throw std::out_of_range("vertex_at: index out of range");
  std::vector<int> word(static_cast<size_t>(level));
  for (int i = level; i >= 1; --i) {
    word[static_cast<size_t>(i - 1)] = index % shape.valency(i);
    index /= shape.valency(i);
  }
  return Vertex(std::move(word));
}

inline Vertex parent(const Vertex& v) {
  if (v.is_root()) throw std::out_of_range("parent: root has no parent");
  return Vertex(std::vector<int>(v.word.begin(), v.word.end() - 1));
}

/// Children in letter order. v must lie strictly above the truncation depth.
inline std::vector<Vertex> children(const TreeShape& shape, const Vertex& v) {
  validate_vertex(shape, v);
  if (v.level() >= shape.depth()) throw std::out_of_range("children: vertex at truncation depth");
  int m = shape.valency(v.level() + 1);
  std::vector<Vertex> out;
  out.reserve(static_cast<size_t>(m));
  for (int x = 0; x < m; ++x) {
    Vertex c = v;
    c.word.push_back(x);
    out.push_back(std::move(c));
  }
  return out;
}

/// Graph distance between two vertices on the same level: 2 * (level - lcp).
inline int vertex_distance(const Vertex& u, const Vertex& v) {
  if (u.level() != v.level()) throw std::invalid_argument("vertex_distance: levels differ");
  int lcp = 0;
  while (lcp < u.level() && u.word[static_cast<size_t>(lcp)] == v.word[static_cast<size_t>(lcp)]) ++lcp;
  return 2 * (u.level() - lcp);
}

/// True when a is a prefix of b (a lies on the path from the root to b).
inline bool is_ancestor(const Vertex& a, const Vertex& b) {
  if (a.level() > b.level()) return false;
  for (int i = 0; i < a.level(); ++i)
    if (a.word[static_cast<size_t>(i)] != b.word[static_cast<size_t>(i)]) return false;
  return true;
}

}  // namespace arborrep
