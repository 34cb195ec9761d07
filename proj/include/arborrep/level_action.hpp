#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arborrep/perm.hpp"
#include "arborrep/tree.hpp"

namespace arborrep {

/// Automorphism of a truncated tree, stored as one permutation per level.
///
/// The defining property is prefix compatibility: the image of a vertex is
/// always a child of the image of its parent. Equivalently, every g carries a
/// label g_(u) at each vertex u with g(u x) = g(u) g_(u)(x). The constructor
/// rejects tables that violate this, so a constructed LevelAction is a tree
/// automorphism by construction.
class LevelAction {
public:
  LevelAction(TreeShape shape, std::vector<std::vector<int>> level_images)
      : shape_(std::move(shape)), levels_(std::move(level_images)) {
    if (static_cast<int>(levels_.size()) != shape_.depth())
      throw std::invalid_argument("LevelAction: one image table per level expected");
    for (int n = 1; n <= shape_.depth(); ++n) {
      const std::vector<int>& tab = levels_[static_cast<size_t>(n - 1)];
      if (static_cast<int>(tab.size()) != shape_.level_size(n))
        throw std::invalid_argument("LevelAction: level " + std::to_string(n) + " table has wrong size");
      Permutation check((std::vector<int>(tab)));  // bijection check
      (void)check;
    }
    for (int n = 2; n <= shape_.depth(); ++n) {
      int m = shape_.valency(n);
      const std::vector<int>& fine = levels_[static_cast<size_t>(n - 1)];
      const std::vector<int>& coarse = levels_[static_cast<size_t>(n - 2)];
      for (int i = 0; i < static_cast<int>(fine.size()); ++i) {
        if (fine[static_cast<size_t>(i)] / m != coarse[static_cast<size_t>(i / m)])
          throw std::invalid_argument("LevelAction: image tables are not prefix compatible");
      }
    }
  }

  static LevelAction identity(const TreeShape& shape) {
    std::vector<std::vector<int>> levels;
    for (int n = 1; n <= shape.depth(); ++n) {
      std::vector<int> tab(static_cast<size_t>(shape.level_size(n)));
      for (int i = 0; i < static_cast<int>(tab.size()); ++i) tab[static_cast<size_t>(i)] = i;
      levels.push_back(std::move(tab));
    }
    return LevelAction(shape, std::move(levels));
  }

  const TreeShape& shape() const { return shape_; }
  int depth() const { return shape_.depth(); }

  /// Image of the vertex with the given index on the given level.
  int apply_index(int level, int index) const {
    if (level < 1 || level > depth()) throw std::out_of_range("LevelAction::apply_index: level out of range");
    return levels_[static_cast<size_t>(level - 1)][static_cast<size_t>(index)];
  }

  Vertex apply(const Vertex& v) const {
    if (v.is_root()) return v;
    return vertex_at(shape_, v.level(), apply_index(v.level(), vertex_index(shape_, v)));
  }

  const std::vector<int>& level_table(int level) const {
    if (level < 1 || level > depth()) throw std::out_of_range("LevelAction::level_table: level out of range");
    return levels_[static_cast<size_t>(level - 1)];
  }

  bool is_identity() const {
    for (const auto& tab : levels_)
      for (int i = 0; i < static_cast<int>(tab.size()); ++i)
        if (tab[static_cast<size_t>(i)] != i) return false;
    return true;
  }

  bool operator==(const LevelAction& other) const {
    return shape_ == other.shape_ && levels_ == other.levels_;
  }

private:
  TreeShape shape_;
  std::vector<std::vector<int>> levels_;
};

/// g after h: (g*h)(v) = g(h(v)), so labels satisfy (g*h)_(u) = g_(h(u)) h_(u).
inline LevelAction compose(const LevelAction& g, const LevelAction& h) {
  if (!(g.shape() == h.shape())) throw std::invalid_argument("compose: shape mismatch");
  std::vector<std::vector<int>> levels;
  for (int n = 1; n <= g.depth(); ++n) {
    const std::vector<int>& gt = g.level_table(n);
    const std::vector<int>& ht = h.level_table(n);
    std::vector<int> tab(ht.size());
    for (size_t i = 0; i < ht.size(); ++i) tab[i] = gt[static_cast<size_t>(ht[i])];
    levels.push_back(std::move(tab));
  }
  return LevelAction(g.shape(), std::move(levels));
}

inline LevelAction invert(const LevelAction& g) {
  std::vector<std::vector<int>> levels;
  for (int n = 1; n <= g.depth(); ++n) {
    const std::vector<int>& gt = g.level_table(n);
    std::vector<int> tab(gt.size());
    for (size_t i = 0; i < gt.size(); ++i) tab[static_cast<size_t>(gt[i])] = static_cast<int>(i);
    levels.push_back(std::move(tab));
  }
  return LevelAction(g.shape(), std::move(levels));
}

inline LevelAction power(const LevelAction& g, long long e) {
  LevelAction base = e < 0 ? invert(g) : g;
  long long k = e < 0 ? -e : e;
  LevelAction acc = LevelAction::identity(g.shape());
  while (k > 0) {
    if (k & 1) acc = compose(acc, base);
    base = compose(base, base);
    k >>= 1;
  }
  return acc;
}

/// x y x^-1 y^-1.
inline LevelAction commutator(const LevelAction& x, const LevelAction& y) {
  return compose(x, compose(y, compose(invert(x), invert(y))));
}

/// The label of g at u: the permutation s of the child letters with
/// g(u x) = g(u) s(x). u must lie strictly above the truncation depth.
inline Permutation label_at(const LevelAction& g, const Vertex& u) {
  validate_vertex(g.shape(), u);
  int n = u.level();
  if (n >= g.depth()) throw std::out_of_range("label_at: vertex at truncation depth");
  int m = g.shape().valency(n + 1);
  int src = n == 0 ? 0 : vertex_index(g.shape(), u);
  int dst = n == 0 ? 0 : g.apply_index(n, src);
  std::vector<int> img(static_cast<size_t>(m));
  for (int x = 0; x < m; ++x)
    img[static_cast<size_t>(x)] = g.apply_index(n + 1, src * m + x) - dst * m;
  return Permutation(std::move(img));
}

/// The section of g at a fixed vertex v: the automorphism induced on the
/// subtree below v, as an action on the truncated subtree shape. Requires
/// g(v) = v.
inline LevelAction section_at(const LevelAction& g, const Vertex& v) {
  validate_vertex(g.shape(), v);
  int k = v.level();
  if (k >= g.depth()) throw std::out_of_range("section_at: vertex at truncation depth");
  int src = k == 0 ? 0 : vertex_index(g.shape(), v);
  if (k > 0 && g.apply_index(k, src) != src) throw std::invalid_argument("section_at: vertex is not fixed");
  TreeShape sub = g.shape().subtree_shape(k);
  std::vector<std::vector<int>> levels;
  long long block = 1;
  for (int j = 1; j <= sub.depth(); ++j) {
    block *= sub.valency(j);
    std::vector<int> tab(static_cast<size_t>(block));
    long long base = static_cast<long long>(src) * block;
    for (long long i = 0; i < block; ++i)
      tab[static_cast<size_t>(i)] =
          g.apply_index(k + j, static_cast<int>(base + i)) - static_cast<int>(base);
    levels.push_back(std::move(tab));
  }
  return LevelAction(sub, std::move(levels));
}

// ---------------------------------------------------------------------------
// Self-similar automata
// ---------------------------------------------------------------------------

/// Finite invertible automaton over a fixed alphabet. State s applied to a
/// word x w gives output(s)(x) followed by state transition(s, x) applied
/// to w.
struct Automaton {
  int degree = 0;

  struct State {
    std::string name;
    std::vector<int> output;       // permutation of the alphabet
    std::vector<int> transitions;  // state index per letter
  };

  std::vector<State> states;

  int state_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
      if (states[static_cast<size_t>(i)].name == name) return i;
    throw std::invalid_argument("Automaton: undeclared state " + name);
  }

  void validate() const {
    if (degree < 2) throw std::invalid_argument("Automaton: alphabet needs at least two letters");
    if (states.empty()) throw std::invalid_argument("Automaton: no states");
    for (const State& s : states) {
      if (static_cast<int>(s.output.size()) != degree)
        throw std::invalid_argument("Automaton: output size mismatch in state " + s.name);
      Permutation check((std::vector<int>(s.output)));
      (void)check;
      if (static_cast<int>(s.transitions.size()) != degree)
        throw std::invalid_argument("Automaton: transition size mismatch in state " + s.name);
      for (int t : s.transitions)
        if (t < 0 || t >= static_cast<int>(states.size()))
          throw std::invalid_argument("Automaton: transition out of range in state " + s.name);
    }
  }
};

/// Eager materialization of an automaton state on a regular truncated tree.
/// Tracks, per vertex, the active state reached by reading the vertex word.
inline LevelAction materialize(const Automaton& aut, int state, const TreeShape& shape) {
  aut.validate();
  if (state < 0 || state >= static_cast<int>(aut.states.size()))
    throw std::invalid_argument("materialize: state index out of range");
  for (int n = 1; n <= shape.depth(); ++n)
    if (shape.valency(n) != aut.degree)
      throw std::invalid_argument("materialize: tree valency does not match automaton alphabet");
  std::vector<std::vector<int>> levels;
  std::vector<int> state_at{state};  // per source vertex of the previous level
  std::vector<int> prev_image{0};
  for (int n = 1; n <= shape.depth(); ++n) {
    int m = aut.degree;
    int size = shape.level_size(n);
    std::vector<int> tab(static_cast<size_t>(size));
    std::vector<int> next_state(static_cast<size_t>(size));
    for (int i = 0; i < size / m; ++i) {
      const Automaton::State& st = aut.states[static_cast<size_t>(state_at[static_cast<size_t>(i)])];
      for (int x = 0; x < m; ++x) {
        tab[static_cast<size_t>(i * m + x)] = prev_image[static_cast<size_t>(i)] * m + st.output[static_cast<size_t>(x)];
        next_state[static_cast<size_t>(i * m + x)] = st.transitions[static_cast<size_t>(x)];
      }
    }
    prev_image = tab;
    state_at = std::move(next_state);
    levels.push_back(std::move(tab));
  }
  return LevelAction(shape, std::move(levels));
}

inline LevelAction materialize(const Automaton& aut, const std::string& state, const TreeShape& shape) {
  return materialize(aut, aut.state_index(state), shape);
}

// ---------------------------------------------------------------------------
// Level-staged generators
// ---------------------------------------------------------------------------

/// Generator given by an explicit label at every vertex above the truncation
/// depth. labels[n] assigns to each level-n vertex a permutation of its
/// child letters; missing entries default to the identity.
struct LevelStagedGenerator {
  std::map<std::pair<int, int>, Permutation> labels;  // (level, vertex index) -> label

  void set_label(int level, int index, Permutation p) { labels[{level, index}] = std::move(p); }
};

inline LevelAction materialize(const LevelStagedGenerator& gen, const TreeShape& shape) {
  for (const auto& [key, label] : gen.labels) {
    auto [level, index] = key;
    if (level < 0 || level >= shape.depth()) throw std::out_of_range("materialize: label level out of range");
    if (index < 0 || index >= shape.level_size(level)) throw std::out_of_range("materialize: label index out of range");
    if (label.degree() != shape.valency(level + 1))
      throw std::invalid_argument("materialize: label degree does not match valency");
  }
  std::vector<std::vector<int>> levels;
  std::vector<int> prev_image{0};
  for (int n = 1; n <= shape.depth(); ++n) {
    int m = shape.valency(n);
    int size = shape.level_size(n);
    std::vector<int> tab(static_cast<size_t>(size));
    for (int i = 0; i < size / m; ++i) {
      auto it = gen.labels.find({n - 1, i});
      for (int x = 0; x < m; ++x) {
        int y = it == gen.labels.end() ? x : (it->second)(x);
        tab[static_cast<size_t>(i * m + x)] = prev_image[static_cast<size_t>(i)] * m + y;
      }
    }
    prev_image = tab;
    levels.push_back(std::move(tab));
  }
  return LevelAction(shape, std::move(levels));
}

}  // namespace arborrep
