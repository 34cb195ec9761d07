#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "arborrep/errors.hpp"
#include "arborrep/perm.hpp"

namespace arborrep {

inline constexpr long long kDefaultPairCellCap = 20'000'000;

/// Partition of a finite set into orbits. Orbit ids are contiguous from 0 in
/// order of first appearance, which makes results reproducible.
struct OrbitPartition {
  int domain = 0;
  std::vector<int> orbit_of;
  int count = 0;
};

/// Stabilizer chain with a verified strong generating set.
///
/// Level i carries the i-th base point, the fundamental orbit of that point
/// under the generators fixing all earlier base points, and a Schreier
/// transversal. The chain is built by the deterministic Schreier-Sims
/// procedure: every Schreier generator of every level is sifted, and residues
/// are added as strong generators until all of them sift to the identity.
class StabChain {
public:
  int degree() const { return degree_; }

  const std::vector<Permutation>& strong_generators() const { return sgs_; }

  const std::vector<int>& base() const { return base_; }

  /// Product of the fundamental orbit sizes. Throws on unsigned overflow.
  unsigned long long order() const {
    unsigned long long ord = 1;
    for (const Level& lv : levels_) {
      unsigned long long n = static_cast<unsigned long long>(lv.orbit.size());
      if (n != 0 && ord > std::numeric_limits<unsigned long long>::max() / n)
        throw std::overflow_error("StabChain::order: does not fit in 64 bits");
      ord *= n;
    }
    return ord;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) throw std::invalid_argument("StabChain::contains: degree mismatch");
    Permutation residue;
    int drop = sift(g, &residue);
    (void)drop;
    return residue.is_identity();
  }

  /// Sifts g through the chain. Returns the number of levels passed and
  /// stores the final residue. The residue is the identity exactly when g
  /// belongs to the group.
  int sift(const Permutation& g, Permutation* residue_out) const {
    Permutation cur = g;
    int i = 0;
    for (; i < static_cast<int>(levels_.size()); ++i) {
      const Level& lv = levels_[static_cast<size_t>(i)];
      int x = cur(lv.base_point);
      int pos = lv.pos[static_cast<size_t>(x)];
      if (pos == 0) break;
      cur = compose(lv.transversal[static_cast<size_t>(pos - 1)].inverse(), cur);
    }
    *residue_out = std::move(cur);
    return i;
  }

  /// Generators of the pointwise stabilizer of the first k base points:
  /// the strong generators fixing base()[0..k-1].
  std::vector<Permutation> level_generators(int k) const {
    if (k < 0 || k > static_cast<int>(base_.size()))
      throw std::out_of_range("StabChain::level_generators: level out of range");
    std::vector<Permutation> out;
    for (const Permutation& g : sgs_) {
      bool fixes = true;
      for (int i = 0; i < k && fixes; ++i) fixes = g(base_[static_cast<size_t>(i)]) == base_[static_cast<size_t>(i)];
      if (fixes) out.push_back(g);
    }
    return out;
  }

private:
  struct Level {
    int base_point = 0;
    std::vector<int> gen_ids;             // strong generators fixing all earlier base points
    std::vector<int> orbit;               // fundamental orbit, insertion order
    std::vector<int> pos;                 // point -> position in orbit + 1, 0 when absent
    std::vector<Permutation> transversal; // transversal[pos-1] maps base_point to orbit[pos-1]
  };

  int degree_ = 0;
  std::vector<Permutation> sgs_;
  std::vector<int> base_;
  std::vector<Level> levels_;

  friend StabChain schreier_sims(const std::vector<Permutation>&, int, const std::vector<int>&);

  void recompute_gen_ids(int level) {
    Level& lv = levels_[static_cast<size_t>(level)];
    lv.gen_ids.clear();
    for (int id = 0; id < static_cast<int>(sgs_.size()); ++id) {
      const Permutation& g = sgs_[static_cast<size_t>(id)];
      bool fixes = true;
      for (int i = 0; i < level && fixes; ++i)
        fixes = g(base_[static_cast<size_t>(i)]) == base_[static_cast<size_t>(i)];
      if (fixes) lv.gen_ids.push_back(id);
    }
  }

  void recompute_orbit(int level) {
    Level& lv = levels_[static_cast<size_t>(level)];
    lv.orbit.clear();
    lv.pos.assign(static_cast<size_t>(degree_), 0);
    lv.transversal.clear();
    lv.orbit.push_back(lv.base_point);
    lv.pos[static_cast<size_t>(lv.base_point)] = 1;
    lv.transversal.push_back(Permutation(degree_));
    for (size_t head = 0; head < lv.orbit.size(); ++head) {
      int y = lv.orbit[head];
      for (int id : lv.gen_ids) {
        const Permutation& g = sgs_[static_cast<size_t>(id)];
        int z = g(y);
        if (lv.pos[static_cast<size_t>(z)] == 0) {
          lv.orbit.push_back(z);
          lv.pos[static_cast<size_t>(z)] = static_cast<int>(lv.orbit.size());
          lv.transversal.push_back(compose(g, lv.transversal[head]));
        }
      }
    }
  }

  // Appends a base point for a residue fixing the whole current base.
  void extend_base(const Permutation& residue) {
    int pt = residue.first_moved_point();
    base_.push_back(pt);
    Level lv;
    lv.base_point = pt;
    levels_.push_back(std::move(lv));
    int last = static_cast<int>(levels_.size()) - 1;
    recompute_gen_ids(last);
    recompute_orbit(last);
  }

  // Ensures the chain property holds at this level and below.
  void complete_level(int level) {
    recompute_gen_ids(level);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      recompute_orbit(level);
      Level& lv = levels_[static_cast<size_t>(level)];
      for (size_t xi = 0; xi < lv.orbit.size() && !dirty; ++xi) {
        const Permutation& t_x = lv.transversal[xi];
        for (size_t si = 0; si < lv.gen_ids.size() && !dirty; ++si) {
          const Permutation& s = sgs_[static_cast<size_t>(lv.gen_ids[si])];
          int sx = s(lv.orbit[xi]);
          const Permutation& t_sx = lv.transversal[static_cast<size_t>(lv.pos[static_cast<size_t>(sx)] - 1)];
          Permutation schreier = compose(t_sx.inverse(), compose(s, t_x));
          if (schreier.is_identity()) continue;
          Permutation residue;
          int drop = sift_from(schreier, level + 1, &residue);
          if (residue.is_identity()) continue;
          if (drop == static_cast<int>(levels_.size())) extend_base(residue);
          sgs_.push_back(residue);
          for (int k = drop; k > level; --k) complete_level(k);
          recompute_gen_ids(level);
          dirty = true;
        }
      }
    }
  }

  int sift_from(const Permutation& g, int start, Permutation* residue_out) const {
    Permutation cur = g;
    int i = start;
    for (; i < static_cast<int>(levels_.size()); ++i) {
      const Level& lv = levels_[static_cast<size_t>(i)];
      int x = cur(lv.base_point);
      int pos = lv.pos[static_cast<size_t>(x)];
      if (pos == 0) break;
      cur = compose(lv.transversal[static_cast<size_t>(pos - 1)].inverse(), cur);
    }
    *residue_out = std::move(cur);
    return i;
  }
};

/// Builds a stabilizer chain for the group generated by the given
/// permutations. base_prefix points are installed, in order and regardless of
/// redundancy, as the first base points, which is what point stabilizer
/// extraction relies on. The construction is deterministic.
inline StabChain schreier_sims(const std::vector<Permutation>& generators, int degree,
                               const std::vector<int>& base_prefix = {}) {
  StabChain chain;
  chain.degree_ = degree;
  for (const Permutation& g : generators) {
    if (g.degree() != degree) throw std::invalid_argument("schreier_sims: generator degree mismatch");
    if (g.is_identity()) continue;
    bool dup = false;
    for (const Permutation& h : chain.sgs_) dup = dup || h == g;
    if (!dup) chain.sgs_.push_back(g);
  }
  for (int pt : base_prefix) {
    if (pt < 0 || pt >= degree) throw std::out_of_range("schreier_sims: base point out of range");
    if (std::find(chain.base_.begin(), chain.base_.end(), pt) == chain.base_.end()) chain.base_.push_back(pt);
  }
  for (const Permutation& g : chain.sgs_) {
    bool moves_base = false;
    for (int pt : chain.base_) moves_base = moves_base || g(pt) != pt;
    if (!moves_base) {
      int pt = g.first_moved_point();
      if (std::find(chain.base_.begin(), chain.base_.end(), pt) == chain.base_.end()) chain.base_.push_back(pt);
    }
  }
  for (int pt : chain.base_) {
    StabChain::Level lv;
    lv.base_point = pt;
    chain.levels_.push_back(std::move(lv));
  }
  for (int i = 0; i < static_cast<int>(chain.levels_.size()); ++i) {
    chain.recompute_gen_ids(i);
    chain.recompute_orbit(i);
  }
  for (int i = static_cast<int>(chain.levels_.size()) - 1; i >= 0; --i) chain.complete_level(i);
  // Strong generation check: every input generator must sift to the identity.
  for (const Permutation& g : generators) {
    if (!chain.contains(g)) throw std::logic_error("schreier_sims: strong generation verification failed");
  }
  return chain;
}

/// Generators of the pointwise stabilizer of the listed points, obtained from
/// a fresh chain whose base starts with exactly those points.
inline std::vector<Permutation> stabilizer_generators(const StabChain& chain, const std::vector<int>& points) {
  StabChain rebased = schreier_sims(chain.strong_generators(), chain.degree(), points);
  std::vector<int> dedup;
  for (int pt : points)
    if (std::find(dedup.begin(), dedup.end(), pt) == dedup.end()) dedup.push_back(pt);
  return rebased.level_generators(static_cast<int>(dedup.size()));
}

/// Orbits of the generated group on the full domain.
inline OrbitPartition orbits(const std::vector<Permutation>& generators, int degree) {
  OrbitPartition part;
  part.domain = degree;
  part.orbit_of.assign(static_cast<size_t>(degree), -1);
  for (int start = 0; start < degree; ++start) {
    if (part.orbit_of[static_cast<size_t>(start)] != -1) continue;
    int id = part.count++;
    std::deque<int> queue{start};
    part.orbit_of[static_cast<size_t>(start)] = id;
    while (!queue.empty()) {
      int y = queue.front();
      queue.pop_front();
      for (const Permutation& g : generators) {
        if (g.degree() != degree) throw std::invalid_argument("orbits: generator degree mismatch");
        int z = g(y);
        if (part.orbit_of[static_cast<size_t>(z)] == -1) {
          part.orbit_of[static_cast<size_t>(z)] = id;
          queue.push_back(z);
        }
      }
    }
  }
  return part;
}

/// Orbits on an invariant subset; points are renumbered by their position in
/// the (ascending) subset. Throws if the subset is not invariant.
inline OrbitPartition orbits_on_subset(const std::vector<Permutation>& generators, const std::vector<int>& subset) {
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> position;
  if (!sorted.empty()) position.assign(static_cast<size_t>(sorted.back()) + 1, -1);
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) position[static_cast<size_t>(sorted[static_cast<size_t>(i)])] = i;
  auto pos_of = [&](int pt) {
    if (pt < 0 || static_cast<size_t>(pt) >= position.size() || position[static_cast<size_t>(pt)] == -1)
      throw std::invalid_argument("orbits_on_subset: subset is not invariant");
    return position[static_cast<size_t>(pt)];
  };
  OrbitPartition part;
  part.domain = static_cast<int>(sorted.size());
  part.orbit_of.assign(sorted.size(), -1);
  for (int start = 0; start < part.domain; ++start) {
    if (part.orbit_of[static_cast<size_t>(start)] != -1) continue;
    int id = part.count++;
    std::deque<int> queue{start};
    part.orbit_of[static_cast<size_t>(start)] = id;
    while (!queue.empty()) {
      int y = queue.front();
      queue.pop_front();
      for (const Permutation& g : generators) {
        int z = pos_of(g(sorted[static_cast<size_t>(y)]));
        if (part.orbit_of[static_cast<size_t>(z)] == -1) {
          part.orbit_of[static_cast<size_t>(z)] = id;
          queue.push_back(z);
        }
      }
    }
  }
  return part;
}

/// Orbits of the diagonal action on ordered pairs; pair (x, y) has index
/// x * degree + y. Refuses to allocate more than max_cells cells.
inline OrbitPartition orbits_on_pairs(const std::vector<Permutation>& generators, int degree,
                                      long long max_cells = kDefaultPairCellCap) {
  long long cells = static_cast<long long>(degree) * degree;
  if (cells > max_cells)
    throw CapExceeded("orbits_on_pairs: " + std::to_string(cells) + " cells exceed cap " + std::to_string(max_cells));
  OrbitPartition part;
  part.domain = static_cast<int>(cells);
  part.orbit_of.assign(static_cast<size_t>(cells), -1);
  std::deque<int> queue;
  for (int start = 0; start < part.domain; ++start) {
    if (part.orbit_of[static_cast<size_t>(start)] != -1) continue;
    int id = part.count++;
    queue.clear();
    queue.push_back(start);
    part.orbit_of[static_cast<size_t>(start)] = id;
    while (!queue.empty()) {
      int pair = queue.front();
      queue.pop_front();
      int x = pair / degree;
      int y = pair % degree;
      for (const Permutation& g : generators) {
        if (g.degree() != degree) throw std::invalid_argument("orbits_on_pairs: generator degree mismatch");
        int image = g(x) * degree + g(y);
        if (part.orbit_of[static_cast<size_t>(image)] == -1) {
          part.orbit_of[static_cast<size_t>(image)] = id;
          queue.push_back(image);
        }
      }
    }
  }
  return part;
}

/// Restriction of the generators to an invariant subset, renumbered by the
/// position of each point in the ascending subset.
inline std::vector<Permutation> restrict_to(const std::vector<Permutation>& generators, const std::vector<int>& subset) {
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> position;
  if (!sorted.empty()) position.assign(static_cast<size_t>(sorted.back()) + 1, -1);
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) position[static_cast<size_t>(sorted[static_cast<size_t>(i)])] = i;
  std::vector<Permutation> out;
  out.reserve(generators.size());
  for (const Permutation& g : generators) {
    std::vector<int> img(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
      int z = g(sorted[i]);
      if (z < 0 || static_cast<size_t>(z) >= position.size() || position[static_cast<size_t>(z)] == -1)
        throw std::invalid_argument("restrict_to: subset is not invariant");
      img[i] = position[static_cast<size_t>(z)];
    }
    out.push_back(Permutation(std::move(img)));
  }
  return out;
}

/// Chain for the normal closure of the seed elements inside the chain's
/// group. Every seed must belong to the group.
inline StabChain normal_closure(const StabChain& group, const std::vector<Permutation>& seeds) {
  for (const Permutation& s : seeds) {
    if (!group.contains(s)) throw std::invalid_argument("normal_closure: seed lies outside the group");
  }
  std::vector<Permutation> closure_gens;
  StabChain closure = schreier_sims({}, group.degree());
  std::deque<Permutation> work(seeds.begin(), seeds.end());
  while (!work.empty()) {
    Permutation g = std::move(work.front());
    work.pop_front();
    if (g.is_identity() || closure.contains(g)) continue;
    closure_gens.push_back(g);
    closure = schreier_sims(closure_gens, group.degree());
    for (const Permutation& s : group.strong_generators()) {
      work.push_back(compose(s, compose(g, s.inverse())));
      Permutation si = s.inverse();
      work.push_back(compose(si, compose(g, s)));
    }
  }
  return closure;
}

/// All elements, each exactly once, as products of transversal elements in
/// deterministic order.
inline std::vector<Permutation> enumerate_elements(const StabChain& chain, unsigned long long cap) {
  unsigned long long n = chain.order();
  if (n > cap)
    throw CapExceeded("enumerate_elements: order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  std::vector<Permutation> out;
  out.reserve(static_cast<size_t>(n));
  std::vector<std::vector<Permutation>> transversals;
  int degree = chain.degree();
  const std::vector<int>& base = chain.base();
  for (int i = 0; i < static_cast<int>(base.size()); ++i) {
    std::vector<Permutation> gens = chain.level_generators(i);
    std::vector<Permutation> tv;
    std::vector<int> pos(static_cast<size_t>(degree), 0);
    std::vector<int> orbit{base[static_cast<size_t>(i)]};
    pos[static_cast<size_t>(base[static_cast<size_t>(i)])] = 1;
    tv.push_back(Permutation(degree));
    for (size_t head = 0; head < orbit.size(); ++head) {
      for (const Permutation& g : gens) {
        int z = g(orbit[head]);
        if (pos[static_cast<size_t>(z)] == 0) {
          orbit.push_back(z);
          pos[static_cast<size_t>(z)] = static_cast<int>(orbit.size());
          tv.push_back(compose(g, tv[head]));
        }
      }
    }
    transversals.push_back(std::move(tv));
  }
  std::vector<size_t> idx(transversals.size(), 0);
  // Iterative mixed-radix walk over transversal choices.
  std::vector<Permutation> partial(transversals.size() + 1, Permutation(degree));
  size_t level = 0;
  while (true) {
    if (level == transversals.size()) {
      out.push_back(partial[level]);
      if (level == 0) break;
      --level;
      continue;
    }
    if (idx[level] == transversals[level].size()) {
      idx[level] = 0;
      if (level == 0) break;
      --level;
      continue;
    }
    partial[level + 1] = compose(partial[level], transversals[level][idx[level]]);
    ++idx[level];
    ++level;
  }
  return out;
}

}  // namespace arborrep
