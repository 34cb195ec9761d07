#include "arborrep/families.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arborrep/chartab.hpp"
#include "arborrep/errors.hpp"
#include "arborrep/level_action.hpp"
#include "arborrep/local_ring.hpp"
#include "arborrep/perm.hpp"
#include "arborrep/stab_chain.hpp"
#include "arborrep/transitivity.hpp"
#include "arborrep/tree.hpp"
#include "arborrep/tree_group.hpp"
#include "oracles.hpp"

namespace {

using arborrep::CapExceeded;
using arborrep::DefiningVector;
using arborrep::IntransitiveAction;
using arborrep::LevelAction;
using arborrep::Permutation;
using arborrep::RingKind;
using arborrep::StabChain;
using arborrep::TreeGroup;
using arborrep::TreeShape;
using arborrep::Verdict;
using arborrep::Vertex;
using Parts = std::vector<std::pair<long long, long long>>;

std::vector<std::vector<int>> tables_of(const std::vector<Permutation>& perms) {
  std::vector<std::vector<int>> out;
  out.reserve(perms.size());
  for (const Permutation& p : perms) out.push_back(p.images());
  return out;
}

const LevelAction& generator_named(const TreeGroup& group, const std::string& name) {
  for (size_t i = 0; i < group.names.size(); ++i)
    if (group.names[i] == name) return group.generators[i];
  throw std::runtime_error("no generator named " + name);
}

// Reassemble a tree automorphism from its merged-domain permutation.
LevelAction action_of_merged(const TreeShape& shape, const Permutation& p) {
  std::vector<std::vector<int>> levels;
  int off = 0;
  for (int n = 1; n <= shape.depth(); ++n) {
    std::vector<int> tab(static_cast<size_t>(shape.level_size(n)));
    for (int i = 0; i < shape.level_size(n); ++i)
      tab[static_cast<size_t>(i)] = p(off + i) - off;
    off += shape.level_size(n);
    levels.push_back(std::move(tab));
  }
  return LevelAction(shape, std::move(levels));
}

// Rank over F_p of the 2 x m matrix whose rows are the entries and their
// cyclic shift by t. Aperiodicity should coincide with full rank for every t.
int shift_pair_rank(const DefiningVector& e, int t) {
  int p = e.prime;
  int m = e.alphabet();
  std::vector<std::vector<int>> rows(2, std::vector<int>(static_cast<size_t>(m)));
  for (int i = 0; i < m; ++i) {
    rows[0][static_cast<size_t>(i)] = e.entries[static_cast<size_t>(i)] % p;
    rows[1][static_cast<size_t>(i)] = e.entries[static_cast<size_t>((i + t) % m)] % p;
  }
  int rank = 0;
  for (int col = 0; col < m && rank < 2; ++col) {
    int pivot = -1;
    for (int r = rank; r < 2; ++r)
      if (rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pivot)]);
    int lead = rows[static_cast<size_t>(rank)][static_cast<size_t>(col)];
    int inv = 1;
    while (lead * inv % p != 1) ++inv;
    for (int c = 0; c < m; ++c)
      rows[static_cast<size_t>(rank)][static_cast<size_t>(c)] =
          rows[static_cast<size_t>(rank)][static_cast<size_t>(c)] * inv % p;
    for (int r = 0; r < 2; ++r) {
      if (r == rank) continue;
      int f = rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
      for (int c = 0; c < m; ++c)
        rows[static_cast<size_t>(r)][static_cast<size_t>(c)] =
            ((rows[static_cast<size_t>(r)][static_cast<size_t>(c)] -
              f * rows[static_cast<size_t>(rank)][static_cast<size_t>(c)]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

DefiningVector gupta_sidki() { return arborrep::defining_vector(3, 1, {1, 2, 0}); }

TEST(DefiningVectors, Validation) {
  EXPECT_NO_THROW(arborrep::defining_vector(3, 1, {1, 2, 0}));
  EXPECT_NO_THROW(arborrep::defining_vector(2, 2, {1, 0, 1, 0}));
  // Last entry must vanish.
  EXPECT_THROW(arborrep::defining_vector(3, 1, {1, 2, 1}), std::invalid_argument);
  // Some entry must be a unit modulo p.
  EXPECT_THROW(arborrep::defining_vector(2, 2, {2, 0, 2, 0}), std::invalid_argument);
  // Length must match p^k.
  EXPECT_THROW(arborrep::defining_vector(3, 1, {1, 0}), std::invalid_argument);
  // Entries live in Z/m.
  EXPECT_THROW(arborrep::defining_vector(3, 1, {1, 3, 0}), std::invalid_argument);
  EXPECT_THROW(arborrep::defining_vector(3, 1, {-1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(arborrep::defining_vector(4, 1, {1, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(arborrep::defining_vector(3, 0, {}), std::invalid_argument);
}

TEST(DefiningVectors, AperiodicityMatchesRankCriterion) {
  // Sweep every valid vector for m = 3 and m = 4 and compare the shift
  // criterion against the independent rank computation.
  int checked = 0;
  for (int e1 = 0; e1 < 3; ++e1) {
    for (int e2 = 0; e2 < 3; ++e2) {
      if (e1 % 3 == 0 && e2 % 3 == 0) continue;
      DefiningVector e = arborrep::defining_vector(3, 1, {e1, e2, 0});
      bool full_rank = true;
      for (int t = 1; t < 3; ++t) full_rank = full_rank && shift_pair_rank(e, t) == 2;
      EXPECT_EQ(arborrep::ggs_is_aperiodic(e), full_rank);
      // Prime alphabets admit no periodic defining vector.
      EXPECT_TRUE(arborrep::ggs_is_aperiodic(e));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 8);
  for (int e1 = 0; e1 < 4; ++e1) {
    for (int e2 = 0; e2 < 4; ++e2) {
      for (int e3 = 0; e3 < 4; ++e3) {
        if (e1 % 2 == 0 && e2 % 2 == 0 && e3 % 2 == 0) continue;
        DefiningVector e = arborrep::defining_vector(2, 2, {e1, e2, e3, 0});
        bool full_rank = true;
        for (int t = 1; t < 4; ++t) full_rank = full_rank && shift_pair_rank(e, t) == 2;
        EXPECT_EQ(arborrep::ggs_is_aperiodic(e), full_rank) << e1 << e2 << e3;
      }
    }
  }
  EXPECT_FALSE(arborrep::ggs_is_aperiodic(arborrep::defining_vector(2, 2, {1, 0, 1, 0})));
  EXPECT_TRUE(arborrep::ggs_is_aperiodic(arborrep::defining_vector(2, 2, {1, 1, 2, 0})));
}

TEST(DefiningVectors, CenteredDetection) {
  EXPECT_TRUE(arborrep::ggs_is_centered(arborrep::defining_vector(2, 1, {1, 0})));
  EXPECT_TRUE(arborrep::ggs_is_centered(arborrep::defining_vector(2, 2, {0, 1, 0, 0})));
  EXPECT_TRUE(arborrep::ggs_is_centered(arborrep::defining_vector(2, 2, {2, 1, 2, 0})));
  EXPECT_FALSE(arborrep::ggs_is_centered(arborrep::defining_vector(2, 2, {1, 1, 2, 0})));
  EXPECT_FALSE(arborrep::ggs_is_centered(arborrep::defining_vector(2, 2, {1, 0, 1, 0})));
  // Odd alphabets are never centered.
  EXPECT_FALSE(arborrep::ggs_is_centered(gupta_sidki()));
}

TEST(DefiningVectors, Predictions) {
  EXPECT_EQ(arborrep::ggs_prediction(gupta_sidki()), Verdict::yes);
  EXPECT_EQ(arborrep::ggs_prediction(arborrep::defining_vector(2, 2, {1, 1, 2, 0})), Verdict::yes);
  EXPECT_EQ(arborrep::ggs_prediction(arborrep::defining_vector(2, 2, {1, 0, 1, 0})), Verdict::no);
  EXPECT_EQ(arborrep::ggs_prediction(arborrep::defining_vector(2, 1, {1, 0})), Verdict::unknown);
  EXPECT_EQ(arborrep::ggs_prediction(arborrep::defining_vector(2, 2, {0, 1, 0, 0})), Verdict::unknown);
}

TEST(GgsFamily, GeneratorActions) {
  DefiningVector e = gupta_sidki();
  arborrep::Automaton aut = arborrep::ggs_automaton(e);
  EXPECT_EQ(aut.states.size(), 4u);
  EXPECT_EQ(aut.degree, 3);
  TreeGroup g2 = arborrep::ggs_build(e, 2);
  EXPECT_EQ(g2.names, (std::vector<std::string>{"a", "b"}));
  const LevelAction& a = generator_named(g2, "a");
  const LevelAction& b = generator_named(g2, "b");
  // a cycles the top letters and has trivial sections.
  for (int x = 0; x < 3; ++x) {
    EXPECT_EQ(a.apply(Vertex{x}), (Vertex{(x + 1) % 3}));
    EXPECT_TRUE(arborrep::label_at(a, Vertex{x}).is_identity());
  }
  EXPECT_TRUE(arborrep::power(a, 3).is_identity());
  // b fixes the first level and acts below letter x as a^{e_x}.
  for (int x = 0; x < 3; ++x) {
    EXPECT_EQ(b.apply(Vertex{0, x}), (Vertex{0, x}));
    EXPECT_EQ(b.apply(Vertex{1, x}), (Vertex{1, (x + 1) % 3}));
    EXPECT_EQ(b.apply(Vertex{2, x}), (Vertex{2, (x + 2) % 3}));
  }
  EXPECT_TRUE(arborrep::power(b, 3).is_identity());
  // Deeper sections recurse: below letter 0 the directed generator repeats.
  TreeGroup g3 = arborrep::ggs_build(e, 3);
  const LevelAction& a3 = generator_named(g3, "a");
  const LevelAction& b3 = generator_named(g3, "b");
  EXPECT_EQ(arborrep::section_at(b3, Vertex{0}), b);
  EXPECT_EQ(arborrep::section_at(b3, Vertex{1}), a);
  EXPECT_EQ(arborrep::section_at(b3, Vertex{2}), arborrep::power(a, 2));
  EXPECT_TRUE(arborrep::power(a3, 3).is_identity());
}

TEST(GgsFamily, CommutatorSections) {
  DefiningVector e = gupta_sidki();
  TreeGroup g3 = arborrep::ggs_build(e, 3);
  TreeGroup g2 = arborrep::ggs_build(e, 2);
  const LevelAction& a = generator_named(g2, "a");
  const LevelAction& b = generator_named(g2, "b");
  LevelAction c = arborrep::commutator(generator_named(g3, "b"), generator_named(g3, "a"));
  // The commutator fixes the first level, and its section below letter u is
  // b_u (b_{u-1})^-1 where b_0 = b, b_x = a^{e_x}.
  for (int x = 0; x < 3; ++x) EXPECT_EQ(c.apply(Vertex{x}), (Vertex{x}));
  EXPECT_EQ(arborrep::section_at(c, Vertex{0}), arborrep::compose(b, arborrep::power(a, -2)));
  EXPECT_EQ(arborrep::section_at(c, Vertex{1}), arborrep::compose(a, arborrep::invert(b)));
  EXPECT_EQ(arborrep::section_at(c, Vertex{2}), a);
}

TEST(GgsFamily, ImageOrders) {
  DefiningVector e = gupta_sidki();
  TreeGroup g2 = arborrep::ggs_build(e, 2);
  std::vector<Permutation> merged = arborrep::merged_generators(g2);
  StabChain chain = arborrep::schreier_sims(merged, arborrep::domain_size(g2.shape));
  EXPECT_EQ(chain.order(), 27u);
  EXPECT_EQ(oracle::enumerate_group(tables_of(merged), arborrep::domain_size(g2.shape), 1000).size(), 27u);
  // An odd-order group contains no transposition.
  std::vector<int> swap_two(12);
  for (int i = 0; i < 12; ++i) swap_two[static_cast<size_t>(i)] = i;
  std::swap(swap_two[3], swap_two[4]);
  EXPECT_FALSE(chain.contains(Permutation(swap_two)));

  TreeGroup g3 = arborrep::ggs_build(e, 3);
  std::vector<Permutation> level3 = arborrep::level_generators_of(g3, 3);
  StabChain chain3 = arborrep::schreier_sims(level3, 27);
  EXPECT_EQ(chain3.order(), 2187u);
  EXPECT_EQ(oracle::enumerate_group(tables_of(level3), 27, 10000).size(), 2187u);
}

TEST(GgsFamily, RankSequence) {
  TreeGroup g4 = arborrep::ggs_build(gupta_sidki(), 4);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(arborrep::level_rank(g4, n), 2 * n + 1);
}

TEST(GgsFamily, LocalAndLevelDecompositions) {
  TreeGroup g3 = arborrep::ggs_build(gupta_sidki(), 3);
  arborrep::DecompositionRecord root = arborrep::local_decomposition(g3, Vertex{});
  EXPECT_TRUE(root.trivial_removed);
  EXPECT_EQ(root.parts, Parts({{1, 1}, {1, 1}}));
  arborrep::DecompositionRecord spine1 = arborrep::local_decomposition(g3, Vertex{0});
  EXPECT_EQ(spine1.parts, Parts({{1, 1}, {1, 1}}));
  arborrep::DecompositionRecord level2 = arborrep::decompose_level(g3, 2);
  EXPECT_FALSE(level2.trivial_removed);
  EXPECT_EQ(level2.parts, Parts({{1, 1}, {1, 1}, {1, 1}, {3, 1}, {3, 1}}));
  EXPECT_EQ(level2.total_dimension(), 9);
  EXPECT_EQ(level2.multiplicity_square_sum(), arborrep::level_rank(g3, 2));
  arborrep::RankIdentity identity = arborrep::rank_identity(g3, 3);
  EXPECT_TRUE(identity.holds);
  EXPECT_EQ(identity.rank, 7);
  EXPECT_EQ(identity.predicted, 7);
}

TEST(GgsFamily, SubgroupLocalTransitivity) {
  // The commutators b^k a^l b^-k a^-l generate a subgroup that fixes the
  // first level pointwise, yet its stabilizer of any vertex still moves the
  // children of that vertex transitively.
  DefiningVector e = gupta_sidki();
  std::vector<LevelAction> hgens = arborrep::ggs_H_generators(e, 3);
  EXPECT_EQ(hgens.size(), 4u);
  TreeShape shape = TreeShape::regular(3, 3);
  std::vector<Permutation> merged;
  for (const LevelAction& h : hgens) {
    for (int i = 0; i < 3; ++i) EXPECT_EQ(h.level_table(1)[static_cast<size_t>(i)], i);
    merged.push_back(arborrep::merged_permutation(h));
  }
  int dom = arborrep::domain_size(shape);
  for (int n = 1; n <= 2; ++n) {
    for (int idx = 0; idx < shape.level_size(n); ++idx) {
      Vertex u = arborrep::vertex_at(shape, n, idx);
      int pu = arborrep::domain_point(shape, u);
      StabChain chain = arborrep::schreier_sims(merged, dom, {pu});
      std::vector<Permutation> stab = arborrep::stabilizer_generators(chain, {pu});
      std::vector<Permutation> on_children = arborrep::restrict_to(stab, arborrep::child_points(shape, u));
      EXPECT_EQ(arborrep::orbits(on_children, 3).count, 1) << "level " << n << " index " << idx;
    }
  }
}

TEST(GgsFamily, CommutatorClosurePairSections) {
  // Below two distinct first-level vertices, the normal closure of the single
  // commutator [b, a] induces independent copies of the commutator subgroup:
  // the pair sections contain (h, 1) and (1, h) for every generator h.
  DefiningVector e = gupta_sidki();
  TreeGroup g3 = arborrep::ggs_build(e, 3);
  TreeShape shape = g3.shape;
  int dom = arborrep::domain_size(shape);
  std::vector<Permutation> merged = arborrep::merged_generators(g3);
  StabChain whole = arborrep::schreier_sims(merged, dom);
  LevelAction seed = arborrep::commutator(generator_named(g3, "b"), generator_named(g3, "a"));
  StabChain closure = arborrep::normal_closure(whole, {arborrep::merged_permutation(seed)});

  Vertex u{0};
  Vertex v{1};
  int pu = arborrep::domain_point(shape, u);
  int pv = arborrep::domain_point(shape, v);
  StabChain rebased = arborrep::schreier_sims(closure.strong_generators(), dom, {pu, pv});
  std::vector<Permutation> stab = arborrep::stabilizer_generators(rebased, {pu, pv});

  TreeShape sub = shape.subtree_shape(1);
  int subdom = arborrep::domain_size(sub);
  std::vector<Permutation> pair_gens;
  for (const Permutation& g : stab) {
    LevelAction act = action_of_merged(shape, g);
    Permutation su = arborrep::merged_permutation(arborrep::section_at(act, u));
    Permutation sv = arborrep::merged_permutation(arborrep::section_at(act, v));
    std::vector<int> img(static_cast<size_t>(2 * subdom));
    for (int x = 0; x < subdom; ++x) {
      img[static_cast<size_t>(x)] = su(x);
      img[static_cast<size_t>(subdom + x)] = subdom + sv(x);
    }
    pair_gens.push_back(Permutation(std::move(img)));
  }
  StabChain pair_group = arborrep::schreier_sims(pair_gens, 2 * subdom);

  for (const LevelAction& h : arborrep::ggs_H_generators(e, 2)) {
    Permutation hp = arborrep::merged_permutation(h);
    std::vector<int> left(static_cast<size_t>(2 * subdom));
    std::vector<int> right(static_cast<size_t>(2 * subdom));
    for (int x = 0; x < subdom; ++x) {
      left[static_cast<size_t>(x)] = hp(x);
      left[static_cast<size_t>(subdom + x)] = subdom + x;
      right[static_cast<size_t>(x)] = x;
      right[static_cast<size_t>(subdom + x)] = subdom + hp(x);
    }
    EXPECT_TRUE(pair_group.contains(Permutation(std::move(left))));
    EXPECT_TRUE(pair_group.contains(Permutation(std::move(right))));
  }
}

TEST(GgsFamily, LocalPairTransitivitySweep) {
  // Every valid defining vector on a prime alphabet is aperiodic, and the
  // built groups are locally pair transitive at all checkable levels.
  for (int e1 = 0; e1 < 3; ++e1) {
    for (int e2 = 0; e2 < 3; ++e2) {
      if (e1 % 3 == 0 && e2 % 3 == 0) continue;
      DefiningVector e = arborrep::defining_vector(3, 1, {e1, e2, 0});
      EXPECT_EQ(arborrep::ggs_prediction(e), Verdict::yes);
      TreeGroup g = arborrep::ggs_build(e, 3);
      EXPECT_TRUE(arborrep::is_locally_2_transitive(g, 1).transitive) << e1 << e2;
      EXPECT_TRUE(arborrep::is_locally_2_transitive(g, 2).transitive) << e1 << e2;
    }
  }
  // Periodic vectors fail already at the first level; the failure shows up as
  // a pair of first-level vertices with an intransitive joint child action.
  for (const std::vector<int>& entries : {std::vector<int>{1, 0, 1, 0}, std::vector<int>{1, 2, 3, 0}}) {
    DefiningVector e = arborrep::defining_vector(2, 2, entries);
    EXPECT_EQ(arborrep::ggs_prediction(e), Verdict::no);
    TreeGroup g = arborrep::ggs_build(e, 2);
    arborrep::LocalTransitivityResult r = arborrep::is_locally_2_transitive(g, 1);
    EXPECT_FALSE(r.transitive);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->pair_count, 16);
    EXPECT_GT(r.witness->orbit_count, 1);
  }
  // An aperiodic non-centered vector on the same alphabet passes.
  {
    DefiningVector e = arborrep::defining_vector(2, 2, {1, 1, 2, 0});
    EXPECT_EQ(arborrep::ggs_prediction(e), Verdict::yes);
    TreeGroup g = arborrep::ggs_build(e, 2);
    EXPECT_TRUE(arborrep::is_locally_2_transitive(g, 1).transitive);
  }
}

TEST(DihedralFamily, GeneratorsAndImage) {
  TreeGroup d3 = arborrep::dihedral_build(3);
  EXPECT_EQ(d3.shape, TreeShape::regular(2, 3));
  for (const LevelAction& g : d3.generators) {
    EXPECT_FALSE(g.is_identity());
    EXPECT_TRUE(arborrep::power(g, 2).is_identity());
  }
  std::vector<Permutation> level3 = arborrep::level_generators_of(d3, 3);
  StabChain chain = arborrep::schreier_sims(level3, 8);
  EXPECT_EQ(chain.order(), 16u);
  EXPECT_EQ(oracle::enumerate_group(tables_of(level3), 8, 100).size(), 16u);
  arborrep::DecompositionRecord rho3 = arborrep::decompose_level(d3, 3);
  EXPECT_EQ(rho3.parts, Parts({{1, 1}, {1, 1}, {2, 1}, {2, 1}, {2, 1}}));
}

TEST(DihedralFamily, TwoPointStabilizers) {
  TreeGroup d3 = arborrep::dihedral_build(3);
  TreeShape shape = d3.shape;
  int dom = arborrep::domain_size(shape);
  std::vector<Permutation> merged = arborrep::merged_generators(d3);
  int off2 = arborrep::domain_offset(shape, 2);

  std::vector<unsigned long long> orders;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      StabChain chain = arborrep::schreier_sims(merged, dom, {off2 + i, off2 + j});
      std::vector<Permutation> stab = arborrep::stabilizer_generators(chain, {off2 + i, off2 + j});
      unsigned long long order = arborrep::schreier_sims(stab, dom).order();
      orders.push_back(order);
      // Sibling vertices admit the larger stabilizer.
      bool siblings = i / 2 == j / 2;
      EXPECT_EQ(order, siblings ? 4u : 2u) << i << "," << j;
      if (!siblings) {
        // The only nontrivial element fixing two non-sibling vertices is the
        // central involution: it fixes the whole second level and moves every
        // third-level vertex.
        std::vector<Permutation> elems = arborrep::enumerate_elements(arborrep::schreier_sims(stab, dom), 4);
        ASSERT_EQ(elems.size(), 2u);
        const Permutation& central = elems[0].is_identity() ? elems[1] : elems[0];
        for (int t = 0; t < 4; ++t) EXPECT_EQ(central(off2 + t), off2 + t);
        int off3 = arborrep::domain_offset(shape, 3);
        for (int t = 0; t < 8; ++t) EXPECT_NE(central(off3 + t), off3 + t);
      }
    }
  }
  std::sort(orders.begin(), orders.end());
  EXPECT_EQ(orders, (std::vector<unsigned long long>{2, 2, 2, 2, 4, 4}));
}

TEST(DihedralFamily, TransitivityProfile) {
  TreeGroup d4 = arborrep::dihedral_build(4);
  EXPECT_TRUE(arborrep::is_spherically_transitive(d4));
  EXPECT_TRUE(arborrep::is_locally_2_transitive(d4, 1).transitive);
  arborrep::LocalTransitivityResult level2 = arborrep::is_locally_2_transitive(d4, 2);
  EXPECT_FALSE(level2.transitive);
  ASSERT_TRUE(level2.witness.has_value());
  EXPECT_EQ(level2.witness->stabilizer_order, 2u);
  EXPECT_EQ(level2.witness->pair_count, 4);
  EXPECT_EQ(level2.witness->orbit_count, 2);
  EXPECT_EQ(level2.witness->u.level(), 2);
  // The boundary representation is still multiplicity free: the family is a
  // Gelfand pair without being locally pair transitive.
  EXPECT_TRUE(arborrep::is_boundary_gelfand(d4));
}

TEST(WreathFamily, RegularCopiesOfS3) {
  TreeGroup w = arborrep::s3_regular_wreath(2);
  EXPECT_EQ(w.shape, TreeShape::regular(6, 2));
  EXPECT_EQ(w.generators.size(), 14u);
  std::vector<Permutation> level1 = arborrep::level_generators_of(w, 1);
  EXPECT_EQ(arborrep::schreier_sims(level1, 6).order(), 6u);
  arborrep::DecompositionRecord rho1 = arborrep::decompose_level(w, 1);
  EXPECT_EQ(rho1.parts, Parts({{1, 1}, {1, 1}, {2, 2}}));
  EXPECT_TRUE(arborrep::is_spherically_transitive(w));
  EXPECT_FALSE(arborrep::is_level_commutative(w, 1));
  EXPECT_FALSE(arborrep::is_local_gelfand(w, Vertex{}));
  EXPECT_FALSE(arborrep::is_boundary_gelfand(w));
  EXPECT_FALSE(arborrep::is_distance_transitive(w, 2));
  EXPECT_EQ(arborrep::level_rank(w, 2), 11);
  arborrep::RankIdentity identity = arborrep::rank_identity(w, 2);
  EXPECT_TRUE(identity.holds);
  EXPECT_EQ(identity.rank, 11);
  EXPECT_EQ(identity.predicted, 11);
}

TEST(WreathFamily, FullSymmetric) {
  TreeGroup f = arborrep::full_symmetric_wreath(TreeShape::regular(3, 3));
  EXPECT_EQ(f.generators.size(), 26u);
  EXPECT_TRUE(arborrep::is_spherically_transitive(f));
  for (int n = 1; n <= 3; ++n) {
    EXPECT_TRUE(arborrep::is_distance_transitive(f, n));
    EXPECT_EQ(arborrep::level_rank(f, n), n + 1);
  }
  EXPECT_TRUE(arborrep::is_locally_2_transitive(f, 1).transitive);
  EXPECT_TRUE(arborrep::is_locally_2_transitive(f, 2).transitive);
  EXPECT_TRUE(arborrep::is_boundary_gelfand(f));

  TreeGroup mixed = arborrep::full_symmetric_wreath(TreeShape({2, 3}));
  EXPECT_TRUE(arborrep::is_spherically_transitive(mixed));
  EXPECT_TRUE(arborrep::is_distance_transitive(mixed, 2));
}

TEST(WreathFamily, ValidatesInput) {
  EXPECT_THROW(arborrep::wreath_build({}), std::invalid_argument);
  EXPECT_THROW(arborrep::wreath_build({{}}), std::invalid_argument);
  EXPECT_THROW(arborrep::wreath_build({{arborrep::from_cycles(3, {{0, 1}})}}), IntransitiveAction);
  EXPECT_THROW(arborrep::wreath_build({{Permutation(3)}}), IntransitiveAction);
  EXPECT_THROW(arborrep::wreath_build({{Permutation(3), arborrep::from_cycles(2, {{0, 1}})}}),
               std::invalid_argument);
}

TEST(GlFamily, ElementaryGeneratorActions) {
  TreeGroup g = arborrep::gl_build(3, 1, RingKind::padic, 2);
  EXPECT_EQ(g.names, (std::vector<std::string>{"g11", "g12", "g21", "g22"}));
  const LevelAction& g21 = generator_named(g, "g21");
  const LevelAction& g12 = generator_named(g, "g12");
  const LevelAction& g11 = generator_named(g, "g11");
  const LevelAction& g22 = generator_named(g, "g22");
  EXPECT_FALSE(g11.is_identity());
  EXPECT_FALSE(g21.is_identity());
  EXPECT_FALSE(g22.is_identity());
  // The lower elementary matrix translates the coordinate by one.
  EXPECT_EQ(g21.apply(Vertex{0}), (Vertex{1}));
  EXPECT_EQ(g21.apply(Vertex{2}), (Vertex{0}));
  EXPECT_EQ(g21.apply(Vertex{2, 0}), (Vertex{0, 1}));
  // The upper elementary matrix sends a to a(1 + p^2 a)^-1 = a - p^2 a^2 + ...
  // so it acts trivially this shallow; its first nontrivial level is the
  // third one.
  EXPECT_TRUE(g12.is_identity());
  TreeGroup deeper = arborrep::gl_build(3, 1, RingKind::padic, 3);
  const LevelAction& deep12 = generator_named(deeper, "g12");
  EXPECT_FALSE(deep12.is_identity());
  for (int x = 0; x < 3; ++x) EXPECT_EQ(deep12.apply(Vertex{x}), (Vertex{x}));
  EXPECT_EQ(deep12.apply(Vertex{1, 0, 0}), (Vertex{1, 0, 2}));
  // Diagonal entries rescale the coordinate: a -> 4a and a -> 7a modulo 9.
  EXPECT_EQ(g22.apply(Vertex{1, 0}), (Vertex{1, 1}));
  EXPECT_EQ(g11.apply(Vertex{1, 0}), (Vertex{1, 2}));

  // In the equal-characteristic ring the same translation has no carry.
  TreeGroup h = arborrep::gl_build(3, 1, RingKind::laurent, 2);
  const LevelAction& h21 = generator_named(h, "g21");
  EXPECT_EQ(h21.apply(Vertex{2, 0}), (Vertex{0, 0}));
  EXPECT_EQ(h21.apply(Vertex{1, 1}), (Vertex{2, 1}));
}

TEST(GlFamily, VertexCodecs) {
  for (int letter = 0; letter < 9; ++letter)
    EXPECT_EQ(arborrep::gl_letter(3, 2, arborrep::gl_letter_digits(3, 2, letter)), letter);
  EXPECT_EQ(arborrep::gl_letter_digits(3, 2, 5), (std::vector<int>{2, 1}));
  std::vector<arborrep::RingElem> coords = arborrep::gl_vertex_coordinates(3, 2, Vertex{5, 7});
  EXPECT_EQ(coords, (std::vector<arborrep::RingElem>{{2, 1}, {1, 2}}));
  TreeShape shape = TreeShape::regular(9, 2);
  for (int idx = 0; idx < shape.level_size(2); ++idx) {
    Vertex v = arborrep::vertex_at(shape, 2, idx);
    EXPECT_EQ(arborrep::gl_coordinate_vertex(3, 2, arborrep::gl_vertex_coordinates(3, 2, v)), v);
  }
  EXPECT_THROW(arborrep::gl_letter(3, 2, {3, 0}), std::invalid_argument);
  EXPECT_THROW(arborrep::gl_letter(3, 2, {0}), std::invalid_argument);
  EXPECT_THROW(arborrep::gl_coordinate_vertex(3, 2, {{1, 0}, {1}}), std::invalid_argument);
}

TEST(GlFamily, TransitivityAndLocalDecomposition) {
  TreeGroup g = arborrep::gl_build(3, 1, RingKind::padic, 3);
  EXPECT_TRUE(arborrep::is_spherically_transitive(g));
  EXPECT_TRUE(arborrep::is_locally_2_transitive(g, 1).transitive);
  EXPECT_TRUE(arborrep::is_locally_2_transitive(g, 2).transitive);
  EXPECT_TRUE(arborrep::is_boundary_gelfand(g));
  // Every local constituent set consists of the q^N - 1 nontrivial characters
  // of the additive residue group.
  Parts expected(2, {1, 1});
  EXPECT_EQ(arborrep::local_decomposition(g, Vertex{}).parts, expected);
  EXPECT_EQ(arborrep::local_decomposition(g, Vertex{0}).parts, expected);
  EXPECT_EQ(arborrep::local_decomposition(g, Vertex{0, 0}).parts, expected);
  EXPECT_EQ(arborrep::decompose_level(g, 1).parts, Parts({{1, 1}, {1, 1}, {1, 1}}));
  arborrep::RankIdentity identity = arborrep::rank_identity(g, 3);
  EXPECT_TRUE(identity.holds);
  EXPECT_EQ(identity.rank, 7);

  TreeGroup w = arborrep::gl_build(3, 2, RingKind::padic, 2);
  EXPECT_EQ(w.shape, TreeShape::regular(9, 2));
  EXPECT_EQ(w.generators.size(), 9u);
  EXPECT_TRUE(arborrep::is_spherically_transitive(w));
  EXPECT_TRUE(arborrep::is_locally_2_transitive(w, 1).transitive);
  EXPECT_TRUE(arborrep::is_local_gelfand(w, Vertex{}));
  EXPECT_EQ(arborrep::local_decomposition(w, Vertex{}).parts, Parts(8, {1, 1}));
  EXPECT_EQ(arborrep::level_rank(w, 1), 9);
}

TEST(GlFamily, CharacteristicIndependence) {
  TreeGroup gp = arborrep::gl_build(3, 1, RingKind::padic, 3);
  TreeGroup gl = arborrep::gl_build(3, 1, RingKind::laurent, 3);
  // The underlying level permutations differ between the two rings, but every
  // representation-theoretic invariant coincides.
  EXPECT_NE(generator_named(gp, "g21").level_table(2), generator_named(gl, "g21").level_table(2));
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(arborrep::level_rank(gp, n), arborrep::level_rank(gl, n));
    EXPECT_EQ(arborrep::decompose_level(gp, n), arborrep::decompose_level(gl, n));
  }
  for (int n = 1; n <= 2; ++n) {
    EXPECT_EQ(arborrep::is_locally_2_transitive(gp, n).transitive,
              arborrep::is_locally_2_transitive(gl, n).transitive);
    Vertex spine(std::vector<int>(static_cast<size_t>(n), 0));
    EXPECT_EQ(arborrep::local_decomposition(gp, spine), arborrep::local_decomposition(gl, spine));
  }
  EXPECT_EQ(arborrep::local_decomposition(gp, Vertex{}), arborrep::local_decomposition(gl, Vertex{}));
}

TEST(GlFamily, ValidatesInput) {
  EXPECT_THROW(arborrep::gl_build(2, 1, RingKind::padic, 2), std::invalid_argument);
  EXPECT_THROW(arborrep::gl_build(9, 1, RingKind::padic, 2), std::invalid_argument);
  EXPECT_THROW(arborrep::gl_build(3, 0, RingKind::padic, 2), std::invalid_argument);
  EXPECT_THROW(arborrep::gl_build(3, 1, RingKind::padic, 0), std::invalid_argument);
  EXPECT_THROW(arborrep::gl_build(3, 2, RingKind::padic, 5), CapExceeded);
  EXPECT_THROW(arborrep::gl_build(3, 10, RingKind::padic, 1), CapExceeded);
}

}  // namespace
