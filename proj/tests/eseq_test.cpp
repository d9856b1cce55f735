#include <gtest/gtest.h>

#include <set>

#include "etree/etree.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace etree;

namespace {

Node at(const ExpandedTree& t, std::initializer_list<std::uint32_t> str) {
  std::vector<std::uint32_t> s(str);
  return canonical_node(t.branching(), s);
}

std::vector<Node> nodes_of(const ESeq& e) { return {e.nodes().begin(), e.nodes().end()}; }

}  // namespace

TEST(IsEseq, Examples) {
  auto t = lex_tree(3);
  EXPECT_TRUE(is_eseq(t, std::vector<Node>{}));
  for (Node v = 0; v < t.node_count(); ++v) EXPECT_TRUE(is_eseq(t, std::vector<Node>{v}));
  EXPECT_FALSE(is_eseq(t, std::vector<Node>{at(t, {0}), at(t, {1})}));
  EXPECT_TRUE(is_eseq(t, std::vector<Node>{t.root(), at(t, {0}), at(t, {1})}));
  // not increasing
  EXPECT_FALSE(is_eseq(t, std::vector<Node>{at(t, {0}), t.root()}));
  // restriction to level 1 missing
  EXPECT_FALSE(is_eseq(t, std::vector<Node>{t.root(), at(t, {1}), at(t, {0, 0})}));
  EXPECT_THROW(is_eseq(t, std::vector<Node>{99}), std::out_of_range);
}

TEST(ESeqType, CheckedConstruction) {
  auto t = lex_tree(3);
  EXPECT_NO_THROW(ESeq(t, {t.root(), at(t, {1})}));
  EXPECT_THROW(ESeq(t, {at(t, {0}), at(t, {1})}), std::invalid_argument);
}

TEST(Closure, Singleton) {
  auto t = lex_tree(4);
  for (Node v = 0; v < t.node_count(); ++v)
    EXPECT_EQ(nodes_of(closure(t, std::vector<Node>{v})), std::vector<Node>{v});
  EXPECT_THROW(closure(t, std::vector<Node>{}), std::domain_error);
}

TEST(Closure, TwoLeavesOnHeightThree) {
  auto t = lex_tree(3);
  const std::vector<Node> a{at(t, {0, 0}), at(t, {1, 1})};
  const auto cl = nodes_of(closure(t, a));
  // the meet is the root; restrictions to level 0 add nothing else
  EXPECT_EQ(cl, (std::vector<Node>{t.root(), at(t, {0, 0}), at(t, {1, 1})}));
  EXPECT_EQ(cl, oracle::minimal_closed_superset(t, a));
}

TEST(Closure, TwoLeavesWithDeepMeet) {
  auto t = lex_tree(4);
  const std::vector<Node> a{at(t, {1, 0, 0}), at(t, {0, 1, 1}), at(t, {0, 1, 0})};
  const auto cl = nodes_of(closure(t, a));
  EXPECT_EQ(cl, oracle::minimal_closed_superset(t, a));
  EXPECT_TRUE(is_eseq(t, cl));
  EXPECT_LE(cl.size(), 3u * 5u);
}

TEST(Closure, RandomPropertiesHeightFour) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    gen::Rng rng(seed);
    auto t = gen::tree(rng, 4, 2);
    const std::size_t m = 1 + gen::below(rng, 4);
    const auto a = gen::node_set(rng, t, m);
    const auto cl = nodes_of(closure(t, a));
    ASSERT_TRUE(is_eseq(t, cl)) << seed;
    EXPECT_LE(cl.size(), m * (2 * m - 1)) << seed;
    for (Node v : a) EXPECT_NE(std::find(cl.begin(), cl.end(), v), cl.end()) << seed;
    EXPECT_EQ(*lev_set(t, cl).rbegin(), *lev_set(t, a).rbegin()) << seed;
    EXPECT_EQ(nodes_of(closure(t, cl)), cl) << seed;
    if (m <= 3) {
      EXPECT_EQ(cl, oracle::minimal_closed_superset(t, a)) << seed;
    }
  }
}

TEST(Closure, DuplicatesInInput) {
  auto t = lex_tree(3);
  const std::vector<Node> a{at(t, {1}), at(t, {0, 1}), at(t, {1})};
  const auto cl = nodes_of(closure(t, a));
  EXPECT_EQ(cl, (std::vector<Node>{t.root(), at(t, {0}), at(t, {1}), at(t, {0, 1})}));
  const auto pos = positions(t, a);
  EXPECT_EQ(pos, (std::vector<std::size_t>{2, 3, 2}));
}

TEST(Positions, Examples) {
  auto t = lex_tree(4);
  EXPECT_EQ(positions(t, std::vector<Node>{5}), std::vector<std::size_t>{0});
  const std::vector<Node> a{t.root(), at(t, {1, 0, 1})};
  const auto p = positions(t, a);
  EXPECT_EQ(p.front(), 0u);
  EXPECT_EQ(p.back(), closure(t, a).size() - 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    gen::Rng rng(seed);
    const auto b = gen::tuple(rng, t, 1 + seed % 4);
    const auto cl = closure(t, b);
    const auto pb = positions(t, b);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(cl[pb[i]], b[i]);
  }
}

TEST(Similar, Examples) {
  auto t = lex_tree(4);
  const Node r = t.root(), s0 = t.child(r, 0), s1 = t.child(r, 1);
  const std::vector<Node> a{r, s0}, b{r, s1}, c{s0, t.child(s0, 0)};
  EXPECT_TRUE(similar(t, a, a));
  EXPECT_FALSE(similar(t, a, b));
  EXPECT_TRUE(similar(t, a, c));
  EXPECT_FALSE(similar(t, a, std::vector<Node>{r}));
  EXPECT_THROW(similar(t, std::vector<Node>{s0, s1}, a), std::invalid_argument);
  EXPECT_TRUE(similar(ESeq(t, a), ESeq(t, c)));
}

TEST(SimType, SingletonsShareOneType) {
  auto t = lex_tree(4);
  const auto ty = sim_type(t, std::vector<Node>{0});
  for (Node v = 0; v < t.node_count(); ++v) EXPECT_EQ(sim_type(t, std::vector<Node>{v}), ty);
}

TEST(SimType, BranchMatters) {
  auto t = lex_tree(3);
  const Node r = t.root();
  EXPECT_NE(sim_type(t, std::vector<Node>{r, t.child(r, 0)}),
            sim_type(t, std::vector<Node>{r, t.child(r, 1)}));
}

TEST(SimType, DuplicationPattern) {
  auto t = lex_tree(3);
  const Node r = t.root(), x = t.child(r, 1);
  EXPECT_NE(sim_type(t, std::vector<Node>{x, x}), sim_type(t, std::vector<Node>{r, x}));
  EXPECT_NE(sim_type(t, std::vector<Node>{r, x}), sim_type(t, std::vector<Node>{x, r}));
  EXPECT_EQ(sim_type(t, std::vector<Node>{x, x}), sim_type(t, std::vector<Node>{r, r}));
}

TEST(SimType, WellFormedAndCanonicalString) {
  auto t = lex_tree(4);
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_eseq(t, n, [&](std::span<const Node> a) {
      const auto ty = similarity_type(t, a);
      EXPECT_TRUE(ty.well_formed());
      EXPECT_EQ(ty.top_count() > 0, n > 0);
    });
  const auto s = sim_type(t, std::vector<Node>{0, 1}).to_string();
  EXPECT_EQ(s, "b=2;branch=0,1,0,0;le=1101;lev=1101;meet=0,0,0,1;n=2;pos=0,1;restr=0,-1,0,1");
}

TEST(SimType, CanonicalizationSoundnessHeightFour) {
  auto t = lex_tree(4);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto seqs = oracle::eseqs_by_filter(t, n);
    for (const auto& a : seqs)
      for (const auto& b : seqs)
        ASSERT_EQ(similar(t, a, b), similarity_type(t, a) == similarity_type(t, b));
  }
}

TEST(SimType, ActuallyFollowsBullets) {
  auto t = lex_tree(4);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::vector<Node>> seqs;
    for_each_eseq(t, n, [&](std::span<const Node> a) { seqs.emplace_back(a.begin(), a.end()); });
    for (const auto& a : seqs)
      for (const auto& b : seqs) {
        const auto ag = bullet_agreement(t, a, b);
        if (ag[0] && ag[1]) {
          ASSERT_TRUE(ag[2] && ag[3] && ag[4] && ag[5]);
        }
      }
  }
}

TEST(Similar, EquivalenceRelation) {
  auto t = lex_tree(4);
  std::vector<std::vector<Node>> seqs;
  for_each_eseq(t, 3, [&](std::span<const Node> a) { seqs.emplace_back(a.begin(), a.end()); });
  for (const auto& a : seqs) {
    EXPECT_TRUE(similar(t, a, a));
    for (const auto& b : seqs) {
      if (!similar(t, a, b)) continue;
      EXPECT_TRUE(similar(t, b, a));
      for (const auto& c : seqs)
        if (similar(t, b, c)) {
          EXPECT_TRUE(similar(t, a, c));
        }
    }
  }
}

TEST(Enumerate, SmallCounts) {
  auto t = lex_tree(3);
  EXPECT_EQ(enumerate_eseq(t, 0).size(), 1u);
  EXPECT_EQ(enumerate_eseq(t, 1).size(), 7u);
  const auto pairs = enumerate_eseq(t, 2);
  std::size_t filtered = 0;
  for (Node a = 0; a < 7; ++a)
    for (Node b = 0; b < 7; ++b)
      if (is_eseq(t, std::vector<Node>{a, b})) {
        ++filtered;
        EXPECT_TRUE(t.tree_less(a, b));
      }
  EXPECT_EQ(pairs.size(), filtered);
  // comparable <*-increasing pairs of the 7-node tree: 6 + 4
  EXPECT_EQ(filtered, 10u);
}

TEST(Enumerate, MatchesFilterInOrder) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    gen::Rng rng(seed);
    auto t = gen::tree(rng, 3 + seed % 2, 2);
    for (std::size_t n = 0; n <= 3; ++n) {
      std::vector<std::vector<Node>> got;
      for_each_eseq(t, n, [&](std::span<const Node> a) { got.emplace_back(a.begin(), a.end()); });
      EXPECT_EQ(got, oracle::eseqs_by_filter(t, n)) << seed << " " << n;
    }
  }
}

TEST(Enumerate, BudgetStopsWalk) {
  auto t = lex_tree(5);
  const auto full = for_each_eseq(t, 3, [](std::span<const Node>) {});
  EXPECT_TRUE(full.complete);
  std::size_t seen = 0;
  const auto part = for_each_eseq(t, 3, [&](std::span<const Node>) { ++seen; }, 50);
  EXPECT_FALSE(part.complete);
  EXPECT_LT(seen, full.visited);
}

TEST(Enumerate, VisitorCanStop) {
  auto t = lex_tree(4);
  std::size_t seen = 0;
  const auto st = for_each_eseq(t, 2, [&](std::span<const Node>) { return ++seen < 3; });
  EXPECT_EQ(seen, 3u);
  EXPECT_EQ(st.visited, 3u);
}

TEST(Enumerate, Within) {
  auto t = lex_tree(3);
  const std::vector<Node> u{0, 1, 2};
  for (const auto& e : enumerate_eseq_within(t, 2, u))
    for (Node v : e.nodes()) EXPECT_LT(v, 3u);
  EXPECT_EQ(enumerate_eseq_within(t, 2, u).size(), 2u);
}

TEST(ClosureSplit, Degenerate) {
  auto t = lex_tree(4);
  const Node top = at(t, {1, 0, 1});
  const std::vector<Node> u{0, 1, 2};
  auto [c, x] = closure_extension_split(t, u, std::vector<Node>{}, top);
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(x, top);
  auto [c2, x2] = closure_extension_split(t, u, std::vector<Node>{t.root()}, top);
  EXPECT_EQ(c2, std::vector<Node>{t.root()});
}

TEST(ClosureSplit, RandomDecomposition) {
  auto t = lex_tree(5);
  std::vector<Node> u;
  for (std::uint32_t e = 0; e < 3; ++e)
    for (Node v : t.level_nodes(e)) u.push_back(v);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    gen::Rng rng(seed);
    std::set<Node> aset;
    const auto m = gen::below(rng, 4);
    while (aset.size() < m) aset.insert(u[gen::below(rng, u.size())]);
    const std::vector<Node> a(aset.begin(), aset.end());
    const auto top = t.level_nodes(4)[gen::below(rng, t.level_size(4))];
    auto [c, x] = closure_extension_split(t, u, a, top);
    std::vector<Node> all = a;
    all.push_back(top);
    auto expect = nodes_of(closure(t, all));
    c.push_back(x);
    EXPECT_EQ(c, expect) << seed;
    c.pop_back();
    EXPECT_TRUE(is_eseq(t, c));
    for (Node v : c) EXPECT_LT(t.level(v), 3u);
  }
}

TEST(ClosureSplit, Preconditions) {
  auto t = lex_tree(4);
  const Node top = at(t, {1, 1, 1});
  // downward closed but missing <1>: the closure would leave U
  EXPECT_THROW(closure_extension_split(t, std::vector<Node>{0, 1}, std::vector<Node>{1}, top),
               std::invalid_argument);
  EXPECT_THROW(closure_extension_split(t, std::vector<Node>{0, 1, 2}, std::vector<Node>{3}, top),
               std::invalid_argument);
  EXPECT_THROW(closure_extension_split(t, std::vector<Node>{0, 1, 2}, std::vector<Node>{}, 2),
               std::invalid_argument);
  EXPECT_THROW(closure_extension_split(t, std::vector<Node>{1, 2}, std::vector<Node>{}, top),
               std::invalid_argument);
}
