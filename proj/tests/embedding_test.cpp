#include <gtest/gtest.h>

#include <set>

#include "etree/etree.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace etree;

namespace {

std::set<std::vector<Node>> maps_of(const std::vector<Embedding>& es) {
  std::set<std::vector<Node>> out;
  for (const auto& e : es) out.insert(e.node_map);
  return out;
}

}  // namespace

TEST(FindEmbedding, IdentityFirst) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    gen::Rng rng(seed);
    auto t = gen::tree(rng, 3 + seed % 2, 2);
    auto e = find_embedding(t, t);
    ASSERT_TRUE(e);
    EXPECT_EQ(*e, identity_embedding(t));
  }
}

TEST(FindEmbedding, NotEnoughLevels) {
  SearchStats st;
  EXPECT_FALSE(find_embedding(lex_tree(3), lex_tree(2), {}, &st));
  EXPECT_EQ(st.level_maps, 0u);
}

TEST(AllEmbeddings, MatchesInjectiveMapFilter) {
  auto small = lex_tree(2);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto big = seed == 0 ? lex_tree(4) : build_canonical_tree(4, 2, shuffled_orders(4, 2, seed));
    const auto got = all_embeddings(small, big);
    const auto want = oracle::embeddings_by_filter(small, big);
    EXPECT_EQ(got.size(), want.size()) << seed;
    EXPECT_EQ(maps_of(got), std::set<std::vector<Node>>(want.begin(), want.end())) << seed;
  }
}

TEST(AllEmbeddings, LexHeightTwoIntoHeightFourCount) {
  // frozen from the filter oracle above
  EXPECT_EQ(all_embeddings(lex_tree(2), lex_tree(4)).size(), 35u);
}

TEST(AllEmbeddings, TernaryAgainstFilter) {
  auto small = lex_tree(2, 3);
  auto big = build_canonical_tree(3, 3, shuffled_orders(3, 3, 11));
  const auto want = oracle::embeddings_by_filter(small, big);
  EXPECT_EQ(maps_of(all_embeddings(small, big)), std::set<std::vector<Node>>(want.begin(), want.end()));
}

TEST(AllEmbeddings, ImagesAreSubtreesAndKeepTypes) {
  auto small = lex_tree(3);
  auto big = build_canonical_tree(5, 2, shuffled_orders(5, 2, 0));
  const auto es = all_embeddings(small, big);
  ASSERT_EQ(es.size(), 14u);
  for (const auto& g : es) {
    ASSERT_TRUE(is_subtree(small, big, g.node_map));
    for (std::size_t i = 1; i < g.level_map.size(); ++i) EXPECT_LT(g.level_map[i - 1], g.level_map[i]);
    for (Node v = 0; v < small.node_count(); ++v) EXPECT_EQ(big.level(g(v)), g.level_map[small.level(v)]);
    for (std::size_t n = 1; n <= 3; ++n)
      for_each_eseq(small, n, [&](std::span<const Node> a) {
        const auto img = g.apply(a);
        ASSERT_TRUE(is_eseq(big, img));
        ASSERT_EQ(similarity_type(big, img), similarity_type(small, a));
      });
  }
}

TEST(AllEmbeddings, SimTypeOfArbitraryTuplesInvariant) {
  auto small = lex_tree(3);
  auto big = lex_tree(4);
  gen::Rng rng(3);
  for (const auto& g : all_embeddings(small, big)) {
    for (int i = 0; i < 10; ++i) {
      const auto a = gen::tuple(rng, small, 1 + i % 3);
      EXPECT_EQ(sim_type(big, g.apply(a)), sim_type(small, a));
    }
  }
}

TEST(Search, SearchOrder) {
  // level maps lexicographic outside: all embeddings using levels (0,1) come
  // before any using (0,2)
  const auto es = all_embeddings(lex_tree(2), lex_tree(4));
  for (std::size_t i = 1; i < es.size(); ++i) EXPECT_LE(es[i - 1].level_map, es[i].level_map);
  EXPECT_EQ(es.front().level_map, (std::vector<std::uint32_t>{0, 1}));
}

TEST(Search, Constraints) {
  auto small = lex_tree(2), big = lex_tree(4);
  EmbeddingConstraints c;
  c.pinned_levels[0] = 1;
  for (const auto& e : all_embeddings(small, big, c)) EXPECT_EQ(e.level_map[0], 1u);
  EmbeddingConstraints d;
  d.pinned_nodes[0] = canonical_node(2, 2, 3);
  const auto es = all_embeddings(small, big, d);
  ASSERT_FALSE(es.empty());
  for (const auto& e : es) EXPECT_EQ(e(0), canonical_node(2, 2, 3));
  EmbeddingConstraints bad;
  bad.pinned_nodes[0] = 999;
  EXPECT_THROW(all_embeddings(small, big, bad), std::out_of_range);
}

TEST(Search, StatsAreDeterministic) {
  auto small = lex_tree(3), big = lex_tree(5);
  SearchStats a, b;
  auto x = find_embedding(small, big, {}, &a);
  auto y = find_embedding(small, big, {}, &b);
  EXPECT_EQ(x, y);
  EXPECT_EQ(a.nodes_expanded, b.nodes_expanded);
  EXPECT_EQ(a.prunes, b.prunes);
  EXPECT_EQ(a.embeddings, 1u);
}

TEST(Compose, Chains) {
  auto t0 = lex_tree(2), t1 = lex_tree(3), t2 = lex_tree(4);
  auto g0 = *find_embedding(t0, t1);
  auto g1 = all_embeddings(t1, t2).back();
  auto g = compose(g1, g0);
  EXPECT_EQ(g.source, &t0);
  EXPECT_EQ(g.target, &t2);
  for (Node v = 0; v < t0.node_count(); ++v) EXPECT_EQ(g(v), g1(g0(v)));
  EXPECT_TRUE(is_subtree(t0, t2, g.node_map));
  EXPECT_THROW(compose(g0, g1), std::invalid_argument);
  EXPECT_EQ(compose(identity_embedding(t1), g0), g0);
}
