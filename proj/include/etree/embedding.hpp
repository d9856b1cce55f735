#pragma once

// Subtree embeddings: isomorphisms of a small tree onto a substructure of a
// big one that keep tree order, meets, branch relations, the level-then-rank
// order and level equality.

#include <map>
#include <optional>
#include <type_traits>
#include <vector>

#include "etree/tree.hpp"

namespace etree {

struct Embedding {
  const ExpandedTree* source = nullptr;
  const ExpandedTree* target = nullptr;
  std::vector<Node> node_map;              // source node -> target node
  std::vector<std::uint32_t> level_map;    // source level -> target level

  Node operator()(Node v) const { return node_map.at(v); }

  std::vector<Node> apply(std::span<const Node> seq) const {
    std::vector<Node> out;
    out.reserve(seq.size());
    for (Node v : seq) out.push_back(node_map.at(v));
    return out;
  }

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.source == b.source && a.target == b.target && a.node_map == b.node_map &&
           a.level_map == b.level_map;
  }
};

// identity embedding of a tree into itself
inline Embedding identity_embedding(const ExpandedTree& t) {
  Embedding e{&t, &t, std::vector<Node>(t.node_count()), std::vector<std::uint32_t>(t.height())};
  for (Node v = 0; v < t.node_count(); ++v) e.node_map[v] = v;
  for (std::uint32_t l = 0; l < t.height(); ++l) e.level_map[l] = l;
  return e;
}

// outer after inner: inner.source -> outer.target
inline Embedding compose(const Embedding& outer, const Embedding& inner) {
  if (inner.target != outer.source)
    throw std::invalid_argument("embeddings do not compose: tree mismatch");
  Embedding e{inner.source, outer.target, {}, {}};
  for (Node v : inner.node_map) e.node_map.push_back(outer.node_map.at(v));
  for (auto l : inner.level_map) e.level_map.push_back(outer.level_map.at(l));
  return e;
}

struct EmbeddingConstraints {
  std::map<Node, Node> pinned_nodes;                    // source -> required image
  std::map<std::uint32_t, std::uint32_t> pinned_levels; // source level -> target level
};

struct SearchStats {
  std::uint64_t level_maps = 0;      // level maps tried
  std::uint64_t nodes_expanded = 0;  // partial assignments extended
  std::uint64_t prunes = 0;          // candidate images rejected
  std::uint64_t embeddings = 0;      // complete embeddings produced

  SearchStats& operator+=(const SearchStats& o) {
    level_maps += o.level_maps;
    nodes_expanded += o.nodes_expanded;
    prunes += o.prunes;
    embeddings += o.embeddings;
    return *this;
  }
};

// Visits every embedding of `small` into `big` in a fixed order: level maps
// (strictly increasing target-level tuples) in lexicographic order outside,
// node images by target rank inside, source nodes taken in level-then-rank
// order. visit(const Embedding&) may return false to stop.
template <class F>
SearchStats for_each_embedding(const ExpandedTree& small, const ExpandedTree& big,
                               const EmbeddingConstraints& constraints, F&& visit) {
  SearchStats stats;
  const std::uint32_t hs = small.height(), hb = big.height();
  for (const auto& [s, t] : constraints.pinned_nodes) {
    small.check(s);
    big.check(t);
  }
  if (hs > hb) return stats;

  Embedding e{&small, &big, std::vector<Node>(small.node_count(), no_node),
              std::vector<std::uint32_t>(hs)};
  // Source nodes in level-then-rank order; the previous node on the same
  // level must get a smaller target rank.
  std::vector<Node> order;
  for (std::uint32_t l = 0; l < hs; ++l)
    for (Node v : small.level_nodes(l)) order.push_back(v);

  bool stop = false;
  auto emit = [&]() {
    ++stats.embeddings;
    if constexpr (std::is_same_v<std::invoke_result_t<F&, const Embedding&>, bool>) {
      if (!visit(static_cast<const Embedding&>(e))) stop = true;
    } else {
      visit(static_cast<const Embedding&>(e));
    }
  };

  auto assign = [&](auto&& self, std::size_t i) -> void {
    if (i == order.size()) {
      emit();
      return;
    }
    const Node s = order[i];
    const std::uint32_t ls = small.level(s);
    const std::uint32_t lt = e.level_map[ls];
    const Node prev_same_level =
        small.level_rank(s) > 0 ? e.node_map[small.level_nodes(ls)[small.level_rank(s) - 1]]
                                : no_node;
    const auto pin = constraints.pinned_nodes.find(s);
    const auto parent = small.parent(s);
    for (Node x : big.level_nodes(lt)) {
      if (stop) return;
      bool ok = true;
      if (pin != constraints.pinned_nodes.end() && pin->second != x) ok = false;
      if (ok && prev_same_level != no_node && big.level_rank(x) <= big.level_rank(prev_same_level))
        ok = false;
      if (ok && parent) {
        const Node px = e.node_map[*parent];
        ok = big.restrict(x, big.level(px)) == px &&
             big.branch_toward(px, x) == small.branch_label(s);
      }
      if (!ok) {
        ++stats.prunes;
        continue;
      }
      ++stats.nodes_expanded;
      e.node_map[s] = x;
      self(self, i + 1);
      e.node_map[s] = no_node;
    }
  };

  // Level maps: strictly increasing tuples over [0, hb) in lexicographic order.
  std::vector<std::uint32_t> lm(hs);
  auto levels = [&](auto&& self, std::uint32_t depth, std::uint32_t from) -> void {
    if (stop) return;
    if (depth == hs) {
      ++stats.level_maps;
      e.level_map = lm;
      assign(assign, 0);
      return;
    }
    for (std::uint32_t l = from; l + (hs - depth) <= hb && !stop; ++l) {
      auto pin = constraints.pinned_levels.find(depth);
      if (pin != constraints.pinned_levels.end() && pin->second != l) continue;
      lm[depth] = l;
      self(self, depth + 1, l + 1);
    }
  };
  levels(levels, 0, 0);
  return stats;
}

// First embedding in the search order, or nullopt.
inline std::optional<Embedding> find_embedding(const ExpandedTree& small, const ExpandedTree& big,
                                               const EmbeddingConstraints& constraints = {},
                                               SearchStats* stats = nullptr) {
  std::optional<Embedding> found;
  const auto st = for_each_embedding(small, big, constraints, [&](const Embedding& e) {
    found = e;
    return false;
  });
  if (stats) *stats += st;
  return found;
}

inline std::vector<Embedding> all_embeddings(const ExpandedTree& small, const ExpandedTree& big,
                                             const EmbeddingConstraints& constraints = {}) {
  std::vector<Embedding> out;
  for_each_embedding(small, big, constraints, [&](const Embedding& e) { out.push_back(e); });
  return out;
}

}  // namespace etree
