#pragma once

// Finite expanded trees: rooted trees whose levels each carry a well-order,
// whose splitting is labelled (branch 0, 1, ..., b-1) and whose meets are
// total. Nodes are dense indices; the string view of a node is derivable.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace etree {

using Node = std::uint32_t;
inline constexpr Node no_node = static_cast<Node>(-1);
inline constexpr std::uint32_t no_label = static_cast<std::uint32_t>(-1);

// Raw candidate structure. Nothing here is guaranteed to satisfy the tree
// axioms; use validate() to list violations or ExpandedTree::from_spec() to
// obtain a checked tree.
struct TreeSpec {
  std::uint32_t branching = 2;
  std::vector<Node> parent;                // no_node for a root
  std::vector<std::uint32_t> branch_label; // no_label for a root
  std::vector<std::uint32_t> level;
  std::vector<std::uint32_t> level_rank;

  std::size_t node_count() const { return parent.size(); }

  friend bool operator==(const TreeSpec&, const TreeSpec&) = default;
};

struct Violation {
  std::string clause;  // clause letter of the axiom list, e.g. "(h)"
  std::vector<Node> nodes;
  std::string message;
};

// finite: the axioms that only make sense for infinite trees ("no last
// level"; splitting and extension at the top level) are not enforced.
enum class Strictness { finite, strict };

class invalid_tree : public std::invalid_argument {
 public:
  invalid_tree(const std::string& what, std::vector<Violation> violations)
      : std::invalid_argument(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

namespace detail {

inline std::string describe(const std::vector<Violation>& vs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out << "; ";
    out << vs[i].clause << " " << vs[i].message;
  }
  return out.str();
}

inline std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

}  // namespace detail

inline std::vector<Violation> validate(const TreeSpec& spec,
                                       Strictness strictness = Strictness::finite) {
  std::vector<Violation> out;
  auto add = [&out](std::string clause, std::vector<Node> nodes, std::string msg) {
    out.push_back({std::move(clause), std::move(nodes), std::move(msg)});
  };

  const std::size_t n = spec.parent.size();
  if (spec.branch_label.size() != n || spec.level.size() != n ||
      spec.level_rank.size() != n) {
    add("(a)", {}, "per-node field arrays have different lengths");
    return out;
  }
  if (n == 0) {
    add("(b)", {}, "universe is empty");
    return out;
  }
  if (spec.branching < 2) {
    add("(h)", {}, "branching degree must be at least 2");
    return out;
  }

  bool structural = true;
  std::vector<Node> roots;
  for (Node v = 0; v < n; ++v) {
    if (spec.parent[v] == no_node) {
      roots.push_back(v);
    } else if (spec.parent[v] >= n || spec.parent[v] == v) {
      add("(d)", {v}, "parent index is not another node");
      structural = false;
    }
  }
  if (roots.empty()) {
    add("(d)", {}, "no root: the ancestor relation is not well founded");
    structural = false;
  } else if (roots.size() > 1) {
    add("(k)", roots, "several roots have no common lower bound");
  }
  if (!structural) return out;

  // Ancestor chains must terminate.
  std::vector<int> state(n, 0);  // 0 unknown, 1 on stack, 2 done
  for (Node v = 0; v < n && structural; ++v) {
    std::vector<Node> path;
    Node u = v;
    while (u != no_node && state[u] == 0) {
      state[u] = 1;
      path.push_back(u);
      u = spec.parent[u];
    }
    if (u != no_node && state[u] == 1) {
      add("(d)", {u}, "ancestor relation has a cycle");
      structural = false;
    }
    for (Node p : path) state[p] = 2;
  }
  if (!structural) return out;

  std::uint32_t height = 0;
  for (Node v = 0; v < n; ++v) height = std::max(height, spec.level[v] + 1);

  for (Node v = 0; v < n; ++v) {
    const Node p = spec.parent[v];
    if (p == no_node) {
      if (spec.level[v] != 0) add("(d)", {v}, "root is not at level 0");
      continue;
    }
    if (spec.level[v] != spec.level[p] + 1)
      add("(d)", {p, v}, "level is not the order type of the strict ancestors");
    const bool star_ok =
        spec.level[p] < spec.level[v] ||
        (spec.level[p] == spec.level[v] && spec.level_rank[p] < spec.level_rank[v]);
    if (!star_ok) add("(c)", {p, v}, "tree order is not included in the level order");
  }

  std::vector<std::vector<Node>> by_level(height);
  for (Node v = 0; v < n; ++v) by_level[spec.level[v]].push_back(v);
  for (std::uint32_t e = 0; e < height; ++e) {
    if (by_level[e].empty()) {
      add("(f)(a)", {}, "level " + std::to_string(e) + " is empty");
      continue;
    }
    std::vector<char> seen(by_level[e].size(), 0);
    for (Node v : by_level[e]) {
      const auto r = spec.level_rank[v];
      if (r >= seen.size() || seen[r]) {
        add("(b)", {v}, "ranks on level " + std::to_string(e) +
                            " do not form a well order of the level");
        break;
      }
      seen[r] = 1;
    }
  }

  std::vector<std::vector<Node>> children(n);
  for (Node v = 0; v < n; ++v)
    if (spec.parent[v] != no_node) children[spec.parent[v]].push_back(v);

  for (Node v = 0; v < n; ++v) {
    std::vector<char> used(spec.branching, 0);
    for (Node c : children[v]) {
      const auto l = spec.branch_label[c];
      if (l >= spec.branching) {
        add("(l)", {v, c}, "branch label out of range");
      } else if (used[l]) {
        add("(l)", {v, c}, "two successors carry branch label " + std::to_string(l));
      } else {
        used[l] = 1;
      }
    }
    const bool top = spec.level[v] + 1 >= height;
    if ((strictness == Strictness::strict || !top) &&
        children[v].size() != spec.branching) {
      add("(h)", {v}, "has " + std::to_string(children[v].size()) +
                          " immediate successors, expected " +
                          std::to_string(spec.branching));
    }
  }

  // Highest level reached below each node; children have larger levels only
  // when (d) holds, so process by decreasing level.
  std::vector<Node> order(n);
  std::iota(order.begin(), order.end(), Node{0});
  std::sort(order.begin(), order.end(),
            [&](Node a, Node b) { return spec.level[a] > spec.level[b]; });
  std::vector<std::uint32_t> reach(n);
  for (Node v : order) {
    reach[v] = spec.level[v];
    for (Node c : children[v]) reach[v] = std::max(reach[v], reach[c]);
  }
  for (Node v = 0; v < n; ++v) {
    const bool top = spec.level[v] + 1 >= height;
    if (!top && reach[v] + 1 < height)
      add("(g)", {v}, "has no extension to level " + std::to_string(reach[v] + 1));
  }

  if (strictness == Strictness::strict)
    add("(f)(c)", {}, "finite tree has a last level");
  return out;
}

class ExpandedTree {
 public:
  static ExpandedTree from_spec(TreeSpec spec) {
    auto vs = validate(spec, Strictness::finite);
    if (!vs.empty()) throw invalid_tree("invalid expanded tree: " + detail::describe(vs), vs);
    return ExpandedTree(std::move(spec));
  }

  std::size_t node_count() const { return spec_.parent.size(); }
  std::uint32_t branching() const { return spec_.branching; }
  std::uint32_t height() const { return height_; }
  Node root() const { return root_; }
  const TreeSpec& spec() const { return spec_; }

  std::optional<Node> parent(Node v) const {
    check(v);
    if (spec_.parent[v] == no_node) return std::nullopt;
    return spec_.parent[v];
  }
  std::uint32_t branch_label(Node v) const { return check(v), spec_.branch_label[v]; }
  std::uint32_t level(Node v) const { return check(v), spec_.level[v]; }
  std::uint32_t level_rank(Node v) const { return check(v), spec_.level_rank[v]; }

  // Nodes of one level ordered by rank.
  std::span<const Node> level_nodes(std::uint32_t lev) const {
    if (lev >= height_) throw std::out_of_range("level " + std::to_string(lev) + " out of range");
    return {by_level_.data() + level_offset_[lev],
            level_offset_[lev + 1] - level_offset_[lev]};
  }
  std::size_t level_size(std::uint32_t lev) const { return level_nodes(lev).size(); }

  // Position in the total order "levels first, then the level's well-order".
  std::size_t star_index(Node v) const {
    check(v);
    return level_offset_[spec_.level[v]] + spec_.level_rank[v];
  }
  bool star_less(Node s, Node t) const { return star_index(s) < star_index(t); }
  Node node_at_star(std::size_t i) const { return by_level_.at(i); }

  // Immediate successor along branch `label`, no_node at the top level.
  Node child(Node v, std::uint32_t label) const {
    check(v);
    if (label >= spec_.branching) throw std::out_of_range("branch label out of range");
    return children_[static_cast<std::size_t>(v) * spec_.branching + label];
  }

  Node restrict(Node t, std::uint32_t lev) const {
    check(t);
    if (lev > spec_.level[t])
      throw std::domain_error("cannot restrict a node of level " +
                              std::to_string(spec_.level[t]) + " to level " +
                              std::to_string(lev));
    return ancestors_[static_cast<std::size_t>(t) * height_ + lev];
  }

  bool tree_less(Node s, Node t) const {
    return level(s) < level(t) && restrict(t, spec_.level[s]) == s;
  }
  bool tree_leq(Node s, Node t) const { return s == t || tree_less(s, t); }

  Node meet(Node s, Node t) const {
    check(s);
    check(t);
    std::uint32_t l = std::min(spec_.level[s], spec_.level[t]);
    const std::size_t hs = static_cast<std::size_t>(s) * height_;
    const std::size_t ht = static_cast<std::size_t>(t) * height_;
    while (ancestors_[hs + l] != ancestors_[ht + l]) --l;
    return ancestors_[hs + l];
  }

  // Label of the immediate successor of s lying below t; requires s < t.
  std::uint32_t branch_toward(Node s, Node t) const {
    if (!tree_less(s, t)) throw std::domain_error("branch_toward needs s strictly below t");
    return spec_.branch_label[restrict(t, spec_.level[s] + 1)];
  }

  // s R_label t: t lies above the label-th immediate successor of s.
  bool in_branch(Node s, Node t, std::uint32_t label) const {
    return tree_less(s, t) && branch_toward(s, t) == label;
  }

  // In-order comparison: a node sits between its branch-0 side and the rest.
  bool lex_less(Node s, Node t) const {
    if (s == t) throw std::domain_error("lex_less is irreflexive; got equal nodes");
    const Node rho = meet(s, t);
    if (rho == s) return branch_toward(s, t) >= 1;
    if (rho == t) return branch_toward(t, s) == 0;
    return branch_toward(rho, s) < branch_toward(rho, t);
  }

  // Branch labels from the root down to v.
  std::vector<std::uint32_t> path(Node v) const {
    std::vector<std::uint32_t> out(level(v));
    for (std::uint32_t l = 1; l <= spec_.level[v]; ++l)
      out[l - 1] = spec_.branch_label[restrict(v, l)];
    return out;
  }

  void check(Node v) const {
    if (v >= spec_.parent.size())
      throw std::out_of_range("node " + std::to_string(v) + " is not in the tree");
  }

  friend bool operator==(const ExpandedTree& a, const ExpandedTree& b) {
    return a.spec_ == b.spec_;
  }

 private:
  explicit ExpandedTree(TreeSpec spec) : spec_(std::move(spec)) {
    const std::size_t n = spec_.parent.size();
    for (Node v = 0; v < n; ++v) {
      height_ = std::max(height_, spec_.level[v] + 1);
      if (spec_.parent[v] == no_node) root_ = v;
    }
    level_offset_.assign(height_ + 1, 0);
    for (Node v = 0; v < n; ++v) ++level_offset_[spec_.level[v] + 1];
    std::partial_sum(level_offset_.begin(), level_offset_.end(), level_offset_.begin());
    by_level_.resize(n);
    for (Node v = 0; v < n; ++v)
      by_level_[level_offset_[spec_.level[v]] + spec_.level_rank[v]] = v;

    children_.assign(n * spec_.branching, no_node);
    for (Node v = 0; v < n; ++v)
      if (spec_.parent[v] != no_node)
        children_[static_cast<std::size_t>(spec_.parent[v]) * spec_.branching +
                  spec_.branch_label[v]] = v;

    ancestors_.assign(n * height_, no_node);
    for (Node v : by_level_) {  // parents come first
      const std::size_t base = static_cast<std::size_t>(v) * height_;
      const Node p = spec_.parent[v];
      if (p != no_node)
        std::copy_n(ancestors_.begin() + static_cast<std::ptrdiff_t>(p) * height_,
                    spec_.level[p] + 1, ancestors_.begin() + static_cast<std::ptrdiff_t>(base));
      ancestors_[base + spec_.level[v]] = v;
    }
  }

  TreeSpec spec_;
  std::uint32_t height_ = 0;
  Node root_ = 0;
  std::vector<std::size_t> level_offset_;
  std::vector<Node> by_level_;
  std::vector<Node> children_;
  std::vector<Node> ancestors_;
};

// ---------------------------------------------------------------------------
// Canonical full trees over strings of length < height.

// orders[e][r] is the lexicographic index (base-b value) of the length-e
// string ranked r on level e.
using LevelOrders = std::vector<std::vector<std::uint64_t>>;

inline std::uint64_t canonical_level_size(std::uint32_t branching, std::uint32_t lev) {
  return detail::ipow(branching, lev);
}

// Node index of the string with lexicographic index `lex` on level `lev`.
inline Node canonical_node(std::uint32_t branching, std::uint32_t lev, std::uint64_t lex) {
  return static_cast<Node>((detail::ipow(branching, lev) - 1) / (branching - 1) + lex);
}

inline Node canonical_node(std::uint32_t branching, std::span<const std::uint32_t> str) {
  std::uint64_t lex = 0;
  for (auto d : str) lex = lex * branching + d;
  return canonical_node(branching, static_cast<std::uint32_t>(str.size()), lex);
}

inline ExpandedTree build_canonical_tree(std::uint32_t height, std::uint32_t branching,
                                         const LevelOrders& orders) {
  if (height < 1) throw std::invalid_argument("height must be at least 1");
  if (branching < 2) throw std::invalid_argument("branching must be at least 2");
  if (orders.size() != height)
    throw std::invalid_argument("expected " + std::to_string(height) + " level orders, got " +
                                std::to_string(orders.size()));
  std::uint64_t total = 0;
  for (std::uint32_t e = 0; e < height; ++e) total += canonical_level_size(branching, e);
  if (total > (std::uint64_t{1} << 31)) throw std::invalid_argument("tree too large");

  TreeSpec spec;
  spec.branching = branching;
  spec.parent.resize(total);
  spec.branch_label.resize(total);
  spec.level.resize(total);
  spec.level_rank.resize(total);

  for (std::uint32_t e = 0; e < height; ++e) {
    const auto size = canonical_level_size(branching, e);
    const auto& order = orders[e];
    if (order.size() != size)
      throw std::invalid_argument("level " + std::to_string(e) + ": order has " +
                                  std::to_string(order.size()) + " entries, expected " +
                                  std::to_string(size));
    std::vector<char> seen(size, 0);
    for (std::uint64_t r = 0; r < size; ++r) {
      const auto lex = order[r];
      if (lex >= size)
        throw std::invalid_argument("level " + std::to_string(e) + ": entry " +
                                    std::to_string(lex) + " out of range");
      if (seen[lex])
        throw std::invalid_argument("level " + std::to_string(e) + ": duplicate entry " +
                                    std::to_string(lex));
      seen[lex] = 1;
      const Node v = canonical_node(branching, e, lex);
      spec.level[v] = e;
      spec.level_rank[v] = static_cast<std::uint32_t>(r);
      if (e == 0) {
        spec.parent[v] = no_node;
        spec.branch_label[v] = no_label;
      } else {
        spec.parent[v] = canonical_node(branching, e - 1, lex / branching);
        spec.branch_label[v] = static_cast<std::uint32_t>(lex % branching);
      }
    }
  }
  return ExpandedTree::from_spec(std::move(spec));
}

inline LevelOrders lex_orders(std::uint32_t height, std::uint32_t branching) {
  LevelOrders out(height);
  for (std::uint32_t e = 0; e < height; ++e) {
    out[e].resize(canonical_level_size(branching, e));
    std::iota(out[e].begin(), out[e].end(), std::uint64_t{0});
  }
  return out;
}

inline LevelOrders reversed_orders(std::uint32_t height, std::uint32_t branching) {
  auto out = lex_orders(height, branching);
  for (auto& o : out) std::reverse(o.begin(), o.end());
  return out;
}

inline LevelOrders shuffled_orders(std::uint32_t height, std::uint32_t branching,
                                   std::uint64_t seed) {
  auto out = lex_orders(height, branching);
  std::mt19937_64 rng(seed);
  // Fisher-Yates on raw engine output keeps the result identical across
  // standard libraries.
  for (auto& o : out)
    for (std::size_t i = o.size(); i > 1; --i) std::swap(o[i - 1], o[rng() % i]);
  return out;
}

inline ExpandedTree lex_tree(std::uint32_t height, std::uint32_t branching = 2) {
  return build_canonical_tree(height, branching, lex_orders(height, branching));
}

// ---------------------------------------------------------------------------
// Relations between trees.

// Why `iota` fails to be a subtree embedding, or nullopt when it is one.
// Clause letters follow the subtree definition: (b) tree order, (c) meets,
// (d) branch relations, (e) level-then-rank order, (f) level equality.
inline std::optional<std::string> subtree_violation(const ExpandedTree& small,
                                                    const ExpandedTree& big,
                                                    std::span<const Node> iota) {
  const std::size_t n = small.node_count();
  if (iota.size() != n)
    throw std::invalid_argument("node map must be total on the source tree");
  std::vector<char> hit(big.node_count(), 0);
  for (Node v : iota) {
    big.check(v);
    if (hit[v]) throw std::invalid_argument("node map is not injective");
    hit[v] = 1;
  }
  // Earliest clause letter violated by any pair.
  int worst = 5;
  static constexpr const char* clauses[] = {"(b)", "(c)", "(d)", "(e)", "(f)"};
  for (Node s = 0; s < n; ++s) {
    for (Node t = 0; t < n; ++t) {
      const Node is = iota[s], it = iota[t];
      int c = 5;
      if ((small.level(s) == small.level(t)) != (big.level(is) == big.level(it))) c = 4;
      if (small.star_less(s, t) != big.star_less(is, it)) c = 3;
      if (small.tree_less(s, t) && big.tree_less(is, it) &&
          small.branch_toward(s, t) != big.branch_toward(is, it))
        c = 2;
      if (big.meet(is, it) != iota[small.meet(s, t)]) c = 1;
      if (small.tree_less(s, t) != big.tree_less(is, it)) c = 0;
      worst = std::min(worst, c);
    }
  }
  if (worst == 5) return std::nullopt;
  return clauses[worst];
}

inline bool is_subtree(const ExpandedTree& small, const ExpandedTree& big,
                       std::span<const Node> iota) {
  return !subtree_violation(small, big, iota).has_value();
}

// Equal except possibly for the per-level well-orders.
inline bool are_neighbors(const ExpandedTree& a, const ExpandedTree& b) {
  const auto& x = a.spec();
  const auto& y = b.spec();
  return x.branching == y.branching && x.parent == y.parent &&
         x.branch_label == y.branch_label && x.level == y.level;
}

// Which source tuples the saturation property quantifies over: any ordering
// of distinct level nodes, or only tuples increasing in the level order.
enum class SaturationTuples { any_order, increasing };

// Every n-tuple of distinct nodes on a non-top level extends, position by
// position, to an increasing tuple on some higher level. Finite trees are
// checked below their top level only.
inline bool is_weakly_saturated(const ExpandedTree& t, std::size_t n_max,
                                SaturationTuples tuples = SaturationTuples::any_order) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const std::uint32_t h = t.height();
  for (std::uint32_t e = 0; e + 1 < h; ++e) {
    const auto level = t.level_nodes(e);
    const std::size_t n = std::min(n_max, level.size());
    // For each higher level, its nodes read as the word of their level-e
    // ancestors; a tuple is realized at that level iff it is a subsequence.
    std::vector<std::vector<Node>> words;
    for (std::uint32_t z = e + 1; z < h; ++z) {
      std::vector<Node> w;
      for (Node x : t.level_nodes(z)) w.push_back(t.restrict(x, e));
      words.push_back(std::move(w));
    }
    std::vector<char> used(t.node_count(), 0);
    std::vector<std::size_t> pos(words.size(), 0);
    constexpr std::size_t dead = static_cast<std::size_t>(-1);
    std::size_t last_rank = 0;

    // Depth-first over tuples; pos[z] is the word offset after matching the
    // prefix, or dead. A prefix dead on every word is a counterexample.
    auto dfs = [&](auto&& self, std::size_t depth) -> bool {
      if (depth == n) return true;
      for (Node s : level) {
        if (used[s]) continue;
        const std::size_t r = t.level_rank(s);
        if (tuples == SaturationTuples::increasing && depth > 0 && r <= last_rank) continue;
        const auto saved = pos;
        const auto saved_rank = last_rank;
        bool alive = false;
        for (std::size_t z = 0; z < words.size(); ++z) {
          if (pos[z] == dead) continue;
          auto it = std::find(words[z].begin() + static_cast<std::ptrdiff_t>(pos[z]),
                              words[z].end(), s);
          pos[z] = it == words[z].end() ? dead
                                         : static_cast<std::size_t>(it - words[z].begin()) + 1;
          alive = alive || pos[z] != dead;
        }
        if (!alive) return false;
        used[s] = 1;
        last_rank = r;
        const bool ok = self(self, depth + 1);
        used[s] = 0;
        pos = saved;
        last_rank = saved_rank;
        if (!ok) return false;
      }
      return true;
    };
    if (!dfs(dfs, 0)) return false;
  }
  return true;
}

}  // namespace etree
