#pragma once

// Embedded sequences: sequences increasing in the level order and closed under
// meets and level restrictions. Also closures, position maps and the
// canonical similarity type used as a census key.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "etree/tree.hpp"

namespace etree {

inline bool is_eseq(const ExpandedTree& t, std::span<const Node> a) {
  for (Node v : a) t.check(v);
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!t.star_less(a[i - 1], a[i])) return false;
  auto contains = [&](Node v) { return std::find(a.begin(), a.end(), v) != a.end(); };
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t l = 0; l < a.size(); ++l) {
      if (k < l && !contains(t.meet(a[k], a[l]))) return false;
      if (t.level(a[k]) <= t.level(a[l]) && !contains(t.restrict(a[l], t.level(a[k]))))
        return false;
    }
  }
  return true;
}

// An embedded sequence of a particular tree. The tree must outlive it.
class ESeq {
 public:
  ESeq(const ExpandedTree& tree, std::vector<Node> nodes)
      : tree_(&tree), nodes_(std::move(nodes)) {
    if (!is_eseq(tree, nodes_)) throw std::invalid_argument("sequence is not an embedded sequence");
  }

  const ExpandedTree& tree() const { return *tree_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  Node operator[](std::size_t i) const { return nodes_[i]; }

  friend bool operator==(const ESeq& a, const ESeq& b) {
    return a.tree_ == b.tree_ && a.nodes_ == b.nodes_;
  }

 private:
  struct unchecked_t {};
  ESeq(unchecked_t, const ExpandedTree& tree, std::vector<Node> nodes)
      : tree_(&tree), nodes_(std::move(nodes)) {}

  friend ESeq closure(const ExpandedTree&, std::span<const Node>);
  template <class F>
  friend void for_each_eseq_object(const ExpandedTree&, std::size_t, F&&);

  const ExpandedTree* tree_;
  std::vector<Node> nodes_;
};

inline std::set<std::uint32_t> lev_set(const ExpandedTree& t, std::span<const Node> a) {
  std::set<std::uint32_t> out;
  for (Node v : a) out.insert(t.level(v));
  return out;
}

// Smallest embedded sequence whose range contains the given nodes: all
// pairwise meets, then every restriction of an input node to the level of
// one of those meets. Duplicates in the input are allowed.
inline ESeq closure(const ExpandedTree& t, std::span<const Node> a) {
  if (a.empty()) throw std::domain_error("closure of an empty set");
  for (Node v : a) t.check(v);
  std::vector<Node> meets;
  for (Node x : a)
    for (Node y : a) meets.push_back(t.meet(x, y));
  std::sort(meets.begin(), meets.end());
  meets.erase(std::unique(meets.begin(), meets.end()), meets.end());

  std::vector<Node> out;
  for (Node x : a)
    for (Node v : meets)
      if (t.level(x) >= t.level(v)) out.push_back(t.restrict(x, t.level(v)));
  std::sort(out.begin(), out.end(), [&](Node x, Node y) { return t.star_less(x, y); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return ESeq(ESeq::unchecked_t{}, t, std::move(out));
}

// Index of every entry of `a` within closure(a); equal entries share an index.
inline std::vector<std::size_t> positions(const ExpandedTree& t, std::span<const Node> a) {
  const auto cl = closure(t, a);
  std::vector<std::size_t> out;
  out.reserve(a.size());
  for (Node v : a) {
    auto it = std::find(cl.nodes().begin(), cl.nodes().end(), v);
    out.push_back(static_cast<std::size_t>(it - cl.nodes().begin()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Similarity types.

// Quantifier-free type of an embedded sequence, stored with all derived
// tables so that similarity is plain value equality. For arbitrary tuples the
// tables describe the closure and `pos` records where each tuple entry sits.
struct SimilarityType {
  std::uint32_t n = 0;
  std::uint32_t branching = 2;
  std::vector<std::uint8_t> tree_order;   // [k*n+i]: a_k <=_T a_i
  std::vector<std::uint32_t> branch;      // [k*n+i]: 1 + label when a_k <_T a_i, else 0
  std::vector<std::uint32_t> meet;        // [k*n+i]: index of a_k meet a_i
  std::vector<std::int32_t> restriction;  // [l*n+m]: index of a_l restricted to lev(a_m), or -1
  std::vector<std::uint8_t> level_order;  // [k*n+l]: lev(a_k) <= lev(a_l)
  std::optional<std::vector<std::uint32_t>> pos;

  // a_k R_label a_i
  bool in_branch(std::uint32_t label, std::size_t k, std::size_t i) const {
    return branch[k * n + i] == label + 1;
  }

  // Entries on the highest level of the sequence.
  std::size_t top_count() const {
    std::size_t c = 0;
    for (std::size_t l = 0; l < n; ++l) {
      bool top = true;
      for (std::size_t j = 0; j < n && top; ++j) top = level_order[j * n + l];
      c += top;
    }
    return c;
  }

  bool well_formed() const {
    const std::size_t nn = std::size_t{n} * n;
    if (tree_order.size() != nn || branch.size() != nn || meet.size() != nn ||
        restriction.size() != nn || level_order.size() != nn)
      return false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!tree_order[k * n + k] || !level_order[k * n + k] || meet[k * n + k] != k) return false;
      for (std::size_t i = 0; i < n; ++i) {
        const auto ki = k * n + i, ik = i * n + k;
        if (meet[ki] != meet[ik] || meet[ki] >= n) return false;
        if (k != i && tree_order[ki] && tree_order[ik]) return false;
        if (tree_order[ki] && !level_order[ki]) return false;
        if (!level_order[ki] && !level_order[ik]) return false;
        const bool strict = k != i && tree_order[ki];
        if ((branch[ki] != 0) != strict || branch[ki] > branching) return false;
        for (std::size_t m = 0; m < n; ++m)
          if (tree_order[ki] && tree_order[i * n + m] && !tree_order[k * n + m]) return false;
      }
    }
    return true;
  }

  // Sorted field dump; stable across builds and used as the census key.
  std::string to_string() const {
    std::string s = "b=" + std::to_string(branching);
    auto bits = [&](const char* name, const std::vector<std::uint8_t>& v) {
      s += ';';
      s += name;
      s += '=';
      for (auto x : v) s += x ? '1' : '0';
    };
    auto nums = [&](const char* name, const auto& v) {
      s += ';';
      s += name;
      s += '=';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
      }
    };
    nums("branch", branch);
    bits("le", tree_order);
    bits("lev", level_order);
    nums("meet", meet);
    s += ";n=" + std::to_string(n);
    if (pos) {
      nums("pos", *pos);
    } else {
      s += ";pos=-";
    }
    nums("restr", restriction);
    return s;
  }

  friend bool operator==(const SimilarityType&, const SimilarityType&) = default;
};

struct SimilarityTypeHash {
  std::size_t operator()(const SimilarityType& t) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t x) {
      h ^= x;
      h *= 0x100000001b3ULL;
    };
    mix(t.n);
    mix(t.branching);
    for (auto x : t.tree_order) mix(x);
    for (auto x : t.branch) mix(x);
    for (auto x : t.meet) mix(x);
    if (t.pos)
      for (auto x : *t.pos) mix(x + 7);
    return static_cast<std::size_t>(h);
  }
};

// Tables of an embedded sequence (no pos record). Requires is_eseq.
inline SimilarityType similarity_type(const ExpandedTree& t, std::span<const Node> a) {
  SimilarityType ty;
  const std::size_t n = a.size();
  ty.n = static_cast<std::uint32_t>(n);
  ty.branching = t.branching();
  ty.tree_order.assign(n * n, 0);
  ty.branch.assign(n * n, 0);
  ty.meet.assign(n * n, 0);
  ty.restriction.assign(n * n, -1);
  ty.level_order.assign(n * n, 0);
  auto index_of = [&](Node v) -> std::uint32_t {
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] == v) return static_cast<std::uint32_t>(i);
    throw std::invalid_argument("sequence is not closed; use sim_type for arbitrary tuples");
  };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto ki = k * n + i;
      ty.tree_order[ki] = t.tree_leq(a[k], a[i]);
      if (k != i && ty.tree_order[ki]) ty.branch[ki] = t.branch_toward(a[k], a[i]) + 1;
      ty.meet[ki] = index_of(t.meet(a[k], a[i]));
      ty.level_order[ki] = t.level(a[k]) <= t.level(a[i]);
      if (t.level(a[i]) <= t.level(a[k]))
        ty.restriction[ki] = static_cast<std::int32_t>(index_of(t.restrict(a[k], t.level(a[i]))));
    }
  }
  return ty;
}

// Similarity type of an arbitrary tuple: type of its closure plus the
// position of each entry inside the closure.
inline SimilarityType sim_type(const ExpandedTree& t, std::span<const Node> a) {
  if (a.empty()) {
    SimilarityType ty;
    ty.branching = t.branching();
    ty.pos = std::vector<std::uint32_t>{};
    return ty;
  }
  const auto cl = closure(t, a);
  auto ty = similarity_type(t, cl.nodes());
  std::vector<std::uint32_t> pos;
  for (auto p : positions(t, a)) pos.push_back(static_cast<std::uint32_t>(p));
  ty.pos = std::move(pos);
  return ty;
}

// Similarity of embedded sequences: same length, same tree order, same
// branch relations. The remaining table entries follow from these.
inline bool similar(const ExpandedTree& t, std::span<const Node> a, std::span<const Node> b) {
  if (!is_eseq(t, a) || !is_eseq(t, b))
    throw std::invalid_argument("similar() takes embedded sequences");
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool ak = t.tree_leq(a[k], a[i]);
      if (ak != t.tree_leq(b[k], b[i])) return false;
      if (ak && k != i && t.branch_toward(a[k], a[i]) != t.branch_toward(b[k], b[i]))
        return false;
    }
  }
  return true;
}

inline bool similar(const ESeq& a, const ESeq& b) {
  if (&a.tree() != &b.tree()) throw std::invalid_argument("sequences live in different trees");
  return similar(a.tree(), a.nodes(), b.nodes());
}

// Agreement of two equal-length sequences on each of the six similarity
// bullets, evaluated directly from the tree relations: tree order, branch
// relations, meets, restrictions, branch relation from a meet, level order.
inline std::array<bool, 6> bullet_agreement(const ExpandedTree& t, std::span<const Node> a,
                                            std::span<const Node> b) {
  if (a.size() != b.size()) throw std::invalid_argument("bullet_agreement needs equal lengths");
  const std::size_t n = a.size();
  std::array<bool, 6> ok{true, true, true, true, true, true};
  auto restricted_eq = [&](std::span<const Node> s, std::size_t k, std::size_t l, std::size_t m) {
    return t.level(s[m]) <= t.level(s[l]) && s[k] == t.restrict(s[l], t.level(s[m]));
  };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (t.tree_leq(a[k], a[i]) != t.tree_leq(b[k], b[i])) ok[0] = false;
      for (std::uint32_t l = 0; l < t.branching(); ++l)
        if (t.in_branch(a[k], a[i], l) != t.in_branch(b[k], b[i], l)) ok[1] = false;
      if ((t.level(a[k]) <= t.level(a[i])) != (t.level(b[k]) <= t.level(b[i]))) ok[5] = false;
      for (std::size_t m = 0; m < n; ++m) {
        if ((t.meet(a[k], a[i]) == a[m]) != (t.meet(b[k], b[i]) == b[m])) ok[2] = false;
        if (restricted_eq(a, k, i, m) != restricted_eq(b, k, i, m)) ok[3] = false;
        for (std::uint32_t l = 0; l < t.branching(); ++l)
          if (t.in_branch(t.meet(a[k], a[m]), a[i], l) != t.in_branch(t.meet(b[k], b[m]), b[i], l))
            ok[4] = false;
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Enumeration.

struct EnumerationStats {
  std::uint64_t candidates = 0;  // extension attempts examined
  std::uint64_t visited = 0;     // sequences handed to the visitor
  bool complete = true;          // false when the budget stopped the walk
};

inline constexpr std::uint64_t unlimited = std::numeric_limits<std::uint64_t>::max();

// Calls visit(span) for every length-n embedded sequence, in lexicographic
// order of node-index tuples. Every prefix of an embedded sequence is one, so
// the walk extends prefixes and checks only the conditions the new entry adds.
// visit may return false to stop early.
template <class F>
EnumerationStats for_each_eseq(const ExpandedTree& t, std::size_t n, F&& visit,
                               std::uint64_t budget = unlimited) {
  EnumerationStats stats;
  std::vector<Node> prefix;
  prefix.reserve(n);
  std::vector<char> member(t.node_count(), 0);
  const Node count = static_cast<Node>(t.node_count());
  bool stop = false;

  auto emit = [&]() {
    ++stats.visited;
    if constexpr (std::is_same_v<std::invoke_result_t<F&, std::span<const Node>>, bool>) {
      if (!visit(std::span<const Node>(prefix))) stop = true;
    } else {
      visit(std::span<const Node>(prefix));
    }
  };

  auto extend = [&](auto&& self) -> void {
    if (prefix.size() == n) {
      emit();
      return;
    }
    for (Node x = 0; x < count && !stop; ++x) {
      if (!prefix.empty() && !t.star_less(prefix.back(), x)) continue;
      if (++stats.candidates > budget) {
        stats.complete = false;
        stop = true;
        return;
      }
      bool ok = true;
      for (Node p : prefix) {
        const Node m = t.meet(p, x);
        const Node r = t.restrict(x, t.level(p));
        if ((m != x && !member[m]) || (r != x && !member[r])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      prefix.push_back(x);
      member[x] = 1;
      self(self);
      member[x] = 0;
      prefix.pop_back();
    }
  };
  extend(extend);
  return stats;
}

template <class F>
void for_each_eseq_object(const ExpandedTree& t, std::size_t n, F&& visit) {
  for_each_eseq(t, n, [&](std::span<const Node> s) {
    visit(ESeq(ESeq::unchecked_t{}, t, std::vector<Node>(s.begin(), s.end())));
  });
}

inline std::vector<ESeq> enumerate_eseq(const ExpandedTree& t, std::size_t n) {
  std::vector<ESeq> out;
  for_each_eseq_object(t, n, [&](ESeq e) { out.push_back(std::move(e)); });
  return out;
}

// Embedded sequences of T whose entries all lie in `within`.
inline std::vector<ESeq> enumerate_eseq_within(const ExpandedTree& t, std::size_t n,
                                               std::span<const Node> within) {
  std::vector<char> allowed(t.node_count(), 0);
  for (Node v : within) {
    t.check(v);
    allowed[v] = 1;
  }
  std::vector<ESeq> out;
  for_each_eseq_object(t, n, [&](ESeq e) {
    for (Node v : e.nodes())
      if (!allowed[v]) return;
    out.push_back(std::move(e));
  });
  return out;
}

// Closure of A plus one node t lying above a level-closed set U (all nodes of
// the levels below lev(U)) splits as (closure part inside U, t).
inline std::pair<std::vector<Node>, Node> closure_extension_split(const ExpandedTree& tree,
                                                                  std::span<const Node> u,
                                                                  std::span<const Node> a,
                                                                  Node t) {
  tree.check(t);
  std::vector<char> in_u(tree.node_count(), 0);
  std::uint32_t lev_u = 0;
  for (Node v : u) {
    tree.check(v);
    in_u[v] = 1;
    lev_u = std::max(lev_u, tree.level(v) + 1);
  }
  for (Node v : u)
    if (auto p = tree.parent(v); p && !in_u[*p])
      throw std::invalid_argument("U is not closed downward");
  for (std::uint32_t e = 0; e < lev_u; ++e)
    for (Node v : tree.level_nodes(e))
      if (!in_u[v]) throw std::invalid_argument("U does not contain every node below lev(U)");
  if (lev_u >= tree.level(t)) throw std::invalid_argument("t must lie above lev(U)");
  for (Node v : a)
    if (!in_u[v]) throw std::invalid_argument("A must be a subset of U");

  std::vector<Node> all(a.begin(), a.end());
  all.push_back(t);
  const auto cl = closure(tree, all);
  std::vector<Node> prefix(cl.nodes().begin(), cl.nodes().end() - 1);
  if (cl.nodes().back() != t) throw std::logic_error("closure does not end with t");
  for (Node v : prefix)
    if (!in_u[v]) throw std::logic_error("closure left U");
  return {std::move(prefix), t};
}

}  // namespace etree
