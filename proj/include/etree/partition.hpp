#pragma once

// Homogeneity checks for the arrow relations T1 -> (T2)^n_sigma and their
// end-homogeneous, primed and square-bracket variants, plus composition of
// end(1, m) witnesses along a chain of trees.
//
// Every check reduces to "color groups": sets of tuples of the small tree
// whose images under c o g may show at most `max_colors` distinct colors.
// The groups depend on the small tree only, so they are built once and then
// tested against each embedding in search order.

#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "etree/census.hpp"
#include "etree/coloring.hpp"
#include "etree/embedding.hpp"
#include "etree/eseq.hpp"

namespace etree {

class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_arity_cap = 4;

struct HomogeneityViolation {
  std::vector<std::vector<Node>> tuples;  // small-tree tuples
  std::vector<Color> colors;              // their colors under c o g
};

struct ColorGroup {
  std::vector<std::vector<Node>> tuples;
  std::size_t max_colors = 1;
};

using ColorGroups = std::vector<ColorGroup>;

namespace detail {

// Tuples bucketed by a key, in first-seen order; singletons dropped.
template <class Key, class Hash = std::hash<Key>>
class Bucketer {
 public:
  void add(const Key& key, std::vector<Node> tuple) {
    auto [it, fresh] = index_.emplace(key, groups_.size());
    if (fresh) groups_.emplace_back();
    groups_[it->second].tuples.push_back(std::move(tuple));
  }
  ColorGroups take() {
    ColorGroups out;
    for (auto& g : groups_)
      if (g.tuples.size() > 1) out.push_back(std::move(g));
    return out;
  }

 private:
  std::unordered_map<Key, std::size_t, Hash> index_;
  ColorGroups groups_;
};

struct PinnedKeyHash {
  std::size_t operator()(const std::pair<SimilarityType, std::vector<Node>>& k) const {
    std::size_t h = SimilarityTypeHash{}(k.first);
    for (Node v : k.second) h = h * 1000003u ^ v;
    return h;
  }
};

// Positions l of `a` with at least k levels of Lev(a) strictly above lev(a_l).
inline std::vector<std::size_t> pinned_positions(const ExpandedTree& t, std::span<const Node> a,
                                                 std::size_t k) {
  const auto levs = lev_set(t, a);
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const auto lv = t.level(a[l]);
    const auto above = static_cast<std::size_t>(
        std::distance(levs.upper_bound(lv), levs.end()));
    if (above >= k) out.push_back(l);
  }
  return out;
}

inline std::vector<std::vector<Node>> all_eseqs(const ExpandedTree& t, std::size_t n) {
  std::vector<std::vector<Node>> out;
  for_each_eseq(t, n, [&](std::span<const Node> s) { out.emplace_back(s.begin(), s.end()); });
  return out;
}

inline void check_arity(const Coloring& c, std::size_t n) {
  if (!c.arity().accepts(n))
    throw std::invalid_argument("arity mismatch: coloring of arity " + c.arity().to_string() +
                                " cannot color tuples of length " + std::to_string(n));
}

}  // namespace detail

// Similar pairs of eseq_n(small) must get one color.
inline ColorGroups arrow_groups(const ExpandedTree& small, std::size_t n) {
  detail::Bucketer<SimilarityType, SimilarityTypeHash> b;
  for (auto& a : detail::all_eseqs(small, n)) {
    auto key = similarity_type(small, a);
    b.add(key, std::move(a));
  }
  return b.take();
}

// Similar pairs (closure type plus positions) of arbitrary length-n tuples;
// with up_to, every length 1..n.
inline ColorGroups arrow_prime_groups(const ExpandedTree& small, std::size_t n, bool up_to) {
  detail::Bucketer<SimilarityType, SimilarityTypeHash> b;
  const Node count = static_cast<Node>(small.node_count());
  for (std::size_t len = up_to ? 1 : n; len <= n; ++len) {
    std::vector<Node> tuple(len, 0);
    while (true) {
      b.add(sim_type(small, tuple), tuple);
      std::size_t i = len;
      while (i > 0 && ++tuple[i - 1] == count) tuple[--i] = 0;
      if (i == 0) break;
    }
  }
  return b.take();
}

// Similar pairs of eseq_n(small), 1 <= n <= cap, that agree on every entry
// with at least k levels of the tuple above it, and have at most m such
// entries (m = nullopt: no limit).
inline ColorGroups end_groups(const ExpandedTree& small, std::size_t k,
                              std::optional<std::size_t> m, std::size_t cap) {
  detail::Bucketer<std::pair<SimilarityType, std::vector<Node>>, detail::PinnedKeyHash> b;
  for (std::size_t n = 1; n <= cap; ++n) {
    for (auto& a : detail::all_eseqs(small, n)) {
      const auto pinned = detail::pinned_positions(small, a, k);
      if (m && pinned.size() > *m) continue;
      std::vector<Node> fixed;
      for (auto p : pinned) fixed.push_back(a[p]);
      std::pair key{similarity_type(small, a), std::move(fixed)};
      b.add(key, std::move(a));
    }
  }
  return b.take();
}

// Weak similarity: some permutation pi of the positions carries level
// equality forward and the tree order both ways.
inline bool weak_similar(const ExpandedTree& t, std::span<const Node> a, std::span<const Node> b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  std::vector<std::size_t> pi(n);
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t l = 0; l < n && ok; ++l) {
      for (std::size_t k = 0; k < n && ok; ++k) {
        if (t.level(a[l]) == t.level(a[k]) && t.level(b[pi[l]]) != t.level(b[pi[k]])) ok = false;
        if (t.tree_less(a[l], a[k]) != t.tree_less(b[pi[l]], b[pi[k]])) ok = false;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return false;
}

// For each a in eseq_n(small) (n <= cap) with at most m pinned entries: the
// eseqs weakly similar to a that agree with it on the pinned entries may show
// at most j colors.
inline ColorGroups square_bracket_groups(const ExpandedTree& small, std::size_t k, std::size_t m,
                                         std::size_t j, std::size_t cap) {
  ColorGroups out;
  for (std::size_t n = 1; n <= cap; ++n) {
    const auto seqs = detail::all_eseqs(small, n);
    for (const auto& a : seqs) {
      const auto pinned = detail::pinned_positions(small, a, k);
      if (pinned.size() > m) continue;
      ColorGroup g;
      g.max_colors = j;
      for (const auto& b : seqs) {
        bool agree = true;
        for (auto p : pinned) agree = agree && b[p] == a[p];
        if (agree && weak_similar(small, a, b)) g.tuples.push_back(b);
      }
      if (g.tuples.size() > j) out.push_back(std::move(g));
    }
  }
  return out;
}

// First group of `groups` that c o g breaks, in group order.
inline std::optional<HomogeneityViolation> first_violation(const ColorGroups& groups,
                                                           const Embedding& g, const Coloring& c) {
  const ExpandedTree& big = *g.target;
  for (const auto& group : groups) {
    HomogeneityViolation v;
    for (const auto& tuple : group.tuples) {
      const Color col = c(big, g.apply(tuple));
      if (std::find(v.colors.begin(), v.colors.end(), col) != v.colors.end()) continue;
      v.tuples.push_back(tuple);
      v.colors.push_back(col);
      if (v.colors.size() > group.max_colors) return v;
    }
  }
  return std::nullopt;
}

// First embedding of small into big (search order) under which no group is
// broken.
inline std::optional<Embedding> search_homogeneous(const ExpandedTree& big,
                                                   const ExpandedTree& small,
                                                   const ColorGroups& groups, const Coloring& c,
                                                   SearchStats* stats = nullptr,
                                                   const EmbeddingConstraints& constraints = {}) {
  std::optional<Embedding> found;
  const auto st = for_each_embedding(small, big, constraints, [&](const Embedding& g) {
    if (first_violation(groups, g, c)) return true;
    found = g;
    return false;
  });
  if (stats) *stats += st;
  return found;
}

// ---------------------------------------------------------------------------
// The relations. Argument order follows T1 -> (T2): T1 is the colored host,
// T2 the tree to embed.

inline std::optional<HomogeneityViolation> arrow_violation(const Embedding& g, std::size_t n,
                                                           const Coloring& c) {
  detail::check_arity(c, n);
  return first_violation(arrow_groups(*g.source, n), g, c);
}

inline std::optional<Embedding> check_arrow(const ExpandedTree& t1, const ExpandedTree& t2,
                                            std::size_t n, const Coloring& c,
                                            SearchStats* stats = nullptr) {
  detail::check_arity(c, n);
  return search_homogeneous(t1, t2, arrow_groups(t2, n), c, stats);
}

inline std::optional<HomogeneityViolation> end_violation(const Embedding& g, std::size_t k,
                                                         std::optional<std::size_t> m,
                                                         const Coloring& c,
                                                         std::size_t cap = default_arity_cap) {
  if (!c.arity().is_all())
    throw std::invalid_argument("arity mismatch: end-homogeneity needs a coloring of all arities");
  return first_violation(end_groups(*g.source, k, m, cap), g, c);
}

inline std::optional<Embedding> check_end_k(const ExpandedTree& t1, const ExpandedTree& t2,
                                            std::size_t k, const Coloring& c,
                                            std::size_t cap = default_arity_cap,
                                            SearchStats* stats = nullptr) {
  if (!c.arity().is_all())
    throw std::invalid_argument("arity mismatch: end-homogeneity needs a coloring of all arities");
  return search_homogeneous(t1, t2, end_groups(t2, k, std::nullopt, cap), c, stats);
}

inline std::optional<Embedding> check_end_k_m(const ExpandedTree& t1, const ExpandedTree& t2,
                                              std::size_t k, std::size_t m, const Coloring& c,
                                              std::size_t cap = default_arity_cap,
                                              SearchStats* stats = nullptr) {
  if (!c.arity().is_all())
    throw std::invalid_argument("arity mismatch: end-homogeneity needs a coloring of all arities");
  return search_homogeneous(t1, t2, end_groups(t2, k, m, cap), c, stats);
}

inline std::optional<Embedding> check_arrow_prime(const ExpandedTree& t1, const ExpandedTree& t2,
                                                  std::size_t n, const Coloring& c,
                                                  bool up_to = false,
                                                  SearchStats* stats = nullptr) {
  for (std::size_t len = up_to ? 1 : n; len <= n; ++len) detail::check_arity(c, len);
  return search_homogeneous(t1, t2, arrow_prime_groups(t2, n, up_to), c, stats);
}

inline std::optional<Embedding> check_square_bracket(const ExpandedTree& t1,
                                                     const ExpandedTree& t2, std::size_t k,
                                                     std::size_t m, Color sigma, std::size_t j,
                                                     const Coloring& c,
                                                     std::size_t cap = default_arity_cap,
                                                     SearchStats* stats = nullptr) {
  if (!c.arity().is_all())
    throw std::invalid_argument("arity mismatch: end-homogeneity needs a coloring of all arities");
  if (c.sigma() > sigma) throw std::invalid_argument("coloring uses more than sigma colors");
  if (j < 1) throw std::invalid_argument("j must be at least 1");
  return search_homogeneous(t1, t2, square_bracket_groups(t2, k, m, j, cap), c, stats);
}

// ---------------------------------------------------------------------------
// The relation itself at finite scale: every sigma-coloring of eseq_n(T1).

struct AllColoringsOptions {
  std::uint64_t budget = default_budget;  // colorings allowed in exhaustive mode
  bool allow_sampling = true;             // over budget: sample instead of failing
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
};

struct AllColoringsResult {
  bool holds = true;
  bool sampled = false;
  std::uint64_t colorings_checked = 0;
  std::optional<Coloring> counterexample;  // a table coloring with no witness
  SearchStats stats;
};

inline AllColoringsResult check_arrow_all_colorings(const ExpandedTree& t1,
                                                    const ExpandedTree& t2, std::size_t n,
                                                    Color sigma,
                                                    const AllColoringsOptions& opts = {}) {
  if (sigma < 1) throw std::invalid_argument("sigma must be at least 1");
  const auto domain = detail::all_eseqs(t1, n);
  const auto groups = arrow_groups(t2, n);
  const auto embeddings = all_embeddings(t2, t1);
  std::map<std::vector<Node>, std::size_t> index;
  for (std::size_t i = 0; i < domain.size(); ++i) index.emplace(domain[i], i);

  // sigma^|domain|, saturating
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < domain.size() && total <= opts.budget; ++i) {
    if (sigma > 1 && total > opts.budget / sigma + 1) {
      total = opts.budget + 1;
      break;
    }
    total *= sigma;
  }
  AllColoringsResult out;
  out.sampled = total > opts.budget;
  if (out.sampled && !opts.allow_sampling)
    throw budget_exceeded("exhaustive sweep needs " + std::to_string(sigma) + "^" +
                          std::to_string(domain.size()) + " colorings, over budget " +
                          std::to_string(opts.budget));

  auto digits = std::make_shared<std::vector<Color>>(domain.size(), 0);
  const auto coloring = Coloring::custom(
      Arity::exactly(n), sigma, [digits, &index](const ExpandedTree&, std::span<const Node> s) {
        return (*digits)[index.at(std::vector<Node>(s.begin(), s.end()))];
      });

  auto witnessed = [&]() {
    for (const auto& g : embeddings)
      if (!first_violation(groups, g, coloring)) return true;
    return false;
  };
  auto record_failure = [&]() {
    Coloring::Table rows;
    for (std::size_t i = 0; i < domain.size(); ++i) rows.emplace(domain[i], (*digits)[i]);
    out.holds = false;
    out.counterexample = Coloring::table(Arity::exactly(n), sigma, std::move(rows));
  };

  if (!out.sampled) {
    while (true) {
      ++out.colorings_checked;
      if (!witnessed()) {
        record_failure();
        break;
      }
      std::size_t i = 0;
      while (i < digits->size() && ++(*digits)[i] == sigma) (*digits)[i++] = 0;
      if (i == digits->size()) break;
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
      for (auto& d : *digits) d = rng() % sigma;
      ++out.colorings_checked;
      if (!witnessed()) {
        record_failure();
        break;
      }
    }
  }
  out.stats.embeddings = embeddings.size();
  return out;
}

// ---------------------------------------------------------------------------
// Chains: T_0 -> T_1 -> ... -> T_k, link l embedding T_l into T_{l+1}.

struct ChainLink {
  const ExpandedTree* upper = nullptr;  // T_{l+1}
  const ExpandedTree* lower = nullptr;  // T_l
  Embedding embedding;                  // T_l -> T_{l+1}
};

struct ChainVerdict {
  bool pass = false;
  bool links_ok = true;
  std::optional<std::size_t> failed_link;
  bool end_ok = false;   // composition is end(k, m)-homogeneous
  bool le_m_ok = false;  // composition homogeneous for every arity <= m
  std::optional<HomogeneityViolation> violation;
  Embedding composed;
};

// Pullback of c (on T_k) to T_{l+1} along links l+1, ..., k-1.
inline Coloring chain_pullback(const std::vector<ChainLink>& chain, std::size_t l,
                               const Coloring& c) {
  Coloring out = c;
  for (std::size_t i = chain.size() - 1; i > l; --i) out = out.pullback(chain[i].embedding);
  return out;
}

inline ChainVerdict compose_homogeneous_chain(const std::vector<ChainLink>& chain, std::size_t k,
                                              std::size_t m, const Coloring& c,
                                              std::size_t cap = default_arity_cap) {
  if (k < 1 || chain.size() != k) throw std::invalid_argument("chain must have exactly k >= 1 links");
  for (std::size_t l = 0; l < k; ++l) {
    const auto& link = chain[l];
    if (link.embedding.source != link.lower || link.embedding.target != link.upper)
      throw std::invalid_argument("link " + std::to_string(l) + ": embedding does not match its trees");
    if (l + 1 < k && chain[l + 1].lower != link.upper)
      throw std::invalid_argument("chain is not composable at link " + std::to_string(l));
  }

  ChainVerdict v;
  for (std::size_t l = k; l-- > 0;) {
    if (auto bad = end_violation(chain[l].embedding, 1, m, chain_pullback(chain, l, c), cap)) {
      v.links_ok = false;
      v.failed_link = l;
      v.violation = std::move(bad);
      break;
    }
  }
  Embedding g = chain[0].embedding;
  for (std::size_t l = 1; l < k; ++l) g = compose(chain[l].embedding, g);
  v.composed = g;

  auto end_bad = end_violation(g, k, m, c, cap);
  v.end_ok = !end_bad;
  v.le_m_ok = true;
  std::optional<HomogeneityViolation> arity_bad;
  for (std::size_t n = 1; n <= std::min(m, cap) && v.le_m_ok; ++n) {
    arity_bad = first_violation(arrow_groups(*g.source, n), g, c);
    v.le_m_ok = !arity_bad;
  }
  if (!v.violation) v.violation = end_bad ? std::move(end_bad) : std::move(arity_bad);
  v.pass = v.links_ok && v.end_ok && v.le_m_ok;
  return v;
}

// Finds per-link end(1, m) witnesses from the top of the chain down, each for
// the coloring pulled back along the links already chosen. trees = T_0..T_k.
inline std::optional<std::vector<ChainLink>> build_homogeneous_chain(
    const std::vector<const ExpandedTree*>& trees, std::size_t m, const Coloring& c,
    std::size_t cap = default_arity_cap, SearchStats* stats = nullptr) {
  if (trees.size() < 2) throw std::invalid_argument("a chain needs at least two trees");
  const std::size_t k = trees.size() - 1;
  std::vector<ChainLink> chain(k);
  Coloring pulled = c;
  for (std::size_t l = k; l-- > 0;) {
    auto g = check_end_k_m(*trees[l + 1], *trees[l], 1, m, pulled, cap, stats);
    if (!g) return std::nullopt;
    chain[l] = {trees[l + 1], trees[l], *g};
    pulled = pulled.pullback(*g);
  }
  return chain;
}

}  // namespace etree
