#pragma once

// Seeded generators for property tests. Every generator takes its own
// mt19937_64 so failures reproduce from the printed seed.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "etree/etree.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::uint64_t below(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

inline etree::ExpandedTree tree(Rng& rng, std::uint32_t height, std::uint32_t branching) {
  return etree::build_canonical_tree(height, branching,
                                     etree::shuffled_orders(height, branching, rng()));
}

// m distinct nodes, uniformly.
inline std::vector<etree::Node> node_set(Rng& rng, const etree::ExpandedTree& t, std::size_t m) {
  std::set<etree::Node> picked;
  while (picked.size() < std::min(m, t.node_count()))
    picked.insert(static_cast<etree::Node>(below(rng, t.node_count())));
  return {picked.begin(), picked.end()};
}

// n nodes with repetition allowed.
inline std::vector<etree::Node> tuple(Rng& rng, const etree::ExpandedTree& t, std::size_t n) {
  std::vector<etree::Node> out(n);
  for (auto& v : out) v = static_cast<etree::Node>(below(rng, t.node_count()));
  return out;
}

// A random member of eseq_n(t), or nullopt when there is none.
inline std::optional<std::vector<etree::Node>> eseq(Rng& rng, const etree::ExpandedTree& t,
                                                    std::size_t n) {
  std::vector<std::vector<etree::Node>> all;
  etree::for_each_eseq(t, n, [&](std::span<const etree::Node> s) {
    all.emplace_back(s.begin(), s.end());
  });
  if (all.empty()) return std::nullopt;
  return all[below(rng, all.size())];
}

// Explicit table coloring of eseq_n(t) for every n in [1, max_len].
inline etree::Coloring table_coloring(Rng& rng, const etree::ExpandedTree& t, etree::Arity arity,
                                      etree::Color sigma, std::size_t max_len) {
  etree::Coloring::Table rows;
  for (std::size_t n = 1; n <= max_len; ++n) {
    if (!arity.accepts(n)) continue;
    etree::for_each_eseq(t, n, [&](std::span<const etree::Node> s) {
      rows.emplace(std::vector<etree::Node>(s.begin(), s.end()), below(rng, sigma));
    });
  }
  return etree::Coloring::table(arity, sigma, std::move(rows));
}

}  // namespace gen
