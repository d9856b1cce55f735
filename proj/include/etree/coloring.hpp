#pragma once

// Colorings of node tuples (embedded sequences, or arbitrary tuples for the
// primed relation). A coloring is a value: copies share immutable state.

#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "etree/embedding.hpp"
#include "etree/eseq.hpp"
#include "etree/tree_io.hpp"

namespace etree {

using Color = std::uint64_t;

// Fixed tuple length, or every finite length.
class Arity {
 public:
  static Arity all() { return Arity(); }
  static Arity exactly(std::size_t n) {
    Arity a;
    a.n_ = n;
    return a;
  }
  bool is_all() const { return !n_.has_value(); }
  std::size_t value() const { return n_.value(); }
  bool accepts(std::size_t n) const { return !n_ || *n_ == n; }
  std::string to_string() const { return n_ ? std::to_string(*n_) : "all"; }
  friend bool operator==(const Arity&, const Arity&) = default;

 private:
  std::optional<std::size_t> n_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_nodes(std::uint64_t seed, std::span<const Node> nodes) {
  std::uint64_t h = splitmix64(seed);
  for (Node v : nodes) h = splitmix64(h ^ (std::uint64_t{v} + 1));
  return splitmix64(h ^ (nodes.size() << 32));
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

class Coloring {
 public:
  enum class Kind { table, simtype, level, seeded_hash, coherent, custom };
  using Table = std::map<std::vector<Node>, Color>;
  using Rule = std::function<Color(const ExpandedTree&, std::span<const Node>)>;

  static Coloring table(Arity arity, Color sigma, Table rows) {
    for (const auto& [k, c] : rows) {
      if (!arity.accepts(k.size())) throw std::invalid_argument("table row of the wrong arity");
      if (c >= sigma) throw std::invalid_argument("table color out of range");
    }
    Coloring out(Kind::table, arity, sigma);
    out.table_ = std::make_shared<const Table>(std::move(rows));
    return out;
  }

  // Color depends only on the similarity type (closure type plus positions).
  static Coloring simtype(Arity arity, Color sigma) { return {Kind::simtype, arity, sigma}; }

  // Sum of the levels of the entries, modulo sigma.
  static Coloring level(Arity arity, Color sigma) { return {Kind::level, arity, sigma}; }

  static Coloring seeded_hash(Arity arity, Color sigma, std::uint64_t seed) {
    Coloring out(Kind::seeded_hash, arity, sigma);
    out.seed_ = seed;
    return out;
  }

  // Color determines the similarity type; within a type it is a seeded hash
  // (modulo `quotient`) of the entries lying below the top level of the tuple.
  static Coloring coherent(Arity arity, std::uint64_t seed, Color quotient) {
    if (quotient < 1 || quotient > 256) throw std::invalid_argument("quotient must be in [1, 256]");
    Coloring out(Kind::coherent, arity, Color{1} << 40);
    out.seed_ = seed;
    out.quotient_ = quotient;
    return out;
  }

  static Coloring custom(Arity arity, Color sigma, Rule rule) {
    Coloring out(Kind::custom, arity, sigma);
    out.rule_ = std::make_shared<const Rule>(std::move(rule));
    return out;
  }

  Kind kind() const { return kind_; }
  const Arity& arity() const { return arity_; }
  Color sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  Color quotient() const { return quotient_; }
  const Table& rows() const {
    if (!table_) throw std::logic_error("not a table coloring");
    return *table_;
  }

  Color operator()(const ExpandedTree& t, std::span<const Node> nodes) const {
    if (!arity_.accepts(nodes.size()))
      throw std::invalid_argument("arity mismatch: coloring of arity " + arity_.to_string() +
                                  " applied to a tuple of length " + std::to_string(nodes.size()));
    switch (kind_) {
      case Kind::table: {
        auto it = table_->find(std::vector<Node>(nodes.begin(), nodes.end()));
        if (it == table_->end()) throw std::domain_error("table coloring is not total");
        return it->second;
      }
      case Kind::simtype:
        return detail::fnv1a(sim_type(t, nodes).to_string()) % sigma_;
      case Kind::level: {
        std::uint64_t s = 0;
        for (Node v : nodes) s += t.level(v);
        return s % sigma_;
      }
      case Kind::seeded_hash:
        return detail::hash_nodes(seed_, nodes) % sigma_;
      case Kind::coherent: {
        const Color type = detail::fnv1a(sim_type(t, nodes).to_string()) & 0xffffffffULL;
        std::uint32_t top = 0;
        for (Node v : nodes) top = std::max(top, t.level(v));
        std::vector<Node> lower;
        for (Node v : nodes)
          if (t.level(v) < top) lower.push_back(v);
        return (type << 8) | (detail::hash_nodes(seed_, lower) % quotient_);
      }
      case Kind::custom:
        return (*rule_)(t, nodes);
    }
    throw std::logic_error("unknown coloring kind");
  }

  // c o g on the source tree of g.
  Coloring pullback(const Embedding& g) const {
    auto base = std::make_shared<const Coloring>(*this);
    return custom(arity_, sigma_, [base, g](const ExpandedTree&, std::span<const Node> nodes) {
      return (*base)(*g.target, g.apply(nodes));
    });
  }

 private:
  Coloring(Kind kind, Arity arity, Color sigma) : kind_(kind), arity_(arity), sigma_(sigma) {
    if (sigma < 1) throw std::invalid_argument("sigma must be at least 1");
  }

  Kind kind_;
  Arity arity_;
  Color sigma_;
  std::uint64_t seed_ = 0;
  Color quotient_ = 1;
  std::shared_ptr<const Table> table_;
  std::shared_ptr<const Rule> rule_;
};

inline const char* to_string(Coloring::Kind k) {
  switch (k) {
    case Coloring::Kind::table: return "table";
    case Coloring::Kind::simtype: return "simtype";
    case Coloring::Kind::level: return "level";
    case Coloring::Kind::seeded_hash: return "seeded-hash";
    case Coloring::Kind::coherent: return "coherent";
    case Coloring::Kind::custom: return "custom";
  }
  return "?";
}

// Text format:
//
//   coloring 1
//   arity <n|all>
//   sigma <sigma>
//   kind <table|simtype|level|seeded-hash|coherent>
//   seed <u64>                       (seeded-hash, coherent)
//   quotient <q>                     (coherent)
//   rows <count>                     (table)
//   <color> : <node> <node> ...      (table, one per row)
inline void store_coloring(std::ostream& out, const Coloring& c) {
  if (c.kind() == Coloring::Kind::custom)
    throw std::invalid_argument("custom colorings have no file form");
  out << "coloring 1\n"
      << "arity " << c.arity().to_string() << "\n"
      << "sigma " << c.sigma() << "\n"
      << "kind " << to_string(c.kind()) << "\n";
  if (c.kind() == Coloring::Kind::seeded_hash || c.kind() == Coloring::Kind::coherent)
    out << "seed " << c.seed() << "\n";
  if (c.kind() == Coloring::Kind::coherent) out << "quotient " << c.quotient() << "\n";
  if (c.kind() == Coloring::Kind::table) {
    out << "rows " << c.rows().size() << "\n";
    for (const auto& [nodes, color] : c.rows()) {
      out << color << " :";
      for (Node v : nodes) out << ' ' << v;
      out << '\n';
    }
  }
}

inline Coloring load_coloring(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "coloring 1")
    throw format_error("missing 'coloring 1' header");
  const auto arity_tok = detail::expect_keyed_line(in, "arity");
  const Arity arity = arity_tok == "all" ? Arity::all()
                                         : Arity::exactly(detail::parse_count(arity_tok, "arity"));
  const Color sigma = detail::parse_count(detail::expect_keyed_line(in, "sigma"), "sigma");
  const auto kind = detail::expect_keyed_line(in, "kind");
  if (kind == "simtype") return Coloring::simtype(arity, sigma);
  if (kind == "level") return Coloring::level(arity, sigma);
  if (kind == "seeded-hash")
    return Coloring::seeded_hash(arity, sigma,
                                 detail::parse_count(detail::expect_keyed_line(in, "seed"), "seed"));
  if (kind == "coherent") {
    const auto seed = detail::parse_count(detail::expect_keyed_line(in, "seed"), "seed");
    const auto q = detail::parse_count(detail::expect_keyed_line(in, "quotient"), "quotient");
    return Coloring::coherent(arity, seed, q);
  }
  if (kind == "table") {
    const auto count = detail::parse_count(detail::expect_keyed_line(in, "rows"), "rows");
    Coloring::Table rows;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw format_error("truncated table");
      std::istringstream ls(line);
      std::string color, colon, tok;
      if (!(ls >> color >> colon) || colon != ":") throw format_error("malformed row '" + line + "'");
      std::vector<Node> nodes;
      while (ls >> tok) nodes.push_back(detail::parse_u32(tok, "node"));
      if (!rows.emplace(std::move(nodes), detail::parse_count(color, "color")).second)
        throw format_error("duplicate table row '" + line + "'");
    }
    return Coloring::table(arity, sigma, std::move(rows));
  }
  throw format_error("unknown coloring kind '" + kind + "'");
}

}  // namespace etree
