#pragma once

// Line-oriented text format for expanded trees:
//
//   expanded-tree 1
//   height <h>
//   branching <b>
//   nodes <count>
//   <index> <parent|-> <branch-label|-> <level> <level-rank>    (one per node)
//
// store(load(text)) == text for every text produced by store().

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "etree/tree.hpp"

namespace etree {

class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void store_tree(std::ostream& out, const ExpandedTree& tree) {
  const auto& s = tree.spec();
  out << "expanded-tree 1\n"
      << "height " << tree.height() << "\n"
      << "branching " << tree.branching() << "\n"
      << "nodes " << tree.node_count() << "\n";
  for (Node v = 0; v < tree.node_count(); ++v) {
    out << v << ' ';
    if (s.parent[v] == no_node)
      out << "- -";
    else
      out << s.parent[v] << ' ' << s.branch_label[v];
    out << ' ' << s.level[v] << ' ' << s.level_rank[v] << '\n';
  }
}

inline std::string tree_to_string(const ExpandedTree& tree) {
  std::ostringstream out;
  store_tree(out, tree);
  return out.str();
}

namespace detail {

inline std::uint64_t parse_count(const std::string& tok, const std::string& what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw format_error("expected a number for " + what + ", got '" + tok + "'");
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw format_error("number out of range for " + what);
  }
}

inline std::uint32_t parse_u32(const std::string& tok, const std::string& what) {
  const auto v = parse_count(tok, what);
  if (v >= no_node) throw format_error("number out of range for " + what);
  return static_cast<std::uint32_t>(v);
}

inline std::string expect_keyed_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw format_error("missing '" + key + "' line");
  std::istringstream ls(line);
  std::string k, v, extra;
  if (!(ls >> k >> v) || k != key || (ls >> extra))
    throw format_error("expected '" + key + " <value>', got '" + line + "'");
  return v;
}

}  // namespace detail

// Parses the text format and returns the raw structure without checking the
// tree axioms (so malformed candidates can still be validated).
inline TreeSpec load_tree_spec(std::istream& in, std::uint32_t* declared_height = nullptr) {
  std::string line;
  if (!std::getline(in, line) || line != "expanded-tree 1")
    throw format_error("missing 'expanded-tree 1' header");
  const auto height = detail::parse_u32(detail::expect_keyed_line(in, "height"), "height");
  TreeSpec spec;
  spec.branching = detail::parse_u32(detail::expect_keyed_line(in, "branching"), "branching");
  const auto count = detail::parse_count(detail::expect_keyed_line(in, "nodes"), "nodes");
  if (count >= no_node) throw format_error("node count too large");
  spec.parent.resize(count);
  spec.branch_label.resize(count);
  spec.level.resize(count);
  spec.level_rank.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw format_error("truncated node list");
    std::istringstream ls(line);
    std::string idx, par, lab, lev, rank, extra;
    if (!(ls >> idx >> par >> lab >> lev >> rank) || (ls >> extra))
      throw format_error("malformed node line '" + line + "'");
    if (detail::parse_count(idx, "node index") != i)
      throw format_error("node lines must be numbered consecutively from 0");
    if ((par == "-") != (lab == "-"))
      throw format_error("node " + idx + ": parent and label must both be '-' or both set");
    spec.parent[i] = par == "-" ? no_node : detail::parse_u32(par, "parent");
    spec.branch_label[i] = lab == "-" ? no_label : detail::parse_u32(lab, "branch label");
    spec.level[i] = detail::parse_u32(lev, "level");
    spec.level_rank[i] = detail::parse_u32(rank, "level rank");
  }
  if (std::getline(in, line) && !line.empty()) throw format_error("trailing content after node list");
  if (declared_height) *declared_height = height;
  return spec;
}

inline ExpandedTree load_tree(std::istream& in) {
  std::uint32_t height = 0;
  auto tree = ExpandedTree::from_spec(load_tree_spec(in, &height));
  if (tree.height() != height)
    throw format_error("declared height " + std::to_string(height) +
                       " does not match the node levels (" + std::to_string(tree.height()) + ")");
  return tree;
}

inline ExpandedTree tree_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_tree(in);
}

}  // namespace etree
