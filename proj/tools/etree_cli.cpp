// etree_cli: builds expanded trees, runs type censuses and partition checks,
// and writes JSON Lines reports whose first record is the configuration that
// produced them.
//
// Exit codes: 0 a verdict was produced (either way), 2 a budget guard
// tripped, 1 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "etree/etree.hpp"

#ifndef ETREE_VERSION
#define ETREE_VERSION "dev"
#endif

using json = nlohmann::ordered_json;
using namespace etree;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_guard = 2;

struct Config {
  std::string command;
  std::string tree, tree2;
  std::vector<std::string> via;
  std::string relation = "arrow";
  std::uint32_t height = 0, branching = 2;
  std::string order = "lex";
  std::uint64_t seed = 0;
  std::size_t n = 1, k = 1, m = 1, j = 1, arity_cap = default_arity_cap;
  std::uint64_t sigma = 2;
  std::uint64_t budget = default_budget;
  std::string coloring;
  std::string kind = "seeded-hash";
  std::string arity = "all";
  std::uint64_t quotient = 16;
  std::uint64_t samples = 1000;
  bool exhaustive = false, strict = false, up_to = false;
  std::string format = "records";
  // not part of the embedded config
  std::string out, report;
};

json config_record(const Config& c) {
  json j = {{"record", "config"},      {"tool", "etree_cli"},  {"version", ETREE_VERSION},
            {"command", c.command},    {"tree", c.tree},       {"tree2", c.tree2},
            {"via", c.via},            {"relation", c.relation}, {"height", c.height},
            {"branching", c.branching}, {"order", c.order},    {"seed", c.seed},
            {"n", c.n},                {"k", c.k},             {"m", c.m},
            {"j", c.j},                {"arity_cap", c.arity_cap}, {"sigma", c.sigma},
            {"budget", c.budget},      {"coloring", c.coloring}, {"kind", c.kind},
            {"arity", c.arity},        {"quotient", c.quotient}, {"samples", c.samples},
            {"exhaustive", c.exhaustive}, {"strict", c.strict}, {"up_to", c.up_to},
            {"format", c.format}};
  return j;
}

Config config_from_record(const json& j) {
  if (j.value("record", "") != "config") throw std::runtime_error("first record is not a config record");
  Config c;
  c.command = j.at("command").get<std::string>();
  c.tree = j.at("tree").get<std::string>();
  c.tree2 = j.at("tree2").get<std::string>();
  c.via = j.at("via").get<std::vector<std::string>>();
  c.relation = j.at("relation").get<std::string>();
  c.height = j.at("height").get<std::uint32_t>();
  c.branching = j.at("branching").get<std::uint32_t>();
  c.order = j.at("order").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.n = j.at("n").get<std::size_t>();
  c.k = j.at("k").get<std::size_t>();
  c.m = j.at("m").get<std::size_t>();
  c.j = j.at("j").get<std::size_t>();
  c.arity_cap = j.at("arity_cap").get<std::size_t>();
  c.sigma = j.at("sigma").get<std::uint64_t>();
  c.budget = j.at("budget").get<std::uint64_t>();
  c.coloring = j.at("coloring").get<std::string>();
  c.kind = j.at("kind").get<std::string>();
  c.arity = j.at("arity").get<std::string>();
  c.quotient = j.at("quotient").get<std::uint64_t>();
  c.samples = j.at("samples").get<std::uint64_t>();
  c.exhaustive = j.at("exhaustive").get<bool>();
  c.strict = j.at("strict").get<bool>();
  c.up_to = j.at("up_to").get<bool>();
  c.format = j.at("format").get<std::string>();
  return c;
}

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Report output

class Report {
 public:
  Report(std::ostream& out, std::string format) : out_(out), format_(std::move(format)) {}

  void emit(const json& rec) {
    if (format_ == "table") {
      out_ << rec.at("record").get<std::string>();
      for (const auto& [key, value] : rec.items()) {
        if (key == "record") continue;
        out_ << "  " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump());
      }
      out_ << '\n';
    } else {
      out_ << rec.dump() << '\n';
    }
  }

 private:
  std::ostream& out_;
  std::string format_;
};

std::string hex_digest(const std::string& text) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a(text);
  return s.str();
}

// ---------------------------------------------------------------------------
// Inputs

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  try {
    return detail::parse_count(s, what);
  } catch (const format_error& e) {
    throw usage_error(e.what());
  }
}

LevelOrders orders_for(const std::string& order, std::uint32_t h, std::uint32_t b, std::uint64_t seed) {
  if (order == "lex") return lex_orders(h, b);
  if (order == "reversed") return reversed_orders(h, b);
  if (order == "seeded-shuffle") return shuffled_orders(h, b, seed);
  throw usage_error("unknown level order '" + order + "'");
}

void check_tree_size(std::uint32_t h, std::uint32_t b) {
  if (h < 1 || h > 12) throw usage_error("height must be in [1, 12]");
  if (b < 2 || b > 8) throw usage_error("branching must be in [2, 8]");
  std::uint64_t total = 0;
  for (std::uint32_t e = 0; e < h; ++e) total += detail::ipow(b, e);
  if (total > 1'000'000) throw usage_error("tree would have more than 10^6 nodes");
}

// "canonical:H:B:ORDER[:SEED]" or a tree file.
ExpandedTree load_tree_source(const std::string& src) {
  if (src.empty()) throw usage_error("a tree is required");
  if (src.rfind("canonical:", 0) == 0) {
    const auto parts = split(src, ':');
    if (parts.size() < 4 || parts.size() > 5)
      throw usage_error("inline tree must be canonical:H:B:ORDER[:SEED]");
    const auto h = static_cast<std::uint32_t>(to_u64(parts[1], "height"));
    const auto b = static_cast<std::uint32_t>(to_u64(parts[2], "branching"));
    check_tree_size(h, b);
    const std::uint64_t seed = parts.size() == 5 ? to_u64(parts[4], "seed") : 0;
    return build_canonical_tree(h, b, orders_for(parts[3], h, b, seed));
  }
  std::ifstream in(src);
  if (!in) throw std::runtime_error("cannot read tree file '" + src + "'");
  return load_tree(in);
}

// A coloring file, or inline: simtype:SIGMA, level:SIGMA, hash:SIGMA:SEED,
// coherent:SEED:QUOTIENT, const. Inline colorings take the arity the
// relation needs.
Coloring load_coloring_source(const std::string& src, Arity arity) {
  if (src.empty()) throw usage_error("a coloring is required (--coloring)");
  const auto parts = split(src, ':');
  const auto& kind = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count) throw usage_error("malformed inline coloring '" + src + "'");
  };
  if (kind == "const") {
    need(1);
    return Coloring::level(arity, 1);
  }
  if (kind == "simtype") {
    need(2);
    return Coloring::simtype(arity, to_u64(parts[1], "sigma"));
  }
  if (kind == "level") {
    need(2);
    return Coloring::level(arity, to_u64(parts[1], "sigma"));
  }
  if (kind == "hash") {
    need(3);
    return Coloring::seeded_hash(arity, to_u64(parts[1], "sigma"), to_u64(parts[2], "seed"));
  }
  if (kind == "coherent") {
    need(3);
    return Coloring::coherent(arity, to_u64(parts[1], "seed"), to_u64(parts[2], "quotient"));
  }
  std::ifstream in(src);
  if (!in) throw std::runtime_error("cannot read coloring file '" + src + "'");
  return load_coloring(in);
}

json witness_json(const std::optional<Embedding>& g) {
  if (!g) return nullptr;
  return {{"level_map", g->level_map}, {"node_map", g->node_map}};
}

json stats_json(const SearchStats& s) {
  return {{"level_maps", s.level_maps},
          {"nodes_expanded", s.nodes_expanded},
          {"prunes", s.prunes},
          {"embeddings", s.embeddings}};
}

json violation_json(const std::optional<HomogeneityViolation>& v) {
  if (!v) return nullptr;
  return {{"tuples", v->tuples}, {"colors", v->colors}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_build(const Config& c, Report& rep) {
  check_tree_size(c.height, c.branching);
  if (c.out.empty()) throw usage_error("build needs --out");
  const auto tree = build_canonical_tree(c.height, c.branching,
                                         orders_for(c.order, c.height, c.branching, c.seed));
  const auto text = tree_to_string(tree);
  write_text_file(c.out, text);
  rep.emit({{"record", "tree"},
            {"nodes", tree.node_count()},
            {"height", tree.height()},
            {"branching", tree.branching()},
            {"digest", hex_digest(text)}});
  const auto vs = validate(tree.spec(), c.strict ? Strictness::strict : Strictness::finite);
  json list = json::array();
  for (const auto& v : vs) list.push_back({{"clause", v.clause}, {"nodes", v.nodes}, {"message", v.message}});
  rep.emit({{"record", "validate"}, {"valid", vs.empty()}, {"violations", list}});
  return exit_ok;
}

int cmd_validate(const Config& c, Report& rep) {
  if (c.tree.empty()) throw usage_error("validate needs --tree");
  TreeSpec spec;
  if (c.tree.rfind("canonical:", 0) == 0) {
    spec = load_tree_source(c.tree).spec();
  } else {
    std::ifstream in(c.tree);
    if (!in) throw std::runtime_error("cannot read tree file '" + c.tree + "'");
    spec = load_tree_spec(in);
  }
  const auto vs = validate(spec, c.strict ? Strictness::strict : Strictness::finite);
  json list = json::array();
  for (const auto& v : vs) list.push_back({{"clause", v.clause}, {"nodes", v.nodes}, {"message", v.message}});
  rep.emit({{"record", "validate"}, {"valid", vs.empty()}, {"violations", list}});
  return exit_ok;
}

json census_json(const CensusReport& r) {
  json buckets = json::object();
  for (const auto& [k, v] : r.by_top_count) buckets[std::to_string(k)] = v;
  json cmp = json::array();
  for (const auto& f : r.formula_comparisons)
    cmp.push_back({{"formula", f.formula}, {"value", f.formula_value}, {"enumerated", f.enumerated}, {"agree", f.agree}});
  return {{"record", "census"},       {"n", r.n},
          {"total_types", r.total_types}, {"by_top_count", buckets},
          {"bound_ok", r.bound_ok},   {"lower_ok", r.lower_ok},
          {"eseq_count", r.eseq_count}, {"candidates", r.candidates},
          {"complete", r.complete},   {"saturated", r.saturated},
          {"comparisons", cmp}};
}

int cmd_census(const Config& c, Report& rep) {
  if (c.n > 8) throw usage_error("n must be at most 8");
  const auto tree = load_tree_source(c.tree);
  rep.emit({{"record", "tree"}, {"nodes", tree.node_count()}, {"height", tree.height()},
            {"digest", hex_digest(tree_to_string(tree))}});
  const auto table = formula_vs_enumeration(tree, c.n, c.budget);
  for (const auto& r : table.censuses) rep.emit(census_json(r));
  if (table.complete) {
    for (const auto& row : m_bullet_bound_check(tree, c.n, c.budget)) {
      rep.emit({{"record", "m_bullet"},
                {"n", row.n},
                {"value", row.value},
                {"step_bound", row.step_bound ? json(*row.step_bound) : json(nullptr)},
                {"step_ok", row.step_ok},
                {"closed_bound", row.closed_bound},
                {"closed_ok", row.closed_ok}});
    }
    for (const auto& r : table.records) {
      json rules = json::array();
      for (const auto& rule : r.rules)
        rules.push_back({{"rule", rule.rule}, {"value", rule.value}, {"experimental", rule.experimental}});
      rep.emit({{"record", "verdict"},
                {"n", r.n},
                {"k", r.k},
                {"enumerated", r.enumerated},
                {"rules", rules},
                {"verdict", r.verdict},
                {"matching_rules", r.matching_rules}});
    }
  }
  rep.emit({{"record", "summary"},
            {"complete", table.complete},
            {"tree_limited", table.tree_limited},
            {"n_max", table.n_max}});
  return table.complete ? exit_ok : exit_guard;
}

int cmd_check(const Config& c, Report& rep) {
  if (c.arity_cap < 1 || c.arity_cap > 6) throw usage_error("arity cap must be in [1, 6]");
  if (c.n < 1 || c.n > 6) throw usage_error("n must be in [1, 6]");
  const auto t1 = load_tree_source(c.tree);
  const auto t2 = load_tree_source(c.tree2);
  rep.emit({{"record", "trees"},
            {"tree", hex_digest(tree_to_string(t1))},
            {"tree2", hex_digest(tree_to_string(t2))}});
  SearchStats stats;
  json rec = {{"record", "check"}, {"relation", c.relation}};

  if (c.relation == "arrow") {
    const auto col = load_coloring_source(c.coloring, Arity::exactly(c.n));
    rec["witness"] = witness_json(check_arrow(t1, t2, c.n, col, &stats));
  } else if (c.relation == "arrow-prime") {
    const auto col = load_coloring_source(c.coloring, c.up_to ? Arity::all() : Arity::exactly(c.n));
    rec["witness"] = witness_json(check_arrow_prime(t1, t2, c.n, col, c.up_to, &stats));
    rec["up_to"] = c.up_to;
  } else if (c.relation == "end") {
    const auto col = load_coloring_source(c.coloring, Arity::all());
    rec["witness"] = witness_json(check_end_k(t1, t2, c.k, col, c.arity_cap, &stats));
    rec["arity_cap"] = c.arity_cap;
  } else if (c.relation == "end-km") {
    const auto col = load_coloring_source(c.coloring, Arity::all());
    rec["witness"] = witness_json(check_end_k_m(t1, t2, c.k, c.m, col, c.arity_cap, &stats));
    rec["arity_cap"] = c.arity_cap;
  } else if (c.relation == "square") {
    const auto col = load_coloring_source(c.coloring, Arity::all());
    rec["witness"] = witness_json(
        check_square_bracket(t1, t2, c.k, c.m, c.sigma, c.j, col, c.arity_cap, &stats));
    rec["arity_cap"] = c.arity_cap;
  } else if (c.relation == "all-colorings") {
    AllColoringsOptions opts;
    opts.budget = c.budget;
    opts.allow_sampling = !c.exhaustive;
    opts.samples = c.samples;
    opts.seed = c.seed;
    AllColoringsResult r;
    try {
      r = check_arrow_all_colorings(t1, t2, c.n, c.sigma, opts);
    } catch (const budget_exceeded& e) {
      rep.emit({{"record", "guard"}, {"message", e.what()}});
      return exit_guard;
    }
    rec["holds"] = r.holds;
    rec["sampled"] = r.sampled;
    rec["colorings_checked"] = r.colorings_checked;
    json rows = nullptr;
    if (r.counterexample) {
      rows = json::array();
      for (const auto& [nodes, color] : r.counterexample->rows())
        rows.push_back({{"nodes", nodes}, {"color", color}});
    }
    rec["counterexample"] = rows;
    stats = r.stats;
  } else if (c.relation == "chain") {
    std::vector<ExpandedTree> owned;
    owned.reserve(c.via.size() + 2);
    owned.push_back(t2);
    for (const auto& v : c.via) owned.push_back(load_tree_source(v));
    owned.push_back(t1);
    std::vector<const ExpandedTree*> trees;
    for (const auto& t : owned) trees.push_back(&t);
    const auto col = load_coloring_source(c.coloring, Arity::all());
    const auto chain = build_homogeneous_chain(trees, c.m, col, c.arity_cap, &stats);
    rec["k"] = trees.size() - 1;
    rec["arity_cap"] = c.arity_cap;
    rec["links_found"] = chain.has_value();
    if (chain) {
      json links = json::array();
      for (const auto& l : *chain) links.push_back(witness_json(l.embedding));
      rec["links"] = links;
      const auto v = compose_homogeneous_chain(*chain, trees.size() - 1, c.m, col, c.arity_cap);
      rec["pass"] = v.pass;
      rec["links_ok"] = v.links_ok;
      rec["end_ok"] = v.end_ok;
      rec["le_m_ok"] = v.le_m_ok;
      rec["composed"] = witness_json(v.composed);
      rec["violation"] = violation_json(v.violation);
    }
  } else {
    throw usage_error("unknown relation '" + c.relation + "'");
  }
  rec["stats"] = stats_json(stats);
  rep.emit(rec);
  return exit_ok;
}

int cmd_coloring(const Config& c, Report& rep) {
  if (c.out.empty()) throw usage_error("coloring needs --out");
  const Arity arity = c.arity == "all" ? Arity::all() : Arity::exactly(to_u64(c.arity, "arity"));
  std::optional<Coloring> col;
  if (c.kind == "simtype") col = Coloring::simtype(arity, c.sigma);
  else if (c.kind == "level") col = Coloring::level(arity, c.sigma);
  else if (c.kind == "seeded-hash") col = Coloring::seeded_hash(arity, c.sigma, c.seed);
  else if (c.kind == "coherent") col = Coloring::coherent(arity, c.seed, c.quotient);
  else if (c.kind == "random-table") {
    // explicit seeded table over eseq of the given tree
    const auto tree = load_tree_source(c.tree);
    if (c.sigma < 1) throw usage_error("sigma must be at least 1");
    std::mt19937_64 rng(c.seed);
    Coloring::Table rows;
    const std::size_t lo = arity.is_all() ? 1 : arity.value();
    const std::size_t hi = arity.is_all() ? c.arity_cap : arity.value();
    for (std::size_t len = lo; len <= hi; ++len)
      for_each_eseq(tree, len, [&](std::span<const Node> s) {
        rows.emplace(std::vector<Node>(s.begin(), s.end()), rng() % c.sigma);
      });
    col = Coloring::table(arity, c.sigma, std::move(rows));
  } else {
    throw usage_error("unknown coloring kind '" + c.kind + "'");
  }
  std::ostringstream text;
  store_coloring(text, *col);
  write_text_file(c.out, text.str());
  json rec = {{"record", "coloring"},
              {"kind", to_string(col->kind())},
              {"arity", col->arity().to_string()},
              {"sigma", col->sigma()},
              {"digest", hex_digest(text.str())}};
  if (col->kind() == Coloring::Kind::table) rec["rows"] = col->rows().size();
  rep.emit(rec);
  return exit_ok;
}

int run(const Config& c, std::ostream& out) {
  Report rep(out, c.format);
  rep.emit(config_record(c));
  if (c.command == "build") return cmd_build(c, rep);
  if (c.command == "validate") return cmd_validate(c, rep);
  if (c.command == "census") return cmd_census(c, rep);
  if (c.command == "check") return cmd_check(c, rep);
  if (c.command == "coloring") return cmd_coloring(c, rep);
  throw usage_error("unknown command '" + c.command + "'");
}

// Re-runs the configuration embedded in a report and compares the bytes.
int cmd_replay(const std::string& path, std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read report '" + path + "'");
  const std::string original((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = original.substr(0, original.find('\n'));
  Config c = config_from_record(json::parse(first));
  if (c.format != "records") throw usage_error("only record-format reports can be replayed");
  std::filesystem::path scratch;
  if (c.command == "build" || c.command == "coloring") {
    scratch = std::filesystem::temp_directory_path() /
              ("etree_replay_" + std::to_string(std::hash<std::string>{}(path)) + ".txt");
    c.out = scratch.string();
  }
  std::ostringstream again;
  const int code = run(c, again);
  if (!scratch.empty()) std::filesystem::remove(scratch);
  const bool same = again.str() == original;
  out << json({{"record", "replay"}, {"report", path}, {"identical", same}, {"exit", code}}).dump() << '\n';
  return same ? exit_ok : exit_error;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expanded trees: construction, type census and partition checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ETREE_VERSION);
  Config c;
  std::string replay_path;

  if (const char* env = std::getenv("ETREE_BUDGET")) {
    try {
      c.budget = detail::parse_count(env, "ETREE_BUDGET");
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return exit_error;
    }
  }

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Output path");
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"records", "table"}));
  };

  auto* build = app.add_subcommand("build", "Build a canonical tree file");
  build->add_option("--height", c.height, "Number of levels")->required()->check(CLI::Range(1u, 12u));
  build->add_option("--branching", c.branching, "Branching degree")->check(CLI::Range(2u, 8u));
  build->add_option("--order", c.order, "Level orders")
      ->check(CLI::IsMember({"lex", "reversed", "seeded-shuffle"}));
  build->add_option("--seed", c.seed, "Shuffle seed");
  build->add_flag("--strict", c.strict, "Validate the infinite-tree axioms too");
  build->add_option("--report", c.report, "Report path (default stdout)");
  common(build);

  auto* val = app.add_subcommand("validate", "List axiom violations of a tree file");
  val->add_option("--tree", c.tree, "Tree file or canonical:H:B:ORDER[:SEED]")->required();
  val->add_flag("--strict", c.strict, "Validate the infinite-tree axioms too");
  common(val);

  auto* cen = app.add_subcommand("census", "Similarity-type census and formula verdicts");
  cen->add_option("--tree", c.tree, "Tree file or canonical:H:B:ORDER[:SEED]")->required();
  cen->add_option("--n", c.n, "Largest sequence length")->check(CLI::Range(0, 8));
  cen->add_option("--budget", c.budget, "Enumeration budget (candidate tuples)");
  common(cen);

  auto* chk = app.add_subcommand("check", "Partition relation checks");
  chk->add_option("--relation", c.relation, "Relation")
      ->check(CLI::IsMember({"arrow", "arrow-prime", "end", "end-km", "square", "all-colorings", "chain"}));
  chk->add_option("--tree", c.tree, "Host tree T1 (top of a chain)")->required();
  chk->add_option("--tree2", c.tree2, "Embedded tree T2 (bottom of a chain)")->required();
  chk->add_option("--via", c.via, "Intermediate chain trees, bottom to top");
  chk->add_option("--n", c.n, "Tuple length");
  chk->add_option("--k", c.k, "Levels exempt from agreement");
  chk->add_option("--m", c.m, "Bound on pinned entries");
  chk->add_option("--sigma", c.sigma, "Number of colors")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  chk->add_option("--j", c.j, "Colors allowed per class (square bracket)");
  chk->add_option("--arity-cap", c.arity_cap, "Largest arity for end variants");
  chk->add_option("--budget", c.budget, "Colorings allowed in an exhaustive sweep");
  chk->add_option("--samples", c.samples, "Sampled colorings when over budget");
  chk->add_option("--seed", c.seed, "Sampling seed");
  chk->add_flag("--exhaustive", c.exhaustive, "Fail instead of sampling when over budget");
  chk->add_flag("--up-to", c.up_to, "Primed arrow for every arity up to n");
  chk->add_option("--coloring", c.coloring, "Coloring file or inline kind");
  common(chk);

  auto* col = app.add_subcommand("coloring", "Write a coloring file");
  col->add_option("--kind", c.kind, "Coloring kind")
      ->check(CLI::IsMember({"simtype", "level", "seeded-hash", "coherent", "random-table"}));
  col->add_option("--arity", c.arity, "Tuple length or 'all'");
  col->add_option("--sigma", c.sigma, "Number of colors");
  col->add_option("--seed", c.seed, "Seed");
  col->add_option("--quotient", c.quotient, "Quotient for coherent colorings");
  col->add_option("--tree", c.tree, "Tree for random-table colorings");
  col->add_option("--arity-cap", c.arity_cap, "Longest tuples for random-table with arity all");
  col->add_option("--report", c.report, "Report path (default stdout)");
  common(col);

  auto* rep = app.add_subcommand("replay", "Re-run a report's embedded config and compare bytes");
  rep->add_option("--report", replay_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_error;
  }

  try {
    if (rep->parsed()) return cmd_replay(replay_path, std::cout);
    c.command = app.get_subcommands().front()->get_name();
    const std::string& report_path = (c.command == "build" || c.command == "coloring") ? c.report : c.out;
    if (report_path.empty()) return run(c, std::cout);
    std::ostringstream buf;
    const int code = run(c, buf);
    write_text_file(report_path, buf.str());
    return code;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return exit_error;
}
