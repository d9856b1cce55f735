#pragma once

// Census of similarity types of embedded sequences, and the adjudication of
// the closed-form bounds and recurrences for the type counts against
// enumeration.
//
//   m_bullet(n)  number of types of length-n embedded sequences
//   m_star(n, k) number of those types with exactly k entries on the top level

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "etree/eseq.hpp"

namespace etree {

inline constexpr std::uint64_t default_budget = 10'000'000;

struct FormulaComparison {
  std::string formula;
  std::uint64_t formula_value = 0;
  std::uint64_t enumerated = 0;
  bool agree = false;
};

struct CensusReport {
  std::size_t n = 0;
  std::uint64_t total_types = 0;
  std::map<std::size_t, std::uint64_t> by_top_count;
  bool bound_ok = false;  // total <= 2^(2n^2+n)
  bool lower_ok = false;  // total >= n
  std::vector<FormulaComparison> formula_comparisons;
  std::uint64_t eseq_count = 0;
  std::uint64_t candidates = 0;
  bool complete = true;   // false: budget exhausted, counts are partial
  bool saturated = true;  // tree weakly saturated for tuples of length n
};

namespace detail {

// 2^(2n^2+n), or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> type_upper_bound(std::size_t n) {
  const std::size_t e = 2 * n * n + n;
  if (e >= 64) return std::nullopt;
  return std::uint64_t{1} << e;
}

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

// Closed-form bound 4^(n-1) (n-1)! on m_bullet(n), n >= 1.
inline std::uint64_t m_bullet_closed_bound(std::size_t n) {
  if (n == 0) return 1;
  return detail::ipow(4, static_cast<std::uint32_t>(n - 1)) * detail::factorial(n - 1);
}

struct MStarRule {
  std::string rule;
  std::uint64_t value = 0;
  bool experimental = false;
};

struct MStarResult {
  enum class Status { value, conflict, inapplicable };
  Status status = Status::inapplicable;
  std::optional<std::uint64_t> value;  // set when status == value
  std::vector<MStarRule> rules;        // every applicable rule, established first
};

using MStarTable = std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>;

inline const char* to_string(MStarResult::Status s) {
  switch (s) {
    case MStarResult::Status::value: return "value";
    case MStarResult::Status::conflict: return "conflict";
    case MStarResult::Status::inapplicable: return "inapplicable";
  }
  return "?";
}

// Evaluates every rule for m_star(n, k) that applies. Established rules:
//   base          m*(1,1) = 1, m*(1,0) = 0, m*(0,k) = 0
//   diagonal      n = k >= 1            => 1
//   sparse        2k-1 > n >= k >= 1    => 0
//   k1-recurrence m*(n+1,1) = sum_{k in [1,n]} 2k m*(n,k),  n >= 1
// Experimental (reported, never part of the status):
//   general-verbatim  m*(n+k,k) = sum over l,l0,l1,l2 in [0,n), l = l0+l1+l2 of
//                     l! C(l,l1) C(l-l1,l2) 2^l m*(n,l),  n > k >= 1
//   general-prose     the same sum restricted to l1 + 2 l2 = k
// Lower values referenced by a rule must be present in `lower`.
inline MStarResult m_star_formula(std::size_t n, std::size_t k, const MStarTable& lower) {
  MStarResult out;
  auto need = [&](std::size_t a, std::size_t b) -> std::uint64_t {
    auto it = lower.find({a, b});
    if (it == lower.end())
      throw std::out_of_range("missing lower value m*(" + std::to_string(a) + "," +
                              std::to_string(b) + ")");
    return it->second;
  };

  if (n == 0) out.rules.push_back({"base", 0, false});
  if (n == 1 && k <= 1) out.rules.push_back({"base", k == 1 ? 1u : 0u, false});
  if (n == k && k >= 1) out.rules.push_back({"diagonal", 1, false});
  if (k >= 1 && n >= k && 2 * k - 1 > n) out.rules.push_back({"sparse", 0, false});
  if (k == 1 && n >= 2) {
    std::uint64_t sum = 0;
    for (std::size_t j = 1; j <= n - 1; ++j) sum += 2 * j * need(n - 1, j);
    out.rules.push_back({"k1-recurrence", sum, false});
  }

  // n = base + k with base > k >= 1.
  if (k >= 1 && n > 2 * k) {
    const std::size_t base = n - k;
    std::uint64_t verbatim = 0, prose = 0;
    for (std::size_t l0 = 0; l0 < base; ++l0)
      for (std::size_t l1 = 0; l1 < base; ++l1)
        for (std::size_t l2 = 0; l2 < base; ++l2) {
          const std::size_t l = l0 + l1 + l2;
          if (l >= base) continue;
          const std::uint64_t term = detail::factorial(l) * detail::binomial(l, l1) *
                                     detail::binomial(l - l1, l2) * (std::uint64_t{1} << l) *
                                     need(base, l);
          verbatim += term;
          if (l1 + 2 * l2 == k) prose += term;
        }
    out.rules.push_back({"general-verbatim", verbatim, true});
    out.rules.push_back({"general-prose", prose, true});
  }

  std::optional<std::uint64_t> v;
  bool conflict = false;
  for (const auto& r : out.rules) {
    if (r.experimental) continue;
    if (!v)
      v = r.value;
    else if (*v != r.value)
      conflict = true;
  }
  if (!v) {
    out.status = MStarResult::Status::inapplicable;
  } else if (conflict) {
    out.status = MStarResult::Status::conflict;
  } else {
    out.status = MStarResult::Status::value;
    out.value = v;
  }
  return out;
}

// Distinct similarity types of eseq_n(T), bucketed by top-level count.
inline CensusReport census(const ExpandedTree& t, std::size_t n,
                           std::uint64_t budget = default_budget) {
  CensusReport r;
  r.n = n;
  std::unordered_map<SimilarityType, std::size_t, SimilarityTypeHash> types;
  const auto stats = for_each_eseq(
      t, n,
      [&](std::span<const Node> a) {
        auto ty = similarity_type(t, a);
        if (!types.contains(ty)) {
          const auto k = ty.top_count();
          types.emplace(std::move(ty), k);
        }
      },
      budget);
  r.eseq_count = stats.visited;
  r.candidates = stats.candidates;
  r.complete = stats.complete;
  r.total_types = types.size();
  for (const auto& [ty, k] : types) ++r.by_top_count[k];
  const auto ub = detail::type_upper_bound(n);
  r.bound_ok = !ub || r.total_types <= *ub;
  r.lower_ok = r.total_types >= n;
  r.saturated = n < 2 || is_weakly_saturated(t, n);

  if (ub) r.formula_comparisons.push_back({"upper 2^(2n^2+n)", *ub, r.total_types, r.bound_ok});
  r.formula_comparisons.push_back({"lower n", n, r.total_types, r.lower_ok});
  const auto closed = m_bullet_closed_bound(n);
  r.formula_comparisons.push_back(
      {"closed 4^(n-1)(n-1)!", closed, r.total_types, r.total_types <= closed});
  if (n <= 1)
    r.formula_comparisons.push_back({"m_bullet base", 1, r.total_types, r.total_types == 1});
  for (std::size_t k = 0; n >= 1 && k <= n; ++k) {
    // Recurrences need lower values; formula_vs_enumeration covers them.
    if ((k == 1 && n >= 2) || (k >= 1 && n > 2 * k)) continue;
    const auto rule = m_star_formula(n, k, MStarTable{});
    if (rule.status != MStarResult::Status::value) continue;
    const auto it = r.by_top_count.find(k);
    const std::uint64_t got = it == r.by_top_count.end() ? 0 : it->second;
    r.formula_comparisons.push_back(
        {"m_star(" + std::to_string(n) + "," + std::to_string(k) + ") " + rule.rules.front().rule,
         *rule.value, got, *rule.value == got});
  }
  return r;
}

struct MBulletRow {
  std::size_t n = 0;
  std::uint64_t value = 0;
  std::optional<std::uint64_t> step_bound;  // 4(n-1) m_bullet(n-1), n >= 2
  bool step_ok = true;
  std::uint64_t closed_bound = 0;
  bool closed_ok = true;
  bool complete = true;
};

// One-step bound m_bullet(n+1) <= 4n m_bullet(n) and the closed form.
inline std::vector<MBulletRow> m_bullet_bound_check(const ExpandedTree& t, std::size_t n_max,
                                                    std::uint64_t budget = default_budget) {
  std::vector<MBulletRow> rows;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto rep = census(t, n, budget);
    MBulletRow row;
    row.n = n;
    row.value = rep.total_types;
    row.complete = rep.complete;
    if (n >= 2) {
      row.step_bound = 4 * (n - 1) * rows.back().value;
      row.step_ok = row.value <= *row.step_bound;
    }
    row.closed_bound = m_bullet_closed_bound(n);
    row.closed_ok = row.value <= row.closed_bound;
    rows.push_back(row);
    if (!rep.complete) break;
  }
  return rows;
}

struct VerdictRecord {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t enumerated = 0;
  std::vector<MStarRule> rules;
  // agree | disagree | conflict | no-rule
  std::string verdict;
  std::vector<std::string> matching_rules;  // established rules equal to enumeration
};

struct VerdictTable {
  std::size_t n_max = 0;
  bool complete = true;
  bool tree_limited = false;  // not weakly saturated, or too few levels
  std::vector<CensusReport> censuses;  // index n = 0..n_max
  std::vector<VerdictRecord> records;
};

// Every (n, k) with 1 <= n <= n_max and 0 <= k <= n, enumerated m_star set
// against every applicable rule; lower values come from enumeration.
inline VerdictTable formula_vs_enumeration(const ExpandedTree& t, std::size_t n_max,
                                           std::uint64_t budget = default_budget) {
  VerdictTable table;
  table.n_max = n_max;
  table.tree_limited =
      t.height() < n_max + 1 || (n_max >= 2 && !is_weakly_saturated(t, n_max));
  MStarTable enumerated;
  for (std::size_t n = 0; n <= n_max; ++n) {
    table.censuses.push_back(census(t, n, budget));
    const auto& rep = table.censuses.back();
    if (!rep.complete) {
      table.complete = false;
      return table;
    }
    for (std::size_t k = 0; n >= 1 && k <= n; ++k) {
      auto it = rep.by_top_count.find(k);
      enumerated[{n, k}] = it == rep.by_top_count.end() ? 0 : it->second;
    }
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      VerdictRecord rec;
      rec.n = n;
      rec.k = k;
      rec.enumerated = enumerated.at({n, k});
      const auto res = m_star_formula(n, k, enumerated);
      rec.rules = res.rules;
      for (const auto& r : res.rules)
        if (!r.experimental && r.value == rec.enumerated) rec.matching_rules.push_back(r.rule);
      switch (res.status) {
        case MStarResult::Status::inapplicable: rec.verdict = "no-rule"; break;
        case MStarResult::Status::conflict: rec.verdict = "conflict"; break;
        case MStarResult::Status::value:
          rec.verdict = *res.value == rec.enumerated ? "agree" : "disagree";
          break;
      }
      table.records.push_back(std::move(rec));
    }
  }
  return table;
}

}  // namespace etree
