#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "classagg/axioms.hpp"

namespace classagg {

enum class TableConstraint {
  None,
  /// alpha_x(p, ..., p) = p for every p.
  UnanimousOnConstants,
};

std::string_view to_string(TableConstraint constraint) noexcept;

/// Axioms a search can require of emitted CAFs. Validity is always required.
struct RequiredAxioms {
  bool unanimity = false;
  bool citizen_sovereignty = false;
  bool generalized_unanimity = false;

  bool operator==(const RequiredAxioms&) const = default;
};

/// Parses a comma list of `validity`, `unanimity`, `citizen-sovereignty`
/// (or `cs`) and `generalized-unanimity` (or `gu`). Errors: SchemaError.
RequiredAxioms parse_required_axioms(std::string_view text);
std::string to_string(const RequiredAxioms& axioms);

inline constexpr std::uint64_t kDefaultSearchBudget = 1'000'000'000;
/// Upper bound on the number of candidate tables per object.
inline constexpr std::uint64_t kMaxCandidateTables = std::uint64_t{1} << 22;

struct SearchSpec {
  Params params;
  RequiredAxioms required;
  TableConstraint constraint = TableConstraint::None;
  /// Cap on candidate-profile checks performed by the search.
  std::uint64_t budget = kDefaultSearchBudget;
  bool prune_category_symmetry = false;
  int workers = 1;
};

struct CensusEntry {
  int individual = 0;  // zero-based
  CategoryPermutation pi;
  /// The matching emitted CAF, absent when exhaustion found none.
  std::optional<IndependentCaf> caf;
};

struct SearchReport {
  SearchSpec spec;
  /// Size of the candidate space covered (pruned subtrees included).
  std::uint64_t candidates_scanned = 0;
  std::uint64_t valid_count = 0;
  /// Counts among valid CAFs.
  std::uint64_t unanimity_count = 0;
  std::uint64_t sovereignty_count = 0;
  std::uint64_t generalized_unanimity_count = 0;
  /// Emitted CAFs in canonical order (lexicographic on the concatenated tables).
  std::vector<IndependentCaf> emitted;
  /// One entry per (d, pi), d-major, pi in lexicographic order.
  std::vector<CensusEntry> census;
  /// Emitted CAFs that are not essential dictatorships.
  std::uint64_t non_dictatorial_count = 0;
  std::optional<IndependentCaf> first_non_dictatorial;
  /// Work actually done.
  std::uint64_t nodes_explored = 0;
  std::uint64_t checks = 0;
  std::uint64_t first_table_representatives = 0;
  double elapsed_ms = 0.0;
};

/// All tables (subject to the constraint) in lexicographic table order.
/// Errors: BudgetExceeded when there are more than max_tables.
std::vector<ElementaryCaf> enumerate_elementary_cafs(const Params& params, TableConstraint constraint,
                                                     std::uint64_t max_tables = kMaxCandidateTables);

/// Number of candidate tuples before the validity filter; saturates at
/// UINT64_MAX.
std::uint64_t estimate_search_space(const SearchSpec& spec);

/// Exhaustive enumeration of valid independent CAFs meeting spec.required.
/// Output is identical for any worker count and with or without pruning.
/// Errors: BudgetExceeded (carrying estimate_search_space).
SearchReport enumerate_independent_cafs(const SearchSpec& spec);

/// The smallest k with caf.table(object)(k) == target. Errors: NoWitness, IndexOutOfRange.
CategoryVector find_witness_vector(const IndependentCaf& caf, int object, Category target);

/// The relabeled CAF sigma·alpha with (sigma·alpha)_x(v) = sigma(alpha_x(sigma^-1 ∘ v)).
IndependentCaf relabel_categories(const IndependentCaf& caf, const CategoryPermutation& sigma);

}  // namespace classagg
