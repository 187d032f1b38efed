#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "classagg/caf.hpp"

namespace classagg {

enum class Axiom {
  Validity,
  Unanimity,
  CitizenSovereignty,
  Independence,
};

std::string_view to_string(Axiom axiom) noexcept;

/// A profile on which the independent tuple produces a non-surjective aggregate.
struct NonSurjectiveAggregate {
  Profile profile;
  std::vector<Category> aggregate;
};

/// alpha(c, ..., c) != c.
struct UnanimityViolation {
  Classification input;
  std::vector<Category> output;
};

/// Two profiles agreeing on the column of `object` whose aggregates disagree there.
struct IndependenceViolation {
  int object = 0;
  Profile first;
  Profile second;
  Category first_output;
  Category second_output;
};

/// No profile sends `object` to `category`.
struct SovereigntyGap {
  int object = 0;
  Category category;
};

struct SovereigntyWitness {
  int object = 0;
  Category category;
  Profile profile;
};

using Witness =
    std::variant<std::monostate, NonSurjectiveAggregate, UnanimityViolation, IndependenceViolation, SovereigntyGap>;

struct AxiomReport {
  Axiom axiom = Axiom::Validity;
  bool pass = false;
  /// Always set when pass is false.
  Witness witness;
  /// Citizen sovereignty pass: one profile per (object, category), object-major.
  std::vector<SovereigntyWitness> sovereignty_witnesses;
  /// Independence pass: the per-object tables the rule induces.
  std::optional<IndependentCaf> induced;
};

struct DictatorMatch {
  int individual = 0;  // zero-based
  CategoryPermutation pi;

  bool operator==(const DictatorMatch&) const = default;
};

struct CheckOptions {
  std::uint64_t max_profiles = kDefaultMaxProfiles;
};

/// Every profile maps to a surjective aggregate. Fail carries the first
/// offending profile in enumeration order. Errors: BudgetExceeded.
AxiomReport check_validity(const IndependentCaf& caf, const CheckOptions& options = {});

AxiomReport check_unanimity(const IndependentCaf& caf);
AxiomReport check_unanimity(const GeneralCaf& caf);

/// For independent CAFs witnesses are found column-first (the smallest
/// vector k with alpha_x(k) = p) and then extended to a profile by giving
/// each individual the smallest classification through its entry of k.
AxiomReport check_citizen_sovereignty(const IndependentCaf& caf);
/// Errors: BudgetExceeded.
AxiomReport check_citizen_sovereignty(const GeneralCaf& caf, const CheckOptions& options = {});

/// Buckets all |C|^n profiles by column. Errors: BudgetExceeded.
AxiomReport check_independence(const GeneralCaf& caf, const CheckOptions& options = {});
AxiomReport check_independence(const IndependentCaf& caf, const CheckOptions& options = {});

/// The permutation pi with alpha(c, ..., c) = pi ∘ c for all c, if one exists.
std::optional<CategoryPermutation> check_generalized_unanimity(const IndependentCaf& caf);
std::optional<CategoryPermutation> check_generalized_unanimity(const GeneralCaf& caf);

/// The unique (d, pi) with alpha(c) = pi ∘ c_d on every profile, if any.
/// Confirmed on the full profile space. Errors: BudgetExceeded.
std::optional<DictatorMatch> check_essential_dictatorship(const IndependentCaf& caf,
                                                          const CheckOptions& options = {});
std::optional<DictatorMatch> check_essential_dictatorship(const GeneralCaf& caf,
                                                          const CheckOptions& options = {});

/// Re-evaluates the CAF on the report's witness and confirms it exhibits the
/// reported violation (for failing reports) or the reported outputs (for
/// sovereignty passes).
bool replay_witness(const IndependentCaf& caf, const AxiomReport& report);
bool replay_witness(const GeneralCaf& caf, const AxiomReport& report);

/// Smallest (in encoding order) category vector v with table(v) == target.
std::optional<CategoryVector> smallest_vector_with_output(const ElementaryCaf& table, Category target);

/// Smallest profile whose column at `object` equals `column`. Possible
/// whenever m >= rho: each individual needs the remaining m - 1 objects to
/// cover the other rho - 1 categories.
Profile extend_column_to_profile(const Params& params, int object, const CategoryVector& column);

}  // namespace classagg
