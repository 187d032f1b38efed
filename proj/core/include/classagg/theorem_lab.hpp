#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "classagg/search.hpp"

namespace classagg {

/// Category vectors r^i (first i entries `high`, the rest `low`) and l^i
/// (first i entries `low`, the rest `high`) for i = 0..n.
struct PivotalLadder {
  Category low;
  Category high;
  std::vector<CategoryVector> r;
  std::vector<CategoryVector> l;

  static PivotalLadder build(int n, Category low, Category high);
};

enum class ExtractionMethod { Pivotal, Exhaustive };

struct LadderStep {
  int index = 0;  // i in r^i
  CategoryVector vector;
  Category output;
};

struct ProfileStep {
  std::string label;
  Profile profile;
  std::vector<Category> aggregate;
};

struct DictatorReport {
  int individual = 0;  // zero-based
  CategoryPermutation pi = CategoryPermutation::identity(2);
  ExtractionMethod method = ExtractionMethod::Pivotal;
  bool verified = false;
  std::vector<LadderStep> ladder;
  std::vector<ProfileStep> trace;
  /// Number of claim-2 profiles checked (the trace keeps only the first few).
  std::uint64_t profiles_checked = 0;
};

/// p_i -> alpha_{x_i}(p_i, ..., p_i). Requires a valid, citizen sovereign CAF
/// with m > rho. Confirms the map is a bijection and that every object maps
/// (p, ..., p) to pi(p).
/// Errors: PreconditionFailed, NotABijection, VerificationFailed.
CategoryPermutation compute_pi(const IndependentCaf& caf);

namespace lemma {

/// Objects x_1..x_rho carry their own category; the rest carry k_{x,r}.
struct Step1 {
  Category r;
};
/// Object x_i (i < rho) carries k_{x_i,r}, object x_j (j >= rho) carries (p_i, ..., p_i).
struct Step2 {
  Category r;
  int i = 0;
  int j = 0;
};
/// i != j < rho: x_i carries k_{x_i,r}, x_j carries p_i, x_{rho+1} carries p_j.
struct Step3 {
  Category r;
  int i = 0;
  int j = 0;
};
/// Objects x and y carry r and r_prime, where {r_k, r_prime_k} = {p, q} for every k.
struct Claim1 {
  CategoryVector r;
  CategoryVector r_prime;
  int x = 0;
  int y = 1;
  Category p;
  Category q;
};
/// x_1 carries t (with t[d] = p_1), x_2 carries l^{d-1}, x_3 carries r^d.
struct Claim2 {
  CategoryVector t;
  int d = 0;  // zero-based
};

}  // namespace lemma

using LemmaStage = std::variant<lemma::Step1, lemma::Step2, lemma::Step3, lemma::Claim1, lemma::Claim2>;

/// The profiles used by the constructive arguments. Every returned profile
/// consists of surjective classifications.
/// Errors: PreconditionFailed, NoWitness.
Profile build_lemma_profile(const IndependentCaf& caf, const LemmaStage& stage);

/// Reorders objects: result.table(j) = caf.table(order[j]).
IndependentCaf reorder_objects(const IndependentCaf& caf, std::span<const int> order);

/// Finds the pivotal individual on the r^i ladder at x_3, repeats the
/// argument for every (object, category) pair by relabeling, and verifies
/// alpha_x(t) = pi(t(d)) for every object and vector.
/// With m == rho the claim-2 profiles are skipped and with two objects the
/// ladder runs on x_2; the exhaustive check of statement (3) still decides.
/// Errors: VerificationFailed.
DictatorReport extract_dictator_pivotal(const IndependentCaf& caf);

enum class Claim { Thm1, Coro1, Coro2, Prop1, Thm2 };

std::string_view to_string(Claim claim) noexcept;
/// Errors: SchemaError.
Claim parse_claim(std::string_view text);

/// Throws HypothesisViolated unless params satisfy the claim's hypotheses.
void check_hypotheses(Claim claim, const Params& params);

struct VerifyOptions {
  std::uint64_t budget = kDefaultSearchBudget;
  int workers = 1;
  bool prune_category_symmetry = false;
  /// Runs extract_dictator_pivotal on every essential dictatorship found.
  bool cross_check_pivotal = true;
};

struct TheoremVerdict {
  Claim claim = Claim::Thm1;
  Params params;
  bool holds = false;
  std::optional<IndependentCaf> counterexample;
  SearchReport search;
  std::uint64_t dictatorship_count = 0;
  std::uint64_t essential_dictatorship_count = 0;
  std::uint64_t other_count = 0;
  /// Proposition 1: 2^(2^n - 2) and whether the emitted set equals the dual-pair family.
  std::optional<std::uint64_t> expected_count;
  std::optional<bool> characterization_matches;
  std::uint64_t pivotal_checked = 0;
  std::uint64_t pivotal_agreements = 0;
  double elapsed_ms = 0.0;
};

/// Errors: HypothesisViolated, BudgetExceeded.
TheoremVerdict verify_claim(Claim claim, const Params& params, const VerifyOptions& options = {});

/// The table r -> complement(alpha(complement r)) for rho = 2.
ElementaryCaf dual_table(const ElementaryCaf& table);

}  // namespace classagg
