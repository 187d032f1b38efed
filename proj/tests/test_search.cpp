#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"

using namespace classagg;

namespace {

struct Expected {
  std::uint64_t valid = 0;
  std::uint64_t unanimity = 0;
  std::uint64_t sovereignty = 0;
  std::vector<oracle::Tuple> emitted;
};

Expected brute_force(int n, int m, int rho, bool unanimous_tables, const RequiredAxioms& required) {
  Expected e;
  for (const auto& tuple : oracle::all_tuples(n, m, rho, unanimous_tables)) {
    const auto f = oracle::facts(tuple, n, m, rho);
    if (!f.valid) continue;
    ++e.valid;
    e.unanimity += f.unanimity;
    e.sovereignty += f.sovereignty;
    bool keep = (!required.unanimity || f.unanimity) && (!required.citizen_sovereignty || f.sovereignty);
    if (keep) e.emitted.push_back(tuple);
  }
  return e;
}

SearchReport run(int n, int m, int rho, bool unanimous_tables, const RequiredAxioms& required, bool prune,
                 int workers = 1) {
  SearchSpec spec{.params = Params::make(n, m, rho)};
  spec.required = required;
  spec.constraint = unanimous_tables ? TableConstraint::UnanimousOnConstants : TableConstraint::None;
  spec.prune_category_symmetry = prune;
  spec.workers = workers;
  return enumerate_independent_cafs(spec);
}

void expect_matches_oracle(int n, int m, int rho, bool unanimous_tables, const RequiredAxioms& required) {
  const auto expected = brute_force(n, m, rho, unanimous_tables, required);
  for (bool prune : {false, true}) {
    const auto report = run(n, m, rho, unanimous_tables, required, prune);
    EXPECT_EQ(report.valid_count, expected.valid);
    EXPECT_EQ(report.unanimity_count, expected.unanimity);
    EXPECT_EQ(report.sovereignty_count, expected.sovereignty);
    std::vector<oracle::Tuple> got;
    for (const auto& caf : report.emitted) got.push_back(oracle::to_tuple(caf));
    auto want = expected.emitted;
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << "prune=" << prune;
  }
}

}  // namespace

TEST(Estimate, CandidateSpace) {
  SearchSpec spec{.params = Params::make(2, 3, 2)};
  EXPECT_EQ(estimate_search_space(spec), 4096u);
  spec.constraint = TableConstraint::UnanimousOnConstants;
  EXPECT_EQ(estimate_search_space(spec), 64u);
  spec.params = Params::make(2, 3, 3);
  EXPECT_EQ(estimate_search_space(spec), oracle::power(3, 18));
  spec.params = Params::make(3, 6, 3);
  spec.constraint = TableConstraint::None;
  EXPECT_EQ(estimate_search_space(spec), UINT64_MAX);
}

TEST(EnumerateElementary, LexicographicAndConstrained) {
  const auto params = Params::make(2, 3, 2);
  const auto all = enumerate_elementary_cafs(params, TableConstraint::None);
  ASSERT_EQ(all.size(), 16u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  const auto unanimous = enumerate_elementary_cafs(params, TableConstraint::UnanimousOnConstants);
  EXPECT_EQ(unanimous.size(), 4u);
  for (const auto& t : unanimous) EXPECT_TRUE(t.unanimous_on_constants());
  EXPECT_THROW(enumerate_elementary_cafs(Params::make(2, 3, 3), TableConstraint::None, 1000), BudgetExceeded);
}

TEST(SearchOracle, ValidOnly) { expect_matches_oracle(2, 3, 2, false, {}); }
TEST(SearchOracle, CitizenSovereignty) { expect_matches_oracle(2, 3, 2, false, {.citizen_sovereignty = true}); }
TEST(SearchOracle, Unanimity) { expect_matches_oracle(2, 3, 2, false, {.unanimity = true}); }
TEST(SearchOracle, TwoObjects) { expect_matches_oracle(2, 2, 2, false, {}); }
TEST(SearchOracle, TwoObjectsUnanimous) { expect_matches_oracle(2, 2, 2, true, {.unanimity = true}); }
TEST(SearchOracle, FourObjectsUnanimous) { expect_matches_oracle(2, 4, 2, true, {.unanimity = true}); }
TEST(SearchOracle, ThreeIndividualsTwoObjects) { expect_matches_oracle(3, 2, 2, true, {}); }

TEST(Search, WorkerCountDoesNotChangeOutput) {
  const RequiredAxioms required{.citizen_sovereignty = true};
  const auto one = run(3, 3, 2, false, required, true, 1);
  for (int workers : {2, 3, 5}) {
    const auto many = run(3, 3, 2, false, required, true, workers);
    EXPECT_EQ(many.emitted, one.emitted);
    EXPECT_EQ(many.valid_count, one.valid_count);
    EXPECT_EQ(many.sovereignty_count, one.sovereignty_count);
  }
}

TEST(Search, PrunedAndUnprunedAgreeAtThreeCategories) {
  const RequiredAxioms required{.unanimity = true};
  const auto plain = run(2, 3, 3, true, required, false);
  const auto pruned = run(2, 3, 3, true, required, true);
  EXPECT_EQ(plain.valid_count, pruned.valid_count);
  EXPECT_EQ(plain.unanimity_count, pruned.unanimity_count);
  EXPECT_EQ(plain.sovereignty_count, pruned.sovereignty_count);
  EXPECT_EQ(plain.generalized_unanimity_count, pruned.generalized_unanimity_count);
  EXPECT_EQ(plain.emitted, pruned.emitted);
  EXPECT_LT(pruned.first_table_representatives, plain.first_table_representatives);
}

TEST(Search, EmittedPassIndependentRecheck) {
  const auto unanimous = run(2, 3, 3, true, {.unanimity = true}, true);
  ASSERT_EQ(unanimous.emitted.size(), 2u);
  for (const auto& caf : unanimous.emitted) {
    EXPECT_TRUE(check_validity(caf).pass);
    EXPECT_TRUE(check_unanimity(caf).pass);
  }
  const auto sovereign = run(3, 3, 2, false, {.citizen_sovereignty = true, .generalized_unanimity = true}, true);
  ASSERT_EQ(sovereign.emitted.size(), 6u);
  for (const auto& caf : sovereign.emitted) {
    EXPECT_TRUE(check_validity(caf).pass);
    EXPECT_TRUE(check_citizen_sovereignty(caf).pass);
    EXPECT_TRUE(check_generalized_unanimity(caf).has_value());
  }
}

TEST(Search, CensusIsDictatorMajor) {
  const auto report = run(2, 3, 2, false, {.citizen_sovereignty = true}, false);
  ASSERT_EQ(report.census.size(), 4u);
  EXPECT_EQ(report.census[0].individual, 0);
  EXPECT_TRUE(report.census[0].pi.is_identity());
  EXPECT_EQ(report.census[3].individual, 1);
  for (const auto& entry : report.census) EXPECT_TRUE(entry.caf.has_value());
  EXPECT_EQ(report.non_dictatorial_count, 0u);
}

TEST(Search, BudgetCountsWorkDone) {
  SearchSpec spec{.params = Params::make(2, 3, 2)};
  const auto report = enumerate_independent_cafs(spec);
  spec.budget = report.checks + 4096;
  EXPECT_NO_THROW(enumerate_independent_cafs(spec));
}

TEST(Search, BudgetExceeded) {
  SearchSpec spec{.params = Params::make(3, 3, 2)};
  spec.budget = 1000;
  try {
    enumerate_independent_cafs(spec);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.estimate(), oracle::power(256, 3));
  }
}

TEST(Relabel, PreservesAxiomsAndInverts) {
  const auto params = Params::make(2, 3, 2);
  for (const auto& tuple : oracle::all_tuples(2, 3, 2, false)) {
    const auto caf = oracle::to_caf(params, tuple);
    const auto f = oracle::facts(tuple, 2, 3, 2);
    for (const auto& sigma : all_permutations(2)) {
      const auto moved = relabel_categories(caf, sigma);
      EXPECT_EQ(relabel_categories(moved, sigma.inverse()), caf);
      const auto g = oracle::facts(oracle::to_tuple(moved), 2, 3, 2);
      EXPECT_EQ(f.valid, g.valid);
      EXPECT_EQ(f.unanimity, g.unanimity);
      EXPECT_EQ(f.sovereignty, g.sovereignty);
    }
  }
}

TEST(Relabel, OrbitSumsEqualTotal) {
  // Each valid CAF's orbit is counted once per member, so the orbit sizes
  // over distinct orbits add up to the number of valid CAFs.
  const auto params = Params::make(2, 3, 2);
  std::set<oracle::Tuple> seen;
  std::uint64_t total = 0;
  std::uint64_t valid = 0;
  for (const auto& tuple : oracle::all_tuples(2, 3, 2, false)) {
    if (!oracle::facts(tuple, 2, 3, 2).valid) continue;
    ++valid;
    if (seen.count(tuple)) continue;
    std::set<oracle::Tuple> orbit;
    for (const auto& sigma : all_permutations(2)) {
      orbit.insert(oracle::to_tuple(relabel_categories(oracle::to_caf(params, tuple), sigma)));
    }
    total += orbit.size();
    seen.insert(orbit.begin(), orbit.end());
  }
  EXPECT_EQ(total, valid);
}

TEST(WitnessVector, SmallestPreimage) {
  const auto params = Params::make(2, 3, 2);
  const auto caf = make_essential_dictatorship(params, 1, CategoryPermutation::identity(2)).independent;
  EXPECT_EQ(find_witness_vector(caf, 0, category(1)), (CategoryVector{{category(0), category(1)}}));
  const auto zero = ElementaryCaf::constant(params, category(0));
  const IndependentCaf constant(params, {zero, zero, zero});
  EXPECT_THROW(find_witness_vector(constant, 0, category(1)), Error);
}

TEST(RequiredAxioms, Parse) {
  const auto r = parse_required_axioms("validity,cs,gu");
  EXPECT_TRUE(r.citizen_sovereignty);
  EXPECT_TRUE(r.generalized_unanimity);
  EXPECT_FALSE(r.unanimity);
  EXPECT_THROW(parse_required_axioms("fairness"), Error);
}
