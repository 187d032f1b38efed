#include <gtest/gtest.h>

#include <map>

#include "classagg/rules.hpp"
#include "oracles.hpp"

using namespace classagg;

TEST(Plurality, WorkedExampleOutputs) {
  const auto params = table1_params();
  const auto rule = make_plurality_table1();
  EXPECT_EQ(rule(table1_profile()), make_classification(params, {0, 1, 1}));
  EXPECT_EQ(rule(table1_profile_prime()), make_classification(params, {1, 1, 0}));
  EXPECT_EQ(table1_order().order().front(), make_classification(params, {0, 1, 1}));
}

TEST(Plurality, MatchesBruteForce) {
  const auto params = table1_params();
  const auto rule = make_plurality_table1();
  const auto order = table1_order();
  const auto cls = oracle::classifications(3, 2);
  oracle::for_each_profile(3, cls, [&](const std::vector<oracle::Row>& rows) {
    std::map<oracle::Row, int> support;
    for (const auto& r : rows) ++support[r];
    int best = 0;
    for (const auto& [r, count] : support) best = std::max(best, count);
    // Highest-ranked classification among those with maximal support.
    std::optional<Classification> expected;
    for (const auto& c : order.order()) {
      std::vector<int> key(c.assignment().size());
      for (int x = 0; x < c.size(); ++x) key[static_cast<std::size_t>(x)] = c[x].index;
      auto it = support.find(key);
      if (it != support.end() && it->second == best) {
        expected = c;
        break;
      }
    }
    std::vector<Classification> members;
    for (const auto& r : rows) members.push_back(make_classification(params, r));
    EXPECT_EQ(rule(make_profile(params, members)), *expected);
  });
}

TEST(TieBreakOrder, RankAndValidation) {
  const auto params = Params::make(2, 3, 2);
  const auto order = TieBreakOrder::descending_lex(params);
  EXPECT_EQ(order.order().size(), 6u);
  EXPECT_EQ(order.rank(order.order()[3]), 3);
  auto partial = enumerate_classifications(params);
  partial.pop_back();
  EXPECT_THROW(TieBreakOrder::make(params, partial), Error);
}

TEST(EssentialDictatorship, GeneralAndTableFormsAgree) {
  const auto params = Params::make(3, 4, 3);
  const auto pi = CategoryPermutation::make({2, 1, 0});
  const auto ed = make_essential_dictatorship(params, 1, pi);
  const auto cls = enumerate_classifications(params);
  for (std::size_t k = 0; k < cls.size(); k += 7) {
    const auto profile = make_profile(params, {cls[k], cls[(k * 5) % cls.size()], cls.front()});
    EXPECT_EQ(ed.general(profile), ed.independent.aggregate(profile));
    EXPECT_EQ(ed.general(profile), apply_permutation(pi, profile[1]));
  }
}

TEST(Majority, TwoCategoriesOnly) {
  EXPECT_THROW(make_per_object_majority(Params::make(3, 3, 3), category(0)), Error);
  const auto params = Params::make(3, 3, 2);
  const auto caf = make_per_object_majority(params, category(0));
  // Three voters, three objects: majority can send every object to p.
  EXPECT_FALSE(check_validity(caf).pass);
}

TEST(NamedRule, Parsing) {
  const auto params = Params::make(2, 3, 2);
  EXPECT_TRUE(make_named_rule(params, "dictator:1").independent.has_value());
  const auto ed = make_named_rule(params, "essential:2:swap");
  ASSERT_TRUE(ed.independent.has_value());
  const auto match = check_essential_dictatorship(*ed.independent);
  ASSERT_TRUE(match);
  EXPECT_EQ(match->individual, 1);
  EXPECT_EQ(match->pi, CategoryPermutation::transposition(2, 0, 1));
  EXPECT_EQ(make_named_rule(params, "plurality-table1").params, table1_params());
  EXPECT_FALSE(make_named_rule(params, "plurality").independent.has_value());
  EXPECT_TRUE(make_named_rule(params, "majority:tie=p").independent.has_value());

  for (const char* bad : {"dictator:0", "dictator:3", "essential:1:0,0", "nope", "majority:tie=r", "dictator"}) {
    try {
      make_named_rule(params, bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::SchemaError) << bad;
    }
  }
  EXPECT_EQ(parse_category(3, "p3"), category(2));
  EXPECT_EQ(parse_category(2, "q"), category(1));
  EXPECT_EQ(parse_permutation(3, "1,2,0"), CategoryPermutation::make({1, 2, 0}));
}
