// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"

using namespace classagg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string str(std::uint64_t v) { return std::to_string(v); }

std::vector<int> row_of(const Classification& c) {
  std::vector<int> row;
  for (auto k : c.assignment()) row.push_back(k.index);
  return row;
}

struct DictatorKey {
  int individual;
  std::vector<int> pi;
  auto operator<=>(const DictatorKey&) const = default;
};

std::set<DictatorKey> census_keys(const std::vector<IndependentCaf>& cafs, bool& all_ed) {
  std::set<DictatorKey> keys;
  all_ed = true;
  for (const auto& caf : cafs) {
    const auto match = check_essential_dictatorship(caf);
    if (!match) {
      all_ed = false;
      continue;
    }
    std::vector<int> image;
    for (auto c : match->pi.image()) image.push_back(c.index);
    keys.insert({match->individual, image});
  }
  return keys;
}

std::set<DictatorKey> expected_keys(int n, int rho, bool identity_only) {
  std::set<DictatorKey> keys;
  for (int d = 0; d < n; ++d) {
    for (const auto& pi : oracle::permutations(rho)) {
      bool identity = true;
      for (int c = 0; c < rho; ++c) identity = identity && pi[static_cast<std::size_t>(c)] == c;
      if (!identity_only || identity) keys.insert({d, pi});
    }
  }
  return keys;
}

// Shared populations, filled by the criteria that compute them.
struct Populations {
  std::vector<IndependentCaf> thm1;
  std::vector<IndependentCaf> coro1;
  std::vector<IndependentCaf> prop1_n2;
  std::vector<IndependentCaf> prop1_n3;
  std::vector<IndependentCaf> thm2;
  std::vector<IndependentCaf> thm1_n3;
} pop;

VerifyOptions plain() {
  VerifyOptions options;
  options.cross_check_pivotal = false;
  return options;
}

Outcome criterion1() {
  const auto start = Clock::now();
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::dispatch(std::vector<std::string>{"demo", "table1"}, out, err);
  const double elapsed = ms_since(start);

  const auto golden_path = std::filesystem::path(CLASSAGG_GOLDEN_DIR) / "table1.txt";
  std::ifstream in(golden_path, std::ios::binary);
  const std::string golden((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  const auto rule = make_plurality_table1();
  const auto params = table1_params();
  const bool c_ok = rule(table1_profile()) == make_classification(params, {0, 1, 1});
  const bool c_prime_ok = rule(table1_profile_prime()) == make_classification(params, {1, 1, 0});
  const bool bytes = !golden.empty() && out.str() == golden;
  return {code == 0 && bytes && c_ok && c_prime_ok && elapsed < 1000.0,
          std::string("golden ") + (bytes ? "identical" : "differs") + ", PLUR(c)=(p,q,q) " + (c_ok ? "ok" : "bad") +
              ", PLUR(c')=(q,q,p) " + (c_prime_ok ? "ok" : "bad") + ", " + std::to_string(elapsed) + " ms"};
}

Outcome criterion2() {
  const auto start = Clock::now();
  const auto v = verify_claim(Claim::Thm1, Params::make(2, 3, 2), plain());
  pop.thm1 = v.search.emitted;
  bool all_ed = false;
  const auto keys = census_keys(v.search.emitted, all_ed);

  // Oracle: all 4096 tuples, facts by direct profile scan.
  std::uint64_t oracle_cs = 0;
  std::set<DictatorKey> oracle_keys;
  bool oracle_all_ed = true;
  for (const auto& tuple : oracle::all_tuples(2, 3, 2, false)) {
    const auto f = oracle::facts(tuple, 2, 3, 2);
    if (!f.valid || !f.sovereignty) continue;
    ++oracle_cs;
    if (f.dictators.size() != 1) oracle_all_ed = false;
    for (const auto& [d, pi] : f.dictators) oracle_keys.insert({d, pi});
  }
  const auto expected = expected_keys(2, 2, false);
  const bool pass = v.holds && v.search.candidates_scanned == 4096 && v.search.emitted.size() == 4 && all_ed &&
                    keys == expected && oracle_cs == 4 && oracle_all_ed && oracle_keys == expected &&
                    ms_since(start) < 10'000.0;
  return {pass, "scanned " + str(v.search.candidates_scanned) + ", valid+CS " + str(v.search.emitted.size()) +
                    " (oracle " + str(oracle_cs) + "), census " + str(keys.size()) + "/4 essential dictatorships, " +
                    std::to_string(ms_since(start)) + " ms"};
}

Outcome criterion3() {
  const auto start = Clock::now();
  const auto v = verify_claim(Claim::Coro1, Params::make(2, 3, 2), plain());
  pop.coro1 = v.search.emitted;
  bool all_ed = false;
  const auto keys = census_keys(v.search.emitted, all_ed);
  std::uint64_t oracle_count = 0;
  for (const auto& tuple : oracle::all_tuples(2, 3, 2, false)) {
    const auto f = oracle::facts(tuple, 2, 3, 2);
    oracle_count += f.valid && f.unanimity;
  }
  const bool pass = v.holds && all_ed && keys == expected_keys(2, 2, true) && v.search.emitted.size() == 2 &&
                    oracle_count == 2 && ms_since(start) < 10'000.0;
  return {pass, "unanimous census " + str(v.search.emitted.size()) + " (oracle " + str(oracle_count) +
                    "), dictatorships " + str(v.dictatorship_count) + ", " + std::to_string(ms_since(start)) + " ms"};
}

Outcome prop1_at(int n, std::vector<IndependentCaf>& store, std::string& detail) {
  const auto start = Clock::now();
  const auto params = Params::make(n, 2, 2);
  const auto v = verify_claim(Claim::Prop1, params, plain());
  store = v.search.emitted;
  bool dual_ok = true;
  for (const auto& caf : v.search.emitted) {
    // alpha_y(r) = complement(alpha_x(complement r)), entry by entry.
    const auto size = params.table_size();
    for (std::uint32_t code = 0; code < size; ++code) {
      const int flipped = static_cast<int>(size - 1 - code);
      dual_ok = dual_ok && caf.table(1).at(code).index == 1 - caf.table(0).at(static_cast<std::uint32_t>(flipped)).index;
    }
  }
  std::uint64_t oracle_count = 0;
  for (const auto& tuple : oracle::all_tuples(n, 2, 2, false)) {
    const auto f = oracle::facts(tuple, n, 2, 2);
    oracle_count += f.valid && f.unanimity;
  }
  const auto expected = oracle::power(2, (1 << n) - 2);
  const bool pass = v.holds && v.search.emitted.size() == expected && oracle_count == expected && dual_ok &&
                    v.dictatorship_count == static_cast<std::uint64_t>(n) && v.other_count >= 1 &&
                    ms_since(start) < 5000.0;
  detail += "n=" + std::to_string(n) + ": " + str(v.search.emitted.size()) + "/" + str(expected) + " (oracle " +
            str(oracle_count) + "), dictatorships " + str(v.dictatorship_count) + ", not essential " +
            str(v.other_count) + ", duality " + (dual_ok ? "ok" : "bad") + "; ";
  return {pass, ""};
}

Outcome criterion4() {
  std::string detail;
  const bool a = prop1_at(2, pop.prop1_n2, detail).pass;
  const bool b = prop1_at(3, pop.prop1_n3, detail).pass;
  // n = 2 alone has exactly 2 dictatorships; n = 3 has 3.
  return {a && b, detail};
}

Outcome criterion5() {
  const auto start = Clock::now();
  VerifyOptions options = plain();
  options.prune_category_symmetry = true;
  const auto v = verify_claim(Claim::Thm2, Params::make(2, 3, 3), options);
  pop.thm2 = v.search.emitted;
  bool all_ed = false;
  const auto keys = census_keys(v.search.emitted, all_ed);
  const bool pass = v.holds && all_ed && keys == expected_keys(2, 3, true) && v.search.emitted.size() == 2 &&
                    ms_since(start) < 30 * 60 * 1000.0;
  return {pass, "scanned " + str(v.search.candidates_scanned) + " unanimous-table tuples, survivors " +
                    str(v.search.emitted.size()) + ", dictatorships " + str(v.dictatorship_count) + ", " +
                    std::to_string(ms_since(start)) + " ms"};
}

Outcome criterion6() {
  const auto start = Clock::now();
  VerifyOptions options = plain();
  options.prune_category_symmetry = true;
  const auto v = verify_claim(Claim::Thm1, Params::make(3, 3, 2), options);
  pop.thm1_n3 = v.search.emitted;
  bool all_ed = false;
  const auto keys = census_keys(v.search.emitted, all_ed);
  const bool pass = v.holds && all_ed && keys == expected_keys(3, 2, false) && v.search.emitted.size() == 6 &&
                    ms_since(start) < 30 * 60 * 1000.0;
  return {pass, "valid " + str(v.search.valid_count) + ", valid+CS " + str(v.search.emitted.size()) +
                    ", essential dictatorships " + str(keys.size()) + "/6, " + std::to_string(ms_since(start)) +
                    " ms"};
}

Outcome criterion7() {
  std::uint64_t checked = 0;
  std::uint64_t agree = 0;
  for (const auto* population : {&pop.thm1, &pop.coro1, &pop.prop1_n2, &pop.prop1_n3, &pop.thm2, &pop.thm1_n3}) {
    for (const auto& caf : *population) {
      const auto match = check_essential_dictatorship(caf);
      if (!match) continue;
      ++checked;
      try {
        const auto report = extract_dictator_pivotal(caf);
        agree += report.verified && report.individual == match->individual && report.pi == match->pi;
      } catch (const Error&) {
      }
    }
  }
  return {checked > 0 && agree == checked, str(agree) + "/" + str(checked) + " essential dictatorships agree"};
}

Outcome criterion8() {
  const auto params = Params::make(2, 3, 2);
  SearchSpec spec{.params = params};
  spec.required.citizen_sovereignty = true;
  const auto population = enumerate_independent_cafs(spec).emitted;

  // (a) GU with a bijective pi.
  std::uint64_t gu_ok = 0;
  for (const auto& caf : population) {
    const auto pi = check_generalized_unanimity(caf);
    if (!pi) continue;
    std::set<Category> image(pi->image().begin(), pi->image().end());
    gu_ok += image.size() == 2 && compute_pi(caf) == *pi;
  }
  // (b) {alpha_x(r), alpha_y(r')} = {pi(p), pi(q)} for complementary pairs.
  std::uint64_t pairs = 0;
  std::uint64_t pairs_ok = 0;
  for (const auto& caf : population) {
    const auto pi = compute_pi(caf);
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y) {
        if (x == y) continue;
        for (int p = 0; p < 2; ++p) {
          const int q = 1 - p;
          for (int mask = 0; mask < 4; ++mask) {
            CategoryVector r;
            CategoryVector r_prime;
            for (int i = 0; i < 2; ++i) {
              const bool bit = ((mask >> i) & 1) != 0;
              r.entries.push_back(category(bit ? p : q));
              r_prime.entries.push_back(category(bit ? q : p));
            }
            ++pairs;
            const std::set<Category> got{caf.table(x)(r), caf.table(y)(r_prime)};
            pairs_ok += got == std::set<Category>{pi(category(p)), pi(category(q))};
          }
        }
      }
    }
  }
  // (c) Lemma profiles are surjective per individual on the three grids.
  std::uint64_t profiles = 0;
  std::uint64_t profiles_ok = 0;
  struct Grid {
    int rho, m, n;
  };
  for (const Grid g : {Grid{2, 3, 2}, Grid{2, 3, 3}, Grid{3, 4, 2}}) {
    const auto gp = Params::make(g.n, g.m, g.rho);
    std::vector<IndependentCaf> cafs;
    for (int d = 0; d < g.n; ++d) {
      for (const auto& pi : all_permutations(g.rho)) cafs.push_back(make_essential_dictatorship(gp, d, pi).independent);
    }
    for (const auto& caf : cafs) {
      std::vector<LemmaStage> stages;
      for (int r = 0; r < g.rho; ++r) {
        stages.push_back(lemma::Step1{category(r)});
        for (int i = 0; i < g.rho; ++i) {
          for (int j = g.rho; j < g.m; ++j) stages.push_back(lemma::Step2{category(r), i, j});
          for (int j = 0; j < g.rho; ++j) {
            if (i != j) stages.push_back(lemma::Step3{category(r), i, j});
          }
        }
      }
      for (int x = 0; x < g.m; ++x) {
        for (int y = 0; y < g.m; ++y) {
          for (int p = 0; p < g.rho && x != y; ++p) {
            for (int q = 0; q < g.rho; ++q) {
              if (p == q) continue;
              for (int mask = 0; mask < (1 << g.n); ++mask) {
                CategoryVector r;
                CategoryVector r_prime;
                for (int i = 0; i < g.n; ++i) {
                  const bool bit = ((mask >> i) & 1) != 0;
                  r.entries.push_back(category(bit ? p : q));
                  r_prime.entries.push_back(category(bit ? q : p));
                }
                stages.push_back(lemma::Claim1{r, r_prime, x, y, category(p), category(q)});
              }
            }
          }
        }
      }
      for (std::uint32_t code = 0; code < gp.table_size(); ++code) {
        const auto t = CategoryVector::decode(code, g.n, g.rho);
        for (int d = 0; d < g.n; ++d) {
          if (t[d] == category(0)) stages.push_back(lemma::Claim2{t, d});
        }
      }
      for (const auto& stage : stages) {
        ++profiles;
        try {
          const auto profile = build_lemma_profile(caf, stage);
          bool ok = profile.size() == g.n;
          for (const auto& member : profile.members()) ok = ok && oracle::onto(row_of(member), g.rho);
          profiles_ok += ok;
        } catch (const Error&) {
        }
      }
    }
  }
  const bool pass = !population.empty() && gu_ok == population.size() && pairs_ok == pairs && profiles > 0 &&
                    profiles_ok == profiles;
  return {pass, "(a) GU " + str(gu_ok) + "/" + str(population.size()) + ", (b) pairs " + str(pairs_ok) + "/" +
                    str(pairs) + ", (c) profiles " + str(profiles_ok) + "/" + str(profiles)};
}

Outcome criterion9() {
  struct Case {
    Claim claim;
    int n, m, rho;
  };
  std::string detail;
  bool pass = true;
  for (const Case c : {Case{Claim::Thm1, 2, 3, 2}, Case{Claim::Coro1, 2, 3, 2}, Case{Claim::Prop1, 2, 2, 2},
                       Case{Claim::Prop1, 3, 2, 2}}) {
    VerifyOptions a = plain();
    VerifyOptions b = plain();
    b.prune_category_symmetry = true;
    const auto params = Params::make(c.n, c.m, c.rho);
    const auto u = verify_claim(c.claim, params, a).search;
    const auto p = verify_claim(c.claim, params, b).search;
    const bool same = u.candidates_scanned == p.candidates_scanned && u.valid_count == p.valid_count &&
                      u.unanimity_count == p.unanimity_count && u.sovereignty_count == p.sovereignty_count &&
                      u.generalized_unanimity_count == p.generalized_unanimity_count && u.emitted == p.emitted;
    pass = pass && same;
    detail += std::string(to_string(c.claim)) + "(n=" + std::to_string(c.n) + ") valid " + str(u.valid_count) + "=" +
              str(p.valid_count) + (same ? "" : " MISMATCH") + "; ";
  }
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 table1 reproduction", criterion1},
      {"2 theorem 1 at (2,3,2)", criterion2},
      {"3 corollary 1 at (2,3,2)", criterion3},
      {"4 proposition 1 at n=2,3", criterion4},
      {"5 theorem 2 at (2,3,3)", criterion5},
      {"6 theorem 1 at (3,3,2)", criterion6},
      {"7 pivotal vs exhaustive", criterion7},
      {"8 lemma properties", criterion8},
      {"9 pruning soundness", criterion9},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << name << "  " << outcome.detail << '\n';
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << '\n';
  return failures == 0 ? 0 : 1;
}
