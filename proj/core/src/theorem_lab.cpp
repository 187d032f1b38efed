#include "classagg/theorem_lab.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace classagg {

namespace {

constexpr std::size_t kTraceLimit = 64;

CategoryVector constant_vector(const Params& params, int p) { return CategoryVector::constant(params.n(), category(p)); }

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::PreconditionFailed, message);
}

void require_object(const Params& params, int x, const char* what) {
  require(x >= 0 && x < params.m(), std::string(what) + " is not an object index");
}

void require_category(const Params& params, Category c, const char* what) {
  require(c.index < params.rho(), std::string(what) + " is not a category");
}

}  // namespace

PivotalLadder PivotalLadder::build(int n, Category low, Category high) {
  PivotalLadder ladder{low, high, {}, {}};
  for (int i = 0; i <= n; ++i) {
    CategoryVector r;
    CategoryVector l;
    for (int j = 0; j < n; ++j) {
      r.entries.push_back(j < i ? high : low);
      l.entries.push_back(j < i ? low : high);
    }
    ladder.r.push_back(std::move(r));
    ladder.l.push_back(std::move(l));
  }
  return ladder;
}

CategoryPermutation compute_pi(const IndependentCaf& caf) {
  const Params& params = caf.params();
  require(params.strict(), "compute_pi needs m > rho");
  require(check_validity(caf).pass, "the tuple is not a valid CAF");
  require(check_citizen_sovereignty(caf).pass, "the CAF is not citizen sovereign");
  std::vector<int> image;
  for (int i = 0; i < params.rho(); ++i) image.push_back(caf.table(i).on_constant(category(i)).index);
  CategoryPermutation pi = [&] {
    try {
      return CategoryPermutation::make(image);
    } catch (const Error& e) {
      throw Error(ErrorKind::NotABijection, "p_i -> alpha_{x_i}(p_i, ..., p_i) is not a bijection");
    }
  }();
  for (int x = 0; x < params.m(); ++x) {
    for (int p = 0; p < params.rho(); ++p) {
      if (caf.table(x).on_constant(category(p)) != pi(category(p))) {
        throw Error(ErrorKind::VerificationFailed, "object x" + std::to_string(x + 1) +
                                                       " maps a constant vector off the permutation");
      }
    }
  }
  return pi;
}

namespace {

Profile build(const IndependentCaf& caf, const lemma::Step1& s) {
  const Params& params = caf.params();
  require(params.strict(), "step 1 needs m > rho");
  require_category(params, s.r, "r");
  std::vector<CategoryVector> columns;
  for (int x = 0; x < params.m(); ++x) {
    columns.push_back(x < params.rho() ? constant_vector(params, x) : find_witness_vector(caf, x, s.r));
  }
  return profile_from_columns(params, columns);
}

Profile build(const IndependentCaf& caf, const lemma::Step2& s) {
  const Params& params = caf.params();
  require(params.strict(), "step 2 needs m > rho");
  require_category(params, s.r, "r");
  require(s.i >= 0 && s.i < params.rho(), "step 2 needs i < rho");
  require(s.j >= params.rho() && s.j < params.m(), "step 2 needs rho <= j < m");
  std::vector<CategoryVector> columns;
  for (int x = 0; x < params.m(); ++x) {
    if (x == s.i) {
      columns.push_back(find_witness_vector(caf, x, s.r));
    } else if (x < params.rho()) {
      columns.push_back(constant_vector(params, x));
    } else if (x == s.j) {
      columns.push_back(constant_vector(params, s.i));
    } else {
      columns.push_back(find_witness_vector(caf, x, s.r));
    }
  }
  return profile_from_columns(params, columns);
}

Profile build(const IndependentCaf& caf, const lemma::Step3& s) {
  const Params& params = caf.params();
  // The construction addresses object x_{rho+1}.
  require(params.m() >= params.rho() + 1, "step 3 needs m >= rho + 1");
  require_category(params, s.r, "r");
  require(s.i >= 0 && s.i < params.rho() && s.j >= 0 && s.j < params.rho() && s.i != s.j,
          "step 3 needs distinct i, j < rho");
  std::vector<CategoryVector> columns;
  for (int x = 0; x < params.m(); ++x) {
    if (x == s.i) {
      columns.push_back(find_witness_vector(caf, x, s.r));
    } else if (x == s.j) {
      columns.push_back(constant_vector(params, s.i));
    } else if (x < params.rho()) {
      columns.push_back(constant_vector(params, x));
    } else if (x == params.rho()) {
      columns.push_back(constant_vector(params, s.j));
    } else {
      columns.push_back(find_witness_vector(caf, x, s.r));
    }
  }
  return profile_from_columns(params, columns);
}

Profile build(const IndependentCaf& caf, const lemma::Claim1& s) {
  const Params& params = caf.params();
  require(params.strict(), "claim 1 needs m > rho");
  require_object(params, s.x, "x");
  require_object(params, s.y, "y");
  require(s.x != s.y, "claim 1 needs x != y");
  require_category(params, s.p, "p");
  require_category(params, s.q, "q");
  require(s.r.size() == params.n() && s.r_prime.size() == params.n(), "claim 1 vectors need length n");
  for (int k = 0; k < params.n(); ++k) {
    const bool ok = (s.r[k] == s.p && s.r_prime[k] == s.q) || (s.r[k] == s.q && s.r_prime[k] == s.p);
    require(ok, "claim 1 needs {r_k, r'_k} = {p, q} for every individual");
  }
  std::vector<CategoryVector> columns(static_cast<std::size_t>(params.m()));
  if (params.rho() == 2 && s.p != s.q) {
    // Two categories: x carries r and every other object carries r'.
    for (int z = 0; z < params.m(); ++z) columns[z] = z == s.x ? s.r : s.r_prime;
    return profile_from_columns(params, columns);
  }
  // The remaining objects carry the categories other than p, q in increasing
  // order, the last one repeated. With x = x_1, y = x_2, p = p_1, q = p_2 this
  // gives x_l -> p_l for 3 <= l <= rho and x_l -> p_rho for l > rho. The
  // printed range "rho <= l <= m" would overlap x_rho; the prose is followed.
  std::vector<int> others;
  for (int c = 0; c < params.rho(); ++c) {
    if (c != s.p.index && c != s.q.index) others.push_back(c);
  }
  columns[s.x] = s.r;
  columns[s.y] = s.r_prime;
  std::size_t next = 0;
  for (int z = 0; z < params.m(); ++z) {
    if (z == s.x || z == s.y) continue;
    columns[z] = constant_vector(params, others[std::min(next, others.size() - 1)]);
    ++next;
  }
  return profile_from_columns(params, columns);
}

Profile build(const IndependentCaf& caf, const lemma::Claim2& s) {
  const Params& params = caf.params();
  require(params.strict(), "claim 2 needs m > rho");
  require(params.m() >= 3, "claim 2 needs m >= 3");
  require(s.d >= 0 && s.d < params.n(), "claim 2 needs d < n");
  require(s.t.size() == params.n(), "claim 2 needs t of length n");
  require(s.t[s.d] == category(0), "claim 2 needs t(d) = p_1");
  const int n = params.n();
  std::vector<CategoryVector> columns;
  columns.push_back(s.t);
  // l^{d-1} in one-based terms: individuals before d say p_1, the rest p_2.
  CategoryVector l;
  CategoryVector r;
  for (int i = 0; i < n; ++i) {
    l.entries.push_back(i < s.d ? category(0) : category(1));
    r.entries.push_back(i <= s.d ? category(1) : category(0));
  }
  columns.push_back(l);
  columns.push_back(r);
  // Object x_k (one-based k >= 4) carries p_{min(k-1, rho)}. The printed
  // aggregate "pi(p_{l-1})" in that row means pi(p_{k-1}).
  for (int k = 4; k <= params.m(); ++k) columns.push_back(constant_vector(params, std::min(k - 1, params.rho()) - 1));
  return profile_from_columns(params, columns);
}

}  // namespace

Profile build_lemma_profile(const IndependentCaf& caf, const LemmaStage& stage) {
  Profile profile = std::visit([&](const auto& s) { return build(caf, s); }, stage);
  for (const auto& member : profile.members()) {
    if (!is_surjective(member.assignment(), caf.params().rho())) {
      throw Error(ErrorKind::VerificationFailed, "lemma profile member is not surjective");
    }
  }
  return profile;
}

IndependentCaf reorder_objects(const IndependentCaf& caf, std::span<const int> order) {
  std::vector<ElementaryCaf> tables;
  for (int x : order) tables.push_back(caf.table(x));
  return IndependentCaf(caf.params(), std::move(tables));
}

namespace {

struct PivotalRun {
  int d = 0;
  std::vector<LadderStep> ladder;
  std::vector<ProfileStep> trace;
  std::uint64_t profiles_checked = 0;
};

[[noreturn]] void refuted(const std::string& message) { throw Error(ErrorKind::VerificationFailed, message); }

// The argument with its fixed labels: x = x_1, p = p_1, the ladder between
// p_1 and p_2 evaluated at x_3, and y = x_2 for the l^{d-1} check. With two
// objects the ladder runs on x_2 and the check on x_1.
PivotalRun pivotal_fixed_labels(const IndependentCaf& caf, const CategoryPermutation& pi, bool build_profiles) {
  const Params& params = caf.params();
  const int n = params.n();
  const Category p1 = category(0);
  const Category p2 = category(1);
  const auto ladder = PivotalLadder::build(n, p1, p2);
  const int rung = std::min(2, params.m() - 1);
  const int side = rung - 1;
  PivotalRun run;
  std::optional<int> d;
  for (int i = 0; i <= n; ++i) {
    const Category out = caf.table(rung)(ladder.r[i]);
    run.ladder.push_back({i, ladder.r[i], out});
    if (i >= 1 && !d && out == pi(p2)) d = i;
  }
  if (run.ladder.front().output != pi(p1)) refuted("alpha_{x_3}(r^0) differs from pi(p_1): not GU");
  if (!d) refuted("alpha_{x_3}(r^n) differs from pi(p_2): not GU");
  // d is one-based on the ladder.
  const int pivot = *d;
  run.d = pivot - 1;
  // Step (1) on (x_3, x_2) with r^{d-1}, l^{d-1}, then alpha_{x_2}(l^{d-1}) = pi(p_2).
  const Category below = caf.table(rung)(ladder.r[pivot - 1]);
  const Category left = caf.table(side)(ladder.l[pivot - 1]);
  const bool pair_ok = (below == pi(p1) && left == pi(p2)) || (below == pi(p2) && left == pi(p1));
  if (!pair_ok) refuted("{alpha_{x_3}(r^{d-1}), alpha_{x_2}(l^{d-1})} != {pi(p_1), pi(p_2)}");
  if (left != pi(p2)) refuted("alpha_{x_2}(l^{d-1}) != pi(p_2)");
  if (!build_profiles) return run;

  // Claim (2): every t with t(d) = p_1 is sent to pi(p_1) at x_1, via the c' profile.
  for (std::uint32_t code = 0; code < params.table_size(); ++code) {
    auto t = CategoryVector::decode(code, n, params.rho());
    if (t[run.d] != p1) continue;
    Profile profile = build_lemma_profile(caf, lemma::Claim2{t, run.d});
    auto aggregate = caf.evaluate(profile);
    ++run.profiles_checked;
    if (!is_surjective(aggregate, params.rho())) refuted("aggregate of a claim-2 profile is not surjective");
    if (aggregate[0] != pi(p1)) refuted("alpha_{x_1}(t) != pi(p_1) although t(d) = p_1");
    if (run.trace.size() < kTraceLimit) run.trace.push_back({"claim2 d=" + std::to_string(pivot), profile, aggregate});
  }
  return run;
}

}  // namespace

DictatorReport extract_dictator_pivotal(const IndependentCaf& caf) {
  const Params& params = caf.params();
  if (!check_validity(caf).pass) refuted("validity: some profile has a non-surjective aggregate");
  if (!check_citizen_sovereignty(caf).pass) refuted("citizen sovereignty: some (object, category) is unreachable");

  DictatorReport report;
  report.method = ExtractionMethod::Pivotal;
  // With m > rho the permutation comes from the first rho objects as in the
  // GU argument. With m == rho the c' profiles cannot cover every category, so
  // only the ladder and the exhaustive check run, with pi read off directly.
  const bool strict = params.strict();
  if (strict) {
    try {
      report.pi = compute_pi(caf);
    } catch (const Error& e) {
      refuted(std::string("generalized unanimity: ") + e.what());
    }
  } else {
    auto gu = check_generalized_unanimity(caf);
    if (!gu) refuted("generalized unanimity fails");
    report.pi = *gu;
  }

  // Repeat the fixed-label argument for every (x, p): move x to x_1 and
  // relabel so that p becomes p_1 and the next category p_2.
  std::optional<int> d;
  for (int x = 0; x < params.m(); ++x) {
    std::vector<int> order{x};
    for (int z = 0; z < params.m(); ++z) {
      if (z != x) order.push_back(z);
    }
    const auto moved = reorder_objects(caf, order);
    for (int p = 0; p < params.rho(); ++p) {
      const int q = (p + 1) % params.rho();
      std::vector<int> tau_image(static_cast<std::size_t>(params.rho()));
      tau_image[p] = 0;
      tau_image[q] = 1;
      int next = 2;
      for (int c = 0; c < params.rho(); ++c) {
        if (c != p && c != q) tau_image[c] = next++;
      }
      const auto tau = CategoryPermutation::make(tau_image);
      const auto relabeled = relabel_categories(moved, tau);
      const auto pi = tau.after(report.pi).after(tau.inverse());
      auto run = pivotal_fixed_labels(relabeled, pi, strict);
      if (!d) {
        d = run.d;
        report.ladder = std::move(run.ladder);
      } else if (*d != run.d) {
        refuted("the pivotal individual differs between objects or categories");
      }
      report.profiles_checked += run.profiles_checked;
      for (auto& step : run.trace) {
        if (report.trace.size() >= kTraceLimit) break;
        step.label = "x" + std::to_string(x + 1) + " " + category_name(category(p), params.rho()) + " " + step.label;
        report.trace.push_back(std::move(step));
      }
    }
  }
  report.individual = *d;

  // Statement (3), by exhaustion: alpha_x(t) = pi(t(d)) for every x and t.
  for (int x = 0; x < params.m(); ++x) {
    for (std::uint32_t code = 0; code < params.table_size(); ++code) {
      const auto t = CategoryVector::decode(code, params.n(), params.rho());
      if (caf.table(x).at(code) != report.pi(t[report.individual])) {
        refuted("alpha_x(t) != pi(t(d)) at object x" + std::to_string(x + 1));
      }
    }
  }
  report.verified = true;
  return report;
}

std::string_view to_string(Claim claim) noexcept {
  switch (claim) {
    case Claim::Thm1: return "thm1";
    case Claim::Coro1: return "coro1";
    case Claim::Coro2: return "coro2";
    case Claim::Prop1: return "prop1";
    case Claim::Thm2: return "thm2";
  }
  return "unknown";
}

Claim parse_claim(std::string_view text) {
  for (Claim c : {Claim::Thm1, Claim::Coro1, Claim::Coro2, Claim::Prop1, Claim::Thm2}) {
    if (to_string(c) == text) return c;
  }
  throw Error(ErrorKind::SchemaError, "unknown claim '" + std::string(text) + "'");
}

void check_hypotheses(Claim claim, const Params& params) {
  const int m = params.m();
  const int rho = params.rho();
  bool ok = false;
  std::string needed;
  switch (claim) {
    case Claim::Thm1:
    case Claim::Coro1:
      ok = m > rho;
      needed = "m > rho >= 2";
      break;
    case Claim::Coro2:
      ok = m >= rho && m >= 3;
      needed = "m >= rho >= 2 and m >= 3";
      break;
    case Claim::Prop1:
      ok = m == 2 && rho == 2;
      needed = "m = rho = 2";
      break;
    case Claim::Thm2:
      ok = m >= rho && rho >= 3;
      needed = "m >= rho >= 3";
      break;
  }
  if (!ok) {
    throw Error(ErrorKind::HypothesisViolated,
                std::string(to_string(claim)) + " needs " + needed + ", got " + params.to_string());
  }
}

ElementaryCaf dual_table(const ElementaryCaf& table) {
  const Params& params = table.params();
  if (params.rho() != 2) throw Error(ErrorKind::PreconditionFailed, "dual tables need rho = 2");
  const std::uint32_t all_ones = params.table_size() - 1;
  std::vector<Category> out(params.table_size());
  // Complementing every entry of a binary vector maps code v to 2^n - 1 - v.
  for (std::uint32_t v = 0; v < params.table_size(); ++v) out[v] = category(1 - table.at(all_ones - v).index);
  return ElementaryCaf(params, std::move(out));
}

TheoremVerdict verify_claim(Claim claim, const Params& params, const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_hypotheses(claim, params);

  SearchSpec spec{params, {}, TableConstraint::None, options.budget, options.prune_category_symmetry,
                  options.workers};
  if (claim == Claim::Thm1) {
    spec.required.citizen_sovereignty = true;
  } else {
    // Unanimity of an independent CAF is exactly unanimity of every table on
    // constant vectors, so restricting the tables loses nothing.
    spec.required.unanimity = true;
    spec.constraint = TableConstraint::UnanimousOnConstants;
  }

  TheoremVerdict verdict{.claim = claim, .params = params, .search = enumerate_independent_cafs(spec)};

  std::optional<IndependentCaf> first_bad;
  for (const auto& caf : verdict.search.emitted) {
    const auto match = check_essential_dictatorship(caf);
    const bool dictatorship = match && match->pi.is_identity();
    if (match) ++verdict.essential_dictatorship_count;
    if (dictatorship) ++verdict.dictatorship_count;
    if (!match) ++verdict.other_count;
    const bool conforms = claim == Claim::Thm1 ? match.has_value() : dictatorship;
    if (!conforms && !first_bad && claim != Claim::Prop1) first_bad = caf;
    if (match && options.cross_check_pivotal) {
      ++verdict.pivotal_checked;
      try {
        const auto pivotal = extract_dictator_pivotal(caf);
        if (pivotal.verified && pivotal.individual == match->individual && pivotal.pi == match->pi) {
          ++verdict.pivotal_agreements;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::VerificationFailed) throw;
      }
    }
  }

  if (claim == Claim::Prop1) {
    std::vector<IndependentCaf> expected;
    for (const auto& ax : enumerate_elementary_cafs(params, TableConstraint::UnanimousOnConstants)) {
      expected.emplace_back(params, std::vector<ElementaryCaf>{ax, dual_table(ax)});
    }
    std::sort(expected.begin(), expected.end());
    verdict.expected_count = std::uint64_t{1} << (params.table_size() - 2);
    verdict.characterization_matches = expected == verdict.search.emitted;
    verdict.holds = *verdict.characterization_matches && verdict.search.emitted.size() == *verdict.expected_count;
    if (!verdict.holds) {
      for (const auto& caf : verdict.search.emitted) {
        if (!std::binary_search(expected.begin(), expected.end(), caf)) {
          verdict.counterexample = caf;
          break;
        }
      }
    }
  } else {
    verdict.holds = !first_bad.has_value();
    verdict.counterexample = first_bad;
  }
  verdict.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return verdict;
}

}  // namespace classagg
