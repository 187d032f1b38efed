#include "classagg/axioms.hpp"

#include <algorithm>
#include <cassert>

namespace classagg {

std::string_view to_string(Axiom axiom) noexcept {
  switch (axiom) {
    case Axiom::Validity: return "validity";
    case Axiom::Unanimity: return "unanimity";
    case Axiom::CitizenSovereignty: return "citizen-sovereignty";
    case Axiom::Independence: return "independence";
  }
  return "unknown";
}

namespace {

using Members = std::span<const std::uint32_t>;
using Columns = std::span<const std::uint32_t>;

// Evaluation adapters used by the scanning checkers. Both return the raw
// aggregate for the profile currently visited.
struct IndependentEval {
  const IndependentCaf& caf;
  std::vector<Category> operator()(const ProfileSpace&, Members, Columns columns) const {
    return caf.evaluate_columns(columns);
  }
};

struct GeneralEval {
  const GeneralCaf& caf;
  std::vector<Category> operator()(const ProfileSpace& space, Members members, Columns) const {
    const auto out = caf(space.profile(members));
    return {out.assignment().begin(), out.assignment().end()};
  }
};

constexpr std::uint8_t kUnset = 0xff;

struct Seen {
  std::uint8_t output = kUnset;
  std::uint64_t rank = 0;
};

struct Conflict {
  std::uint64_t first_rank;
  std::uint64_t second_rank;
  Category first_output;
  Category second_output;
};

template <class Eval>
AxiomReport independence_scan(const Params& params, const Eval& eval, const CheckOptions& options) {
  ProfileSpace space(params, options.max_profiles);
  const int m = params.m();
  std::vector<std::vector<Seen>> buckets(static_cast<std::size_t>(m), std::vector<Seen>(params.table_size()));
  std::vector<std::optional<Conflict>> conflicts(static_cast<std::size_t>(m));
  std::uint64_t rank = 0;
  space.for_each([&](Members members, Columns columns) {
    const auto out = eval(space, members, columns);
    for (int x = 0; x < m; ++x) {
      if (conflicts[x]) continue;
      Seen& seen = buckets[x][columns[x]];
      if (seen.output == kUnset) {
        seen = Seen{out[x].index, rank};
      } else if (seen.output != out[x].index) {
        conflicts[x] = Conflict{seen.rank, rank, Category{seen.output}, out[x]};
      }
    }
    ++rank;
    // The earliest object decides the canonical witness; nothing later can beat it.
    return !conflicts[0].has_value();
  });

  AxiomReport report;
  report.axiom = Axiom::Independence;
  for (int x = 0; x < m; ++x) {
    if (!conflicts[x]) continue;
    const Conflict& c = *conflicts[x];
    // Recover the two profiles from their ranks.
    auto unrank = [&](std::uint64_t r) {
      const auto count = static_cast<std::uint64_t>(space.classifications().size());
      std::vector<std::uint32_t> members(static_cast<std::size_t>(params.n()));
      for (int i = params.n() - 1; i >= 0; --i) {
        members[i] = static_cast<std::uint32_t>(r % count);
        r /= count;
      }
      return space.profile(members);
    };
    report.pass = false;
    report.witness = IndependenceViolation{x, unrank(c.first_rank), unrank(c.second_rank), c.first_output,
                                           c.second_output};
    return report;
  }
  report.pass = true;
  std::vector<ElementaryCaf> tables;
  for (int x = 0; x < m; ++x) {
    std::vector<Category> table(params.table_size());
    for (std::uint32_t code = 0; code < params.table_size(); ++code) {
      // Every single column is attainable when m >= rho.
      assert(buckets[x][code].output != kUnset);
      table[code] = Category{buckets[x][code].output};
    }
    tables.emplace_back(params, std::move(table));
  }
  report.induced = IndependentCaf(params, std::move(tables));
  return report;
}

template <class Eval>
std::optional<DictatorMatch> dictator_scan(const Params& params, const Eval& eval, const CheckOptions& options) {
  ProfileSpace space(params, options.max_profiles);
  const int n = params.n();
  const int rho = params.rho();
  // Candidate pi for each d, read off the first profile: pi(c_d(x)) = alpha(c)(x).
  // c_d is surjective, so this pins pi down completely.
  std::vector<std::optional<std::vector<Category>>> candidate(static_cast<std::size_t>(n));
  bool first = true;
  space.for_each([&](Members members, Columns columns) {
    const auto out = eval(space, members, columns);
    bool any_alive = false;
    for (int d = 0; d < n; ++d) {
      const Classification& cd = space.classifications()[members[d]];
      if (first) {
        std::vector<Category> image(static_cast<std::size_t>(rho));
        std::vector<bool> set(static_cast<std::size_t>(rho), false);
        bool ok = true;
        for (int x = 0; x < params.m() && ok; ++x) {
          const auto from = cd[x].index;
          if (!set[from]) {
            set[from] = true;
            image[from] = out[x];
          } else if (image[from] != out[x]) {
            ok = false;
          }
        }
        if (ok) candidate[d] = std::move(image);
      } else if (candidate[d]) {
        const auto& image = *candidate[d];
        for (int x = 0; x < params.m(); ++x) {
          if (image[cd[x].index] != out[x]) {
            candidate[d].reset();
            break;
          }
        }
      }
      any_alive = any_alive || candidate[d].has_value();
    }
    first = false;
    return any_alive;
  });

  std::optional<DictatorMatch> match;
  for (int d = 0; d < n; ++d) {
    if (!candidate[d]) continue;
    std::vector<int> image;
    for (Category c : *candidate[d]) image.push_back(c.index);
    std::optional<CategoryPermutation> pi;
    try {
      pi = CategoryPermutation::make(image);
    } catch (const Error&) {
      continue;
    }
    if (match) {
      // Distinct individuals disagree on some profile when n, rho >= 2.
      throw Error(ErrorKind::VerificationFailed, "two essential dictators found");
    }
    match = DictatorMatch{d, *pi};
  }
  return match;
}

template <class Eval>
std::optional<CategoryPermutation> gu_scan(const Params& params, const Eval& eval) {
  std::vector<std::optional<Category>> image(static_cast<std::size_t>(params.rho()));
  for (const auto& c : enumerate_classifications(params)) {
    const auto out = eval(unanimous_profile(params, c));
    for (int x = 0; x < params.m(); ++x) {
      auto& slot = image[c[x].index];
      if (!slot) {
        slot = out[x];
      } else if (*slot != out[x]) {
        return std::nullopt;
      }
    }
  }
  std::vector<int> values;
  for (const auto& slot : image) {
    if (!slot) return std::nullopt;
    values.push_back(slot->index);
  }
  try {
    return CategoryPermutation::make(values);
  } catch (const Error&) {
    return std::nullopt;
  }
}

template <class Eval>
AxiomReport unanimity_scan(const Params& params, const Eval& eval) {
  AxiomReport report;
  report.axiom = Axiom::Unanimity;
  for (const auto& c : enumerate_classifications(params)) {
    auto out = eval(unanimous_profile(params, c));
    if (!std::equal(out.begin(), out.end(), c.assignment().begin(), c.assignment().end())) {
      report.pass = false;
      report.witness = UnanimityViolation{c, std::move(out)};
      return report;
    }
  }
  report.pass = true;
  return report;
}

std::vector<Category> raw(const Classification& c) { return {c.assignment().begin(), c.assignment().end()}; }

}  // namespace

AxiomReport check_validity(const IndependentCaf& caf, const CheckOptions& options) {
  const Params& params = caf.params();
  ProfileSpace space(params, options.max_profiles);
  AxiomReport report;
  report.axiom = Axiom::Validity;
  report.pass = true;
  std::vector<Category> out(static_cast<std::size_t>(params.m()));
  space.for_each([&](Members members, Columns columns) {
    for (int x = 0; x < params.m(); ++x) out[x] = caf.table(x).at(columns[x]);
    if (is_surjective(out, params.rho())) return true;
    report.pass = false;
    report.witness = NonSurjectiveAggregate{space.profile(members), out};
    return false;
  });
  return report;
}

AxiomReport check_unanimity(const IndependentCaf& caf) {
  return unanimity_scan(caf.params(), [&](const Profile& p) { return caf.evaluate(p); });
}

AxiomReport check_unanimity(const GeneralCaf& caf) {
  return unanimity_scan(caf.params(), [&](const Profile& p) { return raw(caf(p)); });
}

std::optional<CategoryVector> smallest_vector_with_output(const ElementaryCaf& table, Category target) {
  const Params& params = table.params();
  for (std::uint32_t code = 0; code < params.table_size(); ++code) {
    if (table.at(code) == target) return CategoryVector::decode(code, params.n(), params.rho());
  }
  return std::nullopt;
}

Profile extend_column_to_profile(const Params& params, int object, const CategoryVector& column) {
  if (object < 0 || object >= params.m()) throw Error(ErrorKind::IndexOutOfRange, "object index");
  if (column.size() != params.n()) throw Error(ErrorKind::BadLength, "column length differs from n");
  const auto all = enumerate_classifications(params);
  std::vector<Classification> members;
  for (int i = 0; i < params.n(); ++i) {
    auto it = std::find_if(all.begin(), all.end(), [&](const Classification& c) { return c[object] == column[i]; });
    if (it == all.end()) throw Error(ErrorKind::BadCategory, "column entry outside [0, rho)");
    members.push_back(*it);
  }
  return make_profile(params, std::move(members));
}

AxiomReport check_citizen_sovereignty(const IndependentCaf& caf) {
  const Params& params = caf.params();
  AxiomReport report;
  report.axiom = Axiom::CitizenSovereignty;
  for (int x = 0; x < params.m(); ++x) {
    for (int p = 0; p < params.rho(); ++p) {
      const auto k = smallest_vector_with_output(caf.table(x), category(p));
      if (!k) {
        report.pass = false;
        report.witness = SovereigntyGap{x, category(p)};
        report.sovereignty_witnesses.clear();
        return report;
      }
      report.sovereignty_witnesses.push_back({x, category(p), extend_column_to_profile(params, x, *k)});
    }
  }
  report.pass = true;
  return report;
}

AxiomReport check_citizen_sovereignty(const GeneralCaf& caf, const CheckOptions& options) {
  const Params& params = caf.params();
  ProfileSpace space(params, options.max_profiles);
  const int m = params.m();
  const int rho = params.rho();
  std::vector<std::optional<Profile>> found(static_cast<std::size_t>(m * rho));
  int missing = m * rho;
  space.for_each([&](Members members, Columns) {
    auto profile = space.profile(members);
    const auto out = caf(profile);
    for (int x = 0; x < m; ++x) {
      auto& slot = found[static_cast<std::size_t>(x * rho + out[x].index)];
      if (!slot) {
        slot = profile;
        --missing;
      }
    }
    return missing > 0;
  });
  AxiomReport report;
  report.axiom = Axiom::CitizenSovereignty;
  for (int x = 0; x < m; ++x) {
    for (int p = 0; p < rho; ++p) {
      auto& slot = found[static_cast<std::size_t>(x * rho + p)];
      if (!slot) {
        report.pass = false;
        report.witness = SovereigntyGap{x, category(p)};
        report.sovereignty_witnesses.clear();
        return report;
      }
      report.sovereignty_witnesses.push_back({x, category(p), std::move(*slot)});
    }
  }
  report.pass = true;
  return report;
}

AxiomReport check_independence(const GeneralCaf& caf, const CheckOptions& options) {
  return independence_scan(caf.params(), GeneralEval{caf}, options);
}

AxiomReport check_independence(const IndependentCaf& caf, const CheckOptions& options) {
  return independence_scan(caf.params(), IndependentEval{caf}, options);
}

std::optional<CategoryPermutation> check_generalized_unanimity(const IndependentCaf& caf) {
  return gu_scan(caf.params(), [&](const Profile& p) { return caf.evaluate(p); });
}

std::optional<CategoryPermutation> check_generalized_unanimity(const GeneralCaf& caf) {
  return gu_scan(caf.params(), [&](const Profile& p) { return raw(caf(p)); });
}

std::optional<DictatorMatch> check_essential_dictatorship(const IndependentCaf& caf, const CheckOptions& options) {
  return dictator_scan(caf.params(), IndependentEval{caf}, options);
}

std::optional<DictatorMatch> check_essential_dictatorship(const GeneralCaf& caf, const CheckOptions& options) {
  return dictator_scan(caf.params(), GeneralEval{caf}, options);
}

namespace {

template <class Eval>
bool replay(const Params& params, const Eval& eval, const AxiomReport& report) {
  if (report.pass) {
    if (report.axiom != Axiom::CitizenSovereignty) return true;
    if (static_cast<int>(report.sovereignty_witnesses.size()) != params.m() * params.rho()) return false;
    for (const auto& w : report.sovereignty_witnesses) {
      if (eval(w.profile)[w.object] != w.category) return false;
    }
    return true;
  }
  return std::visit(
      [&](const auto& w) -> bool {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, std::monostate>) {
          return false;
        } else if constexpr (std::is_same_v<W, NonSurjectiveAggregate>) {
          const auto out = eval(w.profile);
          return out == w.aggregate && !is_surjective(out, params.rho());
        } else if constexpr (std::is_same_v<W, UnanimityViolation>) {
          const auto out = eval(unanimous_profile(params, w.input));
          return out == w.output &&
                 !std::equal(out.begin(), out.end(), w.input.assignment().begin(), w.input.assignment().end());
        } else if constexpr (std::is_same_v<W, IndependenceViolation>) {
          return profile_column(w.first, w.object) == profile_column(w.second, w.object) &&
                 eval(w.first)[w.object] == w.first_output && eval(w.second)[w.object] == w.second_output &&
                 w.first_output != w.second_output;
        } else {
          // A gap is replayed by confirming no profile reaches (object, category).
          ProfileSpace space(params);
          bool reached = false;
          space.for_each([&](Members members, Columns) {
            reached = eval(space.profile(members))[w.object] == w.category;
            return !reached;
          });
          return !reached;
        }
      },
      report.witness);
}

}  // namespace

bool replay_witness(const IndependentCaf& caf, const AxiomReport& report) {
  return replay(caf.params(), [&](const Profile& p) { return caf.evaluate(p); }, report);
}

bool replay_witness(const GeneralCaf& caf, const AxiomReport& report) {
  return replay(caf.params(), [&](const Profile& p) { return raw(caf(p)); }, report);
}

}  // namespace classagg
