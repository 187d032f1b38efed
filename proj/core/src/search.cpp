#include "classagg/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace classagg {

std::string_view to_string(TableConstraint constraint) noexcept {
  switch (constraint) {
    case TableConstraint::None: return "none";
    case TableConstraint::UnanimousOnConstants: return "unanimous-on-constants";
  }
  return "unknown";
}

RequiredAxioms parse_required_axioms(std::string_view text) {
  RequiredAxioms required;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = std::min(text.find(',', start), text.size());
    const auto item = text.substr(start, pos - start);
    if (item == "validity" || item.empty()) {
    } else if (item == "unanimity") {
      required.unanimity = true;
    } else if (item == "citizen-sovereignty" || item == "cs") {
      required.citizen_sovereignty = true;
    } else if (item == "generalized-unanimity" || item == "gu") {
      required.generalized_unanimity = true;
    } else {
      throw Error(ErrorKind::SchemaError, "unknown axiom '" + std::string(item) + "'");
    }
    start = pos + 1;
  }
  return required;
}

std::string to_string(const RequiredAxioms& axioms) {
  std::string out = "validity";
  if (axioms.unanimity) out += ",unanimity";
  if (axioms.citizen_sovereignty) out += ",citizen-sovereignty";
  if (axioms.generalized_unanimity) out += ",generalized-unanimity";
  return out;
}

namespace {

using Table = std::vector<std::uint8_t>;

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= base;
  }
  return out;
}

std::uint64_t free_entries(const Params& params, TableConstraint constraint) {
  return params.table_size() -
         (constraint == TableConstraint::UnanimousOnConstants ? static_cast<std::uint32_t>(params.rho()) : 0);
}

std::vector<bool> constant_positions(const Params& params) {
  std::vector<bool> fixed(params.table_size(), false);
  for (int p = 0; p < params.rho(); ++p) fixed[constant_code(params, category(p))] = true;
  return fixed;
}

std::vector<Table> candidate_tables(const Params& params, TableConstraint constraint, std::uint64_t max_tables) {
  const auto count = saturating_pow(static_cast<std::uint64_t>(params.rho()), free_entries(params, constraint));
  if (count > max_tables) {
    throw BudgetExceeded("more than " + std::to_string(max_tables) + " candidate tables per object", count);
  }
  const auto fixed = constraint == TableConstraint::UnanimousOnConstants ? constant_positions(params)
                                                                          : std::vector<bool>(params.table_size());
  const auto size = static_cast<int>(params.table_size());
  const auto rho = static_cast<std::uint8_t>(params.rho());
  Table table(static_cast<std::size_t>(size), 0);
  for (int p = 0; p < params.rho(); ++p) {
    if (fixed[constant_code(params, category(p))]) table[constant_code(params, category(p))] = static_cast<std::uint8_t>(p);
  }
  std::vector<Table> out;
  out.reserve(static_cast<std::size_t>(count));
  while (true) {
    out.push_back(table);
    int j = size - 1;
    while (j >= 0 && (fixed[j] || table[j] + 1 == rho)) {
      if (!fixed[j]) table[j] = 0;
      --j;
    }
    if (j < 0) break;
    ++table[j];
  }
  return out;
}

// Distinct attainable column tuples, organised as a prefix tree so the
// search can evaluate a partial tuple of tables once per distinct prefix.
struct ColumnTree {
  // For depth k in [1, m]: parent[k][i] indexes the (k-1)-prefixes and
  // column[k][i] is the code of object k-1 in prefix i.
  std::vector<std::vector<std::uint32_t>> parent;
  std::vector<std::vector<std::uint32_t>> column;

  explicit ColumnTree(const Params& params) {
    const int m = params.m();
    std::vector<std::vector<std::uint32_t>> tuples;
    ProfileSpace space(params);
    space.for_each([&](std::span<const std::uint32_t>, std::span<const std::uint32_t> columns) {
      tuples.emplace_back(columns.begin(), columns.end());
      return true;
    });
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    parent.assign(static_cast<std::size_t>(m + 1), {});
    column.assign(static_cast<std::size_t>(m + 1), {});
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      for (int k = 1; k <= m; ++k) {
        const bool fresh =
            t == 0 || !std::equal(tuples[t].begin(), tuples[t].begin() + k, tuples[t - 1].begin());
        if (fresh) {
          parent[k].push_back(k == 1 ? 0 : static_cast<std::uint32_t>(parent[k - 1].size() - 1));
          column[k].push_back(tuples[t][k - 1]);
        }
      }
    }
  }

  std::size_t count(int depth) const { return depth == 0 ? 1 : parent[depth].size(); }
};

// Table-level facts used for the axiom counts. For an independent CAF with
// m >= rho every single column is attainable, so unanimity, citizen
// sovereignty and generalized unanimity reduce to these per-table checks.
struct TableFacts {
  bool unanimous = false;
  bool onto = false;
  std::uint64_t constants = 0;  // 4 bits per category: output on (p, ..., p)
  bool constants_bijective = false;
};

TableFacts table_facts(const Params& params, const std::uint8_t* table) {
  TableFacts facts;
  const std::uint32_t full = (std::uint32_t{1} << params.rho()) - 1;
  std::uint32_t image = 0;
  for (std::uint32_t v = 0; v < params.table_size(); ++v) image |= std::uint32_t{1} << table[v];
  facts.onto = image == full;
  facts.unanimous = true;
  std::uint32_t const_image = 0;
  for (int p = 0; p < params.rho(); ++p) {
    const auto out = table[constant_code(params, category(p))];
    facts.unanimous = facts.unanimous && out == p;
    facts.constants |= static_cast<std::uint64_t>(out) << (4 * p);
    const_image |= std::uint32_t{1} << out;
  }
  facts.constants_bijective = const_image == full;
  return facts;
}

struct Symmetry {
  // For each sigma: code_map[v] = code of sigma^-1 applied entrywise to v.
  std::vector<CategoryPermutation> sigmas;
  std::vector<std::vector<std::uint32_t>> inverse_code;

  explicit Symmetry(const Params& params) : sigmas(all_permutations(params.rho())) {
    for (const auto& sigma : sigmas) {
      const auto inv = sigma.inverse();
      std::vector<std::uint32_t> map(params.table_size());
      for (std::uint32_t v = 0; v < params.table_size(); ++v) {
        auto vec = CategoryVector::decode(v, params.n(), params.rho());
        for (auto& c : vec.entries) c = inv(c);
        map[v] = vec.encode(params.rho());
      }
      inverse_code.push_back(std::move(map));
    }
  }

  Table apply(std::size_t s, const Table& table) const {
    Table out(table.size());
    for (std::size_t v = 0; v < table.size(); ++v) out[v] = sigmas[s](category(table[inverse_code[s][v]])).index;
    return out;
  }
};

IndependentCaf make_caf(const Params& params, const std::vector<const Table*>& tables) {
  std::vector<ElementaryCaf> out;
  out.reserve(tables.size());
  for (const Table* t : tables) {
    std::vector<Category> entries(t->size());
    for (std::size_t v = 0; v < t->size(); ++v) entries[v] = Category{(*t)[v]};
    out.emplace_back(params, std::move(entries));
  }
  return IndependentCaf(params, std::move(out));
}

struct WorkerResult {
  std::uint64_t valid = 0;
  std::uint64_t unanimity = 0;
  std::uint64_t sovereignty = 0;
  std::uint64_t gu = 0;
  std::uint64_t nodes = 0;
  std::uint64_t checks = 0;
  std::vector<IndependentCaf> emitted;
};

class Searcher {
 public:
  Searcher(const SearchSpec& spec, const std::vector<Table>& tables, const ColumnTree& tree,
           const std::vector<TableFacts>& facts, const Symmetry* symmetry, std::atomic<std::uint64_t>& work)
      : spec_(spec),
        params_(spec.params),
        tables_(tables),
        tree_(tree),
        facts_(facts),
        symmetry_(symmetry),
        work_(work),
        full_((std::uint32_t{1} << params_.rho()) - 1),
        fixed_(spec.constraint == TableConstraint::UnanimousOnConstants ? constant_positions(params_)
                                                                         : std::vector<bool>(params_.table_size())) {
    const int m = params_.m();
    masks_.resize(static_cast<std::size_t>(m + 1));
    masks_[0].assign(1, 0);
    for (int k = 1; k <= m; ++k) masks_[k].resize(tree_.count(k));
    chosen_.resize(static_cast<std::size_t>(m - 1));
  }

  void run_first(std::size_t first, std::uint64_t weight, const std::vector<std::size_t>& orbit_sigmas) {
    weight_ = weight;
    orbit_sigmas_ = &orbit_sigmas;
    descend(0, first);
  }

  WorkerResult& result() { return result_; }

 private:
  void charge(std::uint64_t amount) {
    result_.checks += amount;
    pending_ += amount;
    if (pending_ >= 4096) {
      const auto total = work_.fetch_add(pending_) + pending_;
      pending_ = 0;
      if (total > spec_.budget) {
        throw BudgetExceeded("search exceeded its budget of " + std::to_string(spec_.budget) + " checks",
                             estimate_search_space(spec_));
      }
    }
  }

  // Places table `index` at object `depth` and continues if the prefix can
  // still be completed to a surjective aggregate on every profile.
  void descend(int depth, std::size_t index) {
    const int m = params_.m();
    ++result_.nodes;
    const int k = depth + 1;
    const auto& table = tables_[index];
    const auto& parent = tree_.parent[k];
    const auto& column = tree_.column[k];
    auto& masks = masks_[k];
    const auto& up = masks_[k - 1];
    const int need = params_.rho() - (m - k);
    for (std::size_t i = 0; i < masks.size(); ++i) {
      masks[i] = up[parent[i]] | (std::uint32_t{1} << table[column[i]]);
      if (std::popcount(masks[i]) < need) {
        charge(i + 1);
        return;
      }
    }
    charge(masks.size());
    chosen_[depth] = index;
    if (k == m - 1) {
      complete();
      return;
    }
    for (std::size_t next = 0; next < tables_.size(); ++next) descend(depth + 1, next);
  }

  void complete() {
    const int m = params_.m();
    const auto size = params_.table_size();
    constexpr std::uint8_t kFree = 0xff;
    Table last(size, kFree);
    for (int p = 0; p < params_.rho(); ++p) {
      if (fixed_[constant_code(params_, category(p))]) last[constant_code(params_, category(p))] = static_cast<std::uint8_t>(p);
    }
    const auto& parent = tree_.parent[m];
    const auto& column = tree_.column[m];
    const auto& up = masks_[m - 1];
    for (std::size_t i = 0; i < parent.size(); ++i) {
      const std::uint32_t missing = full_ & ~up[parent[i]];
      if (missing == 0) continue;
      const auto forced = static_cast<std::uint8_t>(std::countr_zero(missing));
      auto& slot = last[column[i]];
      if (slot == kFree) {
        slot = forced;
      } else if (slot != forced) {
        charge(i + 1);
        return;
      }
    }
    charge(parent.size());

    // Facts shared by every completion of this prefix.
    bool unanimous = true;
    bool onto = true;
    bool gu = true;
    const std::uint64_t constants = facts_[chosen_[0]].constants;
    for (int x = 0; x < m - 1; ++x) {
      const auto& f = facts_[chosen_[x]];
      unanimous = unanimous && f.unanimous;
      onto = onto && f.onto;
      gu = gu && f.constants == constants && f.constants_bijective;
    }

    std::vector<std::uint32_t> free_positions;
    for (std::uint32_t v = 0; v < size; ++v) {
      if (last[v] == kFree) {
        free_positions.push_back(v);
        last[v] = 0;
      }
    }
    const auto rho = static_cast<std::uint8_t>(params_.rho());
    while (true) {
      charge(1);
      const auto f = table_facts(params_, last.data());
      const bool u = unanimous && f.unanimous;
      const bool cs = onto && f.onto;
      const bool g = gu && f.constants == constants && f.constants_bijective;
      result_.valid += weight_;
      if (u) result_.unanimity += weight_;
      if (cs) result_.sovereignty += weight_;
      if (g) result_.gu += weight_;
      const auto& req = spec_.required;
      if ((!req.unanimity || u) && (!req.citizen_sovereignty || cs) && (!req.generalized_unanimity || g)) {
        emit(last);
      }
      int j = static_cast<int>(free_positions.size()) - 1;
      while (j >= 0 && last[free_positions[j]] + 1 == rho) {
        last[free_positions[j]] = 0;
        --j;
      }
      if (j < 0) break;
      ++last[free_positions[j]];
    }
  }

  void emit(const Table& last) {
    std::vector<const Table*> tuple;
    for (auto index : chosen_) tuple.push_back(&tables_[index]);
    tuple.push_back(&last);
    if (symmetry_ == nullptr) {
      result_.emitted.push_back(make_caf(params_, tuple));
      return;
    }
    for (auto s : *orbit_sigmas_) {
      std::vector<Table> images;
      images.reserve(tuple.size());
      for (const Table* t : tuple) images.push_back(symmetry_->apply(s, *t));
      std::vector<const Table*> ptrs;
      for (const auto& t : images) ptrs.push_back(&t);
      result_.emitted.push_back(make_caf(params_, ptrs));
    }
  }

  const SearchSpec& spec_;
  Params params_;
  const std::vector<Table>& tables_;
  const ColumnTree& tree_;
  const std::vector<TableFacts>& facts_;
  const Symmetry* symmetry_;
  std::atomic<std::uint64_t>& work_;
  std::uint32_t full_;
  std::vector<bool> fixed_;
  std::vector<std::vector<std::uint32_t>> masks_;
  std::vector<std::size_t> chosen_;
  std::uint64_t weight_ = 1;
  const std::vector<std::size_t>* orbit_sigmas_ = nullptr;
  std::uint64_t pending_ = 0;
  WorkerResult result_;
};

struct FirstTable {
  std::size_t index;
  std::uint64_t weight;
  // One sigma per distinct image sigma·T, identity first.
  std::vector<std::size_t> sigmas;
};

std::vector<FirstTable> first_tables(const std::vector<Table>& tables, const Symmetry* symmetry) {
  std::vector<FirstTable> out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (symmetry == nullptr) {
      out.push_back({i, 1, {0}});
      continue;
    }
    std::vector<Table> images;
    std::vector<std::size_t> sigmas;
    bool representative = true;
    for (std::size_t s = 0; s < symmetry->sigmas.size() && representative; ++s) {
      auto image = symmetry->apply(s, tables[i]);
      if (image < tables[i]) representative = false;
      if (std::find(images.begin(), images.end(), image) == images.end()) {
        images.push_back(std::move(image));
        sigmas.push_back(s);
      }
    }
    if (representative) out.push_back({i, sigmas.size(), std::move(sigmas)});
  }
  return out;
}

}  // namespace

std::vector<ElementaryCaf> enumerate_elementary_cafs(const Params& params, TableConstraint constraint,
                                                     std::uint64_t max_tables) {
  std::vector<ElementaryCaf> out;
  for (const auto& t : candidate_tables(params, constraint, max_tables)) {
    std::vector<Category> entries(t.size());
    for (std::size_t v = 0; v < t.size(); ++v) entries[v] = Category{t[v]};
    out.emplace_back(params, std::move(entries));
  }
  return out;
}

std::uint64_t estimate_search_space(const SearchSpec& spec) {
  const auto per_object =
      saturating_pow(static_cast<std::uint64_t>(spec.params.rho()), free_entries(spec.params, spec.constraint));
  return saturating_pow(per_object, static_cast<std::uint64_t>(spec.params.m()));
}

SearchReport enumerate_independent_cafs(const SearchSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  if (spec.budget == 0) throw Error(ErrorKind::InvalidParams, "search budget must be positive");
  const Params& params = spec.params;
  const auto tables = candidate_tables(params, spec.constraint, kMaxCandidateTables);
  const ColumnTree tree(params);
  std::vector<TableFacts> facts;
  facts.reserve(tables.size());
  for (const auto& t : tables) facts.push_back(table_facts(params, t.data()));
  std::optional<Symmetry> symmetry;
  if (spec.prune_category_symmetry) symmetry.emplace(params);
  const auto firsts = first_tables(tables, symmetry ? &*symmetry : nullptr);

  const int workers = std::max(1, spec.workers);
  std::atomic<std::uint64_t> work{0};
  std::vector<WorkerResult> results(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto job = [&](int w) {
    try {
      Searcher searcher(spec, tables, tree, facts, symmetry ? &*symmetry : nullptr, work);
      for (std::size_t i = static_cast<std::size_t>(w); i < firsts.size(); i += static_cast<std::size_t>(workers)) {
        searcher.run_first(firsts[i].index, firsts[i].weight, firsts[i].sigmas);
      }
      results[w] = std::move(searcher.result());
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(job, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SearchReport report{.spec = spec};
  report.candidates_scanned = estimate_search_space(spec);
  report.first_table_representatives = firsts.size();
  for (auto& r : results) {
    report.valid_count += r.valid;
    report.unanimity_count += r.unanimity;
    report.sovereignty_count += r.sovereignty;
    report.generalized_unanimity_count += r.gu;
    report.nodes_explored += r.nodes;
    report.checks += r.checks;
    std::move(r.emitted.begin(), r.emitted.end(), std::back_inserter(report.emitted));
  }
  std::sort(report.emitted.begin(), report.emitted.end());

  for (int d = 0; d < params.n(); ++d) {
    for (const auto& pi : all_permutations(params.rho())) report.census.push_back({d, pi, std::nullopt});
  }
  const auto perms = static_cast<std::size_t>(report.census.size() / static_cast<std::size_t>(params.n()));
  const auto all = all_permutations(params.rho());
  for (const auto& caf : report.emitted) {
    const auto match = check_essential_dictatorship(caf);
    if (!match) {
      if (report.non_dictatorial_count++ == 0) report.first_non_dictatorial = caf;
      continue;
    }
    const auto pos = static_cast<std::size_t>(std::find(all.begin(), all.end(), match->pi) - all.begin());
    auto& entry = report.census[static_cast<std::size_t>(match->individual) * perms + pos];
    if (!entry.caf) entry.caf = caf;
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CategoryVector find_witness_vector(const IndependentCaf& caf, int object, Category target) {
  if (object < 0 || object >= caf.params().m()) throw Error(ErrorKind::IndexOutOfRange, "object index");
  auto k = smallest_vector_with_output(caf.table(object), target);
  if (!k) {
    throw Error(ErrorKind::NoWitness, "object x" + std::to_string(object + 1) + " never receives " +
                                          category_name(target, caf.params().rho()));
  }
  return *k;
}

IndependentCaf relabel_categories(const IndependentCaf& caf, const CategoryPermutation& sigma) {
  const Params& params = caf.params();
  const auto inv = sigma.inverse();
  std::vector<ElementaryCaf> tables;
  for (const auto& t : caf.tables()) {
    std::vector<Category> entries(params.table_size());
    for (std::uint32_t v = 0; v < params.table_size(); ++v) {
      auto vec = CategoryVector::decode(v, params.n(), params.rho());
      for (auto& c : vec.entries) c = inv(c);
      entries[v] = sigma(t.at(vec.encode(params.rho())));
    }
    tables.emplace_back(params, std::move(entries));
  }
  return IndependentCaf(params, std::move(tables));
}

}  // namespace classagg
