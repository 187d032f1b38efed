#include "classagg/rules.hpp"

#include <algorithm>
#include <charconv>

namespace classagg {

TieBreakOrder::TieBreakOrder(std::vector<Classification> order) : order_(std::move(order)) {
  for (std::size_t i = 0; i < order_.size(); ++i) rank_.emplace(order_[i], static_cast<int>(i));
}

TieBreakOrder TieBreakOrder::make(const Params& params, std::vector<Classification> highest_first) {
  auto expected = enumerate_classifications(params);
  auto sorted = highest_first;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != expected) {
    throw Error(ErrorKind::BadLength, "tie-break order must list every classification exactly once");
  }
  return TieBreakOrder(std::move(highest_first));
}

TieBreakOrder TieBreakOrder::descending_lex(const Params& params) {
  auto all = enumerate_classifications(params);
  std::reverse(all.begin(), all.end());
  return TieBreakOrder(std::move(all));
}

TieBreakOrder TieBreakOrder::with_maximum(const Params& params, const Classification& top) {
  auto all = enumerate_classifications(params);
  std::reverse(all.begin(), all.end());
  auto it = std::find(all.begin(), all.end(), top);
  if (it == all.end()) throw Error(ErrorKind::BadLength, "top classification has the wrong shape");
  std::rotate(all.begin(), it, it + 1);
  return TieBreakOrder(std::move(all));
}

int TieBreakOrder::rank(const Classification& c) const {
  auto it = rank_.find(c);
  if (it == rank_.end()) throw Error(ErrorKind::BadLength, "classification not in tie-break order");
  return it->second;
}

EssentialDictatorship make_essential_dictatorship(const Params& params, int d, const CategoryPermutation& pi) {
  if (d < 0 || d >= params.n()) throw Error(ErrorKind::IndexOutOfRange, "dictator " + std::to_string(d + 1));
  if (pi.rho() != params.rho()) throw Error(ErrorKind::BadLength, "permutation size differs from rho");
  std::vector<ElementaryCaf> tables(static_cast<std::size_t>(params.m()),
                                    ElementaryCaf::projection(params, d, pi));
  std::string name = pi.is_identity() ? "dictator:" + std::to_string(d + 1)
                                      : "essential:" + std::to_string(d + 1) + ":" + permutation_name(pi);
  GeneralCaf general(params, std::move(name),
                     [d, pi](const Profile& profile) { return apply_permutation(pi, profile[d]); });
  return {std::move(general), IndependentCaf(params, std::move(tables))};
}

GeneralCaf make_plurality(const Params& params, TieBreakOrder order) {
  return GeneralCaf(params, "plurality", [order = std::move(order)](const Profile& profile) {
    std::map<Classification, int> support;
    for (const auto& c : profile.members()) ++support[c];
    const Classification* best = nullptr;
    int best_support = 0;
    int best_rank = 0;
    for (const auto& [c, count] : support) {
      const int r = order.rank(c);
      if (count > best_support || (count == best_support && r < best_rank)) {
        best = &c;
        best_support = count;
        best_rank = r;
      }
    }
    return *best;
  });
}

IndependentCaf make_per_object_majority(const Params& params, Category tie) {
  if (params.rho() != 2) throw Error(ErrorKind::InvalidParams, "per-object majority needs rho = 2");
  std::vector<Category> table(params.table_size());
  for (std::uint32_t code = 0; code < params.table_size(); ++code) {
    const auto v = CategoryVector::decode(code, params.n(), 2);
    const auto ones = std::count(v.entries.begin(), v.entries.end(), category(1));
    const auto zeros = params.n() - ones;
    table[code] = ones > zeros ? category(1) : zeros > ones ? category(0) : tie;
  }
  return IndependentCaf(params, std::vector<ElementaryCaf>(static_cast<std::size_t>(params.m()),
                                                           ElementaryCaf(params, std::move(table))));
}

Params table1_params() { return Params::make(3, 3, 2); }

TieBreakOrder table1_order() {
  const auto params = table1_params();
  return TieBreakOrder::with_maximum(params, make_classification(params, {0, 1, 1}));
}

Profile table1_profile() {
  const auto params = table1_params();
  return make_profile(params, {make_classification(params, {0, 1, 1}), make_classification(params, {1, 0, 1}),
                               make_classification(params, {1, 1, 0})});
}

Profile table1_profile_prime() {
  const auto params = table1_params();
  return make_profile(params, {make_classification(params, {0, 1, 1}), make_classification(params, {1, 1, 0}),
                               make_classification(params, {1, 1, 0})});
}

GeneralCaf make_plurality_table1() {
  auto rule = make_plurality(table1_params(), table1_order());
  return GeneralCaf(rule.params(), "plurality-table1", [rule](const Profile& p) { return rule(p); });
}

namespace {

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

int parse_individual(const Params& params, std::string_view text) {
  const auto d = parse_int(text);
  if (!d || *d < 1 || *d > params.n()) {
    throw Error(ErrorKind::SchemaError, "individual must be in [1, " + std::to_string(params.n()) + "]: " +
                                            std::string(text));
  }
  return *d - 1;
}

}  // namespace

CategoryPermutation parse_permutation(int rho, std::string_view text) {
  if (text == "id") return CategoryPermutation::identity(rho);
  if (text == "swap") {
    if (rho != 2) throw Error(ErrorKind::SchemaError, "'swap' needs rho = 2");
    return CategoryPermutation::transposition(2, 0, 1);
  }
  std::vector<int> image;
  for (auto part : split(text, ',')) {
    const auto v = parse_int(part);
    if (!v) throw Error(ErrorKind::SchemaError, "bad permutation '" + std::string(text) + "'");
    image.push_back(*v);
  }
  if (static_cast<int>(image.size()) != rho) {
    throw Error(ErrorKind::SchemaError, "permutation needs " + std::to_string(rho) + " entries");
  }
  try {
    return CategoryPermutation::make(image);
  } catch (const Error& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

Category parse_category(int rho, std::string_view text) {
  if (rho == 2 && text == "p") return category(0);
  if (rho == 2 && text == "q") return category(1);
  std::optional<int> index;
  if (!text.empty() && text.front() == 'p') {
    if (auto k = parse_int(text.substr(1))) index = *k - 1;
  } else {
    index = parse_int(text);
  }
  if (!index || *index < 0 || *index >= rho) {
    throw Error(ErrorKind::SchemaError, "bad category '" + std::string(text) + "'");
  }
  return category(*index);
}

NamedRule make_named_rule(const Params& params, std::string_view spec) {
  const auto parts = split(spec, ':');
  const auto head = parts.front();
  if (head == "plurality-table1" && parts.size() == 1) {
    return {table1_params(), make_plurality_table1(), std::nullopt};
  }
  if (head == "plurality" && parts.size() == 1) {
    return {params, make_plurality(params, TieBreakOrder::descending_lex(params)), std::nullopt};
  }
  if (head == "dictator" && parts.size() == 2) {
    auto ed = make_essential_dictatorship(params, parse_individual(params, parts[1]),
                                          CategoryPermutation::identity(params.rho()));
    return {params, std::move(ed.general), std::move(ed.independent)};
  }
  if (head == "essential" && parts.size() == 3) {
    auto ed = make_essential_dictatorship(params, parse_individual(params, parts[1]),
                                          parse_permutation(params.rho(), parts[2]));
    return {params, std::move(ed.general), std::move(ed.independent)};
  }
  if (head == "majority" && parts.size() == 2 && parts[1].substr(0, 4) == "tie=") {
    if (params.rho() != 2) throw Error(ErrorKind::SchemaError, "majority needs rho = 2");
    auto caf = make_per_object_majority(params, parse_category(2, parts[1].substr(4)));
    return {params, GeneralCaf::from(caf, std::string(spec)), std::move(caf)};
  }
  throw Error(ErrorKind::SchemaError, "unknown rule '" + std::string(spec) + "'");
}

}  // namespace classagg
