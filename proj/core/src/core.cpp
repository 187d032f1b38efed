#include "classagg/core.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace classagg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::BadLength: return "BadLength";
    case ErrorKind::BadCategory: return "BadCategory";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotABijection: return "NotABijection";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

Params Params::make(int n, int m, int rho, std::uint64_t max_table_entries) {
  if (n < 2 || n > kMaxIndividuals) {
    throw Error(ErrorKind::InvalidParams, "n must lie in [2, " + std::to_string(kMaxIndividuals) + "]");
  }
  if (rho < 2 || rho > kMaxCategories) {
    throw Error(ErrorKind::InvalidParams, "rho must lie in [2, " + std::to_string(kMaxCategories) + "]");
  }
  if (m < rho || m > kMaxObjects) {
    throw Error(ErrorKind::InvalidParams,
                "m must lie in [rho, " + std::to_string(kMaxObjects) + "], got m=" + std::to_string(m));
  }
  std::uint64_t entries = 1;
  for (int i = 0; i < n; ++i) {
    entries *= static_cast<std::uint64_t>(rho);
    if (entries > max_table_entries) {
      throw BudgetExceeded("rho^n exceeds the table budget of " + std::to_string(max_table_entries),
                           entries);
    }
  }
  return Params(n, m, rho, static_cast<std::uint32_t>(entries));
}

std::string Params::to_string() const {
  return "(n=" + std::to_string(n_) + ", m=" + std::to_string(m_) + ", rho=" + std::to_string(rho_) + ")";
}

bool is_surjective(std::span<const Category> assignment, int rho) noexcept {
  std::uint32_t seen = 0;
  for (Category c : assignment) {
    if (c.index < rho) seen |= std::uint32_t{1} << c.index;
  }
  return seen == (std::uint32_t{1} << rho) - 1;
}

Classification Classification::unchecked(int rho, std::vector<Category> assignment) {
  assert(is_surjective(assignment, rho));
  return Classification(rho, std::move(assignment));
}

Classification make_classification(const Params& params, std::span<const int> values) {
  if (static_cast<int>(values.size()) != params.m()) {
    throw Error(ErrorKind::BadLength, "classification needs " + std::to_string(params.m()) +
                                          " entries, got " + std::to_string(values.size()));
  }
  std::vector<Category> assignment;
  assignment.reserve(values.size());
  for (int v : values) {
    if (v < 0 || v >= params.rho()) {
      throw Error(ErrorKind::BadCategory, "category " + std::to_string(v) + " outside [0, " +
                                              std::to_string(params.rho()) + ")");
    }
    assignment.push_back(category(v));
  }
  if (!is_surjective(assignment, params.rho())) {
    throw Error(ErrorKind::NotSurjective, "some category receives no object");
  }
  return Classification::unchecked(params.rho(), std::move(assignment));
}

Classification make_classification(const Params& params, std::initializer_list<int> values) {
  return make_classification(params, std::span<const int>(values.begin(), values.size()));
}

std::vector<Classification> enumerate_classifications(const Params& params) {
  const int m = params.m();
  const int rho = params.rho();
  std::vector<Classification> out;
  std::vector<Category> digits(static_cast<std::size_t>(m), Category{});
  while (true) {
    if (is_surjective(digits, rho)) out.push_back(Classification::unchecked(rho, digits));
    int j = m - 1;
    while (j >= 0 && digits[j].index + 1 == rho) {
      digits[j] = Category{};
      --j;
    }
    if (j < 0) break;
    ++digits[j].index;
  }
  return out;
}

std::uint64_t count_classifications(const Params& params) {
  // sum_k (-1)^k C(rho, k) (rho - k)^m
  const int rho = params.rho();
  __int128 total = 0;
  __int128 binom = 1;
  for (int k = 0; k <= rho; ++k) {
    __int128 power = 1;
    for (int j = 0; j < params.m(); ++j) power *= (rho - k);
    total += (k % 2 == 0 ? 1 : -1) * binom * power;
    binom = binom * (rho - k) / (k + 1);
  }
  return static_cast<std::uint64_t>(total);
}

std::uint32_t CategoryVector::encode(int rho) const {
  std::uint32_t code = 0;
  for (Category c : entries) code = code * static_cast<std::uint32_t>(rho) + c.index;
  return code;
}

CategoryVector CategoryVector::decode(std::uint32_t code, int n, int rho) {
  CategoryVector v;
  v.entries.resize(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    v.entries[i] = category(static_cast<int>(code % static_cast<std::uint32_t>(rho)));
    code /= static_cast<std::uint32_t>(rho);
  }
  return v;
}

CategoryVector CategoryVector::constant(int n, Category value) {
  return CategoryVector{std::vector<Category>(static_cast<std::size_t>(n), value)};
}

Profile Profile::unchecked(std::vector<Classification> members) { return Profile(std::move(members)); }

Profile make_profile(const Params& params, std::vector<Classification> members) {
  if (static_cast<int>(members.size()) != params.n()) {
    throw Error(ErrorKind::BadLength, "profile needs " + std::to_string(params.n()) + " members, got " +
                                          std::to_string(members.size()));
  }
  for (const auto& c : members) {
    if (c.size() != params.m() || c.rho() != params.rho()) {
      throw Error(ErrorKind::BadLength, "profile member does not match " + params.to_string());
    }
  }
  return Profile::unchecked(std::move(members));
}

CategoryVector profile_column(const Profile& profile, int object_index) {
  if (profile.size() == 0 || object_index < 0 || object_index >= profile[0].size()) {
    throw Error(ErrorKind::IndexOutOfRange, "object index " + std::to_string(object_index));
  }
  CategoryVector column;
  column.entries.reserve(static_cast<std::size_t>(profile.size()));
  for (const auto& member : profile.members()) column.entries.push_back(member[object_index]);
  return column;
}

Profile unanimous_profile(const Params& params, const Classification& c) {
  return make_profile(params, std::vector<Classification>(static_cast<std::size_t>(params.n()), c));
}

Profile profile_from_columns(const Params& params, std::span<const CategoryVector> columns) {
  if (static_cast<int>(columns.size()) != params.m()) {
    throw Error(ErrorKind::BadLength, "profile needs " + std::to_string(params.m()) + " columns");
  }
  std::vector<Classification> members;
  members.reserve(static_cast<std::size_t>(params.n()));
  for (int i = 0; i < params.n(); ++i) {
    std::vector<int> values;
    values.reserve(columns.size());
    for (const auto& column : columns) {
      if (column.size() != params.n()) {
        throw Error(ErrorKind::BadLength, "column length differs from n");
      }
      values.push_back(column[i].index);
    }
    members.push_back(make_classification(params, values));
  }
  return Profile::unchecked(std::move(members));
}

CategoryPermutation CategoryPermutation::make(std::span<const int> image) {
  const int rho = static_cast<int>(image.size());
  if (rho < 1 || rho > kMaxCategories) throw Error(ErrorKind::BadLength, "permutation size");
  std::vector<Category> out;
  std::vector<bool> hit(static_cast<std::size_t>(rho), false);
  for (int v : image) {
    if (v < 0 || v >= rho) throw Error(ErrorKind::BadCategory, "permutation entry " + std::to_string(v));
    if (hit[v]) throw Error(ErrorKind::NotABijection, "permutation repeats " + std::to_string(v));
    hit[v] = true;
    out.push_back(category(v));
  }
  return CategoryPermutation(std::move(out));
}

CategoryPermutation CategoryPermutation::make(std::initializer_list<int> image) {
  return make(std::span<const int>(image.begin(), image.size()));
}

CategoryPermutation CategoryPermutation::identity(int rho) {
  std::vector<Category> image(static_cast<std::size_t>(rho));
  for (int p = 0; p < rho; ++p) image[p] = category(p);
  return CategoryPermutation(std::move(image));
}

CategoryPermutation CategoryPermutation::transposition(int rho, int a, int b) {
  auto pi = identity(rho);
  std::swap(pi.image_.at(static_cast<std::size_t>(a)), pi.image_.at(static_cast<std::size_t>(b)));
  return pi;
}

bool CategoryPermutation::is_identity() const noexcept {
  for (std::size_t p = 0; p < image_.size(); ++p) {
    if (image_[p].index != p) return false;
  }
  return true;
}

CategoryPermutation CategoryPermutation::inverse() const {
  std::vector<Category> inv(image_.size());
  for (std::size_t p = 0; p < image_.size(); ++p) inv[image_[p].index] = category(static_cast<int>(p));
  return CategoryPermutation(std::move(inv));
}

CategoryPermutation CategoryPermutation::after(const CategoryPermutation& inner) const {
  std::vector<Category> out(image_.size());
  for (std::size_t p = 0; p < image_.size(); ++p) out[p] = image_[inner.image_[p].index];
  return CategoryPermutation(std::move(out));
}

std::vector<CategoryPermutation> all_permutations(int rho) {
  std::vector<int> image(static_cast<std::size_t>(rho));
  std::iota(image.begin(), image.end(), 0);
  std::vector<CategoryPermutation> out;
  do {
    out.push_back(CategoryPermutation::make(image));
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

Classification apply_permutation(const CategoryPermutation& pi, const Classification& c) {
  assert(pi.rho() == c.rho());
  std::vector<Category> out;
  out.reserve(static_cast<std::size_t>(c.size()));
  for (Category v : c.assignment()) out.push_back(pi(v));
  return Classification::unchecked(c.rho(), std::move(out));
}

std::string category_name(Category c, int rho, bool letters) {
  if (letters && rho == 2) return c.index == 0 ? "p" : "q";
  return "p" + std::to_string(c.index + 1);
}

std::string permutation_name(const CategoryPermutation& pi) {
  if (pi.is_identity()) return "id";
  if (pi.rho() == 2) return "swap";
  std::string out;
  for (Category c : pi.image()) {
    if (!out.empty()) out += ',';
    out += std::to_string(c.index);
  }
  return out;
}

namespace {

std::uint64_t checked_profile_count(const Params& params, std::uint64_t max_profiles) {
  const std::uint64_t per_member = count_classifications(params);
  std::uint64_t size = 1;
  for (int i = 0; i < params.n(); ++i) {
    if (size > max_profiles / per_member) {
      throw BudgetExceeded("profile space " + params.to_string() + " exceeds " +
                               std::to_string(max_profiles) + " profiles",
                           0);
    }
    size *= per_member;
  }
  return size;
}

}  // namespace

ProfileSpace::ProfileSpace(const Params& params, std::uint64_t max_profiles)
    : params_(params), size_(checked_profile_count(params, max_profiles)) {
  classifications_ = enumerate_classifications(params);
  weights_.assign(static_cast<std::size_t>(params.n()), 1);
  for (int i = params.n() - 2; i >= 0; --i) {
    weights_[i] = weights_[i + 1] * static_cast<std::uint32_t>(params.rho());
  }
}

Profile ProfileSpace::profile(std::span<const std::uint32_t> member_indices) const {
  std::vector<Classification> members;
  members.reserve(member_indices.size());
  for (auto idx : member_indices) members.push_back(classifications_.at(idx));
  return Profile::unchecked(std::move(members));
}

}  // namespace classagg
