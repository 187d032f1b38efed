#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "classagg/error.hpp"

namespace classagg {

/// Default cap on rho^n, the length of one elementary CAF table.
inline constexpr std::uint64_t kDefaultMaxTableEntries = std::uint64_t{1} << 20;
/// Default cap on |C|^n, the number of profiles an axiom checker may scan.
inline constexpr std::uint64_t kDefaultMaxProfiles = 50'000'000;

inline constexpr int kMaxIndividuals = 20;
inline constexpr int kMaxCategories = 16;
inline constexpr int kMaxObjects = 24;

/// Sizes of the model: n individuals, m objects, rho categories.
class Params {
 public:
  /// Throws Error{InvalidParams} unless n >= 2, rho >= 2, m >= rho and
  /// rho^n <= max_table_entries.
  static Params make(int n, int m, int rho,
                     std::uint64_t max_table_entries = kDefaultMaxTableEntries);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int rho() const noexcept { return rho_; }

  /// m > rho, the hypothesis under which every citizen sovereign independent
  /// CAF is essentially a dictatorship.
  bool strict() const noexcept { return m_ > rho_; }

  /// rho^n: number of category vectors, i.e. the length of an elementary table.
  std::uint32_t table_size() const noexcept { return table_size_; }

  std::string to_string() const;

  bool operator==(const Params&) const = default;

 private:
  Params(int n, int m, int rho, std::uint32_t table_size)
      : n_(n), m_(m), rho_(rho), table_size_(table_size) {}

  int n_;
  int m_;
  int rho_;
  std::uint32_t table_size_;
};

/// Zero-based category index. Display names (p1.., or p/q) are a presentation concern.
struct Category {
  std::uint8_t index = 0;

  constexpr auto operator<=>(const Category&) const = default;
};

constexpr Category category(int index) noexcept { return Category{static_cast<std::uint8_t>(index)}; }

/// A surjective assignment of objects to categories. Position j is object x_{j+1}.
class Classification {
 public:
  int size() const noexcept { return static_cast<int>(assignment_.size()); }
  int rho() const noexcept { return rho_; }
  Category operator[](int object) const { return assignment_[static_cast<std::size_t>(object)]; }
  std::span<const Category> assignment() const noexcept { return assignment_; }

  /// Builds a classification the caller already knows to be surjective.
  /// Surjectivity is still asserted in debug builds.
  static Classification unchecked(int rho, std::vector<Category> assignment);

  auto operator<=>(const Classification&) const = default;

 private:
  Classification(int rho, std::vector<Category> assignment)
      : rho_(rho), assignment_(std::move(assignment)) {}

  int rho_ = 0;
  std::vector<Category> assignment_;
};

/// Errors: BadLength, BadCategory, NotSurjective.
Classification make_classification(const Params& params, std::span<const int> values);
Classification make_classification(const Params& params, std::initializer_list<int> values);

bool is_surjective(std::span<const Category> assignment, int rho) noexcept;

/// All classifications, lexicographic in the assignment sequence.
std::vector<Classification> enumerate_classifications(const Params& params);

/// Number of surjections from m objects onto rho categories (inclusion-exclusion).
std::uint64_t count_classifications(const Params& params);

/// One category per individual for a single object (the column c_x of a profile).
struct CategoryVector {
  std::vector<Category> entries;

  int size() const noexcept { return static_cast<int>(entries.size()); }
  Category operator[](int individual) const { return entries[static_cast<std::size_t>(individual)]; }

  /// Mixed-radix base-rho code with individual 1 as the most significant digit.
  std::uint32_t encode(int rho) const;
  static CategoryVector decode(std::uint32_t code, int n, int rho);
  static CategoryVector constant(int n, Category value);

  auto operator<=>(const CategoryVector&) const = default;
};

/// A profile (c_1, ..., c_n) of classifications over shared params.
class Profile {
 public:
  int size() const noexcept { return static_cast<int>(members_.size()); }
  const Classification& operator[](int individual) const {
    return members_[static_cast<std::size_t>(individual)];
  }
  std::span<const Classification> members() const noexcept { return members_; }

  static Profile unchecked(std::vector<Classification> members);

  auto operator<=>(const Profile&) const = default;

 private:
  explicit Profile(std::vector<Classification> members) : members_(std::move(members)) {}

  std::vector<Classification> members_;
};

/// Errors: BadLength when the member count or a member's size/rho disagrees with params.
Profile make_profile(const Params& params, std::vector<Classification> members);

/// Errors: IndexOutOfRange.
CategoryVector profile_column(const Profile& profile, int object_index);

/// The profile whose every member is c.
Profile unanimous_profile(const Params& params, const Classification& c);

/// Builds a profile from its columns, one CategoryVector per object.
/// Errors: BadLength, BadCategory, NotSurjective (some individual misses a category).
Profile profile_from_columns(const Params& params, std::span<const CategoryVector> columns);

/// A bijection on the categories.
class CategoryPermutation {
 public:
  /// Errors: BadLength, BadCategory, NotABijection.
  static CategoryPermutation make(std::span<const int> image);
  static CategoryPermutation make(std::initializer_list<int> image);
  static CategoryPermutation identity(int rho);
  /// Exchanges categories a and b.
  static CategoryPermutation transposition(int rho, int a, int b);

  int rho() const noexcept { return static_cast<int>(image_.size()); }
  Category operator()(Category c) const { return image_[c.index]; }
  std::span<const Category> image() const noexcept { return image_; }
  bool is_identity() const noexcept;

  CategoryPermutation inverse() const;
  /// (this ∘ inner)(c) = this(inner(c)).
  CategoryPermutation after(const CategoryPermutation& inner) const;

  auto operator<=>(const CategoryPermutation&) const = default;

 private:
  explicit CategoryPermutation(std::vector<Category> image) : image_(std::move(image)) {}

  std::vector<Category> image_;
};

/// All rho! permutations in lexicographic order of their image sequence.
std::vector<CategoryPermutation> all_permutations(int rho);

Classification apply_permutation(const CategoryPermutation& pi, const Classification& c);

/// Display name of a category: "p1".."p<rho>", or "p"/"q" when letters is set and rho == 2.
std::string category_name(Category c, int rho, bool letters = false);

/// "id", "swap" (rho == 2), or the comma-separated image such as "1,2,0".
std::string permutation_name(const CategoryPermutation& pi);

/// The set of profiles C^N, visited in lexicographic order of the member
/// sequence with classifications ordered as in enumerate_classifications.
class ProfileSpace {
 public:
  /// Errors: BudgetExceeded when |C|^n > max_profiles.
  explicit ProfileSpace(const Params& params, std::uint64_t max_profiles = kDefaultMaxProfiles);

  const Params& params() const noexcept { return params_; }
  const std::vector<Classification>& classifications() const noexcept { return classifications_; }
  std::uint64_t size() const noexcept { return size_; }

  Profile profile(std::span<const std::uint32_t> member_indices) const;

  /// Calls visit(member_indices, column_codes) for each profile in order, where
  /// column_codes[x] is the encoded column of object x. Stops early and
  /// returns false when visit returns false.
  template <class Visitor>
  bool for_each(Visitor&& visit) const;

 private:
  Params params_;
  std::vector<Classification> classifications_;
  std::uint64_t size_ = 0;
  std::vector<std::uint32_t> weights_;  // rho^(n-1-i)
};

template <class Visitor>
bool ProfileSpace::for_each(Visitor&& visit) const {
  const int n = params_.n();
  const int m = params_.m();
  const auto count = static_cast<std::uint32_t>(classifications_.size());
  std::vector<std::uint32_t> members(static_cast<std::size_t>(n), 0);
  std::vector<std::uint32_t> columns(static_cast<std::size_t>(m), 0);
  for (int x = 0; x < m; ++x) {
    std::uint32_t code = 0;
    for (int i = 0; i < n; ++i) code += classifications_[0][x].index * weights_[i];
    columns[x] = code;
  }
  while (true) {
    if (!visit(std::span<const std::uint32_t>(members), std::span<const std::uint32_t>(columns))) {
      return false;
    }
    int i = n - 1;
    while (i >= 0 && members[i] + 1 == count) --i;
    if (i < 0) return true;
    for (int k = i; k < n; ++k) {
      const std::uint32_t next = k == i ? members[k] + 1 : 0;
      const Classification& before = classifications_[members[k]];
      const Classification& after = classifications_[next];
      for (int x = 0; x < m; ++x) {
        columns[x] += (after[x].index - before[x].index) * weights_[k];
      }
      members[k] = next;
    }
  }
}

}  // namespace classagg
