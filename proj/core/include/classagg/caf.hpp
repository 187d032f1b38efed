#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "classagg/core.hpp"

namespace classagg {

/// A total map P^N -> P stored as a table indexed by CategoryVector::encode.
class ElementaryCaf {
 public:
  /// Errors: BadLength (table size != rho^n), BadCategory.
  ElementaryCaf(const Params& params, std::vector<Category> table);

  static ElementaryCaf constant(const Params& params, Category value);
  /// v -> pi(v[individual]).
  static ElementaryCaf projection(const Params& params, int individual, const CategoryPermutation& pi);

  const Params& params() const noexcept { return params_; }
  std::span<const Category> table() const noexcept { return table_; }
  Category at(std::uint32_t code) const { return table_[code]; }
  Category operator()(const CategoryVector& v) const { return table_[v.encode(params_.rho())]; }

  /// Whether the table maps each constant vector (p, ..., p) to p.
  bool unanimous_on_constants() const noexcept;
  /// Output on the constant vector (p, ..., p).
  Category on_constant(Category p) const noexcept;
  /// Bit set of the categories the table produces.
  std::uint32_t image_mask() const noexcept;

  bool operator==(const ElementaryCaf& other) const { return table_ == other.table_; }
  auto operator<=>(const ElementaryCaf& other) const { return table_ <=> other.table_; }

 private:
  Params params_;
  std::vector<Category> table_;
};

/// Code of the constant vector (p, ..., p) under the mixed-radix encoding.
std::uint32_t constant_code(const Params& params, Category p) noexcept;

/// An m-tuple of elementary CAFs. Whether the tuple maps every profile to a
/// surjective output is NOT assumed; check_validity decides it.
class IndependentCaf {
 public:
  /// Errors: BadLength when the table count differs from m or a table has other params.
  IndependentCaf(const Params& params, std::vector<ElementaryCaf> tables);

  const Params& params() const noexcept { return params_; }
  const ElementaryCaf& table(int object) const { return tables_[static_cast<std::size_t>(object)]; }
  std::span<const ElementaryCaf> tables() const noexcept { return tables_; }

  /// Raw aggregate (alpha_x(c_x))_x; may be non-surjective for invalid tuples.
  std::vector<Category> evaluate(const Profile& profile) const;
  std::vector<Category> evaluate_columns(std::span<const std::uint32_t> column_codes) const;
  /// Errors: NotSurjective when the aggregate misses a category.
  Classification aggregate(const Profile& profile) const;

  bool operator==(const IndependentCaf& other) const { return tables_ == other.tables_; }
  auto operator<=>(const IndependentCaf& other) const { return tables_ <=> other.tables_; }

 private:
  Params params_;
  std::vector<ElementaryCaf> tables_;
};

/// An arbitrary rule C^N -> C given by an evaluation function.
class GeneralCaf {
 public:
  using Rule = std::function<Classification(const Profile&)>;

  GeneralCaf(const Params& params, std::string name, Rule rule)
      : params_(params), name_(std::move(name)), rule_(std::move(rule)) {}

  /// Views an independent CAF as a general one; evaluation throws
  /// NotSurjective on profiles where the tuple is not a genuine CAF.
  static GeneralCaf from(IndependentCaf caf, std::string name = "independent");

  const Params& params() const noexcept { return params_; }
  const std::string& name() const noexcept { return name_; }

  Classification operator()(const Profile& profile) const { return rule_(profile); }

 private:
  Params params_;
  std::string name_;
  Rule rule_;
};

}  // namespace classagg
