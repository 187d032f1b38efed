#include "classagg/caf.hpp"

namespace classagg {

ElementaryCaf::ElementaryCaf(const Params& params, std::vector<Category> table)
    : params_(params), table_(std::move(table)) {
  if (table_.size() != params_.table_size()) {
    throw Error(ErrorKind::BadLength, "elementary table needs " + std::to_string(params_.table_size()) +
                                          " entries, got " + std::to_string(table_.size()));
  }
  for (Category c : table_) {
    if (c.index >= params_.rho()) {
      throw Error(ErrorKind::BadCategory, "table entry " + std::to_string(c.index));
    }
  }
}

ElementaryCaf ElementaryCaf::constant(const Params& params, Category value) {
  return ElementaryCaf(params, std::vector<Category>(params.table_size(), value));
}

ElementaryCaf ElementaryCaf::projection(const Params& params, int individual, const CategoryPermutation& pi) {
  if (individual < 0 || individual >= params.n()) {
    throw Error(ErrorKind::IndexOutOfRange, "individual " + std::to_string(individual));
  }
  std::vector<Category> table(params.table_size());
  for (std::uint32_t code = 0; code < params.table_size(); ++code) {
    table[code] = pi(CategoryVector::decode(code, params.n(), params.rho())[individual]);
  }
  return ElementaryCaf(params, std::move(table));
}

std::uint32_t constant_code(const Params& params, Category p) noexcept {
  std::uint32_t code = 0;
  for (int i = 0; i < params.n(); ++i) code = code * static_cast<std::uint32_t>(params.rho()) + p.index;
  return code;
}

Category ElementaryCaf::on_constant(Category p) const noexcept { return table_[constant_code(params_, p)]; }

bool ElementaryCaf::unanimous_on_constants() const noexcept {
  for (int p = 0; p < params_.rho(); ++p) {
    if (on_constant(category(p)) != category(p)) return false;
  }
  return true;
}

std::uint32_t ElementaryCaf::image_mask() const noexcept {
  std::uint32_t mask = 0;
  for (Category c : table_) mask |= std::uint32_t{1} << c.index;
  return mask;
}

IndependentCaf::IndependentCaf(const Params& params, std::vector<ElementaryCaf> tables)
    : params_(params), tables_(std::move(tables)) {
  if (static_cast<int>(tables_.size()) != params_.m()) {
    throw Error(ErrorKind::BadLength, "independent CAF needs " + std::to_string(params_.m()) +
                                          " tables, got " + std::to_string(tables_.size()));
  }
  for (const auto& t : tables_) {
    if (!(t.params() == params_)) throw Error(ErrorKind::BadLength, "table params differ from CAF params");
  }
}

std::vector<Category> IndependentCaf::evaluate(const Profile& profile) const {
  std::vector<Category> out;
  out.reserve(tables_.size());
  for (int x = 0; x < params_.m(); ++x) out.push_back(tables_[x](profile_column(profile, x)));
  return out;
}

std::vector<Category> IndependentCaf::evaluate_columns(std::span<const std::uint32_t> column_codes) const {
  std::vector<Category> out;
  out.reserve(tables_.size());
  for (int x = 0; x < params_.m(); ++x) out.push_back(tables_[x].at(column_codes[x]));
  return out;
}

Classification IndependentCaf::aggregate(const Profile& profile) const {
  auto out = evaluate(profile);
  if (!is_surjective(out, params_.rho())) {
    throw Error(ErrorKind::NotSurjective, "aggregate of the independent tuple misses a category");
  }
  return Classification::unchecked(params_.rho(), std::move(out));
}

GeneralCaf GeneralCaf::from(IndependentCaf caf, std::string name) {
  const Params params = caf.params();
  return GeneralCaf(params, std::move(name),
                    [caf = std::move(caf)](const Profile& profile) { return caf.aggregate(profile); });
}

}  // namespace classagg
