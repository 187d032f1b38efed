#pragma once

#include <map>
#include <optional>
#include <string_view>

#include "classagg/caf.hpp"

namespace classagg {

/// A linear order on all classifications, highest first.
class TieBreakOrder {
 public:
  /// Errors: BadLength when the sequence is not a permutation of C.
  static TieBreakOrder make(const Params& params, std::vector<Classification> highest_first);
  /// Descending lexicographic order on assignment sequences.
  static TieBreakOrder descending_lex(const Params& params);
  /// `top` first, the remaining classifications in descending lexicographic order.
  static TieBreakOrder with_maximum(const Params& params, const Classification& top);

  std::span<const Classification> order() const noexcept { return order_; }
  /// 0 for the highest classification.
  int rank(const Classification& c) const;

 private:
  explicit TieBreakOrder(std::vector<Classification> order);

  std::vector<Classification> order_;
  std::map<Classification, int> rank_;
};

struct EssentialDictatorship {
  GeneralCaf general;
  IndependentCaf independent;
};

/// alpha(c) = pi ∘ c_d, in both general and table form. `d` is zero-based.
EssentialDictatorship make_essential_dictatorship(const Params& params, int d, const CategoryPermutation& pi);

/// Plurality over whole classifications; ties go to the order's highest.
GeneralCaf make_plurality(const Params& params, TieBreakOrder order);

/// Per-object majority for rho = 2 with ties to `tie`. The result is not
/// guaranteed to be a valid CAF. Errors: InvalidParams when rho != 2.
IndependentCaf make_per_object_majority(const Params& params, Category tie);

/// The setting of the worked plurality example: n = 3, m = 3 (x, y, z), rho = 2 (p, q).
Params table1_params();
/// Highest element maps x to p and y, z to q; the rest follow descending lexicographic order.
TieBreakOrder table1_order();
/// Individuals classify (x, y, z) as (p,q,q), (q,p,q), (q,q,p).
Profile table1_profile();
/// Individuals classify (x, y, z) as (p,q,q), (q,q,p), (q,q,p).
Profile table1_profile_prime();
GeneralCaf make_plurality_table1();

struct NamedRule {
  Params params;
  GeneralCaf general;
  std::optional<IndependentCaf> independent;
};

/// Parses `plurality-table1`, `plurality`, `dictator:<d>`, `essential:<d>:<perm>`
/// or `majority:tie=<category>`. Individuals are one-based; perm is `id`,
/// `swap` or a comma list of images. `plurality-table1` ignores `params`.
/// Errors: SchemaError on unknown names or malformed arguments.
NamedRule make_named_rule(const Params& params, std::string_view spec);

/// Parses `id`, `swap` or a comma-separated image list. Errors: SchemaError.
CategoryPermutation parse_permutation(int rho, std::string_view text);
/// Parses `p`/`q` (rho == 2), `p<k>` (one-based) or a zero-based index. Errors: SchemaError.
Category parse_category(int rho, std::string_view text);

}  // namespace classagg
