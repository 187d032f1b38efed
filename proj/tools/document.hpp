#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "classagg/rules.hpp"
#include "classagg/theorem_lab.hpp"
#include "json.hpp"

namespace classagg::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kDocumentFormat = "classagg.caf/1";

/// A CAF as stored on disk. Independent documents carry one object per
/// table mapping base-rho digit strings (individual 1 leftmost) to a
/// category index; rule documents carry a rule name understood by
/// make_named_rule.
struct CafDocument {
  Params params;
  std::variant<IndependentCaf, std::string> body;
  bool certified_valid = false;

  bool is_independent() const { return std::holds_alternative<IndependentCaf>(body); }
};

/// Digit string of a category vector code, most significant digit first.
std::string vector_key(std::uint32_t code, int n, int rho);

Json to_json(const Params& params);
Json to_json(const IndependentCaf& caf, bool certified_valid = false);
Json rule_to_json(const Params& params, const std::string& rule);

/// Errors: SchemaError naming the offending field; NotSurjective when the
/// document claims a validity certificate the tables fail.
CafDocument document_from_json(const Json& json);
/// Errors: SchemaError with line and column on malformed JSON.
CafDocument parse_document(const std::string& text);

CafDocument load_caf(const std::filesystem::path& path);
void save_caf(const IndependentCaf& caf, const std::filesystem::path& path, bool certified_valid = false);
void save_rule(const Params& params, const std::string& rule, const std::filesystem::path& path);

struct Naming {
  bool letters = false;
};

Json profile_to_json(const Profile& profile, const Naming& naming);
Json report_to_json(const Params& params, const AxiomReport& report, const Naming& naming);
Json search_report_to_json(const SearchReport& report, const Naming& naming, bool include_emitted);
Json verdict_to_json(const TheoremVerdict& verdict, const Naming& naming);
Json dictator_report_to_json(const Params& params, const DictatorReport& report, const Naming& naming);

}  // namespace classagg::cli
