#include "document.hpp"

#include <fstream>
#include <sstream>

namespace classagg::cli {
namespace {

constexpr std::string_view kDigits = "0123456789abcdef";

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SchemaError, where + ": " + what);
}

int digit_value(char ch) {
  const auto pos = kDigits.find(ch);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

int require_int(const Json& json, const std::string& where) {
  if (!json.is_number_integer()) schema_error(where, "expected an integer");
  return json.get<int>();
}

Params params_from_json(const Json& json) {
  if (!json.is_object()) schema_error("params", "expected an object");
  for (const char* key : {"n", "m", "rho"}) {
    if (!json.contains(key)) schema_error(std::string("params.") + key, "missing");
  }
  const int n = require_int(json["n"], "params.n");
  const int m = require_int(json["m"], "params.m");
  const int rho = require_int(json["rho"], "params.rho");
  try {
    return Params::make(n, m, rho);
  } catch (const Error& e) {
    schema_error("params", e.what());
  }
}

ElementaryCaf table_from_json(const Params& params, const Json& json, const std::string& where) {
  if (!json.is_object()) schema_error(where, "expected an object keyed by digit strings");
  const int n = params.n();
  const int rho = params.rho();
  std::vector<int> table(params.table_size(), -1);
  for (const auto& [key, value] : json.items()) {
    const std::string at = where + "['" + key + "']";
    if (static_cast<int>(key.size()) != n) {
      schema_error(at, "key length " + std::to_string(key.size()) + " != n=" + std::to_string(n));
    }
    std::uint32_t code = 0;
    for (char ch : key) {
      const int digit = digit_value(ch);
      if (digit < 0 || digit >= rho) schema_error(at, "digit '" + std::string(1, ch) + "' outside base " + std::to_string(rho));
      code = code * static_cast<std::uint32_t>(rho) + static_cast<std::uint32_t>(digit);
    }
    const int out = require_int(value, at);
    if (out < 0 || out >= rho) {
      schema_error(at, "category index " + std::to_string(out) + " outside [0," + std::to_string(rho) + ")");
    }
    table[code] = out;
  }
  std::vector<Category> entries;
  entries.reserve(table.size());
  for (std::uint32_t code = 0; code < table.size(); ++code) {
    if (table[code] < 0) schema_error(where, "missing key '" + vector_key(code, n, rho) + "'");
    entries.push_back(category(table[code]));
  }
  return ElementaryCaf(params, std::move(entries));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::SchemaError, "cannot write " + path.string());
  out << text;
}

std::string render(std::span<const Category> entries, int rho, const Naming& naming) {
  std::string text;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0) text += ' ';
    text += category_name(entries[i], rho, naming.letters);
  }
  return text;
}

Json indices(std::span<const Category> entries) {
  Json array = Json::array();
  for (Category c : entries) array.push_back(c.index);
  return array;
}

Json name_or_null(const std::optional<IndependentCaf>& caf) {
  return caf ? to_json(*caf) : Json(nullptr);
}

}  // namespace

std::string vector_key(std::uint32_t code, int n, int rho) {
  std::string key(static_cast<std::size_t>(n), '0');
  for (int i = n - 1; i >= 0; --i) {
    key[static_cast<std::size_t>(i)] = kDigits[code % static_cast<std::uint32_t>(rho)];
    code /= static_cast<std::uint32_t>(rho);
  }
  return key;
}

Json to_json(const Params& params) {
  return Json{{"n", params.n()}, {"m", params.m()}, {"rho", params.rho()}};
}

Json to_json(const IndependentCaf& caf, bool certified_valid) {
  const Params& params = caf.params();
  Json tables = Json::array();
  for (const ElementaryCaf& table : caf.tables()) {
    Json entries = Json::object();
    for (std::uint32_t code = 0; code < params.table_size(); ++code) {
      entries[vector_key(code, params.n(), params.rho())] = table.at(code).index;
    }
    tables.push_back(std::move(entries));
  }
  Json doc{{"format", kDocumentFormat}, {"params", to_json(params)}, {"kind", "independent"}, {"tables", std::move(tables)}};
  if (certified_valid) doc["certified_valid"] = true;
  return doc;
}

Json rule_to_json(const Params& params, const std::string& rule) {
  return Json{{"format", kDocumentFormat}, {"params", to_json(params)}, {"kind", "rule"}, {"rule", rule}};
}

CafDocument document_from_json(const Json& json) {
  if (!json.is_object()) schema_error("document", "expected an object");
  if (json.contains("format") && json["format"] != kDocumentFormat) {
    schema_error("format", "unsupported format, expected " + std::string(kDocumentFormat));
  }
  if (!json.contains("params")) schema_error("params", "missing");
  if (!json.contains("kind")) schema_error("kind", "missing");
  Params params = params_from_json(json["params"]);
  const Json& kind = json["kind"];
  if (!kind.is_string()) schema_error("kind", "expected a string");

  if (kind == "rule") {
    if (!json.contains("rule") || !json["rule"].is_string()) schema_error("rule", "expected a rule name");
    auto rule = json["rule"].get<std::string>();
    make_named_rule(params, rule);  // rejects unknown names early
    return CafDocument{params, rule, false};
  }
  if (kind != "independent") schema_error("kind", "expected \"independent\" or \"rule\"");

  if (!json.contains("tables") || !json["tables"].is_array()) schema_error("tables", "expected an array");
  const Json& tables = json["tables"];
  if (static_cast<int>(tables.size()) != params.m()) {
    schema_error("tables", std::to_string(tables.size()) + " tables for m=" + std::to_string(params.m()));
  }
  std::vector<ElementaryCaf> elementary;
  for (std::size_t x = 0; x < tables.size(); ++x) {
    elementary.push_back(table_from_json(params, tables[x], "tables[" + std::to_string(x) + "]"));
  }
  IndependentCaf caf(params, std::move(elementary));

  bool certified = false;
  if (json.contains("certified_valid")) {
    if (!json["certified_valid"].is_boolean()) schema_error("certified_valid", "expected a boolean");
    certified = json["certified_valid"].get<bool>();
  }
  if (certified && !check_validity(caf).pass) {
    throw Error(ErrorKind::NotSurjective, "certified_valid: some profile has a non-surjective aggregate");
  }
  return CafDocument{params, std::move(caf), certified};
}

CafDocument parse_document(const std::string& text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::SchemaError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": malformed JSON");
  }
  return document_from_json(json);
}

CafDocument load_caf(const std::filesystem::path& path) { return parse_document(slurp(path)); }

void save_caf(const IndependentCaf& caf, const std::filesystem::path& path, bool certified_valid) {
  write_file(path, to_json(caf, certified_valid).dump(2) + "\n");
}

void save_rule(const Params& params, const std::string& rule, const std::filesystem::path& path) {
  write_file(path, rule_to_json(params, rule).dump(2) + "\n");
}

Json profile_to_json(const Profile& profile, const Naming& naming) {
  Json members = Json::array();
  Json rendered = Json::array();
  for (const Classification& c : profile.members()) {
    members.push_back(indices(c.assignment()));
    rendered.push_back(render(c.assignment(), c.rho(), naming));
  }
  return Json{{"members", std::move(members)}, {"rendered", std::move(rendered)}};
}

Json report_to_json(const Params& params, const AxiomReport& report, const Naming& naming) {
  const int rho = params.rho();
  Json out{{"axiom", to_string(report.axiom)}, {"pass", report.pass}};
  std::visit(
      [&](const auto& w) {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, std::monostate>) {
          out["witness"] = nullptr;
        } else if constexpr (std::is_same_v<W, NonSurjectiveAggregate>) {
          out["witness"] = Json{{"type", "non-surjective-aggregate"},
                                {"profile", profile_to_json(w.profile, naming)},
                                {"aggregate", indices(w.aggregate)},
                                {"aggregate_rendered", render(w.aggregate, rho, naming)}};
        } else if constexpr (std::is_same_v<W, UnanimityViolation>) {
          out["witness"] = Json{{"type", "unanimity-violation"},
                                {"input", indices(w.input.assignment())},
                                {"input_rendered", render(w.input.assignment(), rho, naming)},
                                {"output", indices(w.output)},
                                {"output_rendered", render(w.output, rho, naming)}};
        } else if constexpr (std::is_same_v<W, IndependenceViolation>) {
          out["witness"] = Json{{"type", "independence-violation"},
                                {"object", w.object},
                                {"first", profile_to_json(w.first, naming)},
                                {"second", profile_to_json(w.second, naming)},
                                {"first_output", w.first_output.index},
                                {"second_output", w.second_output.index},
                                {"outputs_rendered", category_name(w.first_output, rho, naming.letters) + " vs " +
                                                         category_name(w.second_output, rho, naming.letters)}};
        } else if constexpr (std::is_same_v<W, SovereigntyGap>) {
          out["witness"] = Json{{"type", "sovereignty-gap"},
                                {"object", w.object},
                                {"category", w.category.index},
                                {"category_rendered", category_name(w.category, rho, naming.letters)}};
        }
      },
      report.witness);
  if (!report.sovereignty_witnesses.empty()) {
    Json list = Json::array();
    for (const SovereigntyWitness& s : report.sovereignty_witnesses) {
      list.push_back(Json{{"object", s.object}, {"category", s.category.index}, {"profile", profile_to_json(s.profile, naming)}});
    }
    out["sovereignty_witnesses"] = std::move(list);
  }
  if (report.induced) out["induced"] = to_json(*report.induced);
  return out;
}

Json search_report_to_json(const SearchReport& report, const Naming& naming, bool include_emitted) {
  (void)naming;
  const SearchSpec& spec = report.spec;
  Json out{{"spec",
            Json{{"params", to_json(spec.params)},
                 {"require", to_string(spec.required)},
                 {"constraint", to_string(spec.constraint)},
                 {"budget", spec.budget},
                 {"prune", spec.prune_category_symmetry},
                 {"workers", spec.workers}}},
           {"counts",
            Json{{"candidates_scanned", report.candidates_scanned},
                 {"valid", report.valid_count},
                 {"unanimity", report.unanimity_count},
                 {"citizen_sovereignty", report.sovereignty_count},
                 {"generalized_unanimity", report.generalized_unanimity_count},
                 {"emitted", report.emitted.size()},
                 {"non_dictatorial", report.non_dictatorial_count}}},
           {"work",
            Json{{"nodes_explored", report.nodes_explored},
                 {"checks", report.checks},
                 {"first_table_representatives", report.first_table_representatives}}}};
  Json census = Json::array();
  for (const CensusEntry& entry : report.census) {
    census.push_back(Json{{"individual", entry.individual + 1},
                          {"pi", permutation_name(entry.pi)},
                          {"found", entry.caf.has_value()}});
  }
  out["census"] = std::move(census);
  out["first_non_dictatorial"] = name_or_null(report.first_non_dictatorial);
  if (include_emitted) {
    Json emitted = Json::array();
    for (const IndependentCaf& caf : report.emitted) emitted.push_back(to_json(caf));
    out["emitted"] = std::move(emitted);
  }
  return out;
}

Json verdict_to_json(const TheoremVerdict& verdict, const Naming& naming) {
  const SearchReport& search = verdict.search;
  Json counts{{"candidates_scanned", search.candidates_scanned},
              {"valid", search.valid_count},
              {"unanimity", search.unanimity_count},
              {"citizen_sovereignty", search.sovereignty_count},
              {"generalized_unanimity", search.generalized_unanimity_count},
              {"emitted", search.emitted.size()},
              {"dictatorships", verdict.dictatorship_count},
              {"essential_dictatorships", verdict.essential_dictatorship_count},
              {"other", verdict.other_count},
              {"pivotal_checked", verdict.pivotal_checked},
              {"pivotal_agreements", verdict.pivotal_agreements}};
  if (verdict.expected_count) counts["expected"] = *verdict.expected_count;
  Json out{{"claim", to_string(verdict.claim)},
           {"params", to_json(verdict.params)},
           {"holds", verdict.holds},
           {"counts", std::move(counts)}};
  if (verdict.characterization_matches) out["characterization_matches"] = *verdict.characterization_matches;
  Json census = Json::array();
  for (const CensusEntry& entry : search.census) {
    census.push_back(Json{{"individual", entry.individual + 1},
                          {"pi", permutation_name(entry.pi)},
                          {"found", entry.caf.has_value()}});
  }
  out["census"] = std::move(census);
  out["counterexample"] = name_or_null(verdict.counterexample);
  out["search"] = search_report_to_json(search, naming, false)["spec"];
  return out;
}

Json dictator_report_to_json(const Params& params, const DictatorReport& report, const Naming& naming) {
  const int rho = params.rho();
  Json ladder = Json::array();
  for (const LadderStep& step : report.ladder) {
    ladder.push_back(Json{{"i", step.index},
                          {"vector", render(step.vector.entries, rho, naming)},
                          {"output", category_name(step.output, rho, naming.letters)}});
  }
  Json trace = Json::array();
  for (const ProfileStep& step : report.trace) {
    trace.push_back(Json{{"label", step.label},
                         {"profile", profile_to_json(step.profile, naming)},
                         {"aggregate", render(step.aggregate, rho, naming)}});
  }
  Json pi_map = Json::object();
  for (int p = 0; p < rho; ++p) {
    pi_map[category_name(category(p), rho, naming.letters)] = category_name(report.pi(category(p)), rho, naming.letters);
  }
  return Json{{"individual", report.individual + 1},
              {"pi", permutation_name(report.pi)},
              {"pi_map", std::move(pi_map)},
              {"method", report.method == ExtractionMethod::Pivotal ? "pivotal" : "exhaustive"},
              {"verified", report.verified},
              {"profiles_checked", report.profiles_checked},
              {"ladder", std::move(ladder)},
              {"trace", std::move(trace)}};
}

}  // namespace classagg::cli
