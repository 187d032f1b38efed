#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "document.hpp"

namespace classagg::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Flags {
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> rho;
  std::string require;
  std::optional<std::uint64_t> budget;
  bool prune = false;
  int workers = 1;
  std::string out;
  bool letters = false;
  bool unanimous_tables = false;
  std::string rule;
  std::string caf;
  std::string axioms;
  std::string claim;
  std::string demo;
};

Json flags_to_json(const Flags& f) {
  auto opt = [](const auto& value) { return value ? Json(*value) : Json(nullptr); };
  return Json{{"n", opt(f.n)},
              {"m", opt(f.m)},
              {"rho", opt(f.rho)},
              {"require", f.require},
              {"budget", opt(f.budget)},
              {"prune", f.prune},
              {"workers", f.workers},
              {"out", f.out},
              {"letters", f.letters},
              {"unanimous_tables", f.unanimous_tables},
              {"rule", f.rule},
              {"caf", f.caf},
              {"axioms", f.axioms},
              {"claim", f.claim}};
}

/// Shared envelope: every report names the command, the raw arguments and
/// the resolved flag set so it can be replayed on its own.
class Report {
 public:
  Report(std::string command, std::span<const std::string> args, const Flags& flags)
      : start_(Clock::now()) {
    json_["tool"] = "classagg";
    json_["command"] = std::move(command);
    json_["argv"] = Json(std::vector<std::string>(args.begin(), args.end()));
    json_["flags"] = flags_to_json(flags);
  }

  Json& operator[](const char* key) { return json_[key]; }

  int finish(std::ostream& out, int code) {
    json_["exit_code"] = code;
    json_["elapsed_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    out << json_.dump(2) << '\n';
    return code;
  }

 private:
  Json json_;
  Clock::time_point start_;
};

Params resolve_params(const Flags& f, int n, int m, int rho) {
  return Params::make(f.n.value_or(n), f.m.value_or(m), f.rho.value_or(rho));
}

struct Source {
  Params params;
  std::optional<IndependentCaf> independent;
  std::optional<GeneralCaf> general;
  std::string label;
};

Source load_source(const Flags& f) {
  if (f.rule.empty() == f.caf.empty()) {
    throw Error(ErrorKind::SchemaError, "exactly one of --rule and --caf is required");
  }
  if (!f.rule.empty()) {
    NamedRule named = make_named_rule(resolve_params(f, 2, 3, 2), f.rule);
    return Source{named.params, named.independent, named.general, f.rule};
  }
  CafDocument doc = load_caf(f.caf);
  if (doc.is_independent()) {
    return Source{doc.params, std::get<IndependentCaf>(doc.body), std::nullopt, f.caf};
  }
  const auto& name = std::get<std::string>(doc.body);
  NamedRule named = make_named_rule(doc.params, name);
  return Source{named.params, named.independent, named.general, name};
}

enum class CheckItem { Validity, Unanimity, Sovereignty, Independence, GeneralizedUnanimity, EssentialDictatorship };

std::vector<CheckItem> parse_check_items(const std::string& text) {
  std::vector<CheckItem> items;
  if (text.empty()) {
    return {CheckItem::Validity, CheckItem::Unanimity, CheckItem::Sovereignty, CheckItem::Independence,
            CheckItem::GeneralizedUnanimity, CheckItem::EssentialDictatorship};
  }
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token == "validity") items.push_back(CheckItem::Validity);
    else if (token == "unanimity") items.push_back(CheckItem::Unanimity);
    else if (token == "citizen-sovereignty" || token == "cs") items.push_back(CheckItem::Sovereignty);
    else if (token == "independence") items.push_back(CheckItem::Independence);
    else if (token == "generalized-unanimity" || token == "gu") items.push_back(CheckItem::GeneralizedUnanimity);
    else if (token == "essential-dictatorship" || token == "ed") items.push_back(CheckItem::EssentialDictatorship);
    else throw Error(ErrorKind::SchemaError, "--axioms: unknown axiom '" + token + "'");
  }
  return items;
}

Json dictator_match_json(const std::optional<DictatorMatch>& match) {
  Json out{{"axiom", "essential-dictatorship"}, {"pass", match.has_value()}};
  if (match) {
    out["individual"] = match->individual + 1;
    out["pi"] = permutation_name(match->pi);
  }
  return out;
}

Json gu_json(const std::optional<CategoryPermutation>& pi) {
  Json out{{"axiom", "generalized-unanimity"}, {"pass", pi.has_value()}};
  if (pi) out["pi"] = permutation_name(*pi);
  return out;
}

int run_check(std::span<const std::string> args, const Flags& f, std::ostream& out) {
  Report report("check", args, f);
  const auto items = parse_check_items(f.axioms);
  Source source = load_source(f);
  const Naming naming{f.letters};
  CheckOptions options;
  if (f.budget) options.max_profiles = *f.budget;

  report["params"] = to_json(source.params);
  report["source"] = source.label;
  Json results = Json::array();
  bool all_pass = true;
  for (CheckItem item : items) {
    Json result;
    switch (item) {
      case CheckItem::Validity:
        if (source.independent) {
          result = report_to_json(source.params, check_validity(*source.independent, options), naming);
        } else {
          // A rule given by an evaluation function returns classifications only.
          result = Json{{"axiom", "validity"}, {"pass", true}, {"by_construction", true}};
        }
        break;
      case CheckItem::Unanimity:
        result = report_to_json(source.params,
                                source.independent ? check_unanimity(*source.independent)
                                                   : check_unanimity(*source.general),
                                naming);
        break;
      case CheckItem::Sovereignty:
        result = report_to_json(source.params,
                                source.independent ? check_citizen_sovereignty(*source.independent)
                                                   : check_citizen_sovereignty(*source.general, options),
                                naming);
        break;
      case CheckItem::Independence: {
        const AxiomReport r = source.independent ? check_independence(*source.independent, options)
                                                 : check_independence(*source.general, options);
        result = report_to_json(source.params, r, naming);
        result["witness_replays"] = source.independent ? replay_witness(*source.independent, r)
                                                       : replay_witness(*source.general, r);
        if (source.label == "plurality-table1") {
          const Profile c = table1_profile();
          const Profile c_prime = table1_profile_prime();
          const Classification a = (*source.general)(c);
          const Classification b = (*source.general)(c_prime);
          AxiomReport reference{.axiom = Axiom::Independence, .pass = false,
                                .witness = IndependenceViolation{0, c, c_prime, a[0], b[0]}};
          Json pair = report_to_json(source.params, reference, naming)["witness"];
          pair["replays"] = replay_witness(*source.general, reference);
          result["reference_pair"] = std::move(pair);
        }
        break;
      }
      case CheckItem::GeneralizedUnanimity:
        result = gu_json(source.independent ? check_generalized_unanimity(*source.independent)
                                            : check_generalized_unanimity(*source.general));
        break;
      case CheckItem::EssentialDictatorship:
        result = dictator_match_json(source.independent
                                         ? check_essential_dictatorship(*source.independent, options)
                                         : check_essential_dictatorship(*source.general, options));
        break;
    }
    all_pass = all_pass && result["pass"].get<bool>();
    results.push_back(std::move(result));
  }
  report["results"] = std::move(results);
  report["pass"] = all_pass;
  return report.finish(out, all_pass ? kPass : kFail);
}

SearchSpec spec_from_flags(const Flags& f, const Params& params) {
  SearchSpec spec{.params = params};
  spec.required = parse_required_axioms(f.require);
  spec.constraint = f.unanimous_tables ? TableConstraint::UnanimousOnConstants : TableConstraint::None;
  if (f.budget) spec.budget = *f.budget;
  spec.prune_category_symmetry = f.prune;
  spec.workers = f.workers;
  return spec;
}

void write_jsonl(std::ostream& stream, const std::vector<IndependentCaf>& cafs) {
  for (const IndependentCaf& caf : cafs) stream << to_json(caf, true).dump() << '\n';
}

void write_jsonl_file(const std::string& path, const std::vector<IndependentCaf>& cafs) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::SchemaError, "--out: cannot write " + path);
  write_jsonl(file, cafs);
}

int run_enumerate(std::span<const std::string> args, const Flags& f, std::ostream& out, std::ostream& err) {
  Report report("enumerate", args, f);
  const Params params = resolve_params(f, 2, 3, 2);
  report["params"] = to_json(params);
  const SearchReport result = enumerate_independent_cafs(spec_from_flags(f, params));
  report["search"] = search_report_to_json(result, Naming{f.letters}, false);
  // The stream owns stdout unless --out redirects it; the summary then takes
  // whichever stream is left.
  if (f.out.empty()) {
    write_jsonl(out, result.emitted);
    return report.finish(err, kPass);
  }
  write_jsonl_file(f.out, result.emitted);
  return report.finish(out, kPass);
}

int run_verify(std::span<const std::string> args, const Flags& f, std::ostream& out) {
  Report report("verify", args, f);
  if (f.claim.empty()) throw Error(ErrorKind::SchemaError, "--claim is required");
  const Claim claim = parse_claim(f.claim);
  int m = 3;
  int rho = 2;
  if (claim == Claim::Prop1) m = 2;
  if (claim == Claim::Thm2) rho = 3;
  const Params params = resolve_params(f, 2, m, rho);
  report["params"] = to_json(params);
  VerifyOptions options;
  if (f.budget) options.budget = *f.budget;
  options.workers = f.workers;
  options.prune_category_symmetry = f.prune;
  const TheoremVerdict verdict = verify_claim(claim, params, options);
  report["verdict"] = verdict_to_json(verdict, Naming{f.letters});
  if (!f.out.empty()) write_jsonl_file(f.out, verdict.search.emitted);
  return report.finish(out, verdict.holds ? kPass : kFail);
}

int run_extract(std::span<const std::string> args, const Flags& f, std::ostream& out) {
  Report report("extract", args, f);
  Source source = load_source(f);
  report["params"] = to_json(source.params);
  report["source"] = source.label;
  if (!source.independent) {
    throw Error(ErrorKind::PreconditionFailed, "extract needs an independent CAF; rule '" + source.label + "' has no table form");
  }
  CheckOptions options;
  if (f.budget) options.max_profiles = *f.budget;
  const auto exhaustive = check_essential_dictatorship(*source.independent, options);
  report["exhaustive"] = dictator_match_json(exhaustive);
  try {
    const DictatorReport extracted = extract_dictator_pivotal(*source.independent);
    report["report"] = dictator_report_to_json(source.params, extracted, Naming{f.letters});
    const bool agrees = exhaustive && exhaustive->individual == extracted.individual && exhaustive->pi == extracted.pi;
    report["agrees_with_exhaustive"] = agrees;
    return report.finish(out, extracted.verified && agrees ? kPass : kFail);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::VerificationFailed) throw;
    report["report"] = nullptr;
    report["refutation"] = e.what();
    return report.finish(out, kFail);
  }
}

std::string read_file(const std::filesystem::path& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  ok = static_cast<bool>(in);
  std::ostringstream buffer;
  if (ok) buffer << in.rdbuf();
  return buffer.str();
}

int run_demo(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.demo != "table1") throw Error(ErrorKind::SchemaError, "unknown demo '" + f.demo + "'");
  const std::string text = render_table1_demo();
  out << text;
  const bool values_match = text.find("mismatch") == std::string::npos;
  bool golden_match = true;
  if (const char* dir = std::getenv(kGoldenDirVariable); dir != nullptr && *dir != '\0') {
    const auto path = std::filesystem::path(dir) / "table1.txt";
    bool ok = false;
    const std::string golden = read_file(path, ok);
    if (!ok) {
      err << "golden: cannot read " << path.string() << '\n';
      return kInvalidInput;
    }
    golden_match = golden == text;
    err << "golden: " << path.string() << (golden_match ? " identical" : " differs") << '\n';
  }
  return values_match && golden_match ? kPass : kFail;
}

std::string format_outputs(const Classification& c) {
  static constexpr const char* kObjects[] = {"x", "y", "z"};
  std::string text = "(";
  for (int x = 0; x < c.size(); ++x) {
    if (x > 0) text += ", ";
    text += std::string(kObjects[x]) + "->" + category_name(c[x], 2, true);
  }
  return text + ")";
}

Json error_json(std::span<const std::string> args, const std::string& kind, const std::string& message) {
  return Json{{"tool", "classagg"},
              {"argv", Json(std::vector<std::string>(args.begin(), args.end()))},
              {"error", Json{{"kind", kind}, {"message", message}}}};
}

int emit_error(std::ostream& out, Json json, int code) {
  json["exit_code"] = code;
  out << json.dump(2) << '\n';
  return code;
}

}  // namespace

std::string render_table1_demo() {
  static constexpr const char* kObjects[] = {"x", "y", "z"};
  const GeneralCaf plurality = make_plurality_table1();
  const Profile c = table1_profile();
  const Profile c_prime = table1_profile_prime();
  const Classification out_c = plurality(c);
  const Classification out_prime = plurality(c_prime);
  const Classification top = table1_order().order().front();

  std::ostringstream text;
  text << "plurality over N = {1, 2, 3}, X = {x, y, z}, P = {p, q}\n";
  text << "tie-break order T has maximum " << format_outputs(top) << "\n\n";
  text << "obj | c1 c2 c3 | PLUR(c) | c'1 c'2 c'3 | PLUR(c')\n";
  text << "----+----------+---------+-------------+---------\n";
  for (int x = 0; x < 3; ++x) {
    const CategoryVector col = profile_column(c, x);
    const CategoryVector col_prime = profile_column(c_prime, x);
    text << " " << kObjects[x] << "  |";
    for (Category k : col.entries) text << "  " << category_name(k, 2, true);
    text << " |    " << category_name(out_c[x], 2, true) << "    |";
    for (Category k : col_prime.entries) text << "   " << category_name(k, 2, true);
    text << " |    " << category_name(out_prime[x], 2, true) << "\n";
  }
  text << '\n';

  for (int x = 0; x < 3; ++x) {
    if (profile_column(c, x) == profile_column(c_prime, x) && out_c[x] != out_prime[x]) {
      text << "independence fails at " << kObjects[x] << ": c_" << kObjects[x] << " = c'_" << kObjects[x]
           << " but PLUR(c)(" << kObjects[x] << ") = " << category_name(out_c[x], 2, true) << " and PLUR(c')("
           << kObjects[x] << ") = " << category_name(out_prime[x], 2, true) << '\n';
    }
  }

  // Reference outputs of the worked example.
  const Params params = table1_params();
  const Classification expected_c = make_classification(params, {0, 1, 1});
  const Classification expected_prime = make_classification(params, {1, 1, 0});
  text << "PLUR(c)  expected " << format_outputs(expected_c) << ": "
       << (out_c == expected_c ? "match" : "mismatch") << '\n';
  text << "PLUR(c') expected " << format_outputs(expected_prime) << ": "
       << (out_prime == expected_prime ? "match" : "mismatch") << '\n';
  return text.str();
}

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Exhaustive checks of classification aggregation axioms", "classagg"};
  app.require_subcommand(1);

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--n", f.n, "individuals")->check(CLI::Range(2, kMaxIndividuals));
    sub->add_option("--m", f.m, "objects")->check(CLI::Range(2, kMaxObjects));
    sub->add_option("--rho", f.rho, "categories")->check(CLI::Range(2, kMaxCategories));
    sub->add_option("--budget", f.budget, "cap on profile checks");
    sub->add_flag("--letters", f.letters, "render two categories as p/q");
  };
  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--rule", f.rule, "named rule, e.g. dictator:1 or essential:2:swap");
    sub->add_option("--caf", f.caf, "CAF document path");
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_flag("--prune", f.prune, "category-symmetry pruning");
    sub->add_option("--workers", f.workers, "search threads")->check(CLI::Range(1, 256));
    sub->add_option("--out", f.out, "write emitted CAFs as JSONL");
  };

  CLI::App* check = app.add_subcommand("check", "check axioms on a CAF document or named rule");
  add_params(check);
  add_source(check);
  check->add_option("--axioms", f.axioms, "comma list; default all");

  CLI::App* enumerate = app.add_subcommand("enumerate", "enumerate valid independent CAFs as JSONL");
  add_params(enumerate);
  add_search(enumerate);
  enumerate->add_option("--require", f.require, "comma list of required axioms");
  enumerate->add_flag("--unanimous-tables", f.unanimous_tables, "restrict tables to alpha(p..p) = p");

  CLI::App* verify = app.add_subcommand("verify", "verify a claim by exhaustion");
  add_params(verify);
  add_search(verify);
  verify->add_option("--claim", f.claim, "thm1, coro1, coro2, prop1 or thm2");

  CLI::App* extract = app.add_subcommand("extract", "extract the dictator by the pivotal argument");
  add_params(extract);
  add_source(extract);

  CLI::App* demo = app.add_subcommand("demo", "print a worked example");
  demo->add_option("name", f.demo, "table1")->required();

  std::vector<const char*> argv;
  argv.push_back("classagg");
  for (const std::string& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return emit_error(out, error_json(args, "UsageError", e.what()), kInvalidInput);
  }

  try {
    if (check->parsed()) return run_check(args, f, out);
    if (enumerate->parsed()) return run_enumerate(args, f, out, err);
    if (verify->parsed()) return run_verify(args, f, out);
    if (extract->parsed()) return run_extract(args, f, out);
    return run_demo(f, out, err);
  } catch (const BudgetExceeded& e) {
    Json json = error_json(args, "BudgetExceeded", e.what());
    json["error"]["estimate"] = e.estimate();
    return emit_error(out, std::move(json), kBudget);
  } catch (const Error& e) {
    return emit_error(out, error_json(args, std::string(to_string(e.kind())), e.what()), kInvalidInput);
  } catch (const std::exception& e) {
    return emit_error(out, error_json(args, "InternalError", e.what()), kInvalidInput);
  }
}

}  // namespace classagg::cli
