// Command-line front end for substitution, static analysis, proof checking,
// fuzzing, semantic oracle campaigns and the scaling benchmark.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dgl/bench.hpp"
#include "dgl/church.hpp"
#include "dgl/deep_stack.hpp"
#include "dgl/fuzz.hpp"
#include "dgl/onepass.hpp"
#include "dgl/oracle.hpp"
#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/proof_script.hpp"
#include "dgl/static_semantics.hpp"

namespace {

using namespace dgl;

constexpr int kExitClash = 2;
constexpr int kExitError = 1;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline text unless it names an existing file.
std::string text_or_file(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

VarSet parse_taboo(const std::string& list) {
  if (list == "all") return VarSet::all();
  VarSet out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" {"));
    item.erase(item.find_last_not_of(" }") + 1);
    if (item.empty()) continue;
    Term t = parse_term(item);
    if (t.kind() != TermKind::Var) throw UsageError("taboo entry is not a variable: " + item);
    out = out | VarSet{t.variable()};
  }
  return out;
}

struct SubstArgs {
  std::string sigma, input, taboo, engine = "onepass", loop_opt, kind = "formula";
  bool coarse = false;
};

int run_subst(const SubstArgs& a) {
  FvMode mode = a.coarse ? FvMode::Coarse : FvMode::Precise;
  USubst s = parse_subst(read_file(a.sigma), mode);
  std::string text = read_file(a.input);
  VarSet U = a.taboo.empty() ? VarSet{} : parse_taboo(a.taboo);
  SubstOptions opt;
  if (a.loop_opt == "bv") opt.loop = LoopMode::BoundVars;
  else if (!a.loop_opt.empty()) throw UsageError("unknown loop optimization " + a.loop_opt);
  if (a.engine == "church" && !U.empty()) throw UsageError("the church engine starts from an empty taboo");
  if (a.engine != "onepass" && a.engine != "church") throw UsageError("unknown engine " + a.engine);
  bool church = a.engine == "church";

  auto report = [](const ClashInfo& c) {
    std::cout << c.describe() << "\n";
    return kExitClash;
  };
  if (a.kind == "formula") {
    Formula f = parse_formula(text);
    auto r = church ? church_formula(s, f) : subst_formula(s, U, f, opt);
    if (!r.ok()) return report(r.clash());
    std::cout << pretty(r.value()) << "\n";
  } else if (a.kind == "term") {
    Term t = parse_term(text);
    auto r = church ? church_term(s, t) : subst_term(s, U, t, opt);
    if (!r.ok()) return report(r.clash());
    std::cout << pretty(r.value()) << "\n";
  } else if (a.kind == "game") {
    Game g = parse_game(text);
    if (church) {
      auto r = church_game(s, g);
      if (!r.ok()) return report(r.clash());
      std::cout << pretty(r.value()) << "\n";
    } else {
      auto r = subst_game(s, U, g, opt);
      if (!r.ok()) return report(r.clash());
      std::cout << pretty(r.value().game) << "\ntaboo=" << r.value().out_taboo.str() << "\n";
    }
  } else {
    throw UsageError("unknown kind " + a.kind);
  }
  return 0;
}

int run_vars(const std::string& input, const std::string& kind, bool coarse) {
  std::string text = text_or_file(input);
  FvMode mode = coarse ? FvMode::Coarse : FvMode::Precise;
  if (kind == "game") {
    Game g = parse_game(text);
    std::cout << "fv=" << free_vars(g, mode).str() << " bv=" << bound_vars(g).str()
              << " mbv=" << must_bound_vars(g).str() << "\n";
  } else if (kind == "formula") {
    std::cout << "fv=" << free_vars(parse_formula(text), mode).str() << "\n";
  } else if (kind == "term") {
    std::cout << "fv=" << free_vars(parse_term(text)).str() << "\n";
  } else {
    throw UsageError("unknown kind " + kind);
  }
  return 0;
}

int run_check(const std::string& path) {
  ProofReport r = check_proof(read_file(path));
  for (const auto& [name, f] : r.derived) std::cout << name << ": " << pretty(f) << "\n";
  std::cout << "oracle assumptions (trusted, not checked): " << r.oracles.size() << "\n";
  for (const Formula& f : r.oracles) std::cout << "  " << pretty(f) << "\n";
  if (!r.accepted) {
    std::cout << "rejected at " << r.error->what() << "\n";
    return kExitError;
  }
  std::cout << "accepted\n";
  return 0;
}

int run_fuzz(std::size_t trials, std::uint64_t seed, int depth, const std::string& out) {
  FuzzResult r = differential_fuzz(trials, seed, depth);
  std::cout << "trials=" << r.trials << " both_defined=" << r.both_defined << " neither=" << r.neither_defined
            << " onepass_only=" << r.onepass_only << " church_only=" << r.church_only
            << " mismatches=" << r.mismatches << "\n";
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    for (std::size_t i = 0; i < r.findings.size(); ++i) {
      std::string base = out + "/" + r.findings[i].kind + "-" + std::to_string(i);
      std::ofstream(base + ".dgl") << r.findings[i].formula << "\n";
      std::ofstream(base + ".sig") << r.findings[i].sigma << "\n";
    }
    std::cout << "wrote " << r.findings.size() << " repro pairs to " << out << "\n";
  }
  return r.ok() ? 0 : kExitError;
}

int run_oracle(std::size_t instances, std::uint64_t seed, bool formulas) {
  CampaignResult r = substitution_campaign(instances, seed, formulas);
  std::cout << (formulas ? "formulas" : "terms") << ": checked=" << r.checked << " draws=" << r.instances
            << " clashes=" << r.clashes << " failures=" << r.failures.size() << "\n";
  for (const auto& f : r.failures) std::cout << "  " << f << "\n";
  return r.failures.empty() ? 0 : kExitError;
}

int run_bench(const std::vector<std::string>& families, int min_exp, int max_exp, const std::string& engine, int reps,
              const std::string& out) {
  if (min_exp < 0 || max_exp < min_exp || max_exp > 20) throw UsageError("exponent range must satisfy 0 <= min <= max <= 20");
  std::vector<std::string> engines = engine == "both" ? std::vector<std::string>{"onepass", "church"}
                                                      : std::vector<std::string>{engine};
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw FileError("cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << kCsvHeader << "\n";
  for (const auto& fam : families)
    for (int e = min_exp; e <= max_exp; ++e)
      for (const auto& eng : engines) os << to_csv(bench_one(fam, 1 << e, eng, reps)) << std::endl;
  return 0;
}

int run_fit(const std::string& csv, const std::string& family, const std::string& engine) {
  SlopeFit f = fit_slope(parse_csv(read_file(csv)), family, engine);
  std::cout << "family=" << family << " engine=" << engine << " points=" << f.points << " slope=" << f.slope
            << " r2=" << f.r2 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform substitution for differential game logic"};
  app.require_subcommand(1);

  SubstArgs sa;
  auto* subst = app.add_subcommand("subst", "apply a uniform substitution");
  subst->add_option("--sigma", sa.sigma, "substitution file (.sig)")->required();
  subst->add_option("--input", sa.input, "input file (.dgl)")->required();
  subst->add_option("--taboo", sa.taboo, "initial taboo: comma-separated variables or `all`");
  subst->add_option("--engine", sa.engine, "onepass or church")->check(CLI::IsMember({"onepass", "church"}));
  subst->add_option("--loop-opt", sa.loop_opt, "bv: substitute loop bodies once using bound variables")
      ->check(CLI::IsMember({"bv"}));
  subst->add_option("--kind", sa.kind, "formula, game or term")->check(CLI::IsMember({"formula", "game", "term"}));
  subst->add_flag("--coarse-fv", sa.coarse, "use the coarse free-variable analysis for replacements");

  std::string vars_input, vars_kind = "formula";
  bool vars_coarse = false;
  auto* fv = app.add_subcommand("fv", "print free and bound variables");
  auto* bv = app.add_subcommand("bv", "print free and bound variables");
  for (auto* c : {fv, bv}) {
    c->add_option("--input", vars_input, "expression text or file")->required();
    c->add_option("--kind", vars_kind, "formula, game or term")->check(CLI::IsMember({"formula", "game", "term"}));
    c->add_flag("--coarse-fv", vars_coarse, "coarse free-variable analysis");
  }

  std::string script;
  auto* check = app.add_subcommand("check", "check a proof script (.dglp)");
  check->add_option("script", script, "proof script")->required();

  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  int depth = 7;
  std::string fuzz_out;
  auto* fuzz = app.add_subcommand("fuzz", "differential test of one-pass against the reference engine");
  fuzz->add_option("--trials", trials);
  fuzz->add_option("--seed", seed);
  fuzz->add_option("--depth", depth)->check(CLI::Range(1, 7));
  fuzz->add_option("--out", fuzz_out, "directory for .dgl/.sig repro pairs");

  std::size_t instances = 10000;
  bool formulas = false;
  auto* oracle = app.add_subcommand("oracle", "check substituted terms against adjoint evaluation on exact rational states");
  oracle->add_option("--instances", instances);
  oracle->add_option("--seed", seed);
  oracle->add_flag("--formulas", formulas, "quantifier-free formulas instead of terms");

  std::vector<std::string> families{"seq"};
  int min_exp = 8, max_exp = 15, reps = 5;
  std::string engine = "both", bench_out;
  auto* bench = app.add_subcommand("bench", "scaling benchmark, CSV output");
  bench->add_option("--family", families)->check(CLI::IsMember({"seq", "binder", "loop"}));
  bench->add_option("--min-exp", min_exp);
  bench->add_option("--max-exp", max_exp);
  bench->add_option("--engine", engine)->check(CLI::IsMember({"onepass", "church", "both"}));
  bench->add_option("--reps", reps)->check(CLI::Range(5, 1000));
  bench->add_option("--out", bench_out, "CSV file (default stdout)");
  bench->add_option("--seed", seed, "accepted for uniformity; the families are deterministic");

  std::string csv, fit_family = "seq", fit_engine = "onepass";
  auto* fit = app.add_subcommand("fit", "log-log slope of a benchmark CSV");
  fit->add_option("--csv", csv)->required();
  fit->add_option("--family", fit_family);
  fit->add_option("--engine", fit_engine);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    return with_deep_stack([&]() -> int {
      if (*subst) return run_subst(sa);
      if (*fv || *bv) return run_vars(vars_input, vars_kind, vars_coarse);
      if (*check) return run_check(script);
      if (*fuzz) return run_fuzz(trials, seed, depth, fuzz_out);
      if (*oracle) return run_oracle(instances, seed, formulas);
      if (*bench) return run_bench(families, min_exp, max_exp, engine, reps, bench_out);
      if (*fit) return run_fit(csv, fit_family, fit_engine);
      return kExitUsage;
    });
  } catch (const FileError& e) {
    std::cerr << "dgl: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const UsageError& e) {
    std::cerr << "dgl: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "dgl: " << e.what() << "\n";
    return kExitError;
  }
}
