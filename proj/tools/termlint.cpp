#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "termlint/termlint.hpp"

namespace {

using namespace termlint;

enum Exit { kOk = 0, kNotRecognized = 1, kInputError = 2, kResourceCap = 3 };

struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& path, bool strict) {
  Program p = parse_program(read_file(path), ParseOptions{strict});
  if (p.rules.empty()) throw InputError(path + ": no rules");
  if (!strict) {
    for (const auto& d : validate(p)) std::cerr << "warning: " << d.message << "\n";
  }
  return p;
}

std::set<Criterion> parse_criteria(const std::vector<std::string>& names) {
  std::set<Criterion> out;
  for (const auto& n : names) {
    if (n == "ar") out.insert(Criterion::AR);
    else if (n == "gamma") out.insert(Criterion::Gamma);
    else if (n == "safe") out.insert(Criterion::Safe);
    else if (n == "ksafe") out.insert(Criterion::KSafe);
    else throw InputError("unknown criterion '" + n + "'");
  }
  if (out.empty()) throw InputError("no criteria selected");
  return out;
}

Program analyzable(const Program& p) {
  return flatten_program(p.is_standard() ? p : standard_version(p));
}

std::string render_graph(const Program& source, const std::string& kind, std::size_t k) {
  Program p = analyzable(source);
  if (kind == "argument") return to_dot(argument_graph(p));
  if (kind == "labeled") return to_dot(labeled_argument_graph(p));
  if (kind == "propagation") return to_dot(propagation_graph(p, compute_ar(p).restricted), "propagation");
  if (kind == "reduced")
    return to_dot(reduced_graph(propagation_graph(p, compute_ar(p).restricted)));
  if (kind == "activation") return to_dot(k_restricted_activation_graph(p, k));
  throw InputError("unknown graph kind '" + kind + "'");
}

const std::vector<std::string> kGraphKinds{"argument", "labeled", "propagation", "reduced", "activation"};

struct Settings {
  std::string input;
  std::string second;
  std::vector<std::string> criteria{"ar", "gamma", "safe", "ksafe"};
  std::string criterion = "safe";
  std::size_t k = 2;
  bool json = false;
  bool strict = false;
  bool standardize = false;
  std::string dot;
  Fuel fuel;
};

int cmd_analyze(const Settings& s) {
  Program p = load_program(s.input, s.strict);
  AnalyzeOptions opts;
  opts.criteria = parse_criteria(s.criteria);
  opts.k = s.k;
  AnalysisReport rep = analyze(p, opts);
  if (!s.dot.empty()) std::cout << render_graph(p, s.dot, s.k);
  else if (s.json) std::cout << to_json(rep).dump(2) << "\n";
  else std::cout << render_text(rep);
  switch (rep.verdict) {
    case Verdict::Terminating: return kOk;
    case Verdict::Inconclusive: return kResourceCap;
    case Verdict::NotRecognized: return kNotRecognized;
  }
  return kNotRecognized;
}

int cmd_graph(const Settings& s) {
  std::cout << render_graph(load_program(s.input, s.strict), s.second, s.k);
  return kOk;
}

int cmd_rewrite(const Settings& s, const std::string& goal) {
  Program p = load_program(s.input, s.strict);
  Program out;
  if (s.second == "flatten") {
    if (!p.is_standard()) throw InputError("flatten needs a standard program; run 'rewrite st' first");
    out = flatten_program(p);
  } else if (s.second == "magic") {
    if (goal.empty()) throw InputError("magic needs a goal atom");
    out = magic_rewrite(parse_atom(goal), p.is_standard() ? p : standard_version(p)).program;
  } else if (s.second == "st") {
    out = standard_version(p);
  } else if (s.second == "ext") {
    out = extended_program(p);
  } else {
    throw InputError("unknown rewriting '" + s.second + "'");
  }
  std::cout << to_string(out);
  return kOk;
}

int cmd_eval(const Settings& s) {
  Program p = load_program(s.input, s.strict);
  if (!p.is_standard()) {
    if (!s.standardize) throw InputError("program is not standard; pass --standardize to evaluate st(P)");
    p = standard_version(p);
  }
  auto db = parse_facts(read_file(s.second));
  EvalOutcome out = bottom_up_eval(p, db, s.fuel);
  if (s.json) {
    nlohmann::json j;
    j["converged"] = out.converged;
    j["iterations"] = out.iterations;
    j["exhausted"] = out.exhausted ? nlohmann::json(to_string(*out.exhausted)) : nlohmann::json(nullptr);
    j["model"] = nlohmann::json::array();
    for (const auto& a : out.model) j["model"].push_back(to_string(a));
    std::cout << j.dump(2) << "\n";
  } else if (out.converged) {
    for (const auto& a : out.model) std::cout << to_string(a) << ".\n";
  } else {
    std::cout << "exhausted: " << to_string(*out.exhausted) << " bound reached after " << out.iterations
              << " iterations with " << out.model.size() << " atoms\n";
  }
  return out.converged || !s.strict ? kOk : kResourceCap;
}

int cmd_query(const Settings& s) {
  Program p = load_program(s.input, s.strict);
  auto crit = parse_criteria({s.criterion});
  QueryVerdict v = query_safe(parse_atom(s.second), p, *crit.begin(), s.k);
  if (s.json) {
    nlohmann::json j{{"goal", to_string(v.magic.goal)},
                     {"criterion", s.criterion},
                     {"safe", v.safe},
                     {"original", v.original},
                     {"rewritten", v.rewritten},
                     {"branch", v.branch},
                     {"adornments", v.magic.adorned.size()},
                     {"magic_program", to_string(v.magic.program)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "query " << to_string(v.magic.goal) << " under " << s.criterion << ": "
              << (v.safe ? "safe" : "not recognized") << "\n"
              << "  original program: " << (v.original ? "yes" : "no") << "\n"
              << "  magic rewriting: " << (v.rewritten ? "yes" : "no") << "\n"
              << "  branch: " << v.branch << "\n"
              << "  adorned predicates: " << v.magic.adorned.size() << "\n";
  }
  return v.safe ? kOk : kNotRecognized;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termlint: termination analysis for logic programs with function symbols"};
  app.require_subcommand(1);
  Settings s;
  std::string goal;

  auto common = [&](CLI::App* sub) {
    sub->add_option("program", s.input, "program file")->required();
    sub->add_flag("--strict", s.strict, "reject programs with input diagnostics");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "classify a program under the termination criteria");
  common(analyze_cmd);
  analyze_cmd->add_option("--criteria", s.criteria, "ar,gamma,safe,ksafe")->delimiter(',');
  analyze_cmd->add_option("--k", s.k, "depth for k-safety")->check(CLI::PositiveNumber);
  auto* json_flag = analyze_cmd->add_flag("--json", s.json, "emit the JSON report");
  analyze_cmd->add_option("--dot", s.dot, "emit a graph instead of the report")
      ->check(CLI::IsMember(kGraphKinds))
      ->excludes(json_flag);

  auto* graph_cmd = app.add_subcommand("graph", "print a DOT graph");
  common(graph_cmd);
  graph_cmd->add_option("kind", s.second, "argument|labeled|propagation|reduced|activation")
      ->required()
      ->check(CLI::IsMember(kGraphKinds));
  graph_cmd->add_option("--k", s.k, "activation graph depth")->check(CLI::PositiveNumber);

  auto* rewrite_cmd = app.add_subcommand("rewrite", "print a rewritten program");
  common(rewrite_cmd);
  rewrite_cmd->add_option("which", s.second, "flatten|magic|st|ext")
      ->required()
      ->check(CLI::IsMember({"flatten", "magic", "st", "ext"}));
  rewrite_cmd->add_option("goal", goal, "query atom for magic");

  auto* eval_cmd = app.add_subcommand("eval", "bottom-up evaluation over a database");
  common(eval_cmd);
  eval_cmd->add_option("database", s.second, "fact file")->required();
  eval_cmd->add_option("--fuel-iters", s.fuel.max_iterations, "iteration bound");
  eval_cmd->add_option("--fuel-atoms", s.fuel.max_atoms, "model size bound");
  eval_cmd->add_option("--fuel-depth", s.fuel.max_term_depth, "term depth bound");
  eval_cmd->add_flag("--standardize", s.standardize, "evaluate st(P) for disjunctive or negated programs");
  eval_cmd->add_flag("--json", s.json, "emit JSON");

  auto* query_cmd = app.add_subcommand("query", "decide query safety via the magic-set rewriting");
  common(query_cmd);
  query_cmd->add_option("goal", s.second, "query atom")->required();
  query_cmd->add_option("--criterion", s.criterion, "ar|gamma|safe|ksafe")
      ->check(CLI::IsMember({"ar", "gamma", "safe", "ksafe"}));
  query_cmd->add_option("--k", s.k, "depth for k-safety")->check(CLI::PositiveNumber);
  query_cmd->add_flag("--json", s.json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(s);
    if (*graph_cmd) return cmd_graph(s);
    if (*rewrite_cmd) return cmd_rewrite(s, goal);
    if (*eval_cmd) return cmd_eval(s);
    if (*query_cmd) return cmd_query(s);
  } catch (const ResourceError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kResourceCap;
  } catch (const ProgramError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
