#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "termlint/gamma.hpp"
#include "termlint/printer.hpp"
#include "termlint/program.hpp"
#include "termlint/ranking.hpp"
#include "termlint/rewrite.hpp"
#include "termlint/safety.hpp"

namespace termlint {

inline constexpr const char* kReportSchema = "termlint.report/1";

/// FNV-1a 64-bit digest of the canonical program text, as hex.
inline std::string program_digest(const Program& p) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_string(p)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct AnalyzeOptions {
  std::set<Criterion> criteria{Criterion::AR, Criterion::Gamma, Criterion::Safe, Criterion::KSafe};
  std::size_t k = 2;
  ActivationOptions activation;
};

enum class Verdict { Terminating, NotRecognized, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Terminating: return "terminating";
    case Verdict::NotRecognized: return "not-recognized";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct AnalysisReport {
  std::string digest;
  std::vector<Diagnostic> diagnostics;
  bool standardized = false;
  bool flattened = false;
  Program source;
  Program analyzed;
  std::map<std::string, std::string> origin;
  std::set<Criterion> criteria;
  std::size_t k = 2;

  std::optional<ArResult> ar;
  std::optional<GammaResult> gamma;
  std::optional<SafetyReport> safe;
  std::optional<SafetyReport> ksafe;
  std::map<Criterion, bool> verdicts;
  std::optional<std::string> inconclusive;
  std::map<std::string, double> timing_ms;

  Verdict verdict = Verdict::NotRecognized;
  std::optional<Criterion> strongest;
};

namespace detail {

template <class F>
auto timed(std::map<std::string, double>& sink, const std::string& key, F&& f) {
  auto start = std::chrono::steady_clock::now();
  auto result = f();
  sink[key] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace detail

/// Runs the requested criteria on the standardized, flattened program.
/// Prerequisites (AR for Γ, GA for safety) are always computed.
inline AnalysisReport analyze(const Program& source, const AnalyzeOptions& opts = {}) {
  AnalysisReport rep;
  rep.source = source;
  rep.digest = program_digest(source);
  rep.diagnostics = validate(source);
  rep.criteria = opts.criteria;
  rep.k = opts.k;

  Program standard = source;
  if (!source.is_standard()) {
    standard = standard_version(source);
    rep.standardized = true;
  }
  FlattenResult flat = flatten_with_origin(standard);
  rep.flattened = !(flat.program == standard);
  rep.analyzed = std::move(flat.program);
  for (auto& [out, src] : flat.origin) {
    std::string id = src;
    if (rep.standardized && !source.find_rule(src)) {
      auto cut = src.rfind('_');
      if (cut != std::string::npos) id = src.substr(0, cut);
    }
    rep.origin[out] = id;
  }

  const Program& p = rep.analyzed;
  auto wants = [&](Criterion c) { return opts.criteria.count(c) > 0; };
  bool need_gamma = wants(Criterion::Gamma) || wants(Criterion::Safe) || wants(Criterion::KSafe);

  rep.ar = detail::timed(rep.timing_ms, "ar", [&] { return compute_ar(p); });
  rep.verdicts[Criterion::AR] = rep.ar->all_restricted;
  if (need_gamma) {
    rep.gamma = detail::timed(rep.timing_ms, "gamma", [&] { return analyze_gamma(p, rep.ar->restricted); });
    rep.verdicts[Criterion::Gamma] = rep.gamma->acyclic;
  }
  try {
    if (wants(Criterion::Safe) || wants(Criterion::KSafe)) {
      rep.safe = detail::timed(rep.timing_ms, "safe",
                               [&] { return safe_args(p, 1, opts.activation, rep.gamma->ga); });
      rep.verdicts[Criterion::Safe] = rep.safe->all_safe;
    }
    if (wants(Criterion::KSafe)) {
      rep.ksafe = detail::timed(rep.timing_ms, "ksafe",
                                [&] { return safe_args(p, opts.k, opts.activation, rep.gamma->ga); });
      rep.verdicts[Criterion::KSafe] = rep.ksafe->all_safe;
    }
  } catch (const ResourceError& e) {
    rep.inconclusive = e.what();
  }

  for (Criterion c : {Criterion::AR, Criterion::Gamma, Criterion::Safe, Criterion::KSafe})
    if (wants(c)) rep.strongest = c;
  bool proved = false;
  for (Criterion c : opts.criteria) {
    auto it = rep.verdicts.find(c);
    proved = proved || (it != rep.verdicts.end() && it->second);
  }
  if (proved) rep.verdict = Verdict::Terminating;
  else if (rep.inconclusive) rep.verdict = Verdict::Inconclusive;
  else rep.verdict = Verdict::NotRecognized;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON and text rendering

namespace detail {

inline nlohmann::json json_args(const ArgumentSet& s, const ArgumentIndex& order) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : order.all())
    if (s.count(a)) out.push_back(to_string(a));
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const AnalysisReport& rep) {
  using nlohmann::json;
  ArgumentIndex order(rep.analyzed);
  json j;
  j["schema"] = kReportSchema;
  j["program"] = {{"digest", rep.digest},
                  {"rules", rep.source.rules.size()},
                  {"analyzed_rules", rep.analyzed.rules.size()},
                  {"arguments", order.size()},
                  {"standardized", rep.standardized},
                  {"flattened", rep.flattened},
                  {"input_verified", rep.diagnostics.empty()}};
  j["diagnostics"] = json::array();
  for (const auto& d : rep.diagnostics)
    j["diagnostics"].push_back(
        {{"kind", to_string(d.kind)}, {"rule", d.rule_id}, {"line", d.line}, {"message", d.message}});
  j["mapping"] = json::array();
  for (const auto& r : rep.analyzed.rules)
    j["mapping"].push_back({{"rule", r.id}, {"source", rep.origin.count(r.id) ? rep.origin.at(r.id) : r.id}});

  j["criteria"] = json::array();
  for (Criterion c : {Criterion::AR, Criterion::Gamma, Criterion::Safe, Criterion::KSafe})
    if (rep.criteria.count(c)) j["criteria"].push_back(to_string(c));
  j["k"] = rep.k;

  j["verdicts"] = json::object();
  for (const auto& [c, v] : rep.verdicts) j["verdicts"][to_string(c)] = v;

  j["limited"] = json::object();
  if (rep.ar) j["limited"]["ar"] = detail::json_args(rep.ar->restricted, order);
  if (rep.gamma) j["limited"]["gamma"] = detail::json_args(rep.gamma->ga, order);
  if (rep.safe) j["limited"]["safe"] = detail::json_args(rep.safe->safe, order);
  if (rep.ksafe) j["limited"]["ksafe"] = detail::json_args(rep.ksafe->safe, order);

  json w = json::object();
  if (rep.ar) {
    json trace = json::array();
    for (const auto& phi : rep.ar->trace) {
      json row = json::object();
      for (const auto& a : order.all()) {
        auto v = phi.at(a);
        row[to_string(a)] = v ? json(*v) : json(nullptr);
      }
      trace.push_back(row);
    }
    json phi_min = json::object();
    for (const auto& [a, v] : rep.ar->phi_min) phi_min[to_string(a)] = v;
    w["ranking"] = {{"threshold", rep.ar->threshold},
                    {"iterations", rep.ar->iterations},
                    {"trace", trace},
                    {"phi_min", phi_min}};
  }
  if (rep.gamma) {
    if (rep.gamma->witness) {
      const auto& c = *rep.gamma->witness;
      json nodes = json::array(), labels = json::array(), reduced = json::array();
      for (const auto& n : c.nodes) nodes.push_back(to_string(n));
      for (const auto& l : c.labels) labels.push_back(to_string(l));
      for (const auto& l : c.reduced) reduced.push_back(to_string(l));
      w["increasing_cycle"] = {{"nodes", nodes}, {"labels", labels}, {"reduced", reduced}};
    } else {
      w["increasing_cycle"] = nullptr;
    }
  }
  auto chain_json = [&](const SafetyReport& s) {
    json chain = json::array();
    for (const auto& step : s.chain) chain.push_back(detail::json_args(step, order));
    json just = json::object();
    for (const auto& [a, why] : s.justification)
      if (s.safe.count(a)) just[to_string(a)] = to_string(why);
    return json{{"k", s.k}, {"chain", chain}, {"monotone", s.chain_monotone}, {"justification", just}};
  };
  if (rep.safe) w["psi"] = chain_json(*rep.safe);
  if (rep.ksafe) w["psi_k"] = chain_json(*rep.ksafe);
  j["witnesses"] = w;

  j["verdict"] = to_string(rep.verdict);
  j["strongest"] = rep.strongest ? json(to_string(*rep.strongest)) : json(nullptr);
  j["inconclusive"] = rep.inconclusive ? json(*rep.inconclusive) : json(nullptr);
  j["timing_ms"] = rep.timing_ms;
  return j;
}

inline std::string render_text(const AnalysisReport& rep) {
  ArgumentIndex order(rep.analyzed);
  auto set_text = [&](const ArgumentSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& a : order.all())
      if (s.count(a)) {
        out += (first ? "" : ", ") + to_string(a);
        first = false;
      }
    return out + "}";
  };
  std::ostringstream os;
  os << "program " << rep.digest << ": " << rep.source.rules.size() << " rules";
  if (rep.standardized) os << ", standardized";
  if (rep.flattened) os << ", flattened to " << rep.analyzed.rules.size() << " rules";
  os << "\n";
  for (const auto& d : rep.diagnostics) os << "warning: " << d.message << "\n";
  if (!rep.diagnostics.empty()) os << "input not verified; results are advisory\n";
  if (rep.flattened) {
    os << "analyzed program:\n";
    for (const auto& r : rep.analyzed.rules) os << "  " << r.id << ": " << to_string(r) << "\n";
  }

  auto yes = [](bool b) { return b ? "yes" : "no"; };
  if (rep.ar) {
    os << "argument-restricted: " << yes(rep.ar->all_restricted) << "  AR = " << set_text(rep.ar->restricted) << "\n";
    os << "  ranking (M = " << rep.ar->threshold << ", fixpoint at phi_" << rep.ar->iterations << "):\n";
    for (const auto& a : order.all()) {
      os << "    " << to_string(a);
      for (const auto& phi : rep.ar->trace) {
        auto v = phi.at(a);
        os << "\t" << (v ? std::to_string(*v) : std::string("inf"));
      }
      os << "\n";
    }
  }
  if (rep.gamma) {
    os << "gamma-acyclic: " << yes(rep.gamma->acyclic) << "  GA = " << set_text(rep.gamma->ga) << "\n";
    if (rep.gamma->witness) {
      const auto& c = *rep.gamma->witness;
      os << "  increasing cycle:";
      for (const auto& n : c.nodes) os << " " << to_string(n);
      os << "\n  spells: " << to_string(c.labels) << "  reduces to: " << to_string(c.reduced) << "\n";
    }
  }
  auto chain_text = [&](const char* name, const SafetyReport& s) {
    os << name << ": " << yes(s.all_safe) << "  safe = " << set_text(s.safe) << "\n";
    for (std::size_t i = 0; i < s.chain.size(); ++i) os << "  step " << i << ": " << set_text(s.chain[i]) << "\n";
  };
  if (rep.safe) chain_text("safe", *rep.safe);
  if (rep.ksafe) chain_text(("safe_" + std::to_string(rep.ksafe->k)).c_str(), *rep.ksafe);
  if (rep.inconclusive) os << "inconclusive: " << *rep.inconclusive << "\n";
  os << "verdict: " << to_string(rep.verdict);
  if (rep.strongest) os << " (strongest requested criterion: " << to_string(*rep.strongest) << ")";
  os << "\n";
  return os.str();
}

}  // namespace termlint
