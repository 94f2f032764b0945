#pragma once

// Command-line front end. Kept in a header so tests can drive the exact code
// path the binary runs, capturing its output streams.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relgame/io.hpp"
#include "relgame/relgame.hpp"

namespace relgame::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRefused = 2, kSolverFailure = 3 };

namespace detail {

using nlohmann::json;

inline std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string agent_list(const io::GameSpec& spec, const std::vector<int>& agents) {
  if (agents.empty()) return "(none)";
  std::string out;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    if (k) out += ", ";
    out += spec.labels[agents[k]];
  }
  return out;
}

inline json labels_json(const io::GameSpec& spec, const std::vector<int>& agents) {
  json arr = json::array();
  for (int a : agents) arr.push_back(spec.labels[a]);
  return arr;
}

struct CommonOptions {
  std::string file;
  bool json_output = false;
  Caps caps;
};

inline void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("file", o.file, "JSON game file")->required();
  sub->add_flag("--json", o.json_output, "Machine-readable output");
  sub->add_option("--cap-monotone", o.caps.monotone, "Agent cap for monotonicity/equivalence checks");
  sub->add_option("--cap-convex", o.caps.convex, "Agent cap for the convexity check");
  sub->add_option("--cap-enum", o.caps.enumeration, "Coalition-size cap for exact extension values");
  sub->add_option("--cap-shapley", o.caps.exact_shapley, "Agent cap for exact Shapley values");
  sub->add_option("--cap-membership", o.caps.membership, "Agent cap for core membership checks");
  sub->add_option("--cap-core", o.caps.brute_core, "Agent cap for the brute-force core LP");
  sub->add_option("--cap-convex-construction", o.caps.convex_construction,
                  "Agent cap for the convex core construction");
  sub->add_option("--cap-typed-expansion", o.caps.typed_expansion,
                  "Agent cap for expanding typed games");
  sub->add_option("--cap-typed-profiles", o.caps.typed_profiles, "Profile cap for the typed core LP");
}

inline io::GameSpec load(const CommonOptions& o, std::ostream& err) {
  io::GameSpec spec = io::load_game_spec(o.file);
  if (const auto* net = spec.network(); net && !net->target_reachable()) {
    err << "warning: target '" << net->target()
        << "' is unreachable even with every edge present; all coalition values are 0\n";
  }
  return spec;
}

inline void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

inline int cmd_value(const CommonOptions& o, const std::string& coalition_text, std::ostream& out,
                     std::ostream& err) {
  const io::GameSpec spec = load(o, err);
  const Coalition c = io::resolve_coalition(spec, coalition_text);
  int base = 0;
  double ext = 0.0;
  if (const auto* tg = spec.typed()) {
    // Count profile straight from the labels' type blocks; no expansion needed.
    std::vector<int> q(tg->num_types(), 0);
    int agent = 0;
    for (int j = 0; j < tg->num_types(); ++j) {
      for (int k = 0; k < tg->counts()[j]; ++k, ++agent) q[j] += c.contains(agent) ? 1 : 0;
    }
    base = tg->wins(q) ? 1 : 0;
    ext = typed_value(*tg, q);
  } else {
    const ReliabilityGame g = spec.reliability_game(o.caps);
    base = value(g.base, c);
    ext = exact_value(g, c, o.caps.enumeration);
  }
  if (o.json_output) {
    json coalition = json::array();
    for (int i : c.members()) coalition.push_back(spec.labels[i]);
    print_json(out, {{"command", "value"}, {"coalition", coalition}, {"base_value", base}, {"value", ext}});
  } else {
    out << "coalition: " << io::format_coalition(spec, c) << "\n";
    out << "base value: " << base << "\n";
    out << "extension value: " << fixed(ext, 12) << "\n";
  }
  return kOk;
}

struct ShapleyOptions {
  std::optional<double> epsilon;
  double delta = 0.05;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  bool exact = false;
  int workers = 1;
  std::string mode = "independent";
};

inline int cmd_shapley(const CommonOptions& o, const ShapleyOptions& s, std::ostream& out,
                       std::ostream& err) {
  const io::GameSpec spec = load(o, err);
  const ReliabilityGame g = spec.reliability_game(o.caps);
  const int n = g.num_agents();

  if (s.exact) {
    if (s.epsilon || s.samples) throw UsageError("--exact cannot be combined with --epsilon or --samples");
    const PayoffVector phi = exact_shapley(g, o.caps.exact_shapley);
    double sum = 0.0;
    for (double x : phi) sum += x;
    if (o.json_output) {
      json agents = json::array();
      for (int i = 0; i < n; ++i) agents.push_back({{"agent", spec.labels[i]}, {"value", phi[i]}});
      print_json(out, {{"command", "shapley"}, {"method", "exact"}, {"agents", agents}, {"sum", sum}});
    } else {
      out << "method: exact\n";
      out << "agent  shapley\n";
      for (int i = 0; i < n; ++i) out << spec.labels[i] << "  " << fixed(phi[i], 12) << "\n";
      out << "sum  " << fixed(sum, 12) << "\n";
    }
    return kOk;
  }

  if (s.epsilon.has_value() == s.samples.has_value()) {
    throw UsageError("give exactly one of --epsilon or --samples (or use --exact)");
  }
  if (s.samples && *s.samples < 1) throw UsageError("--samples must be at least 1");
  if (!(s.delta > 0.0 && s.delta < 1.0)) throw UsageError("--delta must lie in (0,1)");
  if (s.workers < 1) throw UsageError("--workers must be at least 1");
  SamplingMode mode;
  if (s.mode == "independent") {
    mode = SamplingMode::independent;
  } else if (s.mode == "shared") {
    mode = SamplingMode::shared;
  } else {
    throw UsageError("--mode must be 'independent' or 'shared'");
  }
  const std::uint64_t k = s.samples ? *s.samples : plan_samples(*s.epsilon, s.delta);
  const auto est = estimate_all(g, k, s.seed, s.delta, mode, s.workers);
  const double half = hoeffding_half_width(k, s.delta);

  if (o.json_output) {
    json agents = json::array();
    for (const auto& e : est) {
      agents.push_back({{"agent", spec.labels[e.agent]}, {"estimate", e.point}, {"lo", e.lo()}, {"hi", e.hi()}});
    }
    json doc{{"command", "shapley"}, {"method", "sampling"}, {"mode", s.mode},
             {"samples", k},         {"delta", s.delta},      {"epsilon", half},
             {"seed", s.seed},       {"agents", agents}};
    if (s.epsilon) doc["requested_epsilon"] = *s.epsilon;
    print_json(out, doc);
  } else {
    out << "method: sampling (" << s.mode << ")\n";
    out << "k=" << k << " delta=" << s.delta << " epsilon=" << fixed(half, 9) << " seed=" << s.seed << "\n";
    out << "agent  estimate  lo  hi\n";
    for (const auto& e : est) {
      out << spec.labels[e.agent] << "  " << fixed(e.point, 9) << "  " << fixed(e.lo(), 9) << "  "
          << fixed(e.hi(), 9) << "\n";
    }
  }
  return kOk;
}

inline CoreResult run_core_method(const io::GameSpec& spec, const std::string& method, const Caps& caps) {
  if (method == "veto") return core_via_veto(spec.reliability_game(caps), caps);
  if (method == "brute") return core_brute_force(spec.reliability_game(caps), caps);
  if (method == "convex") return convex_core_construction(spec.reliability_game(caps), caps);
  if (method == "typed") {
    const auto* tg = spec.typed();
    if (!tg) throw UsageError("--method typed needs a typed game file");
    return core_typed(*tg, caps);
  }
  if (method != "auto") throw UsageError("unknown core method '" + method + "'");

  std::vector<std::string> reasons;
  try {
    CoreResult r = core_via_veto(spec.reliability_game(caps), caps);
    if (r.verdict != CoreVerdict::unknown) return r;
    reasons.push_back("veto: " + r.reason);
  } catch (const Refusal& e) {
    reasons.push_back(std::string("veto: ") + e.what());
  }
  if (const auto* tg = spec.typed()) {
    try {
      return core_typed(*tg, caps);
    } catch (const Refusal& e) {
      reasons.push_back(std::string("typed: ") + e.what());
    }
  }
  try {
    return core_brute_force(spec.reliability_game(caps), caps);
  } catch (const Refusal& e) {
    reasons.push_back(std::string("brute: ") + e.what());
  }
  CoreResult out;
  out.verdict = CoreVerdict::unknown;
  for (std::size_t k = 0; k < reasons.size(); ++k) out.reason += (k ? "; " : "") + reasons[k];
  return out;
}

inline int cmd_core(const CommonOptions& o, const std::string& method, std::ostream& out,
                    std::ostream& err) {
  const io::GameSpec spec = load(o, err);
  const CoreResult r = run_core_method(spec, method, o.caps);
  const bool unknown = r.verdict == CoreVerdict::unknown;

  // Independent re-check of any imputation we report.
  std::optional<bool> verified;
  if (r.verdict == CoreVerdict::non_empty && spec.num_agents() <= o.caps.membership &&
      spec.num_agents() <= o.caps.typed_expansion) {
    verified = check_core_membership(spec.reliability_game(o.caps), r.imputation, o.caps.membership).in_core;
  }

  if (o.json_output) {
    json doc{{"command", "core"}, {"verdict", to_string(r.verdict)}};
    doc["method"] = unknown && method == "auto" ? json(nullptr) : json(to_string(r.method));
    if (r.verdict == CoreVerdict::non_empty) {
      json values = json::array();
      for (int i = 0; i < spec.num_agents(); ++i) values.push_back(r.imputation[i]);
      doc["imputation"] = values;
      doc["agents"] = spec.labels;
      doc["verified"] = verified ? json(*verified) : json(nullptr);
    }
    if (unknown) doc["reason"] = r.reason;
    print_json(out, doc);
  } else {
    out << "verdict: " << to_string(r.verdict) << "\n";
    if (!(unknown && method == "auto")) out << "method: " << to_string(r.method) << "\n";
    if (r.verdict == CoreVerdict::non_empty) {
      out << "imputation:\n";
      for (int i = 0; i < spec.num_agents(); ++i) {
        out << "  " << spec.labels[i] << "  " << fixed(r.imputation[i], 12) << "\n";
      }
      if (verified) out << "verified in core: " << (*verified ? "yes" : "NO") << "\n";
    }
    if (unknown) out << "reason: " << r.reason << "\n";
  }
  if (verified && !*verified) {
    err << "error: reported imputation failed the membership re-check\n";
    return kSolverFailure;
  }
  return kOk;
}

inline int cmd_veto(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const io::GameSpec spec = load(o, err);
  const ReliabilityGame g = spec.reliability_game(o.caps);
  const auto base = find_veto_agents(g.base, o.caps);
  const auto ext = find_extension_veto_agents(g, o.caps);
  if (o.json_output) {
    print_json(out, {{"command", "veto"}, {"base", labels_json(spec, base)}, {"extension", labels_json(spec, ext)}});
  } else {
    out << "base veto agents: " << agent_list(spec, base) << "\n";
    out << "extension veto agents: " << agent_list(spec, ext) << "\n";
  }
  return kOk;
}

inline PayoffVector parse_payoffs(const std::string& text) {
  PayoffVector p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("cannot parse payoff '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw UsageError("cannot parse payoff '" + item + "'");
    }
    p.push_back(x);
  }
  return p;
}

inline int cmd_check(const CommonOptions& o, const std::string& imputation, std::ostream& out,
                     std::ostream& err) {
  const io::GameSpec spec = load(o, err);
  const ReliabilityGame g = spec.reliability_game(o.caps);
  const PayoffVector p = parse_payoffs(imputation);
  const MembershipResult m = check_core_membership(g, p, o.caps.membership);
  if (o.json_output) {
    json doc{{"command", "check"}, {"in_core", m.in_core}};
    if (m.blocking) {
      doc["blocking"] = labels_json(spec, m.blocking->members());
      doc["shortfall"] = m.shortfall;
    }
    print_json(out, doc);
  } else if (m.in_core) {
    out << "in core: yes\n";
  } else {
    out << "in core: no\n";
    out << "blocking coalition: " << io::format_coalition(spec, *m.blocking) << " (shortfall "
        << fixed(m.shortfall, 12) << ")\n";
  }
  return kOk;
}

}  // namespace detail

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Reliability extensions of simple cooperative games"};
  app.require_subcommand(1);

  CommonOptions value_o, shapley_o, core_o, veto_o, check_o;
  std::string coalition_text;
  ShapleyOptions sopt;
  std::string method = "auto";
  std::string imputation;

  auto* value = app.add_subcommand("value", "Extension value of a coalition");
  add_common(value, value_o);
  value->add_option("coalition", coalition_text, "Comma-separated agent labels (empty for none)");

  auto* shapley = app.add_subcommand("shapley", "Exact or sampled Shapley values");
  add_common(shapley, shapley_o);
  shapley->add_option("--epsilon", sopt.epsilon, "Target accuracy; plans the sample count");
  shapley->add_option("--delta", sopt.delta, "Confidence parameter (default 0.05)");
  shapley->add_option("--samples", sopt.samples, "Explicit sample count");
  shapley->add_option("--seed", sopt.seed, "RNG seed (default 1)");
  shapley->add_flag("--exact", sopt.exact, "Exact computation (small games)");
  shapley->add_option("--workers", sopt.workers, "Worker threads (does not change results)");
  shapley->add_option("--mode", sopt.mode, "independent (default) or shared");

  auto* core = app.add_subcommand("core", "Core non-emptiness and a core imputation");
  add_common(core, core_o);
  core->add_option("--method", method, "auto|veto|typed|brute|convex");

  auto* veto = app.add_subcommand("veto", "Veto agents of the base game and of the extension");
  add_common(veto, veto_o);

  auto* check = app.add_subcommand("check", "Core membership of an imputation");
  add_common(check, check_o);
  check->add_option("--imputation", imputation, "Comma-separated payoffs in agent order")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*value) return cmd_value(value_o, coalition_text, out, err);
    if (*shapley) return cmd_shapley(shapley_o, sopt, out, err);
    if (*core) return cmd_core(core_o, method, out, err);
    if (*veto) return cmd_veto(veto_o, out, err);
    if (*check) return cmd_check(check_o, imputation, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Refusal& e) {
    err << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kUsage;
}

}  // namespace relgame::cli
