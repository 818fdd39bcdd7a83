#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "linking/counterexample.hpp"
#include "linking/json_io.hpp"
#include "linking/link_graph.hpp"
#include "linking/optimize.hpp"
#include "linking/sim.hpp"
#include "linking/truthfulness.hpp"

namespace linking::cli {
namespace {

struct LoadedSpec {
  Problem problem;
  SocialChoiceFunction social_choice;
};

LoadedSpec load_spec(const std::string& path) {
  if (path.empty()) throw ValidationError("spec", "--spec is required for this subcommand");
  std::ifstream in(path);
  if (!in) throw ValidationError("spec", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("spec", std::string("invalid JSON: ") + e.what());
  }
  Problem problem = problem_from_json(j);
  auto f = social_choice_from_json(j, problem);
  SocialChoiceFunction scf = f ? std::move(*f) : SocialChoiceFunction::dictatorial(problem);
  return {std::move(problem), std::move(scf)};
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

PreferenceVector parse_vector(const Problem& problem, const std::string& text,
                              const std::string& field) {
  const auto labels = split_commas(text);
  if (labels.empty()) throw ValidationError(field, "empty vector");
  try {
    return PreferenceVector::from_labels(problem, labels);
  } catch (const ValidationError& e) {
    throw ValidationError(field, e.what());
  }
}

void check_k(std::int64_t requested, const PreferenceVector& v) {
  if (requested != 0 && requested != static_cast<std::int64_t>(v.size())) {
    throw ValidationError("K", "--K " + std::to_string(requested) + " but the vector has " +
                                   std::to_string(v.size()) + " entries");
  }
}

Message make_report(const Problem& problem, PreferenceVector report, const Quota& quota) {
  try {
    return Message(std::move(report), quota);
  } catch (const QuotaViolation& v) {
    std::string msg = "report violates the quota:";
    for (auto t : v.over()) msg += " " + problem.types()[t] + " over-represented";
    for (auto t : v.under()) msg += " " + problem.types()[t] + " under-represented";
    throw ValidationError("report", msg);
  }
}

Json labels(const Message& m, const Problem& problem) { return Json(m.vector().labels(problem)); }

}  // namespace

UtilityOverride parse_utility_override(const std::string& text,
                                       const std::vector<std::string>& decisions,
                                       const std::vector<std::string>& types) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("utility override needs '=': " + text);
  const std::string key = text.substr(0, eq);
  const std::string value_text = text.substr(eq + 1);

  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(value_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value_text.size()) {
    throw std::invalid_argument("utility override has a malformed number: " + text);
  }

  auto known = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };

  // u(c|B)
  if (key.size() > 4 && key.rfind("u(", 0) == 0 && key.back() == ')') {
    const auto bar = key.find('|');
    if (bar != std::string::npos) {
      std::string d = key.substr(2, bar - 2);
      std::string t = key.substr(bar + 1, key.size() - bar - 2);
      if (known(decisions, d) && known(types, t)) return {d, t, value};
    }
    throw std::invalid_argument("utility override names unknown labels: " + text);
  }
  // u_cB: decision label followed by type label.
  if (key.rfind("u_", 0) == 0) {
    const std::string rest = key.substr(2);
    std::vector<UtilityOverride> matches;
    for (std::size_t split = 1; split < rest.size(); ++split) {
      std::string d = rest.substr(0, split);
      std::string t = rest.substr(split);
      if (known(decisions, d) && known(types, t)) matches.push_back({d, t, value});
    }
    if (matches.size() == 1) return matches.front();
    if (matches.size() > 1) throw std::invalid_argument("ambiguous utility override: " + text);
  }
  throw std::invalid_argument("malformed utility override: " + text +
                              " (expected u_<decision><type>=x or u(<decision>|<type>)=x)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linking-mechanism truthfulness toolkit", "linked"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string spec_path;
  std::string output = "-";
  std::string format;
  app.add_option("--spec", spec_path, "Problem-spec JSON file");
  app.add_option("--output", output, "Output path, or - for stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::int64_t k = 0;
  auto* quota_cmd = app.add_subcommand("quota", "Rounded prior P^K and its distance to P");
  quota_cmd->add_option("-K,--K", k, "Number of linked problems")->required();

  std::string truth_text;
  std::string report_text;
  bool with_graph = false;
  auto* audit_cmd = app.add_subcommand("audit", "Truthfulness verdicts for a report");
  audit_cmd->add_option("-K,--K", k, "Number of linked problems (checked against the vectors)");
  audit_cmd->add_option("--truth", truth_text, "Comma-separated true types")->required();
  audit_cmd->add_option("--report", report_text, "Comma-separated reported types")->required();
  audit_cmd->add_flag("--graph", with_graph, "Include the balanced link graph and its cycles");

  std::string method = "transport";
  auto* br_cmd = app.add_subcommand("best-response", "Payoff-maximising quota-feasible report");
  br_cmd->add_option("-K,--K", k, "Number of linked problems (checked against the vector)");
  br_cmd->add_option("--truth", truth_text, "Comma-separated true types")->required();
  br_cmd->add_option("--method", method, "bruteforce or transport")
      ->check(CLI::IsMember({"bruteforce", "transport"}));

  std::vector<std::string> overrides;
  auto* ce_cmd = app.add_subcommand("counterexample", "Replay the three-problem deviation");
  ce_cmd->add_option("--utility", overrides, "Override such as u_cB=0.5 (repeatable)");

  std::string ks_text = "4,16,64,256";
  std::int64_t reps = 10000;
  std::string seed_text;
  std::string strategy_text = "canonical-min-lie";
  unsigned workers = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo lie fractions across K");
  sim_cmd->add_option("--ks", ks_text, "Comma-separated increasing K values");
  sim_cmd->add_option("--reps", reps, "Replications per K");
  sim_cmd->add_option("--seed", seed_text, "64-bit seed (default: $LINKED_SEED or 0)");
  sim_cmd->add_option("--strategy", strategy_text,
                      "canonical-min-lie, uniform-min-lie, best-response, "
                      "custom-permutation-truthful");
  sim_cmd->add_option("--workers", workers, "Worker threads (output does not depend on this)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kValidationError;
  }

  std::ostringstream result;
  try {
    const bool is_sim = sim_cmd->parsed();
    const std::string fmt = format.empty() ? (is_sim ? "csv" : "json") : format;
    if (fmt == "csv" && !is_sim) throw ValidationError("format", "csv is only available for simulate");
    int code = kSuccess;

    if (quota_cmd->parsed()) {
      const auto spec = load_spec(spec_path);
      if (k < 1) throw ValidationError("K", "must be at least 1");
      result << to_json(compute_quota(spec.problem.prior(), k), spec.problem).dump(2) << '\n';
    } else if (audit_cmd->parsed()) {
      const auto spec = load_spec(spec_path);
      const auto& p = spec.problem;
      const auto truth = parse_vector(p, truth_text, "truth");
      check_k(k, truth);
      const auto report_vec = parse_vector(p, report_text, "report");
      if (report_vec.size() != truth.size()) {
        throw ValidationError("report", "length differs from the truth vector");
      }
      const Quota quota = compute_quota(p.prior(), static_cast<std::int64_t>(truth.size()));
      const Message report = make_report(p, report_vec, quota);
      Json j;
      j["approx_truthful"] = is_approx_truthful(truth, report);
      j["approx_truthful_star"] = is_approx_truthful_star(truth, report);
      j["permutation_truthful"] = is_permutation_truthful(truth, report.vector());
      j["min_lies"] = min_lie_count(truth, quota);
      j["lies"] = hamming(truth, report.vector());
      j["star_bound"] = star_bound(truth, quota);
      j["witness"] = to_json(lemma_witness(truth, report.vector()));
      if (with_graph) {
        const auto g = balance_graph(build_link_graph(truth, report.vector()));
        j["link_graph"] = to_json(g, p);
        j["cycle_partition"] = to_json(cycle_partition(g));
      }
      result << j.dump(2) << '\n';
    } else if (br_cmd->parsed()) {
      const auto spec = load_spec(spec_path);
      const auto& p = spec.problem;
      const auto truth = parse_vector(p, truth_text, "truth");
      check_k(k, truth);
      const Quota quota = compute_quota(p.prior(), static_cast<std::int64_t>(truth.size()));
      Json j;
      j["method"] = method;
      if (method == "bruteforce") {
        const auto best = best_response_bruteforce(truth, spec.social_choice, p, quota);
        Json msgs = Json::array();
        for (const auto& m : best.messages) msgs.push_back(labels(m, p));
        j["payoff"] = best.payoff;
        j["messages"] = msgs;
      } else {
        const auto best = best_response_transport(truth, spec.social_choice, p, quota);
        j["payoff"] = best.payoff;
        j["message"] = labels(best.message, p);
        j["plan"] = to_json(best.plan, p);
      }
      result << j.dump(2) << '\n';
    } else if (ce_cmd->parsed()) {
      Problem problem = spec_path.empty() ? counterexample_problem() : load_spec(spec_path).problem;
      for (const auto& text : overrides) {
        UtilityOverride o;
        try {
          o = parse_utility_override(text, problem.decisions(), problem.types());
        } catch (const std::invalid_argument& e) {
          throw ValidationError("utility", e.what());
        }
        problem = problem.with_utility(problem.decision_index(o.decision),
                                       problem.type_index(o.type), o.value);
      }
      const auto report = verify_counterexample(problem);
      result << to_json(report).dump(2) << '\n';
      if (!report.passed()) {
        for (const auto& c : report.checks) {
          if (!c.passed) err << "FAILED " << c.name << ": " << c.detail << '\n';
        }
        code = kAssertionFailure;
      }
    } else if (sim_cmd->parsed()) {
      const auto spec = load_spec(spec_path);
      std::uint64_t seed = 0;
      if (seed_text.empty()) {
        if (const char* env = std::getenv("LINKED_SEED")) seed_text = env;
      }
      if (!seed_text.empty()) {
        try {
          if (seed_text.find('-') != std::string::npos) throw std::invalid_argument(seed_text);
          std::size_t used = 0;
          seed = std::stoull(seed_text, &used);
          if (used != seed_text.size()) throw std::invalid_argument(seed_text);
        } catch (const std::exception&) {
          throw ValidationError("seed", "not an unsigned 64-bit integer: '" + seed_text + "'");
        }
      }
      std::vector<std::int64_t> ks;
      for (const auto& item : split_commas(ks_text)) {
        try {
          std::size_t used = 0;
          ks.push_back(std::stoll(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw ValidationError("ks", "not an integer: '" + item + "'");
        }
      }
      SimConfig cfg{.problem = spec.problem,
                    .ks = ks,
                    .replications = reps,
                    .seed = seed,
                    .strategy = parse_strategy(strategy_text),
                    .social_choice = spec.social_choice,
                    .workers = workers};
      const auto stats = run_convergence(cfg);
      if (fmt == "csv") {
        write_csv(result, stats);
      } else {
        result << to_json(stats).dump(2) << '\n';
      }
    }

    if (output == "-") {
      out << result.str();
    } else {
      std::ofstream file(output, std::ios::binary);
      if (!file) throw ValidationError("output", "cannot write '" + output + "'");
      file << result.str();
    }
    return code;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kAssertionFailure;
  }
}

}  // namespace linking::cli
