#include "linking/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace linking {
namespace {

std::vector<std::string> string_array(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(key, "missing");
  const Json& a = j.at(key);
  if (!a.is_array()) throw ValidationError(key, "must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : a) {
    if (!e.is_string()) throw ValidationError(key, "must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// Accepts "1/3" strings and, for convenience, plain JSON numbers that are integers.
std::string rational_text(const Json& e, const std::string& field) {
  if (e.is_string()) return e.get<std::string>();
  if (e.is_number_integer()) return std::to_string(e.get<std::int64_t>());
  throw ValidationError(field, "must be a rational string such as \"1/3\"");
}

Json nullable(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

Json labels_json(const std::vector<std::string>& labels) { return Json(labels); }

}  // namespace

RawProblem raw_problem_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("problem", "must be a JSON object");
  RawProblem raw;
  raw.decisions = string_array(j, "decisions");
  raw.types = string_array(j, "types");
  if (!j.contains("prior") || !j.at("prior").is_array()) {
    throw ValidationError("prior", "must be an array of rational strings");
  }
  for (const auto& e : j.at("prior")) raw.prior.push_back(rational_text(e, "prior"));

  if (!j.contains("utility") || !j.at("utility").is_object()) {
    throw ValidationError("utility", "must be an object: type -> decision -> number");
  }
  for (const auto& [type, row] : j.at("utility").items()) {
    if (!row.is_object()) throw ValidationError("utility." + type, "must be an object");
    for (const auto& [decision, value] : row.items()) {
      if (!value.is_number()) {
        throw ValidationError("utility." + type + "." + decision, "must be a number");
      }
      raw.utility[type][decision] = value.get<double>();
    }
  }
  return raw;
}

Problem problem_from_json(const Json& j) { return validate_problem(raw_problem_from_json(j)); }

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("spec", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("spec", std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

std::optional<SocialChoiceFunction> social_choice_from_json(const Json& j, const Problem& problem) {
  if (!j.contains("social_choice")) return std::nullopt;
  const Json& scf = j.at("social_choice");
  if (!scf.is_object()) throw ValidationError("social_choice", "must be an object");
  std::vector<Distribution> lotteries(problem.num_types());
  for (TypeIndex t = 0; t < problem.num_types(); ++t) {
    const std::string& type = problem.types()[t];
    const std::string field = "social_choice." + type;
    if (!scf.contains(type)) throw ValidationError(field, "missing entry");
    const Json& entry = scf.at(type);
    Distribution lottery(problem.num_decisions(), Rational(0));
    if (entry.is_string()) {
      lottery[problem.decision_index(entry.get<std::string>())] = 1;
    } else if (entry.is_object()) {
      for (const auto& [decision, weight] : entry.items()) {
        try {
          lottery[problem.decision_index(decision)] = parse_rational(rational_text(weight, field));
        } catch (const std::invalid_argument& e) {
          throw ValidationError(field + "." + decision, e.what());
        }
      }
    } else {
      throw ValidationError(field, "must be a decision label or a lottery object");
    }
    lotteries[t] = std::move(lottery);
  }
  return SocialChoiceFunction(std::move(lotteries), problem.num_decisions());
}

Json to_json(const Problem& problem) {
  Json j;
  j["decisions"] = problem.decisions();
  j["types"] = problem.types();
  Json prior = Json::array();
  for (const auto& p : problem.prior()) prior.push_back(to_string(p));
  j["prior"] = prior;
  Json utility = Json::object();
  for (TypeIndex t = 0; t < problem.num_types(); ++t) {
    Json row = Json::object();
    for (std::size_t d = 0; d < problem.num_decisions(); ++d) {
      row[problem.decisions()[d]] = problem.utility(d, t);
    }
    utility[problem.types()[t]] = row;
  }
  j["utility"] = utility;
  return j;
}

Json to_json(const Quota& quota, const Problem& problem) {
  Json counts = Json::object();
  Json dist = Json::object();
  const auto d = quota.as_distribution();
  for (TypeIndex t = 0; t < quota.num_types(); ++t) {
    counts[problem.types()[t]] = quota.count(t);
    dist[problem.types()[t]] = to_string(d[t]);
  }
  Json j;
  j["K"] = quota.K();
  j["counts"] = counts;
  j["distribution"] = dist;
  j["tv_to_prior"] = to_string(tv_distance(problem.prior(), d));
  return j;
}

Json to_json(const LinkGraph& graph, const Problem& problem) {
  Json edges = Json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"label", e.label},
                     {"tail", problem.types().at(e.tail)},
                     {"head", problem.types().at(e.head)},
                     {"is_new", graph.is_new(e.label)}});
  }
  Json j;
  j["nodes"] = problem.types();
  j["edges"] = edges;
  return j;
}

Json to_json(const CyclePartition& partition) {
  Json j;
  j["cycles"] = partition.cycles;
  return j;
}

Json to_json(const LemmaWitness& witness) {
  Json pi = Json::array();
  for (const auto& [k, image] : witness.pi) pi.push_back({k, image});
  Json j;
  j["S"] = witness.subset;
  j["pi"] = pi;
  return j;
}

Json to_json(const TransportPlan& plan, const Problem& problem) {
  Json j = Json::object();
  for (TypeIndex t = 0; t < plan.num_types(); ++t) {
    Json row = Json::object();
    for (TypeIndex r = 0; r < plan.num_types(); ++r) {
      if (plan.at(t, r) != 0) row[problem.types()[r]] = plan.at(t, r);
    }
    j[problem.types()[t]] = row;
  }
  return j;
}

Json to_json(const CounterexampleReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  Json minimal = Json::array();
  for (std::size_t i = 0; i < report.minimal_lie_messages.size(); ++i) {
    minimal.push_back({{"message", labels_json(report.minimal_lie_messages[i])},
                       {"payoff", report.minimal_lie_payoffs[i]}});
  }
  Json j;
  j["passed"] = report.passed();
  j["truth"] = report.truth;
  j["min_lies"] = report.min_lies;
  j["minimal_lie_messages"] = minimal;
  j["deviation"] = {{"message", report.deviation},
                    {"payoff", report.deviation_payoff},
                    {"approx_truthful", report.deviation_approx_truthful},
                    {"approx_truthful_star", report.deviation_approx_truthful_star},
                    {"permutation_truthful", report.deviation_permutation_truthful}};
  j["incentive"] = {{"lhs", report.incentive_lhs},
                    {"rhs", report.incentive_rhs},
                    {"deviation_incentive", report.deviation_incentive}};
  if (!report.deviation_incentive) j["flag"] = "no deviation incentive";
  j["best_responses"] = report.best_responses;
  j["best_payoff"] = report.best_payoff;
  j["checks"] = checks;
  return j;
}

Json to_json(const SimStats& stats) {
  Json rows = Json::array();
  for (const auto& s : stats.per_k) {
    rows.push_back({{"K", s.K},
                    {"reps", s.replications},
                    {"lie_fraction", s.lie_fraction},
                    {"lie_fraction_se", nullable(s.lie_fraction_se)},
                    {"max_slot_lie_prob", s.max_slot_lie_prob},
                    {"mean_tv_to_quota", s.mean_tv_to_quota},
                    {"mean_tv_to_quota_se", nullable(s.mean_tv_to_quota_se)},
                    {"mean_tv_to_prior", s.mean_tv_to_prior},
                    {"quota_tv_to_prior", to_string(s.quota_tv_to_prior)},
                    {"star_bound", s.star_bound},
                    {"efficiency_gap", s.efficiency_gap},
                    {"pooled_efficiency_gap", s.pooled_efficiency_gap},
                    {"star_violations", s.star_violations},
                    {"bound_check_passed", s.bound_check_passed}});
  }
  Json j;
  j["strategy"] = std::string(strategy_name(stats.strategy));
  j["seed"] = stats.seed;
  j["per_k"] = rows;
  return j;
}

}  // namespace linking
