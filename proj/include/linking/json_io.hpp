#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "linking/core.hpp"
#include "linking/counterexample.hpp"
#include "linking/link_graph.hpp"
#include "linking/optimize.hpp"
#include "linking/sim.hpp"

namespace linking {

using Json = nlohmann::ordered_json;

// Problem-spec format:
//   {
//     "decisions": ["a", "b", "c"],
//     "types": ["A", "B", "C"],
//     "prior": ["1/3", "1/3", "1/3"],
//     "utility": {"A": {"a": 2, "b": 1, "c": 0}, ...},
//     "social_choice": {"A": "a", "B": {"a": "1/2", "b": "1/2"}, ...}   (optional)
//   }
// Priors and lottery weights are rational strings; utilities are numbers.

RawProblem raw_problem_from_json(const Json& j);
Problem problem_from_json(const Json& j);
/// Reads and validates a problem-spec file. Throws ValidationError on I/O,
/// parse or validation failure.
Problem load_problem(const std::string& path);

/// The optional "social_choice" object; nullopt when absent.
std::optional<SocialChoiceFunction> social_choice_from_json(const Json& j, const Problem& problem);

Json to_json(const Problem& problem);
Json to_json(const Quota& quota, const Problem& problem);
Json to_json(const LinkGraph& graph, const Problem& problem);
Json to_json(const CyclePartition& partition);
Json to_json(const LemmaWitness& witness);
Json to_json(const TransportPlan& plan, const Problem& problem);
Json to_json(const CounterexampleReport& report);
Json to_json(const SimStats& stats);

}  // namespace linking
