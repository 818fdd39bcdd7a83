#include "linking/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "linking/truthfulness.hpp"

namespace linking {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void validate_config(const SimConfig& cfg) {
  if (cfg.replications < 1) throw ValidationError("replications", "must be at least 1");
  if (cfg.ks.empty()) throw ValidationError("ks", "no K values");
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    if (cfg.ks[i] < 1) throw ValidationError("ks", "K values must be positive");
    if (i > 0 && cfg.ks[i] <= cfg.ks[i - 1]) {
      throw ValidationError("ks", "K values must be strictly increasing");
    }
    if (cfg.ks[i] > cfg.max_k) {
      throw CapExceeded("K = " + std::to_string(cfg.ks[i]) + " exceeds the cap of " +
                        std::to_string(cfg.max_k));
    }
  }
}

struct Episode {
  std::int64_t lies = 0;
  std::int64_t min_lies = 0;
  double tv_to_prior = 0.0;
};

// Per-worker tallies; integer sums, so merge order does not matter.
struct SlotCounts {
  std::vector<std::int64_t> lies;
  std::vector<std::int64_t> gaps;
  std::int64_t star_violations = 0;
};

KStats run_one_k(const SimConfig& cfg, const SocialChoiceFunction& f, std::int64_t K) {
  const Problem& problem = cfg.problem;
  const std::size_t n = problem.num_types();
  const Quota quota = compute_quota(problem.prior(), K);
  const std::int64_t reps = cfg.replications;
  const double k_double = static_cast<double>(K);

  std::vector<char> outcome_differs(n * n, 0);
  for (TypeIndex t = 0; t < n; ++t)
    for (TypeIndex r = 0; r < n; ++r) outcome_differs[t * n + r] = f(t) != f(r);

  std::vector<Episode> episodes(static_cast<std::size_t>(reps));
  const unsigned workers = static_cast<unsigned>(
      std::clamp<std::int64_t>(cfg.workers == 0 ? 1 : cfg.workers, 1, reps));
  std::vector<SlotCounts> counts(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned id) {
    try {
      SlotCounts& c = counts[id];
      c.lies.assign(static_cast<std::size_t>(K), 0);
      c.gaps.assign(static_cast<std::size_t>(K), 0);
      for (std::int64_t rep = id; rep < reps; rep += workers) {
        std::mt19937_64 rng(substream_seed(cfg.seed, K, rep));
        const PreferenceVector truth = sample_type_vector(problem.prior(), K, rng);
        const Message report = strategy_report(cfg.strategy, truth, quota, f, problem, rng);

        Episode& e = episodes[static_cast<std::size_t>(rep)];
        for (std::size_t k = 0; k < truth.size(); ++k) {
          const TypeIndex t = truth[k];
          const TypeIndex r = report[k];
          if (t != r) {
            ++e.lies;
            ++c.lies[k];
          }
          if (outcome_differs[t * n + r]) ++c.gaps[k];
        }
        e.min_lies = min_lie_count(truth, quota);
        if (e.lies > static_cast<std::int64_t>(n - 1) * e.min_lies) ++c.star_violations;
        const auto have = truth.counts();
        for (TypeIndex t = 0; t < n; ++t) {
          e.tv_to_prior += std::max(0.0, static_cast<double>(have[t]) / k_double -
                                             to_double(problem.prior()[t]));
        }
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  std::vector<std::int64_t> slot_lies(static_cast<std::size_t>(K), 0);
  std::vector<std::int64_t> slot_gaps(static_cast<std::size_t>(K), 0);
  KStats s;
  for (const auto& c : counts) {
    for (std::size_t k = 0; k < slot_lies.size(); ++k) {
      slot_lies[k] += c.lies[k];
      slot_gaps[k] += c.gaps[k];
    }
    s.star_violations += c.star_violations;
  }

  // Sequential fold in replication order.
  const double reps_double = static_cast<double>(reps);
  double sum_frac = 0.0, sum_tvq = 0.0, sum_tvp = 0.0;
  for (const auto& e : episodes) {
    sum_frac += static_cast<double>(e.lies) / k_double;
    sum_tvq += static_cast<double>(e.min_lies) / k_double;
    sum_tvp += e.tv_to_prior;
  }
  s.K = K;
  s.replications = reps;
  s.lie_fraction = sum_frac / reps_double;
  s.mean_tv_to_quota = sum_tvq / reps_double;
  s.mean_tv_to_prior = sum_tvp / reps_double;

  if (reps > 1) {
    double ss_frac = 0.0, ss_tvq = 0.0;
    for (const auto& e : episodes) {
      const double a = static_cast<double>(e.lies) / k_double - s.lie_fraction;
      const double b = static_cast<double>(e.min_lies) / k_double - s.mean_tv_to_quota;
      ss_frac += a * a;
      ss_tvq += b * b;
    }
    s.lie_fraction_se = std::sqrt(ss_frac / (reps_double - 1.0) / reps_double);
    s.mean_tv_to_quota_se = std::sqrt(ss_tvq / (reps_double - 1.0) / reps_double);
  } else {
    s.lie_fraction_se = std::numeric_limits<double>::quiet_NaN();
    s.mean_tv_to_quota_se = std::numeric_limits<double>::quiet_NaN();
  }

  const auto max_lies = *std::max_element(slot_lies.begin(), slot_lies.end());
  const auto max_gaps = *std::max_element(slot_gaps.begin(), slot_gaps.end());
  s.max_slot_lie_prob = static_cast<double>(max_lies) / reps_double;
  s.efficiency_gap = static_cast<double>(max_gaps) / reps_double;
  s.pooled_efficiency_gap =
      static_cast<double>(std::accumulate(slot_gaps.begin(), slot_gaps.end(), std::int64_t{0})) /
      (reps_double * k_double);

  s.quota_tv_to_prior = tv_distance(problem.prior(), quota.as_distribution());
  const double factor = static_cast<double>(n - 1);
  s.star_bound = factor * (s.mean_tv_to_prior + to_double(s.quota_tv_to_prior));
  const double se = reps > 1 ? s.lie_fraction_se : 0.0;
  s.bound_check_passed = s.lie_fraction <= factor * s.mean_tv_to_quota + 3.0 * se;
  return s;
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "canonical-min-lie") return Strategy::kCanonicalMinLie;
  if (name == "uniform-min-lie") return Strategy::kUniformMinLie;
  if (name == "best-response") return Strategy::kBestResponse;
  if (name == "custom-permutation-truthful") return Strategy::kPermutationTruthfulChain;
  throw ValidationError("strategy", "unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kCanonicalMinLie: return "canonical-min-lie";
    case Strategy::kUniformMinLie: return "uniform-min-lie";
    case Strategy::kBestResponse: return "best-response";
    case Strategy::kPermutationTruthfulChain: return "custom-permutation-truthful";
  }
  return "unknown";
}

std::uint64_t substream_seed(std::uint64_t seed, std::int64_t K, std::int64_t replication) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(K));
  return splitmix64(h ^ static_cast<std::uint64_t>(replication));
}

PreferenceVector sample_type_vector(const Distribution& prior, std::int64_t K,
                                    std::mt19937_64& rng) {
  if (K < 1) throw ValidationError("K", "must be at least 1");
  std::int64_t common = 1;
  for (const auto& p : prior) common = std::lcm(common, p.denominator());
  std::vector<std::int64_t> cumulative;
  std::int64_t running = 0;
  for (const auto& p : prior) {
    running += p.numerator() * (common / p.denominator());
    cumulative.push_back(running);
  }
  if (running != common) throw ValidationError("prior", "does not sum to 1");

  std::uniform_int_distribution<std::int64_t> draw(0, common - 1);
  std::vector<TypeIndex> entries(static_cast<std::size_t>(K));
  for (auto& e : entries) {
    const std::int64_t x = draw(rng);
    e = static_cast<TypeIndex>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                               cumulative.begin());
  }
  return PreferenceVector(std::move(entries), prior.size());
}

std::vector<Distribution> apply_mechanism(const PreferenceVector& report,
                                          const SocialChoiceFunction& f) {
  std::vector<Distribution> outcome;
  outcome.reserve(report.size());
  for (std::size_t k = 0; k < report.size(); ++k) outcome.push_back(f(report[k]));
  return outcome;
}

Message strategy_report(Strategy strategy, const PreferenceVector& truth, const Quota& quota,
                        const SocialChoiceFunction& f, const Problem& problem,
                        std::mt19937_64& rng) {
  switch (strategy) {
    case Strategy::kCanonicalMinLie: return canonical_min_lie_message(truth, quota);
    case Strategy::kUniformMinLie: return sample_minimal_lie_message(truth, quota, rng);
    case Strategy::kBestResponse: return best_response_transport(truth, f, problem, quota).message;
    case Strategy::kPermutationTruthfulChain: return chain_message(truth, quota);
  }
  throw ValidationError("strategy", "unknown strategy");
}

SimStats run_convergence(const SimConfig& config) {
  validate_config(config);
  const SocialChoiceFunction f =
      config.social_choice ? *config.social_choice : SocialChoiceFunction::dictatorial(config.problem);
  SimStats stats;
  stats.strategy = config.strategy;
  stats.seed = config.seed;
  for (auto K : config.ks) stats.per_k.push_back(run_one_k(config, f, K));
  return stats;
}

std::vector<std::pair<std::int64_t, double>> efficiency_gap(const SimConfig& config) {
  std::vector<std::pair<std::int64_t, double>> out;
  for (const auto& s : run_convergence(config).per_k) out.emplace_back(s.K, s.efficiency_gap);
  return out;
}

ExactExpectation exact_expectation(const Problem& problem, std::int64_t K, Strategy strategy,
                                   const SocialChoiceFunction& f, std::uint64_t cap) {
  const std::size_t n = problem.num_types();
  std::uint64_t total = 1;
  for (std::int64_t i = 0; i < K; ++i) {
    total *= n;
    if (total > cap) {
      throw CapExceeded("exhaustive expectation over more than " + std::to_string(cap) +
                        " type vectors");
    }
  }
  const Quota quota = compute_quota(problem.prior(), K);
  const Strategy effective =
      strategy == Strategy::kUniformMinLie ? Strategy::kCanonicalMinLie : strategy;
  std::mt19937_64 unused_rng(0);

  std::vector<double> prior(n);
  for (TypeIndex t = 0; t < n; ++t) prior[t] = to_double(problem.prior()[t]);

  ExactExpectation out;
  std::vector<TypeIndex> digits(static_cast<std::size_t>(K), 0);
  for (std::uint64_t index = 0; index < total; ++index) {
    double weight = 1.0;
    for (auto t : digits) weight *= prior[t];
    if (weight > 0.0) {
      const PreferenceVector truth(digits, n);
      const Message report = strategy_report(effective, truth, quota, f, problem, unused_rng);
      out.expected_lies += weight * static_cast<double>(hamming(truth, report.vector()));
      out.expected_tv_to_quota +=
          weight * static_cast<double>(min_lie_count(truth, quota)) / static_cast<double>(K);
    }
    for (std::size_t pos = 0; pos < digits.size(); ++pos) {
      if (++digits[pos] < n) break;
      digits[pos] = 0;
    }
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& out, const SimStats& stats) {
  out << "K,strategy,reps,lie_fraction,lie_fraction_se,max_slot_lie_prob,mean_tv_to_quota,"
         "star_bound,efficiency_gap,seed\n";
  for (const auto& s : stats.per_k) {
    out << s.K << ',' << strategy_name(stats.strategy) << ',' << s.replications << ','
        << format_number(s.lie_fraction) << ',' << format_number(s.lie_fraction_se) << ','
        << format_number(s.max_slot_lie_prob) << ',' << format_number(s.mean_tv_to_quota) << ','
        << format_number(s.star_bound) << ',' << format_number(s.efficiency_gap) << ','
        << stats.seed << '\n';
  }
}

}  // namespace linking
