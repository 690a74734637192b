#include <cmath>
#include <span>

#include "bnkit/approx.hpp"
#include "bnkit/rng.hpp"
#include "internal.hpp"

namespace bnkit {

namespace {

std::span<const double> cpt_row(const BayesianNetwork& net, VarId v, const FullAssignment& state) {
  const std::size_t start = net.cpt_index(v, 0, state);
  return std::span<const double>(net.cpt(v)).subspan(start, net.cardinality(v));
}

void require_samples(const SamplerConfig& cfg) {
  if (cfg.sample_count == 0) throw Error(errc::kInvalidConfig, "sample count must be positive");
}

using Counts = std::vector<std::vector<double>>;

Counts zero_counts(const BayesianNetwork& net) {
  Counts counts(net.size());
  for (VarId v = 0; v < net.size(); ++v) counts[v].assign(net.cardinality(v), 0.0);
  return counts;
}

QueryResult from_counts(const BayesianNetwork& net, const Assignment& evidence, Counts counts,
                        const char* empty_code) {
  QueryResult result;
  for (VarId v = 0; v < net.size(); ++v) {
    if (auto s = evidence.get(v)) {
      result.posteriors.emplace(v, Distribution::point(v, net.cardinality(v), *s));
      continue;
    }
    double total = 0.0;
    for (double c : counts[v]) total += c;
    if (!(total > 0.0)) throw Error(empty_code, "no sample mass to estimate from");
    for (double& c : counts[v]) c /= total;
    result.posteriors.emplace(v, Distribution{v, std::move(counts[v])});
  }
  return result;
}

// Draws one ancestral sample into `state`. With `evidence`, stops at the
// first observed variable whose draw disagrees and returns false.
bool ancestral_draw(const BayesianNetwork& net, const std::vector<VarId>& order, Rng& rng,
                    FullAssignment& state,
                    const std::vector<std::optional<std::size_t>>* evidence) {
  for (VarId v : order) {
    state[v] = rng.categorical(cpt_row(net, v, state));
    if (evidence && (*evidence)[v] && *(*evidence)[v] != state[v]) return false;
  }
  return true;
}

Distribution single(const QueryResult& r, VarId v) { return r.posterior(v); }

}  // namespace

std::vector<FullAssignment> direct_sample(const BayesianNetwork& net, const SamplerConfig& cfg) {
  net.require_valid();
  require_samples(cfg);
  const auto order = topological_order(net);
  Rng rng(cfg.seed);
  std::vector<FullAssignment> samples(cfg.sample_count, FullAssignment(net.size()));
  for (auto& s : samples) ancestral_draw(net, order, rng, s, nullptr);
  return samples;
}

QueryResult direct_sampling_query(const BayesianNetwork& net, const Assignment& evidence,
                                  const SamplerConfig& cfg) {
  if (!evidence.empty()) {
    throw Error(errc::kEvidenceUnsupported, "direct sampling cannot condition on evidence");
  }
  detail::Stopwatch clock;
  net.require_valid();
  require_samples(cfg);
  const auto order = topological_order(net);
  Rng rng(cfg.seed);
  Counts counts = zero_counts(net);
  FullAssignment state(net.size());
  for (std::size_t i = 0; i < cfg.sample_count; ++i) {
    ancestral_draw(net, order, rng, state, nullptr);
    for (VarId v = 0; v < net.size(); ++v) counts[v][state[v]] += 1.0;
  }
  QueryResult result = from_counts(net, evidence, std::move(counts), errc::kNoAcceptedSamples);
  result.diagnostics.engine = "direct";
  result.diagnostics.samples = cfg.sample_count;
  result.diagnostics.accepted = cfg.sample_count;
  result.diagnostics.iterations = cfg.sample_count;
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

QueryResult rejection_sampling(const BayesianNetwork& net, const Assignment& evidence,
                               const SamplerConfig& cfg) {
  detail::Stopwatch clock;
  net.require_valid();
  require_samples(cfg);
  const auto observed = detail::observed_states(net, evidence);
  const auto order = topological_order(net);
  Rng rng(cfg.seed);
  Counts counts = zero_counts(net);
  FullAssignment state(net.size());
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < cfg.sample_count; ++i) {
    if (!ancestral_draw(net, order, rng, state, &observed)) continue;
    ++accepted;
    for (VarId v = 0; v < net.size(); ++v) counts[v][state[v]] += 1.0;
  }
  if (accepted == 0) {
    throw Error(errc::kNoAcceptedSamples, "no sample was consistent with the evidence");
  }
  QueryResult result = from_counts(net, evidence, std::move(counts), errc::kNoAcceptedSamples);
  result.diagnostics.engine = "reject";
  result.diagnostics.samples = cfg.sample_count;
  result.diagnostics.accepted = accepted;
  result.diagnostics.iterations = cfg.sample_count;
  result.diagnostics.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(cfg.sample_count);
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

Distribution rejection_sample_query(const BayesianNetwork& net, VarId query,
                                    const Assignment& evidence, const SamplerConfig& cfg) {
  return single(rejection_sampling(net, evidence, cfg), query);
}

QueryResult likelihood_weighting(const BayesianNetwork& net, const Assignment& evidence,
                                 const SamplerConfig& cfg) {
  detail::Stopwatch clock;
  net.require_valid();
  require_samples(cfg);
  const auto observed = detail::observed_states(net, evidence);
  const auto order = topological_order(net);
  Rng rng(cfg.seed);
  Counts counts = zero_counts(net);
  FullAssignment state(net.size());
  double total = 0.0, total_sq = 0.0;
  for (std::size_t i = 0; i < cfg.sample_count; ++i) {
    double w = 1.0;
    for (VarId v : order) {
      if (observed[v]) {
        state[v] = *observed[v];
        w *= net.conditional(v, state);
      } else {
        state[v] = rng.categorical(cpt_row(net, v, state));
      }
    }
    if (w == 0.0) continue;
    total += w;
    total_sq += w * w;
    for (VarId v = 0; v < net.size(); ++v) counts[v][state[v]] += w;
  }
  if (!(total > 0.0)) throw Error(errc::kZeroWeight, "all samples have zero weight");
  QueryResult result = from_counts(net, evidence, std::move(counts), errc::kZeroWeight);
  result.diagnostics.engine = "lw";
  result.diagnostics.samples = cfg.sample_count;
  result.diagnostics.iterations = cfg.sample_count;
  result.diagnostics.acceptance_rate =
      total * total / total_sq / static_cast<double>(cfg.sample_count);
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

Distribution likelihood_weighting_query(const BayesianNetwork& net, VarId query,
                                        const Assignment& evidence, const SamplerConfig& cfg) {
  return single(likelihood_weighting(net, evidence, cfg), query);
}

QueryResult gibbs_sampling(const BayesianNetwork& net, const Assignment& evidence,
                           const SamplerConfig& cfg) {
  detail::Stopwatch clock;
  net.require_valid();
  const auto observed = detail::observed_states(net, evidence);
  std::vector<VarId> hidden;
  for (VarId v : topological_order(net)) {
    if (!observed[v]) hidden.push_back(v);
  }
  if (hidden.empty()) {
    throw Error(errc::kNoHiddenVariables, "Gibbs sampling needs an unobserved variable");
  }
  const std::size_t burn_in = cfg.burn_in.value_or(cfg.sample_count / 10);
  if (cfg.sample_count <= burn_in) {
    throw Error(errc::kNoRetainedSamples, "no sweeps remain after burn-in");
  }
  Rng rng(cfg.seed);
  FullAssignment state(net.size(), 0);
  for (VarId v = 0; v < net.size(); ++v) {
    state[v] = observed[v] ? *observed[v] : rng.index(net.cardinality(v));
  }
  Counts counts = zero_counts(net);
  std::vector<double> weights;
  for (std::size_t sweep = 0; sweep < cfg.sample_count; ++sweep) {
    for (VarId v : hidden) {
      const std::size_t card = net.cardinality(v);
      weights.assign(card, 0.0);
      for (std::size_t s = 0; s < card; ++s) {
        state[v] = s;
        double w = net.conditional(v, state);
        for (VarId c : net.children(v)) {
          if (w == 0.0) break;
          w *= net.conditional(c, state);
        }
        weights[s] = w;
      }
      std::size_t next = rng.categorical(weights);
      if (next == card) next = rng.index(card);
      state[v] = next;
    }
    if (sweep >= burn_in) {
      for (VarId v : hidden) counts[v][state[v]] += 1.0;
    }
  }
  QueryResult result = from_counts(net, evidence, std::move(counts), errc::kNoRetainedSamples);
  result.diagnostics.engine = "gibbs";
  result.diagnostics.samples = cfg.sample_count - burn_in;
  result.diagnostics.iterations = cfg.sample_count;
  result.diagnostics.converged = true;
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

Distribution gibbs_query(const BayesianNetwork& net, VarId query, const Assignment& evidence,
                         const SamplerConfig& cfg) {
  return single(gibbs_sampling(net, evidence, cfg), query);
}

}  // namespace bnkit
