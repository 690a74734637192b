#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bnkit/factor_graph.hpp"
#include "bnkit/model.hpp"
#include "bnkit/query.hpp"

namespace bnkit {

enum class Schedule { Sequential, Flooding };

struct LbpConfig {
  std::size_t max_iterations = 200;
  double tolerance = 1e-6;  // L-infinity on the undamped message change
  Schedule schedule = Schedule::Sequential;
  double damping = 0.0;  // in [0, 1): weight kept on the previous message
};

/// Message sets on a factor graph, indexed by edge id.
struct MessageSet {
  std::vector<std::vector<double>> factor_to_variable;
  std::vector<std::vector<double>> variable_to_factor;
};

struct LbpResult {
  QueryResult query;
  MessageSet messages;
};

LbpResult loopy_bp_detailed(const BayesianNetwork& net, const Assignment& evidence,
                            const LbpConfig& cfg = {});
QueryResult loopy_bp(const BayesianNetwork& net, const Assignment& evidence,
                     const LbpConfig& cfg = {});

/// Largest change one undamped flooding update would make to `messages`.
double lbp_residual(const FactorGraph& fg, const BayesianNetwork& net, const Assignment& evidence,
                    const MessageSet& messages);

struct SamplerConfig {
  std::size_t sample_count = 10000;
  std::uint64_t seed = 0;
  /// Gibbs only; defaults to sample_count / 10.
  std::optional<std::size_t> burn_in;
};

/// Ancestral samples (parents before children), one FullAssignment each.
std::vector<FullAssignment> direct_sample(const BayesianNetwork& net, const SamplerConfig& cfg);

/// Marginals N(x)/N from ancestral sampling; refuses evidence.
QueryResult direct_sampling_query(const BayesianNetwork& net, const Assignment& evidence,
                                  const SamplerConfig& cfg);

QueryResult rejection_sampling(const BayesianNetwork& net, const Assignment& evidence,
                               const SamplerConfig& cfg);
Distribution rejection_sample_query(const BayesianNetwork& net, VarId query,
                                    const Assignment& evidence, const SamplerConfig& cfg);

QueryResult likelihood_weighting(const BayesianNetwork& net, const Assignment& evidence,
                                 const SamplerConfig& cfg);
Distribution likelihood_weighting_query(const BayesianNetwork& net, VarId query,
                                        const Assignment& evidence, const SamplerConfig& cfg);

/// Systematic-scan Gibbs sampling. sample_count counts sweeps, burn-in
/// included. Deterministic tables can make the chain reducible; when a full
/// conditional vanishes entirely the state is redrawn uniformly.
QueryResult gibbs_sampling(const BayesianNetwork& net, const Assignment& evidence,
                           const SamplerConfig& cfg);
Distribution gibbs_query(const BayesianNetwork& net, VarId query, const Assignment& evidence,
                         const SamplerConfig& cfg);

struct VmpConfig {
  std::size_t max_sweeps = 500;
  double tolerance = 1e-10;  // on |delta L| between sweeps
  /// Zero table entries are replaced by this inside logarithms.
  double log_floor = 1e-12;
};

struct VmpState {
  std::map<VarId, Distribution> q;
  std::vector<double> free_energy_trace;
};

struct VmpResult {
  QueryResult query;
  VmpState state;
};

/// Fully factorized mean-field coordinate ascent over the hidden variables.
VmpResult vmp_query(const BayesianNetwork& net, const Assignment& evidence,
                    const VmpConfig& cfg = {});

/// L(Q) = E_Q[log joint(h, e)] + H(Q) for a factorized Q over hidden variables.
double free_energy(const BayesianNetwork& net, const Assignment& evidence,
                   const std::map<VarId, Distribution>& q, double log_floor = 1e-12);

}  // namespace bnkit
