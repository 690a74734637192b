#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bnkit/evaluation.hpp"
#include "bnkit/model.hpp"
#include "bnkit/potential.hpp"
#include "bnkit/rng.hpp"

namespace bnkit::testing {

DiscreteVariable boolean(const std::string& name);
/// States s0, s1, ...
DiscreteVariable variable(const std::string& name, std::size_t states, bool ordered = false);

NodeSpec table_node(DiscreteVariable v, std::vector<std::string> parents, std::vector<double> values);

/// Endocarditis, Hypertension, Arteriosclerosis -> HeartAttack, noisy OR with
/// inhibitors 0.4, 0.6, 0.7 (c = 0.6, 0.4, 0.3). Roots get uniform priors.
BayesianNetwork three_cause_heart_attack();

/// Random rows (each a distribution over `child_card` states). With
/// `zeros`, some entries are set to exactly zero.
std::vector<double> random_table(Rng& rng, std::size_t child_card, std::size_t rows, bool zeros = false);

/// Random polytree with up to `max_nodes` nodes, each with 2..max_states
/// states, and at most `max_joint` joint configurations.
BayesianNetwork random_polytree(Rng& rng, std::size_t max_nodes = 10, std::size_t max_states = 4,
                                std::size_t max_joint = std::size_t{1} << 16);

/// Random binary DAG with `nodes` nodes and up to `max_parents` parents per node.
BayesianNetwork random_binary_dag(Rng& rng, std::size_t nodes, std::size_t max_parents = 3,
                                  double edge_probability = 0.4);

/// Binary DAG with at least one undirected cycle.
BayesianNetwork random_loopy_dag(Rng& rng, std::size_t max_nodes = 12);

/// Network using every potential kind (tables, functions, noisy OR/MAX/AND).
BayesianNetwork random_mixed_network(Rng& rng, std::size_t nodes = 7);

/// Evidence on up to `max_observed` variables, taken from one ancestral
/// sample so that P(e) > 0.
Assignment random_evidence(Rng& rng, const BayesianNetwork& net, std::size_t max_observed);

/// Full joint over all variables; the first variable varies fastest.
std::vector<double> joint_table(const BayesianNetwork& net);

struct BruteForce {
  std::vector<std::vector<double>> posteriors;  // per variable
  double evidence_probability = 0.0;
};

/// Posterior of every variable by summing the full joint.
BruteForce brute_force(const BayesianNetwork& net, const Assignment& evidence);

/// max |P(x|z) - P(x|y,z)| over all configurations with P(y,z) > 0.
double independence_residual(const BayesianNetwork& net, const std::set<VarId>& x,
                             const std::set<VarId>& y, const std::set<VarId>& z);

// Direct summation over the hidden z-configurations of an ICI model. Each
// returns the flat table (child fastest, parents in order).
std::vector<double> ici_sum_noisy_or(const std::vector<double>& c, std::optional<double> leak);
std::vector<double> ici_sum_noisy_and(const std::vector<double>& c, const std::vector<double>& s);
std::vector<double> ici_sum_noisy_max(const std::vector<StateMatrix>& c,
                                      const std::optional<std::vector<double>>& leak,
                                      std::size_t child_card);

/// The headache fixture with its five specific diagnoses and all
/// characteristic variables; Migraine and Headache stay latent.
EvaluationPlan headache_plan(std::size_t per_diagnosis, std::uint64_t seed);

const std::vector<std::string>& headache_diagnoses();
const std::vector<std::string>& headache_characteristics();

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bnkit::testing
