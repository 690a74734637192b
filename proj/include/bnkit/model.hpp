#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bnkit/error.hpp"
#include "bnkit/potential.hpp"

namespace bnkit {

/// Index of a variable inside its network (declaration order).
using VarId = std::size_t;
/// One state index per network variable, indexed by VarId.
using FullAssignment = std::vector<std::size_t>;

struct DiscreteVariable {
  std::string name;
  std::vector<std::string> states;
  /// State order equals value order (needed by MAX/MIN/INV/MINUS).
  bool ordered = false;

  std::size_t cardinality() const { return states.size(); }
  std::optional<std::size_t> state_index(std::string_view state) const;
  bool operator==(const DiscreteVariable&) const = default;
};

/// Partial map from variables to state indices. Bounds are checked against a
/// network by the operations that consume it.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const VarId, std::size_t>> init) : bindings_(init) {}

  void bind(VarId var, std::size_t state) { bindings_[var] = state; }
  void unbind(VarId var) { bindings_.erase(var); }
  bool contains(VarId var) const { return bindings_.count(var) != 0; }
  std::optional<std::size_t> get(VarId var) const;
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::map<VarId, std::size_t>& bindings() const { return bindings_; }

  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  bool operator==(const Assignment&) const = default;

 private:
  std::map<VarId, std::size_t> bindings_;
};

struct Distribution {
  VarId variable = 0;
  std::vector<double> probabilities;

  /// Point mass on `state`.
  static Distribution point(VarId var, std::size_t cardinality, std::size_t state);
  /// Normalizes `weights`; throws impossible-evidence when they sum to zero.
  static Distribution normalized(VarId var, std::vector<double> weights);
  double operator[](std::size_t state) const { return probabilities[state]; }
  std::size_t argmax() const;
};

struct Finding {
  std::string code;
  std::string message;
  SourceLocation location;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool ok() const { return errors.empty(); }
  bool has_error(std::string_view code) const;
};

/// Input record for network construction: a variable, its parents by name
/// (order fixes the table layout) and its potential.
struct NodeSpec {
  DiscreteVariable variable;
  std::vector<std::string> parents;
  Potential potential;
};

/// Immutable discrete Bayesian network. Canonical potentials are expanded to
/// flat tables once, at construction; the original form is kept for output.
class BayesianNetwork {
 public:
  /// Builds a network from nodes in any order. Structural problems that can
  /// be reported (cycles, bad tables) end up in validation(); only unknown
  /// parent names and duplicate variables throw.
  static BayesianNetwork from_nodes(std::vector<NodeSpec> nodes);

  std::size_t size() const { return variables_.size(); }
  const std::vector<DiscreteVariable>& variables() const { return variables_; }
  const DiscreteVariable& variable(VarId v) const { return variables_.at(v); }
  std::size_t cardinality(VarId v) const { return variables_[v].states.size(); }
  const std::vector<VarId>& parents(VarId v) const { return parents_.at(v); }
  const std::vector<VarId>& children(VarId v) const { return children_.at(v); }
  const Potential& potential(VarId v) const { return potentials_.at(v); }

  /// Expanded conditional table of `v` (empty when expansion failed).
  const std::vector<double>& cpt(VarId v) const { return cpts_.at(v); }
  /// P(x_v | parents) read from a full state vector.
  double conditional(VarId v, std::span<const std::size_t> full_state) const;
  /// Flat table index of (child state, parent states taken from full_state).
  std::size_t cpt_index(VarId v, std::size_t child_state,
                        std::span<const std::size_t> full_state) const;

  std::optional<VarId> find(std::string_view name) const;
  /// Throws unknown-variable.
  VarId id(std::string_view name) const;

  const ValidationReport& validation() const { return validation_; }
  bool valid() const { return validation_.ok(); }
  /// Throws invalid-network with the first validation error.
  void require_valid() const;

  /// Product of all cardinalities (saturates at SIZE_MAX).
  std::size_t joint_size() const;

  bool operator==(const BayesianNetwork& other) const;

 private:
  std::vector<DiscreteVariable> variables_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<Potential> potentials_;
  std::vector<std::vector<double>> cpts_;
  ValidationReport validation_;
  std::map<std::string, VarId, std::less<>> index_;
};

/// Strict causal-order construction: every parent must be declared before
/// its child, so acyclicity holds by construction.
BayesianNetwork build_network(std::vector<NodeSpec> ordered_nodes);

ValidationReport validate_network(const BayesianNetwork& net);

/// Product of P(x_i | parents) over all variables.
double joint_probability(const BayesianNetwork& net, const Assignment& full);
double joint_probability(const BayesianNetwork& net, std::span<const std::size_t> full_state);

/// Parents before children; ties broken by declaration order. Throws cycle.
std::vector<VarId> topological_order(const BayesianNetwork& net);

std::set<VarId> markov_blanket(const BayesianNetwork& net, VarId x);

std::set<VarId> descendants(const BayesianNetwork& net, VarId x);

/// Bayes-ball reachability test. Throws overlapping-sets / unknown-variable.
bool d_separated(const BayesianNetwork& net, const std::set<VarId>& x, const std::set<VarId>& y,
                 const std::set<VarId>& z);

/// Throws unknown-variable / state-out-of-range.
void check_assignment(const BayesianNetwork& net, const Assignment& a);

/// Resolves name=state pairs against the network.
Assignment make_assignment(const BayesianNetwork& net,
                           const std::vector<std::pair<std::string, std::string>>& bindings);

/// Calls fn(states) for every configuration of the mixed-radix counter whose
/// first digit varies fastest.
template <typename Fn>
void for_each_configuration(std::span<const std::size_t> cards, Fn&& fn) {
  std::vector<std::size_t> states(cards.size(), 0);
  for (std::size_t c : cards) {
    if (c == 0) return;
  }
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(states));
    std::size_t i = 0;
    for (; i < states.size(); ++i) {
      if (++states[i] < cards[i]) break;
      states[i] = 0;
    }
    if (i == states.size()) return;
  }
}

}  // namespace bnkit
