#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bnkit/model.hpp"

namespace bnkit {

/// Non-negative tensor over an ordered scope. The first scope variable
/// varies fastest in `values`.
struct Factor {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  static Factor ones(std::vector<VarId> scope, std::vector<std::size_t> cards);

  std::size_t size() const { return values.size(); }
  /// Index for a full network state vector.
  std::size_t index(std::span<const std::size_t> full_state) const;
  /// Entry at the multi-index given by the scope's bindings in `assignment`.
  double evaluate(const Assignment& assignment) const;
  double evaluate(std::span<const std::size_t> full_state) const {
    return values[index(full_state)];
  }
  double sum() const;
};

/// Conditional table of `v` as a factor over (v, parents...).
Factor cpt_factor(const BayesianNetwork& net, VarId v);

/// Sums out everything not in `keep`; the result's scope follows `keep`.
Factor marginalize(const Factor& f, std::span<const VarId> keep);

/// target *= src, where src.scope is a subset of target.scope.
void multiply_into(Factor& target, const Factor& src);

/// target *= numerator / denominator (both over a subset of target.scope,
/// same scope); 0/0 is taken as 0.
void multiply_ratio_into(Factor& target, const Factor& numerator, const Factor& denominator);

/// Zeroes the entries where `var` is not in `state`.
void reduce(Factor& f, VarId var, std::size_t state);

double evaluate_factor(const Factor& f, const Assignment& assignment);

enum class RootStyle {
  Separate,  // each root prior is its own unary factor
  Merged,    // root priors folded into the first adjacent child factor
};

/// Bipartite graph: variable nodes are the network variables (same VarId),
/// factor nodes hold tables. An edge links a factor to one scope position.
class FactorGraph {
 public:
  struct Edge {
    std::size_t factor;
    VarId variable;
    std::size_t position;  // index of `variable` in the factor scope
  };

  FactorGraph(std::vector<DiscreteVariable> variables, std::vector<Factor> factors);

  std::size_t variable_count() const { return variables_.size(); }
  std::size_t factor_count() const { return factors_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<DiscreteVariable>& variables() const { return variables_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const Factor& factor(std::size_t f) const { return factors_.at(f); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t cardinality(VarId v) const { return variables_[v].states.size(); }
  /// Edge ids of a factor, in scope order.
  const std::vector<std::size_t>& factor_edges(std::size_t f) const { return factor_edges_.at(f); }
  /// Edge ids of a variable, in construction order.
  const std::vector<std::size_t>& variable_edges(VarId v) const { return variable_edges_.at(v); }

  /// True when the graph has no cycles (a forest).
  bool is_tree() const;

  /// Product of all factors at a full network state.
  double product(std::span<const std::size_t> full_state) const;

 private:
  std::vector<DiscreteVariable> variables_;
  std::vector<Factor> factors_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> factor_edges_;
  std::vector<std::vector<std::size_t>> variable_edges_;
};

FactorGraph to_factor_graph(const BayesianNetwork& net, RootStyle style = RootStyle::Separate);

}  // namespace bnkit
