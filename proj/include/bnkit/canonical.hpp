#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bnkit/model.hpp"
#include "bnkit/potential.hpp"

namespace bnkit {

// All expansions return a flat table in the usual layout: child state fastest,
// then parents in the order given.

std::vector<double> expand_deterministic(DeterministicFn fn,
                                         std::span<const DiscreteVariable> parents,
                                         const DiscreteVariable& child);

/// P(not y | x) = (1 - leak) * prod_{i active} (1 - c_i).
std::vector<double> expand_noisy_or(std::span<const double> c, std::optional<double> leak);

/// Cumulative-product form of noisy MAX over ordered child states.
std::vector<double> expand_noisy_max(std::span<const StateMatrix> c,
                                     const std::optional<std::vector<double>>& leak);

/// P(+y | x) = prod_{i active} c_i * prod_{j inactive} s_j.
std::vector<double> expand_noisy_and(std::span<const double> c, std::span<const double> s);

/// Checks the potential against the variables it is attached to and expands
/// it. Throws Error with the relevant code (non-binary, state-order, ...).
std::vector<double> expand_potential(const Potential& potential, const DiscreteVariable& child,
                                     std::span<const DiscreteVariable> parents);

/// True when the variable is binary with states ordered (false, true).
bool is_boolean(const DiscreteVariable& v);

/// Tree form of a conditional table: one level per parent (declared order)
/// and a last level for the child. Each root-to-leaf path is one table row.
class CptTree {
 public:
  struct Node {
    VarId variable = 0;                // level variable, unused for leaves
    std::vector<std::size_t> children;  // indexed by state
    double probability = 0.0;          // leaves only
    bool leaf = false;
  };

  const Node& root() const { return nodes_.front(); }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  /// Number of variable levels on every path.
  std::size_t depth() const { return levels_.size(); }
  const std::vector<VarId>& levels() const { return levels_; }

  /// Walks the unique path selected by `assignment`. Throws unbound-level.
  double lookup(const Assignment& assignment) const;

 private:
  friend CptTree build_cpt_tree(std::span<const double>, std::span<const VarId>,
                                std::span<const std::size_t>, VarId, std::size_t);
  std::vector<Node> nodes_;
  std::vector<VarId> levels_;
};

/// parents/parent_cards in declared order. Throws table-size-mismatch.
CptTree build_cpt_tree(std::span<const double> table, std::span<const VarId> parents,
                       std::span<const std::size_t> parent_cards, VarId child,
                       std::size_t child_card);

/// Tree for the expanded table of `v` in `net`.
CptTree build_cpt_tree(const BayesianNetwork& net, VarId v);

double cpt_tree_lookup(const CptTree& tree, const Assignment& assignment);

}  // namespace bnkit
