#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "bnkit/factor_graph.hpp"
#include "bnkit/model.hpp"
#include "bnkit/query.hpp"

namespace bnkit {

/// Networks with more joint configurations than this are refused by
/// enumeration (error too-large).
inline constexpr std::size_t kEnumerationLimit = std::size_t{1} << 22;

struct EnumerationAnswer {
  Distribution posterior;
  double evidence_probability = 0.0;
};

/// Depth-first enumeration over the variables in topological order.
EnumerationAnswer enumeration_ask(const BayesianNetwork& net, VarId query,
                                  const Assignment& evidence);

/// P(e) by the same recursion, without a query variable.
double enumeration_evidence_probability(const BayesianNetwork& net, const Assignment& evidence);

/// enumeration_ask for every unobserved variable; observed ones get a point mass.
QueryResult enumeration_query(const BayesianNetwork& net, const Assignment& evidence);

/// Two-phase sum-product on the (acyclic) factor graph of the network.
/// Throws not-polytree on loopy graphs.
QueryResult sum_product_polytree(const BayesianNetwork& net, const Assignment& evidence);

struct JunctionTree {
  struct Clique {
    std::vector<VarId> variables;  // ascending VarId
    std::vector<VarId> assigned;   // CPTs multiplied into this clique
  };
  struct Separator {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<VarId> variables;  // ascending VarId
  };

  std::vector<Clique> cliques;
  std::vector<Separator> separators;
  /// Adjacent (clique, separator index) pairs per clique.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency;
  std::vector<DiscreteVariable> variables;

  /// Connected and acyclic over the cliques.
  bool is_tree() const;
  bool has_running_intersection() const;
  /// Index of the first clique containing every variable in `vars`.
  std::optional<std::size_t> containing_clique(const std::set<VarId>& vars) const;
};

/// Moralize, triangulate by min-fill (ties: declaration order), keep maximal
/// cliques, join them with a maximum-weight spanning tree.
JunctionTree build_junction_tree(const BayesianNetwork& net);

/// Calibrated clique and separator tensors after collect/distribute.
struct CalibratedTree {
  std::vector<Factor> cliques;
  std::vector<Factor> separators;
  double evidence_probability = 0.0;
};

CalibratedTree calibrate(const BayesianNetwork& net, const JunctionTree& jt,
                         const Assignment& evidence);

QueryResult junction_tree_propagate(const BayesianNetwork& net, const JunctionTree& jt,
                                    const Assignment& evidence);
QueryResult junction_tree_query(const BayesianNetwork& net, const Assignment& evidence);

}  // namespace bnkit
