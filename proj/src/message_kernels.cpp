#include <numeric>

#include "internal.hpp"

namespace bnkit::detail {

std::vector<std::optional<std::size_t>> observed_states(const BayesianNetwork& net,
                                                        const Assignment& evidence) {
  check_assignment(net, evidence);
  std::vector<std::optional<std::size_t>> observed(net.size());
  for (const auto& [v, s] : evidence) observed[v] = s;
  return observed;
}

std::vector<double> factor_message(const FactorGraph& fg, std::size_t target,
                                   const std::vector<std::vector<double>>& v2f) {
  const auto& edge = fg.edge(target);
  const Factor& factor = fg.factor(edge.factor);
  const auto& edges = fg.factor_edges(edge.factor);
  const std::size_t k = factor.scope.size();
  const std::size_t t = edge.position;
  std::vector<double> out(factor.cards[t], 0.0);
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t i = 0; i < factor.values.size(); ++i) {
    double w = factor.values[i];
    if (w != 0.0) {
      for (std::size_t j = 0; j < k && w != 0.0; ++j) {
        if (j != t) w *= v2f[edges[j]][digits[j]];
      }
      out[digits[t]] += w;
    }
    for (std::size_t d = 0; d < k; ++d) {
      if (++digits[d] < factor.cards[d]) break;
      digits[d] = 0;
    }
  }
  return out;
}

std::vector<double> variable_message(const FactorGraph& fg, std::size_t target,
                                     const std::vector<std::vector<double>>& f2v,
                                     std::optional<std::size_t> observed) {
  const VarId v = fg.edge(target).variable;
  const std::size_t card = fg.cardinality(v);
  if (observed) {
    std::vector<double> out(card, 0.0);
    out[*observed] = 1.0;
    return out;
  }
  std::vector<double> out(card, 1.0);
  for (std::size_t e : fg.variable_edges(v)) {
    if (e == target) continue;
    for (std::size_t s = 0; s < card; ++s) out[s] *= f2v[e][s];
  }
  return out;
}

bool normalize_in_place(std::vector<double>& values) {
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(total > 0.0)) return false;
  for (double& x : values) x /= total;
  return true;
}

Distribution belief(const FactorGraph& fg, VarId v, const std::vector<std::vector<double>>& f2v,
                    std::optional<std::size_t> observed) {
  const std::size_t card = fg.cardinality(v);
  std::vector<double> b(card, 1.0);
  for (std::size_t e : fg.variable_edges(v)) {
    for (std::size_t s = 0; s < card; ++s) b[s] *= f2v[e][s];
  }
  if (observed) {
    for (std::size_t s = 0; s < card; ++s) {
      if (s != *observed) b[s] = 0.0;
    }
  }
  return Distribution::normalized(v, std::move(b));
}

}  // namespace bnkit::detail
