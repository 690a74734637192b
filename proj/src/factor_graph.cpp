#include "bnkit/factor_graph.hpp"

#include <algorithm>
#include <numeric>

namespace bnkit {

Factor Factor::ones(std::vector<VarId> scope, std::vector<std::size_t> cards) {
  std::size_t size = 1;
  for (std::size_t c : cards) size *= c;
  return Factor{std::move(scope), std::move(cards), std::vector<double>(size, 1.0)};
}

std::size_t Factor::index(std::span<const std::size_t> full_state) const {
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    index += stride * full_state[scope[i]];
    stride *= cards[i];
  }
  return index;
}

double Factor::evaluate(const Assignment& assignment) const {
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    auto s = assignment.get(scope[i]);
    if (!s) {
      throw Error(errc::kIncompleteAssignment,
                  "factor scope variable #" + std::to_string(scope[i]) + " is unbound");
    }
    if (*s >= cards[i]) throw Error(errc::kStateOutOfRange, "state out of range for factor");
    index += stride * *s;
    stride *= cards[i];
  }
  return values[index];
}

double Factor::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double evaluate_factor(const Factor& f, const Assignment& assignment) {
  return f.evaluate(assignment);
}

Factor cpt_factor(const BayesianNetwork& net, VarId v) {
  Factor f;
  f.scope.push_back(v);
  f.cards.push_back(net.cardinality(v));
  for (VarId p : net.parents(v)) {
    f.scope.push_back(p);
    f.cards.push_back(net.cardinality(p));
  }
  f.values = net.cpt(v);
  return f;
}

namespace {

// Strides of `sub` positions expressed in the iteration order of `full`.
std::vector<std::size_t> projected_strides(const Factor& full, std::span<const VarId> sub_scope,
                                           std::span<const std::size_t> sub_cards) {
  std::vector<std::size_t> strides(full.scope.size(), 0);
  std::size_t stride = 1;
  for (std::size_t j = 0; j < sub_scope.size(); ++j) {
    auto it = std::find(full.scope.begin(), full.scope.end(), sub_scope[j]);
    if (it == full.scope.end()) {
      throw Error(errc::kShapeMismatch, "factor scope is not a subset");
    }
    strides[static_cast<std::size_t>(it - full.scope.begin())] = stride;
    stride *= sub_cards[j];
  }
  return strides;
}

// Visits every entry of `full` with the matching index into a sub-scope.
template <typename Fn>
void walk(const Factor& full, const std::vector<std::size_t>& strides, Fn&& fn) {
  const std::size_t k = full.scope.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t sub = 0;
  for (std::size_t i = 0; i < full.values.size(); ++i) {
    fn(i, sub);
    for (std::size_t d = 0; d < k; ++d) {
      if (++digits[d] < full.cards[d]) {
        sub += strides[d];
        break;
      }
      sub -= strides[d] * (full.cards[d] - 1);
      digits[d] = 0;
    }
  }
}

}  // namespace

Factor marginalize(const Factor& f, std::span<const VarId> keep) {
  std::vector<std::size_t> cards;
  for (VarId v : keep) {
    auto it = std::find(f.scope.begin(), f.scope.end(), v);
    if (it == f.scope.end()) throw Error(errc::kShapeMismatch, "cannot keep a variable outside the scope");
    cards.push_back(f.cards[static_cast<std::size_t>(it - f.scope.begin())]);
  }
  Factor out{std::vector<VarId>(keep.begin(), keep.end()), cards, {}};
  std::size_t size = 1;
  for (std::size_t c : cards) size *= c;
  out.values.assign(size, 0.0);
  auto strides = projected_strides(f, out.scope, out.cards);
  walk(f, strides, [&](std::size_t i, std::size_t j) { out.values[j] += f.values[i]; });
  return out;
}

void multiply_into(Factor& target, const Factor& src) {
  auto strides = projected_strides(target, src.scope, src.cards);
  walk(target, strides, [&](std::size_t i, std::size_t j) { target.values[i] *= src.values[j]; });
}

void multiply_ratio_into(Factor& target, const Factor& numerator, const Factor& denominator) {
  auto strides = projected_strides(target, numerator.scope, numerator.cards);
  walk(target, strides, [&](std::size_t i, std::size_t j) {
    const double d = denominator.values[j];
    target.values[i] = d == 0.0 ? 0.0 : target.values[i] * numerator.values[j] / d;
  });
}

void reduce(Factor& f, VarId var, std::size_t state) {
  auto it = std::find(f.scope.begin(), f.scope.end(), var);
  if (it == f.scope.end()) return;
  const std::size_t pos = static_cast<std::size_t>(it - f.scope.begin());
  std::size_t stride = 1;
  for (std::size_t i = 0; i < pos; ++i) stride *= f.cards[i];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if ((i / stride) % f.cards[pos] != state) f.values[i] = 0.0;
  }
}

FactorGraph::FactorGraph(std::vector<DiscreteVariable> variables, std::vector<Factor> factors)
    : variables_(std::move(variables)), factors_(std::move(factors)) {
  factor_edges_.resize(factors_.size());
  variable_edges_.resize(variables_.size());
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    for (std::size_t pos = 0; pos < factors_[f].scope.size(); ++pos) {
      const VarId v = factors_[f].scope[pos];
      const std::size_t e = edges_.size();
      edges_.push_back(Edge{f, v, pos});
      factor_edges_[f].push_back(e);
      variable_edges_.at(v).push_back(e);
    }
  }
}

bool FactorGraph::is_tree() const {
  // Union-find over variable nodes [0, n) and factor nodes [n, n + m).
  const std::size_t n = variables_.size();
  std::vector<std::size_t> parent(n + factors_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_) {
    std::size_t a = find(e.variable);
    std::size_t b = find(n + e.factor);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

double FactorGraph::product(std::span<const std::size_t> full_state) const {
  double p = 1.0;
  for (const auto& f : factors_) p *= f.evaluate(full_state);
  return p;
}

FactorGraph to_factor_graph(const BayesianNetwork& net, RootStyle style) {
  net.require_valid();
  std::vector<Factor> factors;
  factors.reserve(net.size());
  for (VarId v = 0; v < net.size(); ++v) factors.push_back(cpt_factor(net, v));
  if (style == RootStyle::Merged) {
    // Fold each root prior into its first child's factor; childless roots keep
    // their unary factor.
    std::vector<char> absorbed(net.size(), 0);
    for (VarId v = 0; v < net.size(); ++v) {
      if (!net.parents(v).empty() || net.children(v).empty()) continue;
      const VarId child = net.children(v).front();
      multiply_into(factors[child], factors[v]);
      absorbed[v] = 1;
    }
    std::vector<Factor> kept;
    for (VarId v = 0; v < net.size(); ++v) {
      if (!absorbed[v]) kept.push_back(std::move(factors[v]));
    }
    factors = std::move(kept);
  }
  return FactorGraph(net.variables(), std::move(factors));
}

}  // namespace bnkit
