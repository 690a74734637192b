#include "bnkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

#include "bnkit/canonical.hpp"

namespace bnkit {

namespace {

constexpr double kRowTolerance = 1e-9;
constexpr double kRangeSlack = 1e-12;

SourceLocation at(const DiscreteVariable& v) { return SourceLocation{v.name, 0, 0}; }

}  // namespace

std::optional<std::size_t> DiscreteVariable::state_index(std::string_view state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Assignment::get(VarId var) const {
  auto it = bindings_.find(var);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

Distribution Distribution::point(VarId var, std::size_t cardinality, std::size_t state) {
  Distribution d{var, std::vector<double>(cardinality, 0.0)};
  d.probabilities.at(state) = 1.0;
  return d;
}

Distribution Distribution::normalized(VarId var, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(errc::kImpossibleEvidence, "evidence has zero probability");
  }
  for (double& w : weights) w /= total;
  return Distribution{var, std::move(weights)};
}

std::size_t Distribution::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
}

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const Finding& f) { return f.code == code; });
}

BayesianNetwork BayesianNetwork::from_nodes(std::vector<NodeSpec> nodes) {
  BayesianNetwork net;
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& name = nodes[i].variable.name;
    if (!net.index_.emplace(name, i).second) {
      throw Error(errc::kDuplicateVariable, "duplicate variable '" + name + "'",
                  at(nodes[i].variable));
    }
  }
  net.parents_.resize(n);
  net.children_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : nodes[i].parents) {
      auto it = net.index_.find(p);
      if (it == net.index_.end()) {
        throw Error(errc::kUnknownParent,
                    "variable '" + nodes[i].variable.name + "' lists unknown parent '" + p + "'",
                    at(nodes[i].variable));
      }
      net.parents_[i].push_back(it->second);
      net.children_[it->second].push_back(i);
    }
  }
  for (auto& node : nodes) {
    net.variables_.push_back(std::move(node.variable));
    net.potentials_.push_back(std::move(node.potential));
  }

  auto& report = net.validation_;
  auto error = [&](const char* code, std::string msg, VarId v) {
    report.errors.push_back(Finding{code, std::move(msg), at(net.variables_[v])});
  };

  for (VarId v = 0; v < n; ++v) {
    const auto& var = net.variables_[v];
    if (var.states.empty()) {
      error(errc::kInvalidValue, "variable '" + var.name + "' has no states", v);
    }
    std::set<std::string> seen;
    for (const auto& s : var.states) {
      if (!seen.insert(s).second) {
        error(errc::kDuplicateState, "variable '" + var.name + "' repeats state '" + s + "'", v);
      }
    }
    std::set<VarId> unique_parents(net.parents_[v].begin(), net.parents_[v].end());
    if (unique_parents.size() != net.parents_[v].size() || unique_parents.count(v)) {
      error(errc::kCycle, "variable '" + var.name + "' lists a parent twice or itself", v);
    }
  }

  // Cycle detection over the declared parent relation.
  {
    std::vector<std::size_t> indegree(n);
    for (VarId v = 0; v < n; ++v) indegree[v] = net.parents_[v].size();
    std::deque<VarId> ready;
    for (VarId v = 0; v < n; ++v) {
      if (indegree[v] == 0) ready.push_back(v);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
      VarId v = ready.front();
      ready.pop_front();
      ++visited;
      for (VarId c : net.children_[v]) {
        if (--indegree[c] == 0) ready.push_back(c);
      }
    }
    if (visited != n) {
      std::string members;
      for (VarId v = 0; v < n; ++v) {
        if (indegree[v] != 0) {
          if (!members.empty()) members += ", ";
          members += net.variables_[v].name;
        }
      }
      VarId first = 0;
      while (indegree[first] == 0) ++first;
      error(errc::kCycle, "directed cycle through {" + members + "}", first);
    }
  }

  net.cpts_.resize(n);
  for (VarId v = 0; v < n; ++v) {
    const auto& var = net.variables_[v];
    std::vector<DiscreteVariable> parent_vars;
    for (VarId p : net.parents_[v]) parent_vars.push_back(net.variables_[p]);
    if (var.states.empty()) continue;
    std::vector<double> table;
    try {
      table = expand_potential(net.potentials_[v], var, parent_vars);
    } catch (const Error& e) {
      error(e.code().c_str(), e.what(), v);
      continue;
    }
    const std::size_t card = var.states.size();
    std::size_t expected = card;
    for (const auto& p : parent_vars) expected *= p.states.size();
    if (table.size() != expected) {
      error(errc::kTableSizeMismatch,
            "table for '" + var.name + "' has " + std::to_string(table.size()) +
                " values, expected " + std::to_string(expected),
            v);
      continue;
    }
    bool range_ok = true;
    for (double x : table) {
      if (!std::isfinite(x) || x < -kRangeSlack) {
        error(errc::kNegativeProbability, "table for '" + var.name + "' has a negative entry", v);
        range_ok = false;
        break;
      }
      if (x > 1.0 + kRangeSlack) {
        error(errc::kProbabilityAboveOne, "table for '" + var.name + "' has an entry above 1", v);
        range_ok = false;
        break;
      }
    }
    if (!range_ok) continue;
    for (std::size_t row = 0; row < table.size() / card; ++row) {
      double sum = 0.0;
      for (std::size_t s = 0; s < card; ++s) sum += table[row * card + s];
      if (std::abs(sum - 1.0) > kRowTolerance) {
        error(errc::kRowNotNormalized,
              "row " + std::to_string(row) + " of '" + var.name + "' sums to " +
                  std::to_string(sum),
              v);
        break;
      }
    }
    for (double& x : table) x = std::clamp(x, 0.0, 1.0);
    net.cpts_[v] = std::move(table);
  }

  if (n > 1) {
    for (VarId v = 0; v < n; ++v) {
      if (net.parents_[v].empty() && net.children_[v].empty()) {
        report.warnings.push_back(Finding{errc::kDisconnected,
                                          "variable '" + net.variables_[v].name +
                                              "' has no links",
                                          at(net.variables_[v])});
      }
    }
  }
  return net;
}

std::size_t BayesianNetwork::cpt_index(VarId v, std::size_t child_state,
                                       std::span<const std::size_t> full_state) const {
  std::size_t index = child_state;
  std::size_t stride = variables_[v].states.size();
  for (VarId p : parents_[v]) {
    index += stride * full_state[p];
    stride *= variables_[p].states.size();
  }
  return index;
}

double BayesianNetwork::conditional(VarId v, std::span<const std::size_t> full_state) const {
  return cpts_[v][cpt_index(v, full_state[v], full_state)];
}

std::optional<VarId> BayesianNetwork::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId BayesianNetwork::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw Error(errc::kUnknownVariable, "unknown variable '" + std::string(name) + "'");
  return *v;
}

void BayesianNetwork::require_valid() const {
  if (!validation_.ok()) {
    const auto& f = validation_.errors.front();
    throw Error(errc::kInvalidNetwork, "invalid network: " + f.code + ": " + f.message,
                f.location);
  }
}

std::size_t BayesianNetwork::joint_size() const {
  std::size_t total = 1;
  for (const auto& v : variables_) {
    std::size_t c = v.states.size();
    if (c != 0 && total > std::numeric_limits<std::size_t>::max() / c) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= c;
  }
  return total;
}

bool BayesianNetwork::operator==(const BayesianNetwork& other) const {
  return variables_ == other.variables_ && parents_ == other.parents_ &&
         potentials_ == other.potentials_;
}

BayesianNetwork build_network(std::vector<NodeSpec> ordered_nodes) {
  std::map<std::string, std::size_t, std::less<>> position;
  for (std::size_t i = 0; i < ordered_nodes.size(); ++i) {
    const auto& var = ordered_nodes[i].variable;
    if (!position.emplace(var.name, i).second) {
      throw Error(errc::kDuplicateVariable, "duplicate variable '" + var.name + "'", at(var));
    }
  }
  for (std::size_t i = 0; i < ordered_nodes.size(); ++i) {
    const auto& node = ordered_nodes[i];
    for (const auto& p : node.parents) {
      auto it = position.find(p);
      if (it == position.end()) {
        throw Error(errc::kUnknownParent,
                    "variable '" + node.variable.name + "' lists unknown parent '" + p + "'",
                    at(node.variable));
      }
      if (it->second >= i) {
        throw Error(errc::kParentAfterChild,
                    "parent '" + p + "' is declared after its child '" + node.variable.name + "'",
                    at(node.variable));
      }
    }
  }
  return BayesianNetwork::from_nodes(std::move(ordered_nodes));
}

ValidationReport validate_network(const BayesianNetwork& net) { return net.validation(); }

void check_assignment(const BayesianNetwork& net, const Assignment& a) {
  for (const auto& [var, state] : a) {
    if (var >= net.size()) {
      throw Error(errc::kUnknownVariable, "assignment binds unknown variable #" +
                                              std::to_string(var));
    }
    if (state >= net.cardinality(var)) {
      throw Error(errc::kStateOutOfRange,
                  "state " + std::to_string(state) + " out of range for '" +
                      net.variable(var).name + "'",
                  at(net.variable(var)));
    }
  }
}

Assignment make_assignment(const BayesianNetwork& net,
                           const std::vector<std::pair<std::string, std::string>>& bindings) {
  Assignment a;
  for (const auto& [name, state] : bindings) {
    VarId v = net.id(name);
    auto s = net.variable(v).state_index(state);
    if (!s) {
      throw Error(errc::kUnknownState,
                  "variable '" + name + "' has no state '" + state + "'", at(net.variable(v)));
    }
    a.bind(v, *s);
  }
  return a;
}

double joint_probability(const BayesianNetwork& net, std::span<const std::size_t> full_state) {
  double p = 1.0;
  for (VarId v = 0; v < net.size(); ++v) p *= net.conditional(v, full_state);
  return p;
}

double joint_probability(const BayesianNetwork& net, const Assignment& full) {
  check_assignment(net, full);
  net.require_valid();
  if (full.size() != net.size()) {
    throw Error(errc::kIncompleteAssignment, "assignment does not bind every variable");
  }
  FullAssignment state(net.size());
  for (const auto& [v, s] : full) state[v] = s;
  return joint_probability(net, state);
}

std::vector<VarId> topological_order(const BayesianNetwork& net) {
  const std::size_t n = net.size();
  std::vector<std::size_t> indegree(n);
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (VarId v = 0; v < n; ++v) {
    indegree[v] = net.parents(v).size();
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<VarId> order;
  order.reserve(n);
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VarId c : net.children(v)) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != n) throw Error(errc::kCycle, "network contains a directed cycle");
  return order;
}

std::set<VarId> markov_blanket(const BayesianNetwork& net, VarId x) {
  if (x >= net.size()) throw Error(errc::kUnknownVariable, "unknown variable");
  std::set<VarId> blanket(net.parents(x).begin(), net.parents(x).end());
  for (VarId c : net.children(x)) {
    blanket.insert(c);
    for (VarId p : net.parents(c)) blanket.insert(p);
  }
  blanket.erase(x);
  return blanket;
}

std::set<VarId> descendants(const BayesianNetwork& net, VarId x) {
  std::set<VarId> out;
  std::vector<VarId> stack(net.children(x).begin(), net.children(x).end());
  while (!stack.empty()) {
    VarId v = stack.back();
    stack.pop_back();
    if (!out.insert(v).second) continue;
    for (VarId c : net.children(v)) stack.push_back(c);
  }
  return out;
}

bool d_separated(const BayesianNetwork& net, const std::set<VarId>& x, const std::set<VarId>& y,
                 const std::set<VarId>& z) {
  for (const auto* s : {&x, &y, &z}) {
    for (VarId v : *s) {
      if (v >= net.size()) throw Error(errc::kUnknownVariable, "unknown variable");
    }
  }
  for (VarId v : x) {
    if (y.count(v) || z.count(v)) throw Error(errc::kOverlappingSets, "X, Y and Z must be disjoint");
  }
  for (VarId v : y) {
    if (z.count(v)) throw Error(errc::kOverlappingSets, "X, Y and Z must be disjoint");
  }
  if (x.empty() || y.empty()) return true;

  // Z together with its ancestors: colliders in this set are active.
  std::vector<char> evidence_or_ancestor(net.size(), 0);
  {
    std::vector<VarId> stack(z.begin(), z.end());
    while (!stack.empty()) {
      VarId v = stack.back();
      stack.pop_back();
      if (evidence_or_ancestor[v]) continue;
      evidence_or_ancestor[v] = 1;
      for (VarId p : net.parents(v)) stack.push_back(p);
    }
  }

  // Traversal states: (node, arrived from child = going up) or (node, from parent).
  enum Direction : std::size_t { kUp = 0, kDown = 1 };
  std::vector<char> visited(net.size() * 2, 0);
  std::deque<std::pair<VarId, Direction>> queue;
  for (VarId v : x) queue.emplace_back(v, kUp);
  while (!queue.empty()) {
    auto [v, dir] = queue.front();
    queue.pop_front();
    if (visited[v * 2 + dir]) continue;
    visited[v * 2 + dir] = 1;
    const bool observed = z.count(v) != 0;
    if (!observed && y.count(v)) return false;
    if (dir == kUp) {
      if (observed) continue;
      for (VarId p : net.parents(v)) queue.emplace_back(p, kUp);
      for (VarId c : net.children(v)) queue.emplace_back(c, kDown);
    } else {
      if (!observed) {
        for (VarId c : net.children(v)) queue.emplace_back(c, kDown);
      }
      if (evidence_or_ancestor[v]) {
        for (VarId p : net.parents(v)) queue.emplace_back(p, kUp);
      }
    }
  }
  return true;
}

}  // namespace bnkit
