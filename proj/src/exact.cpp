#include "bnkit/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "internal.hpp"

namespace bnkit {

const Distribution& QueryResult::posterior(VarId v) const {
  auto it = posteriors.find(v);
  if (it == posteriors.end()) {
    throw Error(errc::kUnknownVariable, "no posterior for variable #" + std::to_string(v));
  }
  return it->second;
}

bool operator==(const Distribution& a, const Distribution& b) {
  return a.variable == b.variable && a.probabilities == b.probabilities;
}

double max_posterior_difference(const QueryResult& a, const QueryResult& b) {
  double worst = 0.0;
  for (const auto& [v, d] : a.posteriors) {
    auto it = b.posteriors.find(v);
    if (it == b.posteriors.end()) continue;
    for (std::size_t s = 0; s < d.probabilities.size(); ++s) {
      worst = std::max(worst, std::abs(d.probabilities[s] - it->second.probabilities.at(s)));
    }
  }
  return worst;
}

namespace {

void require_enumerable(const BayesianNetwork& net) {
  net.require_valid();
  if (net.joint_size() > kEnumerationLimit) {
    throw Error(errc::kTooLarge, "network has " + std::to_string(net.joint_size()) +
                                     " joint configurations; enumeration is limited to 2^22");
  }
}

// ENUMERATION-ALL: `bound[v]` marks variables fixed by evidence or by the
// recursion so far; `state` holds their values.
double enumerate_all(const BayesianNetwork& net, const std::vector<VarId>& vars, std::size_t i,
                     FullAssignment& state, std::vector<char>& bound) {
  if (i == vars.size()) return 1.0;
  const VarId y = vars[i];
  if (bound[y]) {
    const double p = net.conditional(y, state);
    return p == 0.0 ? 0.0 : p * enumerate_all(net, vars, i + 1, state, bound);
  }
  double total = 0.0;
  bound[y] = 1;
  for (std::size_t s = 0; s < net.cardinality(y); ++s) {
    state[y] = s;
    const double p = net.conditional(y, state);
    if (p != 0.0) total += p * enumerate_all(net, vars, i + 1, state, bound);
  }
  bound[y] = 0;
  state[y] = 0;
  return total;
}

}  // namespace

EnumerationAnswer enumeration_ask(const BayesianNetwork& net, VarId query,
                                  const Assignment& evidence) {
  require_enumerable(net);
  check_assignment(net, evidence);
  if (query >= net.size()) throw Error(errc::kUnknownVariable, "unknown query variable");
  if (evidence.contains(query)) {
    throw Error(errc::kQueryObserved,
                "query variable '" + net.variable(query).name + "' is observed");
  }
  const auto vars = topological_order(net);
  FullAssignment state(net.size(), 0);
  std::vector<char> bound(net.size(), 0);
  for (const auto& [v, s] : evidence) {
    state[v] = s;
    bound[v] = 1;
  }
  std::vector<double> unnormalized(net.cardinality(query));
  bound[query] = 1;
  for (std::size_t x = 0; x < unnormalized.size(); ++x) {
    state[query] = x;
    unnormalized[x] = enumerate_all(net, vars, 0, state, bound);
  }
  const double pe = std::accumulate(unnormalized.begin(), unnormalized.end(), 0.0);
  if (!(pe > 0.0)) throw Error(errc::kImpossibleEvidence, "evidence has zero probability");
  return EnumerationAnswer{Distribution::normalized(query, std::move(unnormalized)), pe};
}

double enumeration_evidence_probability(const BayesianNetwork& net, const Assignment& evidence) {
  require_enumerable(net);
  check_assignment(net, evidence);
  const auto vars = topological_order(net);
  FullAssignment state(net.size(), 0);
  std::vector<char> bound(net.size(), 0);
  for (const auto& [v, s] : evidence) {
    state[v] = s;
    bound[v] = 1;
  }
  return enumerate_all(net, vars, 0, state, bound);
}

QueryResult enumeration_query(const BayesianNetwork& net, const Assignment& evidence) {
  detail::Stopwatch clock;
  QueryResult result;
  result.diagnostics.engine = "enum";
  const double pe = enumeration_evidence_probability(net, evidence);
  if (!(pe > 0.0)) throw Error(errc::kImpossibleEvidence, "evidence has zero probability");
  result.evidence_probability = pe;
  for (VarId v = 0; v < net.size(); ++v) {
    if (auto s = evidence.get(v)) {
      result.posteriors.emplace(v, Distribution::point(v, net.cardinality(v), *s));
    } else {
      result.posteriors.emplace(v, enumeration_ask(net, v, evidence).posterior);
      ++result.diagnostics.iterations;
    }
  }
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

QueryResult sum_product_polytree(const BayesianNetwork& net, const Assignment& evidence) {
  detail::Stopwatch clock;
  const auto observed = detail::observed_states(net, evidence);
  const FactorGraph fg = to_factor_graph(net, RootStyle::Separate);
  if (!fg.is_tree()) {
    throw Error(errc::kNotPolytree, "factor graph has cycles; sum-product needs a polytree");
  }
  const std::size_t n = fg.variable_count();
  const std::size_t m = fg.factor_count();
  std::vector<std::vector<double>> f2v(fg.edge_count()), v2f(fg.edge_count());

  // Node ids: variables [0, n), factors [n, n + m). Depth-first order from
  // the lowest-index variable of each component, remembering the edge to
  // the parent node.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent_edge(n + m, kNone);
  std::vector<char> seen(n + m, 0);
  std::vector<std::size_t> order;
  auto neighbours = [&](std::size_t node) -> const std::vector<std::size_t>& {
    return node < n ? fg.variable_edges(node) : fg.factor_edges(node - n);
  };
  auto other_end = [&](std::size_t node, std::size_t e) {
    const auto& edge = fg.edge(e);
    return node < n ? n + edge.factor : edge.variable;
  };
  for (std::size_t root = 0; root < n + m; ++root) {
    if (seen[root]) continue;
    std::vector<std::size_t> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      order.push_back(u);
      const auto& adj = neighbours(u);
      for (auto it = adj.rbegin(); it != adj.rend(); ++it) {
        const std::size_t w = other_end(u, *it);
        if (seen[w]) continue;
        seen[w] = 1;
        parent_edge[w] = *it;
        stack.push_back(w);
      }
    }
  }

  std::size_t sent = 0;
  auto send = [&](std::size_t from, std::size_t e) {
    if (from < n) {
      v2f[e] = detail::variable_message(fg, e, f2v, observed[from]);
      if (!detail::normalize_in_place(v2f[e])) {
        throw Error(errc::kImpossibleEvidence, "evidence has zero probability");
      }
    } else {
      f2v[e] = detail::factor_message(fg, e, v2f);
      if (!detail::normalize_in_place(f2v[e])) {
        throw Error(errc::kImpossibleEvidence, "evidence has zero probability");
      }
    }
    ++sent;
  };
  // Leaves to root.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent_edge[*it] != kNone) send(*it, parent_edge[*it]);
  }
  // Root to leaves.
  for (std::size_t u : order) {
    for (std::size_t e : neighbours(u)) {
      if (e != parent_edge[u]) send(u, e);
    }
  }

  QueryResult result;
  result.diagnostics.engine = "sumprod";
  result.diagnostics.messages = sent;
  result.diagnostics.iterations = 1;
  for (VarId v = 0; v < n; ++v) {
    result.posteriors.emplace(v, detail::belief(fg, v, f2v, observed[v]));
  }
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

bool JunctionTree::is_tree() const {
  if (cliques.empty()) return true;
  if (separators.size() + 1 != cliques.size()) return false;
  std::vector<char> seen(cliques.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    ++count;
    for (auto [next, sep] : adjacency[c]) {
      if (!seen[next]) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return count == cliques.size();
}

bool JunctionTree::has_running_intersection() const {
  for (VarId v = 0; v < variables.size(); ++v) {
    std::vector<std::size_t> holders;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      const auto& vars = cliques[c].variables;
      if (std::binary_search(vars.begin(), vars.end(), v)) holders.push_back(c);
    }
    if (holders.empty()) return false;
    std::vector<char> seen(cliques.size(), 0);
    std::vector<std::size_t> stack{holders.front()};
    seen[holders.front()] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      ++reached;
      for (auto [next, sep] : adjacency[c]) {
        const auto& vars = cliques[next].variables;
        if (!seen[next] && std::binary_search(vars.begin(), vars.end(), v)) {
          seen[next] = 1;
          stack.push_back(next);
        }
      }
    }
    if (reached != holders.size()) return false;
  }
  return true;
}

std::optional<std::size_t> JunctionTree::containing_clique(const std::set<VarId>& vars) const {
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    const auto& cv = cliques[c].variables;
    if (std::includes(cv.begin(), cv.end(), vars.begin(), vars.end())) return c;
  }
  return std::nullopt;
}

JunctionTree build_junction_tree(const BayesianNetwork& net) {
  net.require_valid();
  const std::size_t n = net.size();
  JunctionTree jt;
  jt.variables = net.variables();
  jt.adjacency.clear();

  // Moral graph.
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  auto link = [&](VarId a, VarId b) {
    if (a != b) adj[a][b] = adj[b][a] = 1;
  };
  for (VarId v = 0; v < n; ++v) {
    const auto& ps = net.parents(v);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      link(v, ps[i]);
      for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
    }
  }

  // Min-fill elimination.
  std::vector<char> alive(n, 1);
  std::vector<std::vector<VarId>> candidates;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_fill = 0;
    for (VarId v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      std::vector<VarId> nb;
      for (VarId u = 0; u < n; ++u) {
        if (alive[u] && adj[v][u]) nb.push_back(u);
      }
      std::size_t fill = 0;
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          if (!adj[nb[i]][nb[j]]) ++fill;
        }
      }
      if (best == n || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    std::vector<VarId> clique{best};
    for (VarId u = 0; u < n; ++u) {
      if (alive[u] && adj[best][u]) clique.push_back(u);
    }
    for (std::size_t i = 1; i < clique.size(); ++i) {
      for (std::size_t j = i + 1; j < clique.size(); ++j) link(clique[i], clique[j]);
    }
    std::sort(clique.begin(), clique.end());
    candidates.push_back(std::move(clique));
    alive[best] = 0;
  }

  // Keep maximal cliques (first occurrence of duplicates).
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& a = candidates[i];
      const auto& b = candidates[j];
      if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) continue;
      dominated = b.size() > a.size() || j < i;
    }
    if (!dominated) jt.cliques.push_back(JunctionTree::Clique{candidates[i], {}});
  }

  // Maximum-weight spanning tree (Kruskal); zero-weight links join the
  // components of a disconnected network.
  const std::size_t k = jt.cliques.size();
  struct Candidate {
    std::size_t weight, a, b;
    std::vector<VarId> shared;
  };
  std::vector<Candidate> links;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      std::vector<VarId> shared;
      const auto& x = jt.cliques[a].variables;
      const auto& y = jt.cliques[b].variables;
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(shared));
      links.push_back(Candidate{shared.size(), a, b, std::move(shared)});
    }
  }
  std::stable_sort(links.begin(), links.end(),
                   [](const Candidate& l, const Candidate& r) { return l.weight > r.weight; });
  std::vector<std::size_t> root(k);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  jt.adjacency.assign(k, {});
  for (auto& l : links) {
    const std::size_t ra = find(l.a), rb = find(l.b);
    if (ra == rb) continue;
    root[ra] = rb;
    const std::size_t s = jt.separators.size();
    jt.separators.push_back(JunctionTree::Separator{l.a, l.b, std::move(l.shared)});
    jt.adjacency[l.a].emplace_back(l.b, s);
    jt.adjacency[l.b].emplace_back(l.a, s);
  }

  for (VarId v = 0; v < n; ++v) {
    std::set<VarId> family(net.parents(v).begin(), net.parents(v).end());
    family.insert(v);
    auto c = jt.containing_clique(family);
    jt.cliques.at(c.value()).assigned.push_back(v);
  }
  return jt;
}

CalibratedTree calibrate(const BayesianNetwork& net, const JunctionTree& jt,
                         const Assignment& evidence) {
  check_assignment(net, evidence);
  CalibratedTree out;
  for (const auto& clique : jt.cliques) {
    std::vector<std::size_t> cards;
    for (VarId v : clique.variables) cards.push_back(net.cardinality(v));
    Factor f = Factor::ones(clique.variables, std::move(cards));
    for (VarId v : clique.assigned) multiply_into(f, cpt_factor(net, v));
    for (const auto& [v, s] : evidence) reduce(f, v, s);
    out.cliques.push_back(std::move(f));
  }
  for (const auto& sep : jt.separators) {
    std::vector<std::size_t> cards;
    for (VarId v : sep.variables) cards.push_back(net.cardinality(v));
    out.separators.push_back(Factor::ones(sep.variables, std::move(cards)));
  }
  if (jt.cliques.empty()) {
    out.evidence_probability = 1.0;
    return out;
  }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order;
  std::vector<std::size_t> parent(jt.cliques.size(), kNone), parent_sep(jt.cliques.size(), kNone);
  std::vector<char> seen(jt.cliques.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    order.push_back(c);
    for (auto [next, sep] : jt.adjacency[c]) {
      if (seen[next]) continue;
      seen[next] = 1;
      parent[next] = c;
      parent_sep[next] = sep;
      stack.push_back(next);
    }
  }

  auto impossible = [] {
    return Error(errc::kImpossibleEvidence, "evidence has zero probability");
  };
  double log_scale = 0.0;
  // Collect: each message is normalized and the sending clique rescaled by
  // the same constant, so the separator stays its exact marginal.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t c = *it;
    if (parent[c] == kNone) continue;
    Factor& sep = out.separators[parent_sep[c]];
    Factor message = marginalize(out.cliques[c], sep.scope);
    const double norm = message.sum();
    if (!(norm > 0.0)) throw impossible();
    for (double& x : message.values) x /= norm;
    for (double& x : out.cliques[c].values) x /= norm;
    log_scale += std::log(norm);
    multiply_ratio_into(out.cliques[parent[c]], message, sep);
    sep = std::move(message);
  }
  Factor& root = out.cliques[order.front()];
  const double root_mass = root.sum();
  if (!(root_mass > 0.0)) throw impossible();
  for (double& x : root.values) x /= root_mass;
  log_scale += std::log(root_mass);
  out.evidence_probability = std::exp(log_scale);

  // Distribute with separator division.
  for (std::size_t c : order) {
    if (parent[c] == kNone) continue;
    Factor& sep = out.separators[parent_sep[c]];
    Factor message = marginalize(out.cliques[parent[c]], sep.scope);
    multiply_ratio_into(out.cliques[c], message, sep);
    sep = std::move(message);
  }
  return out;
}

QueryResult junction_tree_propagate(const BayesianNetwork& net, const JunctionTree& jt,
                                    const Assignment& evidence) {
  detail::Stopwatch clock;
  const CalibratedTree calibrated = calibrate(net, jt, evidence);
  QueryResult result;
  result.diagnostics.engine = "jt";
  result.diagnostics.iterations = 1;
  result.diagnostics.messages = 2 * jt.separators.size();
  result.evidence_probability = calibrated.evidence_probability;
  for (VarId v = 0; v < net.size(); ++v) {
    const std::size_t c = jt.containing_clique({v}).value();
    const VarId keep[] = {v};
    Factor m = marginalize(calibrated.cliques[c], keep);
    result.posteriors.emplace(v, Distribution::normalized(v, std::move(m.values)));
  }
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return result;
}

QueryResult junction_tree_query(const BayesianNetwork& net, const Assignment& evidence) {
  return junction_tree_propagate(net, build_junction_tree(net), evidence);
}

}  // namespace bnkit
