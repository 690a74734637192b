#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bnkit/factor_graph.hpp"

namespace bnkit::testing {

DiscreteVariable boolean(const std::string& name) { return DiscreteVariable{name, {"false", "true"}, false}; }

DiscreteVariable variable(const std::string& name, std::size_t states, bool ordered) {
  DiscreteVariable v{name, {}, ordered};
  for (std::size_t s = 0; s < states; ++s) v.states.push_back("s" + std::to_string(s));
  return v;
}

NodeSpec table_node(DiscreteVariable v, std::vector<std::string> parents, std::vector<double> values) {
  return NodeSpec{std::move(v), std::move(parents), TablePotential{std::move(values)}};
}

BayesianNetwork three_cause_heart_attack() {
  std::vector<NodeSpec> nodes;
  nodes.push_back(table_node(boolean("Endocarditis"), {}, {0.5, 0.5}));
  nodes.push_back(table_node(boolean("Hypertension"), {}, {0.5, 0.5}));
  nodes.push_back(table_node(boolean("Arteriosclerosis"), {}, {0.5, 0.5}));
  nodes.push_back(NodeSpec{boolean("HeartAttack"), {"Endocarditis", "Hypertension", "Arteriosclerosis"},
                           NoisyOrPotential{{0.6, 0.4, 0.3}, std::nullopt}});
  return build_network(std::move(nodes));
}

std::vector<double> random_table(Rng& rng, std::size_t child_card, std::size_t rows, bool zeros) {
  std::vector<double> out;
  out.reserve(child_card * rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(child_card);
    double total = 0.0;
    for (auto& x : row) {
      x = (zeros && rng.uniform() < 0.25) ? 0.0 : 0.05 + rng.uniform();
      total += x;
    }
    if (total == 0.0) {
      row[rng.index(child_card)] = 1.0;
      total = 1.0;
    }
    for (auto& x : row) out.push_back(x / total);
  }
  return out;
}

namespace {

std::string name_of(std::size_t i) { return "V" + std::to_string(i); }

std::size_t rows_for(const std::vector<std::size_t>& cards, const std::vector<std::size_t>& parents) {
  std::size_t rows = 1;
  for (auto p : parents) rows *= cards[p];
  return rows;
}

BayesianNetwork assemble(Rng& rng, const std::vector<std::size_t>& cards,
                         const std::vector<std::vector<std::size_t>>& parents) {
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    std::vector<std::string> names;
    for (auto p : parents[i]) names.push_back(name_of(p));
    DiscreteVariable v = cards[i] == 2 ? boolean(name_of(i)) : variable(name_of(i), cards[i]);
    nodes.push_back(table_node(std::move(v), std::move(names),
                               random_table(rng, cards[i], rows_for(cards, parents[i]))));
  }
  return BayesianNetwork::from_nodes(std::move(nodes));
}

}  // namespace

BayesianNetwork random_polytree(Rng& rng, std::size_t max_nodes, std::size_t max_states,
                                std::size_t max_joint) {
  const std::size_t n = 1 + rng.index(max_nodes);
  std::vector<std::size_t> cards;
  std::size_t joint = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 2 + rng.index(max_states - 1);
    while (c > 2 && joint * c > max_joint) --c;
    if (joint * c > max_joint) break;
    joint *= c;
    cards.push_back(c);
  }
  const std::size_t m = cards.size();
  // Random tree over the nodes, each edge oriented at random; node identities
  // are then shuffled so that declaration order is not topological.
  std::vector<std::vector<std::size_t>> parents(m);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  for (std::size_t i = 1; i < m; ++i) {
    const std::size_t j = rng.index(i);
    if (rng.uniform() < 0.5) {
      parents[perm[i]].push_back(perm[j]);
    } else {
      parents[perm[j]].push_back(perm[i]);
    }
  }
  return assemble(rng, cards, parents);
}

BayesianNetwork random_binary_dag(Rng& rng, std::size_t nodes, std::size_t max_parents,
                                  double edge_probability) {
  std::vector<std::size_t> cards(nodes, 2);
  std::vector<std::vector<std::size_t>> parents(nodes);
  for (std::size_t i = 1; i < nodes; ++i) {
    for (std::size_t j = 0; j < i && parents[i].size() < max_parents; ++j) {
      if (rng.uniform() < edge_probability) parents[i].push_back(j);
    }
  }
  return assemble(rng, cards, parents);
}

BayesianNetwork random_loopy_dag(Rng& rng, std::size_t max_nodes) {
  while (true) {
    const std::size_t n = 4 + rng.index(max_nodes - 3);
    BayesianNetwork net = random_binary_dag(rng, n, 3, 0.45);
    if (!to_factor_graph(net).is_tree()) return net;
  }
}

BayesianNetwork random_mixed_network(Rng& rng, std::size_t n) {
  std::vector<DiscreteVariable> vars;
  for (std::size_t i = 0; i < n; ++i) {
    vars.push_back(rng.uniform() < 0.7 ? boolean(name_of(i)) : variable(name_of(i), 3, true));
  }
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> pa;
    for (std::size_t j = 0; j < i && pa.size() < 3; ++j) {
      if (rng.uniform() < 0.4) pa.push_back(j);
    }
    std::vector<std::string> names;
    bool all_bool = vars[i].states[0] == "false";
    std::size_t rows = 1;
    for (auto p : pa) {
      names.push_back(vars[p].name);
      all_bool = all_bool && vars[p].states[0] == "false";
      rows *= vars[p].cardinality();
    }
    const std::size_t k = vars[i].cardinality();
    Potential pot = TablePotential{random_table(rng, k, rows, true)};
    const double pick = rng.uniform();
    if (!pa.empty() && all_bool && pick < 0.2) {
      NoisyOrPotential p;
      for (std::size_t j = 0; j < pa.size(); ++j) p.c.push_back(rng.uniform());
      if (rng.uniform() < 0.5) p.leak = 0.2 * rng.uniform();
      pot = p;
    } else if (!pa.empty() && all_bool && pick < 0.35) {
      NoisyAndPotential p;
      for (std::size_t j = 0; j < pa.size(); ++j) {
        p.c.push_back(rng.uniform());
        p.s.push_back(0.3 * rng.uniform());
      }
      pot = p;
    } else if (!pa.empty() && all_bool && pick < 0.45) {
      pot = FunctionPotential{pa.size() == 1 ? DeterministicFn::Not
                                             : (rng.uniform() < 0.5 ? DeterministicFn::Or : DeterministicFn::And)};
    } else if (!pa.empty() && pick < 0.7) {
      NoisyMaxPotential p;
      for (auto q : pa) {
        StateMatrix m;
        const auto r = random_table(rng, k, vars[q].cardinality());
        for (std::size_t s = 0; s < vars[q].cardinality(); ++s) {
          m.emplace_back(r.begin() + s * k, r.begin() + (s + 1) * k);
        }
        p.c.push_back(std::move(m));
      }
      if (rng.uniform() < 0.5) p.leak = random_table(rng, k, 1);
      pot = p;
    }
    nodes.push_back(NodeSpec{vars[i], names, pot});
  }
  return build_network(std::move(nodes));
}

Assignment random_evidence(Rng& rng, const BayesianNetwork& net, std::size_t max_observed) {
  FullAssignment sample(net.size(), 0);
  for (VarId v : topological_order(net)) {
    std::vector<double> row(net.cardinality(v));
    for (std::size_t s = 0; s < row.size(); ++s) row[s] = net.cpt(v)[net.cpt_index(v, s, sample)];
    sample[v] = rng.categorical(row);
  }
  Assignment e;
  const std::size_t k = rng.index(std::min(max_observed, net.size()) + 1);
  std::vector<VarId> order(net.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  for (std::size_t i = 0; i < k; ++i) e.bind(order[i], sample[order[i]]);
  return e;
}

std::vector<double> joint_table(const BayesianNetwork& net) {
  std::vector<std::size_t> cards;
  for (VarId v = 0; v < net.size(); ++v) cards.push_back(net.cardinality(v));
  std::vector<double> out;
  for_each_configuration(cards, [&](const std::vector<std::size_t>& x) {
    out.push_back(joint_probability(net, x));
  });
  return out;
}

BruteForce brute_force(const BayesianNetwork& net, const Assignment& evidence) {
  std::vector<std::size_t> cards;
  BruteForce out;
  for (VarId v = 0; v < net.size(); ++v) {
    cards.push_back(net.cardinality(v));
    out.posteriors.emplace_back(net.cardinality(v), 0.0);
  }
  for_each_configuration(cards, [&](const std::vector<std::size_t>& x) {
    for (const auto& [v, s] : evidence) {
      if (x[v] != s) return;
    }
    const double p = joint_probability(net, x);
    out.evidence_probability += p;
    for (VarId v = 0; v < net.size(); ++v) out.posteriors[v][x[v]] += p;
  });
  for (auto& row : out.posteriors) {
    for (auto& p : row) p /= out.evidence_probability;
  }
  return out;
}

double independence_residual(const BayesianNetwork& net, const std::set<VarId>& x,
                             const std::set<VarId>& y, const std::set<VarId>& z) {
  // Marginal tables keyed by the packed configurations of the sets.
  std::vector<std::size_t> cards;
  for (VarId v = 0; v < net.size(); ++v) cards.push_back(net.cardinality(v));
  auto key = [&](const std::vector<std::size_t>& state, const std::set<VarId>& vars) {
    std::size_t k = 0;
    for (VarId v : vars) k = k * cards[v] + state[v];
    return k;
  };
  std::map<std::size_t, double> pz, pxz;
  std::map<std::pair<std::size_t, std::size_t>, double> pyz, pxyz;
  std::set<VarId> xz = x, yz = y, xyz = x;
  xz.insert(z.begin(), z.end());
  yz.insert(z.begin(), z.end());
  xyz.insert(y.begin(), y.end());
  xyz.insert(z.begin(), z.end());
  std::vector<std::vector<std::size_t>> states;
  for_each_configuration(cards, [&](const std::vector<std::size_t>& s) {
    const double p = joint_probability(net, s);
    pz[key(s, z)] += p;
    pxz[key(s, xz)] += p;
    pyz[{key(s, yz), 0}] += p;
    pxyz[{key(s, xyz), 0}] += p;
    states.push_back(s);
  });
  double worst = 0.0;
  for (const auto& s : states) {
    const double yzp = pyz[{key(s, yz), 0}];
    if (yzp <= 0.0) continue;
    const double lhs = pxyz[{key(s, xyz), 0}] / yzp;
    const double rhs = pxz[key(s, xz)] / pz[key(s, z)];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

namespace {

/// Sums prod_i P(z_i | x_i) (times the leak term) over all z with f(z) = y.
template <typename PZ, typename F>
std::vector<double> ici_sum(const std::vector<std::size_t>& parent_cards, std::size_t child_card,
                            std::size_t leak_card, PZ&& pz, F&& f) {
  std::vector<double> table;
  std::vector<std::size_t> z_cards(parent_cards.size(), child_card);
  if (leak_card) z_cards.push_back(leak_card);
  for_each_configuration(parent_cards, [&](const std::vector<std::size_t>& x) {
    std::vector<double> row(child_card, 0.0);
    for_each_configuration(z_cards, [&](const std::vector<std::size_t>& z) {
      double p = 1.0;
      for (std::size_t i = 0; i < z.size(); ++i) p *= pz(i, i < x.size() ? x[i] : 0, z[i]);
      row[f(z)] += p;
    });
    table.insert(table.end(), row.begin(), row.end());
  });
  return table;
}

}  // namespace

std::vector<double> ici_sum_noisy_or(const std::vector<double>& c, std::optional<double> leak) {
  const std::vector<std::size_t> parent_cards(c.size(), 2);
  return ici_sum(
      parent_cards, 2, leak ? 2 : 0,
      [&](std::size_t i, std::size_t xi, std::size_t zi) {
        const double on = i < c.size() ? (xi == 1 ? c[i] : 0.0) : *leak;
        return zi == 1 ? on : 1.0 - on;
      },
      [](const std::vector<std::size_t>& z) {
        return static_cast<std::size_t>(std::any_of(z.begin(), z.end(), [](std::size_t v) { return v == 1; }));
      });
}

std::vector<double> ici_sum_noisy_and(const std::vector<double>& c, const std::vector<double>& s) {
  const std::vector<std::size_t> parent_cards(c.size(), 2);
  return ici_sum(
      parent_cards, 2, 0,
      [&](std::size_t i, std::size_t xi, std::size_t zi) {
        const double on = xi == 1 ? c[i] : s[i];
        return zi == 1 ? on : 1.0 - on;
      },
      [](const std::vector<std::size_t>& z) {
        return static_cast<std::size_t>(std::all_of(z.begin(), z.end(), [](std::size_t v) { return v == 1; }));
      });
}

std::vector<double> ici_sum_noisy_max(const std::vector<StateMatrix>& c,
                                      const std::optional<std::vector<double>>& leak,
                                      std::size_t child_card) {
  std::vector<std::size_t> parent_cards;
  for (const auto& m : c) parent_cards.push_back(m.size());
  return ici_sum(
      parent_cards, child_card, leak ? child_card : 0,
      [&](std::size_t i, std::size_t xi, std::size_t zi) { return i < c.size() ? c[i][xi][zi] : (*leak)[zi]; },
      [](const std::vector<std::size_t>& z) { return z.empty() ? std::size_t{0} : *std::max_element(z.begin(), z.end()); });
}

const std::vector<std::string>& headache_diagnoses() {
  static const std::vector<std::string> names{"BrainTumor", "ClusterHeadache", "MigraineWithAura",
                                              "MigraineWithoutAura", "TensionHeadache"};
  return names;
}

const std::vector<std::string>& headache_characteristics() {
  static const std::vector<std::string> names{
      "AuraSymptoms", "Nausea", "Photophobia", "Phonophobia", "PainLocationUnilateral",
      "IpsilateralLacrimination", "Restlessness", "Vomiting", "NeurologicalDeficit",
      "PainDuration", "PainQuality", "TriggerMentalStress", "SleepDisturbance"};
  return names;
}

EvaluationPlan headache_plan(std::size_t per_diagnosis, std::uint64_t seed) {
  EvaluationPlan plan;
  plan.model = load_fixture("headache");
  plan.diagnosis_vars = resolve_variables(plan.model.network, headache_diagnoses());
  plan.characteristic_vars = resolve_variables(plan.model.network, headache_characteristics());
  plan.per_diagnosis_count = per_diagnosis;
  plan.seed = seed;
  return plan;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace bnkit::testing
