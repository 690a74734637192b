#include <gtest/gtest.h>

#include <functional>

#include "bnkit/evaluation.hpp"
#include "bnkit/factor_graph.hpp"
#include "support.hpp"

namespace bnkit {
namespace {

using testing::boolean;
using testing::table_node;

// Union-find cycle check on the bipartite graph, independent of is_tree().
bool has_cycle(const FactorGraph& fg) {
  std::vector<std::size_t> parent(fg.variable_count() + fg.factor_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : fg.edges()) {
    const std::size_t a = find(e.variable), b = find(fg.variable_count() + e.factor);
    if (a == b) return true;
    parent[a] = b;
  }
  return false;
}

void for_each_state(const BayesianNetwork& net, const std::function<void(const FullAssignment&)>& fn) {
  std::vector<std::size_t> cards;
  for (VarId v = 0; v < net.size(); ++v) cards.push_back(net.cardinality(v));
  for_each_configuration(cards, fn);
}

TEST(FactorGraph, Chain) {
  auto net = build_network({table_node(boolean("A"), {}, {0.3, 0.7}),
                            table_node(boolean("B"), {"A"}, {0.9, 0.1, 0.2, 0.8})});
  const auto fg = to_factor_graph(net);
  EXPECT_EQ(fg.variable_count(), 2u);
  EXPECT_EQ(fg.factor_count(), 2u);
  EXPECT_EQ(fg.edge_count(), 3u);
  EXPECT_TRUE(fg.is_tree());
  for (const auto& e : fg.edges()) {
    EXPECT_LT(e.variable, fg.variable_count());
    EXPECT_EQ(fg.factor(e.factor).scope[e.position], e.variable);
  }
}

TEST(FactorGraph, TwoRootsOneChild) {
  auto net = build_network({table_node(boolean("A"), {}, {0.3, 0.7}),
                            table_node(boolean("B"), {}, {0.6, 0.4}),
                            table_node(boolean("C"), {"A", "B"}, {0.9, 0.1, 0.5, 0.5, 0.4, 0.6, 0.1, 0.9})});
  const auto separate = to_factor_graph(net, RootStyle::Separate);
  EXPECT_EQ(separate.factor_count(), 3u);
  EXPECT_EQ(separate.edge_count(), 5u);
  const auto merged = to_factor_graph(net, RootStyle::Merged);
  EXPECT_EQ(merged.factor_count(), 1u);
  EXPECT_EQ(merged.edge_count(), 3u);
  EXPECT_EQ(merged.factor(0).scope.size(), 3u);
}

TEST(FactorGraph, JointPreservedBothStyles) {
  std::vector<BayesianNetwork> nets;
  nets.push_back(load_fixture("heart_attack").network);
  nets.push_back(testing::three_cause_heart_attack());
  Rng rng(9);
  for (int i = 0; i < 10; ++i) nets.push_back(testing::random_mixed_network(rng, 7));
  for (int i = 0; i < 10; ++i) nets.push_back(testing::random_polytree(rng, 7, 3, 2000));
  for (const auto& net : nets) {
    const auto sep = to_factor_graph(net, RootStyle::Separate);
    const auto mer = to_factor_graph(net, RootStyle::Merged);
    for_each_state(net, [&](const FullAssignment& s) {
      const double joint = joint_probability(net, s);
      EXPECT_NEAR(sep.product(s), joint, 1e-12);
      EXPECT_NEAR(mer.product(s), joint, 1e-12);
    });
  }
}

TEST(FactorGraph, TreeDetectionMatchesCycleCheck) {
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const auto poly = to_factor_graph(testing::random_polytree(rng));
    EXPECT_TRUE(poly.is_tree());
    EXPECT_FALSE(has_cycle(poly));
    const auto loopy = to_factor_graph(testing::random_loopy_dag(rng));
    EXPECT_FALSE(loopy.is_tree());
    EXPECT_TRUE(has_cycle(loopy));
    const auto any = to_factor_graph(testing::random_binary_dag(rng, 7));
    EXPECT_EQ(any.is_tree(), !has_cycle(any));
  }
  EXPECT_FALSE(to_factor_graph(load_fixture("heart_attack").network).is_tree());
}

TEST(Factor, Evaluate) {
  auto net = testing::three_cause_heart_attack();
  const auto prior = cpt_factor(net, net.id("Endocarditis"));
  EXPECT_DOUBLE_EQ(evaluate_factor(prior, Assignment{{net.id("Endocarditis"), 1}}), 0.5);

  const VarId i = net.id("HeartAttack");
  const auto f = cpt_factor(net, i);
  EXPECT_EQ(f.scope.front(), i);
  Assignment row{{net.id("Endocarditis"), 1}, {net.id("Hypertension"), 0},
                 {net.id("Arteriosclerosis"), 1}, {i, 0}};
  EXPECT_NEAR(evaluate_factor(f, row), 0.28, 1e-12);
  row.unbind(i);
  EXPECT_THROW(evaluate_factor(f, row), Error);
}

TEST(Factor, Operations) {
  Factor f{{0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6}};
  const std::vector<VarId> keep1{1};
  const auto m = marginalize(f, keep1);
  EXPECT_EQ(m.values, (std::vector<double>{3, 7, 11}));
  const std::vector<VarId> keep0{0};
  EXPECT_EQ(marginalize(f, keep0).values, (std::vector<double>{9, 12}));
  EXPECT_DOUBLE_EQ(f.sum(), 21.0);

  Factor g = f;
  multiply_into(g, Factor{{1}, {3}, {1, 0, 2}});
  EXPECT_EQ(g.values, (std::vector<double>{1, 2, 0, 0, 10, 12}));

  reduce(f, 0, 1);
  EXPECT_EQ(f.values, (std::vector<double>{0, 2, 0, 4, 0, 6}));

  Factor h{{0}, {2}, {4, 6}};
  multiply_ratio_into(h, Factor{{0}, {2}, {1, 0}}, Factor{{0}, {2}, {2, 0}});
  EXPECT_EQ(h.values, (std::vector<double>{2, 0}));
}

}  // namespace
}  // namespace bnkit
