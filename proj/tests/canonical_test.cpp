#include <gtest/gtest.h>

#include "bnkit/canonical.hpp"
#include "bnkit/evaluation.hpp"
#include "support.hpp"

namespace bnkit {
namespace {

using testing::boolean;
using testing::variable;

// P(not I) per row, E slowest, A fastest.
const std::vector<double> kHeartAttackNotI{1.0, 0.7, 0.6, 0.42, 0.4, 0.28, 0.24, 0.168};

double not_i(const std::vector<double>& table, std::size_t e, std::size_t h, std::size_t a) {
  // Parents in order (E, H, A), first parent varies fastest after the child.
  return table[2 * (e + 2 * h + 4 * a)];
}

TEST(NoisyOr, HeartAttackTable) {
  const std::vector<double> c{0.6, 0.4, 0.3};
  const auto table = expand_noisy_or(c, std::nullopt);
  ASSERT_EQ(table.size(), 16u);
  std::size_t row = 0;
  for (std::size_t e = 0; e < 2; ++e) {
    for (std::size_t h = 0; h < 2; ++h) {
      for (std::size_t a = 0; a < 2; ++a) {
        EXPECT_NEAR(not_i(table, e, h, a), kHeartAttackNotI[row], 1e-12) << e << h << a;
        EXPECT_NEAR(table[2 * (e + 2 * h + 4 * a) + 1], 1.0 - kHeartAttackNotI[row], 1e-12);
        ++row;
      }
    }
  }
}

TEST(NoisyOr, LeakAndSingleCause) {
  const std::vector<double> c{0.6, 0.4};
  const auto leaky = expand_noisy_or(c, 0.1);
  EXPECT_NEAR(leaky[1], 0.1, 1e-15);                     // no cause: leak only
  EXPECT_NEAR(leaky[6], 0.9 * 0.4 * 0.6, 1e-15);         // both active, P(not y)
  const auto plain = expand_noisy_or(c, std::nullopt);
  EXPECT_DOUBLE_EQ(plain[3], 0.6);
  EXPECT_DOUBLE_EQ(plain[5], 0.4);
}

TEST(NoisyOr, Monotone) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(3);
    for (auto& x : c) x = rng.uniform();
    const auto t = expand_noisy_or(c, std::nullopt);
    for (std::size_t row = 0; row < 8; ++row) {
      for (std::size_t bit = 0; bit < 3; ++bit) {
        const std::size_t more = row | (std::size_t{1} << bit);
        EXPECT_GE(t[2 * more + 1] + 1e-15, t[2 * row + 1]);
      }
    }
  }
}

TEST(NoisyOr, ParameterChecks) {
  const std::vector<DiscreteVariable> parents{boolean("A")};
  EXPECT_THROW(expand_potential(NoisyOrPotential{{1.2}, std::nullopt}, boolean("Y"), parents), Error);
  EXPECT_THROW(expand_potential(NoisyOrPotential{{0.5}, std::nullopt}, variable("Y", 3), parents), Error);
  try {
    expand_potential(NoisyOrPotential{{0.5, 0.5}, std::nullopt}, boolean("Y"), parents);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "arity-mismatch");
  }
}

TEST(NoisyAnd, Products) {
  const std::vector<double> c{0.9, 0.8}, s{0.1, 0.05};
  const auto t = expand_noisy_and(c, s);
  // x = (true, false): row index 1
  EXPECT_NEAR(t[2 * 1 + 1], 0.045, 1e-15);
  EXPECT_NEAR(t[2 * 3 + 1], 0.72, 1e-15);
  const std::vector<double> ones{1.0, 1.0}, zero_s{0.0, 0.0};
  const auto strict = expand_noisy_and(ones, zero_s);
  EXPECT_DOUBLE_EQ(strict[7], 1.0);
  EXPECT_DOUBLE_EQ(strict[1], 0.0);
  EXPECT_DOUBLE_EQ(strict[3], 0.0);
}

TEST(NoisyMax, SingleParentCopiesMatrix) {
  const StateMatrix m{{0.7, 0.2, 0.1}, {0.1, 0.3, 0.6}, {0.0, 0.1, 0.9}};
  const auto t = expand_noisy_max(std::vector<StateMatrix>{m}, std::nullopt);
  ASSERT_EQ(t.size(), 9u);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) EXPECT_NEAR(t[3 * x + y], m[x][y], 1e-12);
  }
}

TEST(NoisyMax, BinaryEqualsNoisyOr) {
  const std::vector<double> c{0.25, 0.8, 0.5};
  std::vector<StateMatrix> mats;
  for (double ci : c) mats.push_back({{1.0, 0.0}, {1.0 - ci, ci}});
  EXPECT_LE(testing::max_abs_diff(expand_noisy_max(mats, std::nullopt), expand_noisy_or(c, std::nullopt)),
            1e-12);
  EXPECT_LE(testing::max_abs_diff(expand_noisy_max(mats, std::vector<double>{0.8, 0.2}),
                                  expand_noisy_or(c, 0.2)),
            1e-12);
}

TEST(NoisyMax, ShapeChecks) {
  const std::vector<DiscreteVariable> parents{variable("A", 2, true)};
  NoisyMaxPotential bad{{{{0.5, 0.5}, {0.2, 0.8}}}, std::nullopt};
  EXPECT_THROW(expand_potential(bad, variable("Y", 3, true), parents), Error);
  NoisyMaxPotential off{{{{0.5, 0.4, 0.0}, {0.2, 0.8, 0.0}}}, std::nullopt};
  EXPECT_THROW(expand_potential(off, variable("Y", 3, true), parents), Error);
}

// Closed forms against direct summation over every hidden z-configuration.
TEST(IciOracle, RandomParameterizations) {
  Rng rng(2024);
  auto row = [&](std::size_t n) {
    std::vector<double> r(n);
    double total = 0.0;
    for (auto& x : r) total += (x = rng.uniform() + 0.01);
    for (auto& x : r) x /= total;
    return r;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(3);
    std::vector<double> c(n), s(n);
    for (auto& x : c) x = rng.uniform();
    for (auto& x : s) x = rng.uniform();
    const std::optional<double> leak = rng.uniform() < 0.5 ? std::optional<double>(rng.uniform()) : std::nullopt;
    EXPECT_LE(testing::max_abs_diff(expand_noisy_or(c, leak), testing::ici_sum_noisy_or(c, leak)), 1e-12);
    EXPECT_LE(testing::max_abs_diff(expand_noisy_and(c, s), testing::ici_sum_noisy_and(c, s)), 1e-12);

    const std::size_t child = 2 + rng.index(2);
    std::vector<StateMatrix> mats;
    for (std::size_t i = 0; i < n; ++i) {
      StateMatrix m;
      const std::size_t states = 2 + rng.index(2);
      for (std::size_t k = 0; k < states; ++k) m.push_back(row(child));
      mats.push_back(std::move(m));
    }
    std::optional<std::vector<double>> max_leak;
    if (rng.uniform() < 0.5) max_leak = row(child);
    EXPECT_LE(testing::max_abs_diff(expand_noisy_max(mats, max_leak),
                                    testing::ici_sum_noisy_max(mats, max_leak, child)),
              1e-12);
  }
}

TEST(Deterministic, LogicalFunctions) {
  const std::vector<DiscreteVariable> two{boolean("A"), boolean("B")};
  const auto or_table = expand_deterministic(DeterministicFn::Or, two, boolean("Y"));
  // (A=true, B=false) is row 1
  EXPECT_EQ(or_table[2 * 1 + 1], 1.0);
  EXPECT_EQ(or_table[0], 1.0);
  const auto and_table = expand_deterministic(DeterministicFn::And, two, boolean("Y"));
  EXPECT_EQ(and_table[2 * 1 + 1], 0.0);
  EXPECT_EQ(and_table[2 * 3 + 1], 1.0);

  const std::vector<DiscreteVariable> one{boolean("A")};
  const auto not_table = expand_deterministic(DeterministicFn::Not, one, boolean("Y"));
  EXPECT_EQ(not_table, (std::vector<double>{0, 1, 1, 0}));
  EXPECT_THROW(expand_deterministic(DeterministicFn::Not, two, boolean("Y")), Error);
  EXPECT_THROW(expand_deterministic(DeterministicFn::Or, {}, boolean("Y")), Error);
}

TEST(Deterministic, AlgebraicFunctions) {
  const std::vector<DiscreteVariable> two{variable("A", 3, true), variable("B", 3, true)};
  const auto max_table = expand_deterministic(DeterministicFn::Max, two, variable("Y", 3, true));
  // (A=0, B=2): row 0 + 3*2 = 6
  EXPECT_EQ(max_table[3 * 6 + 2], 1.0);
  const auto min_table = expand_deterministic(DeterministicFn::Min, two, variable("Y", 3, true));
  EXPECT_EQ(min_table[3 * 6 + 0], 1.0);

  const std::vector<DiscreteVariable> one{variable("A", 4, true)};
  const auto inv = expand_deterministic(DeterministicFn::Inv, one, variable("Y", 4, true));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(inv[4 * k + (3 - k)], 1.0);
  EXPECT_THROW(expand_deterministic(DeterministicFn::Max, std::vector<DiscreteVariable>{variable("A", 3)},
                                    variable("Y", 3, true)),
               Error);
  EXPECT_THROW(expand_deterministic(DeterministicFn::Inv, one, variable("Y", 3, true)), Error);
}

TEST(Deterministic, Minus) {
  DiscreteVariable x{"X", {"-1", "0", "1"}, true};
  DiscreteVariable y{"Y", {"-1", "0", "1"}, true};
  const auto t = expand_deterministic(DeterministicFn::Minus, std::vector<DiscreteVariable>{x}, y);
  EXPECT_EQ(t, (std::vector<double>{0, 0, 1, 0, 1, 0, 1, 0, 0}));
}

TEST(CptTree, HeartAttackPath) {
  const auto net = testing::three_cause_heart_attack();
  const VarId i = net.id("HeartAttack");
  const auto tree = build_cpt_tree(net, i);
  EXPECT_EQ(tree.depth(), 4u);
  EXPECT_EQ(tree.leaf_count(), 16u);
  Assignment path{{net.id("Endocarditis"), 1}, {net.id("Hypertension"), 0},
                  {net.id("Arteriosclerosis"), 1}, {i, 0}};
  EXPECT_NEAR(cpt_tree_lookup(tree, path), 0.28, 1e-12);
  path.unbind(net.id("Hypertension"));
  try {
    tree.lookup(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "unbound-level");
  }
}

TEST(CptTree, DegenerateAndOneParent) {
  const std::vector<double> prior{0.25, 0.75};
  const auto root = build_cpt_tree(prior, {}, {}, 0, 2);
  EXPECT_EQ(root.depth(), 1u);
  EXPECT_DOUBLE_EQ(cpt_tree_lookup(root, Assignment{{0, 1}}), 0.75);

  const std::vector<double> table{0.9, 0.1, 0.2, 0.8};
  const std::vector<VarId> parents{0};
  const std::vector<std::size_t> cards{2};
  const auto tree = build_cpt_tree(table, parents, cards, 1, 2);
  EXPECT_EQ(tree.depth(), 2u);
  EXPECT_EQ(tree.leaf_count(), 4u);
  EXPECT_DOUBLE_EQ(cpt_tree_lookup(tree, Assignment{{0, 1}, {1, 0}}), 0.2);
  EXPECT_THROW(build_cpt_tree(std::vector<double>{0.5, 0.5, 0.5}, parents, cards, 1, 2), Error);
}

TEST(CptTree, RandomTablesMatchFlatIndexing) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(3);
    std::vector<VarId> parents;
    std::vector<std::size_t> cards;
    std::size_t rows = 1;
    for (std::size_t p = 0; p < n; ++p) {
      parents.push_back(p);
      cards.push_back(2 + rng.index(3));
      rows *= cards.back();
    }
    const std::size_t child_card = 2 + rng.index(3);
    const auto table = testing::random_table(rng, child_card, rows);
    const auto tree = build_cpt_tree(table, parents, cards, n, child_card);
    std::vector<std::size_t> all_cards{child_card};
    all_cards.insert(all_cards.end(), cards.begin(), cards.end());
    std::size_t flat = 0;
    for_each_configuration(all_cards, [&](const std::vector<std::size_t>& s) {
      Assignment a;
      a.bind(n, s[0]);
      for (std::size_t p = 0; p < n; ++p) a.bind(p, s[p + 1]);
      EXPECT_EQ(cpt_tree_lookup(tree, a), table[flat]);
      ++flat;
    });
  }
}

TEST(Fixtures, HeartAttackExpandsNoisyOr) {
  const auto doc = load_fixture("heart_attack");
  const auto& net = doc.network;
  EXPECT_TRUE(net.valid());
  ASSERT_EQ(net.size(), 5u);
  const VarId i = net.id("HeartAttackI");
  EXPECT_EQ(potential_kind(net.potential(i)), "NoisyOR");
  // Two causes A, H with q = 0.7, 0.6: the (false,false), (A), (H), (A,H) rows of the three-cause table.
  const auto& cpt = net.cpt(i);
  EXPECT_NEAR(cpt[0], 1.0, 1e-12);
  EXPECT_NEAR(cpt[2], 0.7, 1e-12);
  EXPECT_NEAR(cpt[4], 0.6, 1e-12);
  EXPECT_NEAR(cpt[6], 0.42, 1e-12);
}

TEST(Fixtures, HeadacheDiagnoses) {
  const auto doc = load_fixture("headache");
  EXPECT_TRUE(doc.network.valid());
  for (const char* name : {"BrainTumor", "ClusterHeadache", "MigraineWithAura", "MigraineWithoutAura",
                           "TensionHeadache", "Migraine", "Headache"}) {
    ASSERT_TRUE(doc.network.find(name).has_value()) << name;
    EXPECT_TRUE(is_boolean(doc.network.variable(doc.network.id(name))));
  }
  EXPECT_EQ(doc.property("fixtureVersion"), "headache-1");
  EXPECT_THROW(load_fixture("nope"), Error);
}

}  // namespace
}  // namespace bnkit
