#include "bnkit/canonical.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <cmath>
#include <numeric>
#include <string>

namespace bnkit {

namespace {

constexpr double kRowTolerance = 1e-9;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

void require_boolean(const DiscreteVariable& v, std::string_view model) {
  if (v.states.size() != 2) {
    throw Error(errc::kNonBinary,
                std::string(model) + " needs binary variables; '" + v.name + "' has " +
                    std::to_string(v.states.size()) + " states",
                SourceLocation{v.name});
  }
  if (!is_boolean(v)) {
    throw Error(errc::kStateOrder,
                std::string(model) + " needs states ordered (false, true) on '" + v.name + "'",
                SourceLocation{v.name});
  }
}

void require_ordered(const DiscreteVariable& v, DeterministicFn fn) {
  if (!v.ordered) {
    throw Error(errc::kNotOrdered,
                std::string(to_string(fn)) + " needs an ordered variable; '" + v.name +
                    "' is not marked ordered",
                SourceLocation{v.name});
  }
}

void require_unit_interval(double x, std::string_view what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(errc::kParameterOutOfRange,
                std::string(what) + " = " + std::to_string(x) + " is outside [0, 1]");
  }
}

std::optional<long long> integer_value(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::vector<std::size_t> cardinalities(std::span<const DiscreteVariable> vars) {
  std::vector<std::size_t> cards;
  for (const auto& v : vars) cards.push_back(v.states.size());
  return cards;
}

// Table with P(y = f(x) | x) = 1 for an index-valued function f.
template <typename Fn>
std::vector<double> deterministic_table(std::span<const std::size_t> parent_cards,
                                        std::size_t child_card, Fn&& f) {
  std::size_t rows = 1;
  for (std::size_t c : parent_cards) rows *= c;
  std::vector<double> table(rows * child_card, 0.0);
  std::size_t row = 0;
  for_each_configuration(parent_cards, [&](const std::vector<std::size_t>& x) {
    table[row * child_card + f(x)] = 1.0;
    ++row;
  });
  return table;
}

}  // namespace

std::string_view to_string(DeterministicFn fn) {
  switch (fn) {
    case DeterministicFn::Not: return "NOT";
    case DeterministicFn::Or: return "OR";
    case DeterministicFn::And: return "AND";
    case DeterministicFn::Minus: return "MINUS";
    case DeterministicFn::Inv: return "INV";
    case DeterministicFn::Max: return "MAX";
    case DeterministicFn::Min: return "MIN";
  }
  return "?";
}

std::optional<DeterministicFn> parse_deterministic_fn(std::string_view name) {
  for (auto fn : {DeterministicFn::Not, DeterministicFn::Or, DeterministicFn::And,
                  DeterministicFn::Minus, DeterministicFn::Inv, DeterministicFn::Max,
                  DeterministicFn::Min}) {
    if (to_string(fn) == name) return fn;
  }
  return std::nullopt;
}

std::string_view potential_kind(const Potential& p) {
  struct Visitor {
    std::string_view operator()(const TablePotential&) const { return "Table"; }
    std::string_view operator()(const FunctionPotential&) const { return "Function"; }
    std::string_view operator()(const NoisyOrPotential&) const { return "NoisyOR"; }
    std::string_view operator()(const NoisyMaxPotential&) const { return "NoisyMAX"; }
    std::string_view operator()(const NoisyAndPotential&) const { return "NoisyAND"; }
  };
  return std::visit(Visitor{}, p);
}

bool is_boolean(const DiscreteVariable& v) {
  return v.states.size() == 2 && iequals(v.states[0], "false") && iequals(v.states[1], "true");
}

std::vector<double> expand_deterministic(DeterministicFn fn,
                                         std::span<const DiscreteVariable> parents,
                                         const DiscreteVariable& child) {
  const bool unary = fn == DeterministicFn::Not || fn == DeterministicFn::Minus ||
                     fn == DeterministicFn::Inv;
  if (unary ? parents.size() != 1 : parents.empty()) {
    throw Error(errc::kArityMismatch,
                std::string(to_string(fn)) + " on '" + child.name + "' cannot take " +
                    std::to_string(parents.size()) + " parents",
                SourceLocation{child.name});
  }
  const auto cards = cardinalities(parents);
  const std::size_t child_card = child.states.size();

  switch (fn) {
    case DeterministicFn::Not:
    case DeterministicFn::Or:
    case DeterministicFn::And: {
      require_boolean(child, to_string(fn));
      for (const auto& p : parents) require_boolean(p, to_string(fn));
      return deterministic_table(cards, 2, [fn](const std::vector<std::size_t>& x) {
        if (fn == DeterministicFn::Not) return std::size_t{1} - x[0];
        bool any = std::any_of(x.begin(), x.end(), [](std::size_t s) { return s == 1; });
        bool all = std::all_of(x.begin(), x.end(), [](std::size_t s) { return s == 1; });
        return static_cast<std::size_t>(fn == DeterministicFn::Or ? any : all);
      });
    }
    case DeterministicFn::Inv: {
      require_ordered(child, fn);
      require_ordered(parents[0], fn);
      if (child_card != cards[0]) {
        throw Error(errc::kIncompatibleStates,
                    "INV needs '" + child.name + "' and '" + parents[0].name +
                        "' to have the same number of states",
                    SourceLocation{child.name});
      }
      return deterministic_table(cards, child_card, [child_card](const std::vector<std::size_t>& x) {
        return child_card - 1 - x[0];
      });
    }
    case DeterministicFn::Minus: {
      require_ordered(child, fn);
      require_ordered(parents[0], fn);
      // Integer-valued states, parent domain symmetric about zero, and the
      // child holding the negation of every parent value.
      const auto& parent = parents[0];
      std::vector<long long> parent_values;
      for (const auto& s : parent.states) {
        auto v = integer_value(s);
        if (!v) {
          throw Error(errc::kIncompatibleStates,
                      "MINUS needs integer state names; '" + parent.name + "' has '" + s + "'",
                      SourceLocation{child.name});
        }
        parent_values.push_back(*v);
      }
      std::vector<std::size_t> target(parent_values.size());
      for (std::size_t k = 0; k < parent_values.size(); ++k) {
        const std::string negated = std::to_string(-parent_values[k]);
        bool symmetric = std::find(parent_values.begin(), parent_values.end(),
                                   -parent_values[k]) != parent_values.end();
        std::optional<std::size_t> hit;
        for (std::size_t j = 0; j < child.states.size(); ++j) {
          auto cv = integer_value(child.states[j]);
          if (cv && *cv == -parent_values[k]) hit = j;
        }
        if (!symmetric || !hit) {
          throw Error(errc::kIncompatibleStates,
                      "MINUS needs domains symmetric about zero; no state " + negated +
                          " for '" + child.name + "'",
                      SourceLocation{child.name});
        }
        target[k] = *hit;
      }
      return deterministic_table(cards, child_card,
                                 [&](const std::vector<std::size_t>& x) { return target[x[0]]; });
    }
    case DeterministicFn::Max:
    case DeterministicFn::Min: {
      require_ordered(child, fn);
      for (const auto& p : parents) require_ordered(p, fn);
      const std::size_t needed = fn == DeterministicFn::Max
                                     ? *std::max_element(cards.begin(), cards.end())
                                     : *std::min_element(cards.begin(), cards.end());
      if (child_card < needed) {
        throw Error(errc::kIncompatibleStates,
                    std::string(to_string(fn)) + " result does not fit the states of '" +
                        child.name + "'",
                    SourceLocation{child.name});
      }
      return deterministic_table(cards, child_card, [fn](const std::vector<std::size_t>& x) {
        return fn == DeterministicFn::Max ? *std::max_element(x.begin(), x.end())
                                          : *std::min_element(x.begin(), x.end());
      });
    }
  }
  return {};
}

std::vector<double> expand_noisy_or(std::span<const double> c, std::optional<double> leak) {
  for (std::size_t i = 0; i < c.size(); ++i) require_unit_interval(c[i], "noisy OR c");
  if (leak) require_unit_interval(*leak, "noisy OR leak");
  const std::size_t n = c.size();
  const std::size_t rows = std::size_t{1} << n;
  const double leak_survival = 1.0 - leak.value_or(0.0);
  std::vector<double> table(rows * 2);
  for (std::size_t row = 0; row < rows; ++row) {
    double absent = leak_survival;
    for (std::size_t i = 0; i < n; ++i) {
      if ((row >> i) & 1U) absent *= 1.0 - c[i];
    }
    table[row * 2] = absent;
    table[row * 2 + 1] = 1.0 - absent;
  }
  return table;
}

std::vector<double> expand_noisy_max(std::span<const StateMatrix> c,
                                     const std::optional<std::vector<double>>& leak) {
  std::size_t child_card = 0;
  if (!c.empty() && !c[0].empty()) {
    child_card = c[0][0].size();
  } else if (leak) {
    child_card = leak->size();
  }
  if (child_card == 0) {
    throw Error(errc::kShapeMismatch, "noisy MAX has no child states to expand");
  }
  auto check_row = [&](const std::vector<double>& row, const std::string& what) {
    if (row.size() != child_card) {
      throw Error(errc::kShapeMismatch, what + " has " + std::to_string(row.size()) +
                                            " columns, expected " + std::to_string(child_card));
    }
    double sum = 0.0;
    for (double x : row) {
      require_unit_interval(x, what);
      sum += x;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw Error(errc::kRowNotNormalized, what + " does not sum to 1");
    }
  };
  std::vector<std::size_t> parent_cards;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].empty()) throw Error(errc::kShapeMismatch, "noisy MAX matrix has no rows");
    for (std::size_t r = 0; r < c[i].size(); ++r) {
      check_row(c[i][r], "noisy MAX parent " + std::to_string(i) + " row " + std::to_string(r));
    }
    parent_cards.push_back(c[i].size());
  }
  if (leak) check_row(*leak, "noisy MAX leak");

  // Accumulated parameters C_y per (parent, parent state) and for the leak.
  std::vector<StateMatrix> cumulative(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (const auto& row : c[i]) {
      std::vector<double> acc(child_card);
      std::partial_sum(row.begin(), row.end(), acc.begin());
      cumulative[i].push_back(std::move(acc));
    }
  }
  std::vector<double> leak_cumulative(child_card, 1.0);
  if (leak) std::partial_sum(leak->begin(), leak->end(), leak_cumulative.begin());

  std::size_t rows = 1;
  for (std::size_t card : parent_cards) rows *= card;
  std::vector<double> table(rows * child_card);
  std::size_t row = 0;
  std::vector<double> at_most(child_card);
  for_each_configuration(parent_cards, [&](const std::vector<std::size_t>& x) {
    for (std::size_t y = 0; y < child_card; ++y) {
      double p = leak_cumulative[y];
      for (std::size_t i = 0; i < x.size(); ++i) p *= cumulative[i][x[i]][y];
      at_most[y] = p;
    }
    for (std::size_t y = 0; y < child_card; ++y) {
      table[row * child_card + y] = y == 0 ? at_most[0] : at_most[y] - at_most[y - 1];
    }
    ++row;
  });
  return table;
}

std::vector<double> expand_noisy_and(std::span<const double> c, std::span<const double> s) {
  if (c.size() != s.size()) {
    throw Error(errc::kArityMismatch, "noisy AND needs one c and one s per parent");
  }
  for (double x : c) require_unit_interval(x, "noisy AND c");
  for (double x : s) require_unit_interval(x, "noisy AND s");
  const std::size_t n = c.size();
  const std::size_t rows = std::size_t{1} << n;
  std::vector<double> table(rows * 2);
  for (std::size_t row = 0; row < rows; ++row) {
    double present = 1.0;
    for (std::size_t i = 0; i < n; ++i) present *= ((row >> i) & 1U) ? c[i] : s[i];
    table[row * 2] = 1.0 - present;
    table[row * 2 + 1] = present;
  }
  return table;
}

std::vector<double> expand_potential(const Potential& potential, const DiscreteVariable& child,
                                     std::span<const DiscreteVariable> parents) {
  auto arity = [&](std::size_t given, std::string_view model) {
    if (given != parents.size()) {
      throw Error(errc::kArityMismatch,
                  std::string(model) + " on '" + child.name + "' has " + std::to_string(given) +
                      " parameter blocks for " + std::to_string(parents.size()) + " parents",
                  SourceLocation{child.name});
    }
  };
  if (const auto* t = std::get_if<TablePotential>(&potential)) return t->values;
  if (const auto* f = std::get_if<FunctionPotential>(&potential)) {
    return expand_deterministic(f->fn, parents, child);
  }
  if (const auto* p = std::get_if<NoisyOrPotential>(&potential)) {
    arity(p->c.size(), "noisy OR");
    require_boolean(child, "noisy OR");
    for (const auto& v : parents) require_boolean(v, "noisy OR");
    return expand_noisy_or(p->c, p->leak);
  }
  if (const auto* p = std::get_if<NoisyAndPotential>(&potential)) {
    arity(p->c.size(), "noisy AND");
    require_boolean(child, "noisy AND");
    for (const auto& v : parents) require_boolean(v, "noisy AND");
    return expand_noisy_and(p->c, p->s);
  }
  const auto& m = std::get<NoisyMaxPotential>(potential);
  arity(m.c.size(), "noisy MAX");
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (m.c[i].size() != parents[i].states.size()) {
      throw Error(errc::kShapeMismatch,
                  "noisy MAX matrix for parent '" + parents[i].name + "' has " +
                      std::to_string(m.c[i].size()) + " rows",
                  SourceLocation{child.name});
    }
    for (const auto& row : m.c[i]) {
      if (row.size() != child.states.size()) {
        throw Error(errc::kShapeMismatch,
                    "noisy MAX matrix for parent '" + parents[i].name +
                        "' does not match the states of '" + child.name + "'",
                    SourceLocation{child.name});
      }
    }
  }
  if (m.leak && m.leak->size() != child.states.size()) {
    throw Error(errc::kShapeMismatch, "noisy MAX leak does not match the states of '" +
                                          child.name + "'",
                SourceLocation{child.name});
  }
  if (parents.empty() && !m.leak) {
    throw Error(errc::kShapeMismatch, "noisy MAX without parents needs a leak distribution",
                SourceLocation{child.name});
  }
  return expand_noisy_max(m.c, m.leak);
}

std::size_t CptTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

double CptTree::lookup(const Assignment& assignment) const {
  std::size_t current = 0;
  while (!nodes_[current].leaf) {
    const auto& node = nodes_[current];
    auto state = assignment.get(node.variable);
    if (!state) {
      throw Error(errc::kUnboundLevel,
                  "assignment does not bind tree level variable #" + std::to_string(node.variable));
    }
    if (*state >= node.children.size()) {
      throw Error(errc::kStateOutOfRange, "state index out of range in tree lookup");
    }
    current = node.children[*state];
  }
  return nodes_[current].probability;
}

CptTree build_cpt_tree(std::span<const double> table, std::span<const VarId> parents,
                       std::span<const std::size_t> parent_cards, VarId child,
                       std::size_t child_card) {
  if (parents.size() != parent_cards.size()) {
    throw Error(errc::kShapeMismatch, "one cardinality per parent required");
  }
  std::size_t expected = child_card;
  for (std::size_t c : parent_cards) expected *= c;
  if (table.size() != expected || child_card == 0) {
    throw Error(errc::kTableSizeMismatch, "table has " + std::to_string(table.size()) +
                                              " values, expected " + std::to_string(expected));
  }
  CptTree tree;
  tree.levels_.assign(parents.begin(), parents.end());
  tree.levels_.push_back(child);
  std::vector<std::size_t> cards(parent_cards.begin(), parent_cards.end());
  cards.push_back(child_card);

  // Depth-first construction; `offset`/`stride` track the flat index of the
  // path so far (parent p at level k contributes child_card * prod(cards<k)).
  std::function<std::size_t(std::size_t, std::size_t, std::size_t)> build =
      [&](std::size_t level, std::size_t offset, std::size_t stride) -> std::size_t {
    const std::size_t id = tree.nodes_.size();
    tree.nodes_.push_back(CptTree::Node{tree.levels_[level], {}, 0.0, false});
    const bool child_level = level + 1 == tree.levels_.size();
    for (std::size_t s = 0; s < cards[level]; ++s) {
      std::size_t next;
      if (child_level) {
        next = tree.nodes_.size();
        tree.nodes_.push_back(CptTree::Node{0, {}, table[offset + s], true});
      } else {
        next = build(level + 1, offset + s * stride, stride * cards[level]);
      }
      tree.nodes_[id].children.push_back(next);
    }
    return id;
  };
  build(0, 0, child_card);
  return tree;
}

CptTree build_cpt_tree(const BayesianNetwork& net, VarId v) {
  std::vector<std::size_t> cards;
  for (VarId p : net.parents(v)) cards.push_back(net.cardinality(p));
  return build_cpt_tree(net.cpt(v), net.parents(v), cards, v, net.cardinality(v));
}

double cpt_tree_lookup(const CptTree& tree, const Assignment& assignment) {
  return tree.lookup(assignment);
}

}  // namespace bnkit
