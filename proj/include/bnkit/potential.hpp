#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace bnkit {

/// Flat conditional probability table. The child varies fastest, then the
/// parents in declared order, each slower than the previous one.
struct TablePotential {
  std::vector<double> values;
  bool operator==(const TablePotential&) const = default;
};

enum class DeterministicFn { Not, Or, And, Minus, Inv, Max, Min };

std::string_view to_string(DeterministicFn fn);
std::optional<DeterministicFn> parse_deterministic_fn(std::string_view name);

struct FunctionPotential {
  DeterministicFn fn = DeterministicFn::Or;
  bool operator==(const FunctionPotential&) const = default;
};

/// Noisy (or leaky) OR. c[i] is the probability that parent i alone produces
/// the effect; the leak acts as an extra cause that is always present.
struct NoisyOrPotential {
  std::vector<double> c;
  std::optional<double> leak;
  bool operator==(const NoisyOrPotential&) const = default;
};

/// Rows are parent states, columns are child states (lowest first).
using StateMatrix = std::vector<std::vector<double>>;

struct NoisyMaxPotential {
  std::vector<StateMatrix> c;
  std::optional<std::vector<double>> leak;
  bool operator==(const NoisyMaxPotential&) const = default;
};

/// Noisy AND: c[i] = P(+z_i | +x_i), s[i] = P(+z_i | not x_i).
struct NoisyAndPotential {
  std::vector<double> c;
  std::vector<double> s;
  bool operator==(const NoisyAndPotential&) const = default;
};

using Potential = std::variant<TablePotential, FunctionPotential, NoisyOrPotential,
                               NoisyMaxPotential, NoisyAndPotential>;

std::string_view potential_kind(const Potential& p);

}  // namespace bnkit
