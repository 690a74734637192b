#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "bnkit/factor_graph.hpp"
#include "bnkit/model.hpp"

namespace bnkit::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Per-variable observed state (nullopt when hidden).
std::vector<std::optional<std::size_t>> observed_states(const BayesianNetwork& net,
                                                        const Assignment& evidence);

/// Sum-product factor-to-variable message over edge `target` of factor f,
/// using the variable-to-factor messages `v2f` indexed by edge id.
std::vector<double> factor_message(const FactorGraph& fg, std::size_t target,
                                   const std::vector<std::vector<double>>& v2f);

/// Variable-to-factor message over edge `target`: product of the other
/// incoming factor messages, restricted to the observed state if any.
std::vector<double> variable_message(const FactorGraph& fg, std::size_t target,
                                     const std::vector<std::vector<double>>& f2v,
                                     std::optional<std::size_t> observed);

/// Scales to unit sum; returns false when the vector sums to zero.
bool normalize_in_place(std::vector<double>& values);

/// Normalized product of all incoming factor messages at v.
Distribution belief(const FactorGraph& fg, VarId v, const std::vector<std::vector<double>>& f2v,
                    std::optional<std::size_t> observed);

}  // namespace bnkit::detail
