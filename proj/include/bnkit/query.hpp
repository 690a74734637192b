#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bnkit/model.hpp"

namespace bnkit {

struct Diagnostics {
  std::string engine;
  std::size_t iterations = 0;
  bool converged = true;
  double wall_time_ms = 0.0;
  std::size_t messages = 0;
  std::size_t samples = 0;
  std::size_t accepted = 0;
  /// Accepted fraction (rejection) or effective sample share (weighting).
  std::optional<double> acceptance_rate;
  std::vector<double> free_energy_trace;

  bool operator==(const Diagnostics&) const = default;
};

struct QueryResult {
  std::map<VarId, Distribution> posteriors;
  std::optional<double> evidence_probability;
  Diagnostics diagnostics;

  const Distribution& posterior(VarId v) const;
};

bool operator==(const Distribution& a, const Distribution& b);

/// Largest absolute difference over all shared posteriors.
double max_posterior_difference(const QueryResult& a, const QueryResult& b);

}  // namespace bnkit
