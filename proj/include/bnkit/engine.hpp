#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnkit/approx.hpp"
#include "bnkit/exact.hpp"
#include "bnkit/model.hpp"
#include "bnkit/query.hpp"

namespace bnkit {

enum class EngineId { Enumeration, SumProduct, JunctionTree, Lbp, Direct, Rejection,
                      LikelihoodWeighting, Gibbs, Vmp };

/// Short identifiers used on the command line: enum, sumprod, jt, lbp,
/// direct, reject, lw, gibbs, vmp.
std::string_view engine_name(EngineId id);
/// Throws unknown-engine.
EngineId parse_engine(std::string_view name);
const std::vector<EngineId>& all_engines();
bool is_exact(EngineId id);

struct EngineConfig {
  LbpConfig lbp;
  SamplerConfig sampler;
  VmpConfig vmp;
};

/// Runs one engine on one query. A junction tree, when needed, is built on
/// first use and reused for later queries on the same network.
class InferenceEngine {
 public:
  InferenceEngine(const BayesianNetwork& net, EngineId id, EngineConfig cfg = {});

  EngineId id() const { return id_; }
  QueryResult query(const Assignment& evidence) const;

 private:
  const BayesianNetwork& net_;
  EngineId id_;
  EngineConfig cfg_;
  mutable std::shared_ptr<const JunctionTree> jt_;
};

QueryResult run_engine(const BayesianNetwork& net, EngineId id, const Assignment& evidence,
                       const EngineConfig& cfg = {});

/// JSON form keyed by variable and state names, in declaration order.
/// Wall time is written only when `timing` is set, so reruns stay
/// byte-identical by default.
std::string query_result_to_json(const QueryResult& result, const BayesianNetwork& net,
                                 bool timing = false);
/// Inverse of query_result_to_json. Throws invalid-value on bad input.
QueryResult query_result_from_json(std::string_view json, const BayesianNetwork& net);

}  // namespace bnkit
