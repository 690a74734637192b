#include "bnkit/engine.hpp"

#include <array>
#include <utility>

#include "json.hpp"

namespace bnkit {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::pair<EngineId, std::string_view>, 9> kNames{{
    {EngineId::Enumeration, "enum"},
    {EngineId::SumProduct, "sumprod"},
    {EngineId::JunctionTree, "jt"},
    {EngineId::Lbp, "lbp"},
    {EngineId::Direct, "direct"},
    {EngineId::Rejection, "reject"},
    {EngineId::LikelihoodWeighting, "lw"},
    {EngineId::Gibbs, "gibbs"},
    {EngineId::Vmp, "vmp"},
}};

}  // namespace

std::string_view engine_name(EngineId id) {
  for (const auto& [e, name] : kNames) {
    if (e == id) return name;
  }
  return "unknown";
}

EngineId parse_engine(std::string_view name) {
  for (const auto& [e, n] : kNames) {
    if (n == name) return e;
  }
  throw Error(errc::kUnknownEngine, "unknown engine '" + std::string(name) + "'");
}

const std::vector<EngineId>& all_engines() {
  static const std::vector<EngineId> engines = [] {
    std::vector<EngineId> out;
    for (const auto& [e, n] : kNames) out.push_back(e);
    return out;
  }();
  return engines;
}

bool is_exact(EngineId id) {
  return id == EngineId::Enumeration || id == EngineId::SumProduct || id == EngineId::JunctionTree;
}

InferenceEngine::InferenceEngine(const BayesianNetwork& net, EngineId id, EngineConfig cfg)
    : net_(net), id_(id), cfg_(std::move(cfg)) {}

QueryResult InferenceEngine::query(const Assignment& evidence) const {
  switch (id_) {
    case EngineId::Enumeration:
      return enumeration_query(net_, evidence);
    case EngineId::SumProduct:
      return sum_product_polytree(net_, evidence);
    case EngineId::JunctionTree:
      if (!jt_) jt_ = std::make_shared<const JunctionTree>(build_junction_tree(net_));
      return junction_tree_propagate(net_, *jt_, evidence);
    case EngineId::Lbp:
      return loopy_bp(net_, evidence, cfg_.lbp);
    case EngineId::Direct:
      return direct_sampling_query(net_, evidence, cfg_.sampler);
    case EngineId::Rejection:
      return rejection_sampling(net_, evidence, cfg_.sampler);
    case EngineId::LikelihoodWeighting:
      return likelihood_weighting(net_, evidence, cfg_.sampler);
    case EngineId::Gibbs:
      return gibbs_sampling(net_, evidence, cfg_.sampler);
    case EngineId::Vmp:
      return vmp_query(net_, evidence, cfg_.vmp).query;
  }
  throw Error(errc::kUnknownEngine, "unknown engine");
}

QueryResult run_engine(const BayesianNetwork& net, EngineId id, const Assignment& evidence,
                       const EngineConfig& cfg) {
  return InferenceEngine(net, id, cfg).query(evidence);
}

std::string query_result_to_json(const QueryResult& result, const BayesianNetwork& net,
                                 bool timing) {
  Json out;
  const auto& d = result.diagnostics;
  out["engine"] = d.engine;
  if (result.evidence_probability) out["evidence_probability"] = *result.evidence_probability;
  Json diag;
  diag["iterations"] = d.iterations;
  diag["converged"] = d.converged;
  diag["messages"] = d.messages;
  diag["samples"] = d.samples;
  diag["accepted"] = d.accepted;
  if (d.acceptance_rate) diag["acceptance_rate"] = *d.acceptance_rate;
  diag["free_energy_trace"] = d.free_energy_trace;
  if (timing) diag["wall_time_ms"] = d.wall_time_ms;
  out["diagnostics"] = std::move(diag);
  Json post = Json::object();
  for (const auto& [v, dist] : result.posteriors) {
    const auto& var = net.variable(v);
    Json states = Json::object();
    for (std::size_t s = 0; s < var.cardinality(); ++s) states[var.states[s]] = dist.probabilities.at(s);
    post[var.name] = std::move(states);
  }
  out["posteriors"] = std::move(post);
  return out.dump(2) + "\n";
}

QueryResult query_result_from_json(std::string_view text, const BayesianNetwork& net) {
  QueryResult result;
  try {
    const Json in = Json::parse(text);
    auto& d = result.diagnostics;
    d.engine = in.at("engine").get<std::string>();
    if (in.contains("evidence_probability")) {
      result.evidence_probability = in.at("evidence_probability").get<double>();
    }
    const Json& diag = in.at("diagnostics");
    d.iterations = diag.at("iterations").get<std::size_t>();
    d.converged = diag.at("converged").get<bool>();
    d.messages = diag.at("messages").get<std::size_t>();
    d.samples = diag.at("samples").get<std::size_t>();
    d.accepted = diag.at("accepted").get<std::size_t>();
    if (diag.contains("acceptance_rate")) d.acceptance_rate = diag.at("acceptance_rate").get<double>();
    d.free_energy_trace = diag.at("free_energy_trace").get<std::vector<double>>();
    if (diag.contains("wall_time_ms")) d.wall_time_ms = diag.at("wall_time_ms").get<double>();
    for (const auto& [name, states] : in.at("posteriors").items()) {
      const VarId v = net.id(name);
      const auto& var = net.variable(v);
      Distribution dist{v, std::vector<double>(var.cardinality(), 0.0)};
      if (states.size() != var.cardinality()) {
        throw Error(errc::kInvalidValue, "posterior of '" + name + "' has the wrong state count");
      }
      for (const auto& [state, p] : states.items()) {
        auto s = var.state_index(state);
        if (!s) throw Error(errc::kUnknownState, "unknown state '" + state + "' of '" + name + "'");
        dist.probabilities[*s] = p.get<double>();
      }
      result.posteriors.emplace(v, std::move(dist));
    }
  } catch (const Json::exception& e) {
    throw Error(errc::kInvalidValue, std::string("bad query result JSON: ") + e.what());
  }
  return result;
}

}  // namespace bnkit
