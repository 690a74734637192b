#include <algorithm>
#include <cmath>

#include "bnkit/approx.hpp"
#include "internal.hpp"

namespace bnkit {

namespace {

Error impossible() { return Error(errc::kImpossibleEvidence, "evidence has zero probability"); }

// Applies damping to a freshly computed (normalized) message and returns the
// undamped change against the previous value.
double blend(std::vector<double>& fresh, const std::vector<double>& previous, double damping) {
  double change = 0.0;
  for (std::size_t s = 0; s < fresh.size(); ++s) {
    change = std::max(change, std::abs(fresh[s] - previous[s]));
    fresh[s] = (1.0 - damping) * fresh[s] + damping * previous[s];
  }
  return change;
}

}  // namespace

LbpResult loopy_bp_detailed(const BayesianNetwork& net, const Assignment& evidence,
                            const LbpConfig& cfg) {
  if (!(cfg.damping >= 0.0 && cfg.damping < 1.0) || !(cfg.tolerance >= 0.0)) {
    throw Error(errc::kInvalidConfig, "damping must lie in [0, 1) and tolerance be non-negative");
  }
  detail::Stopwatch clock;
  const auto observed = detail::observed_states(net, evidence);
  const FactorGraph fg = to_factor_graph(net, RootStyle::Separate);
  const std::size_t edges = fg.edge_count();

  MessageSet msgs;
  msgs.factor_to_variable.resize(edges);
  msgs.variable_to_factor.resize(edges);
  for (std::size_t e = 0; e < edges; ++e) {
    const std::size_t card = fg.cardinality(fg.edge(e).variable);
    msgs.factor_to_variable[e].assign(card, 1.0 / static_cast<double>(card));
    msgs.variable_to_factor[e].assign(card, 1.0 / static_cast<double>(card));
  }
  auto& f2v = msgs.factor_to_variable;
  auto& v2f = msgs.variable_to_factor;

  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < cfg.max_iterations) {
    double change = 0.0;
    if (cfg.schedule == Schedule::Flooding) {
      auto next_f2v = f2v;
      auto next_v2f = v2f;
      for (std::size_t e = 0; e < edges; ++e) {
        next_f2v[e] = detail::factor_message(fg, e, v2f);
        if (!detail::normalize_in_place(next_f2v[e])) throw impossible();
        change = std::max(change, blend(next_f2v[e], f2v[e], cfg.damping));
        next_v2f[e] = detail::variable_message(fg, e, f2v, observed[fg.edge(e).variable]);
        if (!detail::normalize_in_place(next_v2f[e])) throw impossible();
        change = std::max(change, blend(next_v2f[e], v2f[e], cfg.damping));
      }
      f2v = std::move(next_f2v);
      v2f = std::move(next_v2f);
    } else {
      for (std::size_t e = 0; e < edges; ++e) {
        auto fresh = detail::factor_message(fg, e, v2f);
        if (!detail::normalize_in_place(fresh)) throw impossible();
        change = std::max(change, blend(fresh, f2v[e], cfg.damping));
        f2v[e] = std::move(fresh);
        fresh = detail::variable_message(fg, e, f2v, observed[fg.edge(e).variable]);
        if (!detail::normalize_in_place(fresh)) throw impossible();
        change = std::max(change, blend(fresh, v2f[e], cfg.damping));
        v2f[e] = std::move(fresh);
      }
    }
    ++iterations;
    if (change < cfg.tolerance) {
      converged = true;
      break;
    }
  }

  LbpResult out;
  auto& result = out.query;
  result.diagnostics.engine = "lbp";
  result.diagnostics.iterations = iterations;
  result.diagnostics.converged = converged;
  result.diagnostics.messages = iterations * 2 * edges;
  for (VarId v = 0; v < fg.variable_count(); ++v) {
    result.posteriors.emplace(v, detail::belief(fg, v, f2v, observed[v]));
  }
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  out.messages = std::move(msgs);
  return out;
}

QueryResult loopy_bp(const BayesianNetwork& net, const Assignment& evidence, const LbpConfig& cfg) {
  return loopy_bp_detailed(net, evidence, cfg).query;
}

double lbp_residual(const FactorGraph& fg, const BayesianNetwork& net, const Assignment& evidence,
                    const MessageSet& messages) {
  const auto observed = detail::observed_states(net, evidence);
  double worst = 0.0;
  for (std::size_t e = 0; e < fg.edge_count(); ++e) {
    auto f = detail::factor_message(fg, e, messages.variable_to_factor);
    if (!detail::normalize_in_place(f)) throw impossible();
    auto v = detail::variable_message(fg, e, messages.factor_to_variable,
                                      observed[fg.edge(e).variable]);
    if (!detail::normalize_in_place(v)) throw impossible();
    for (std::size_t s = 0; s < f.size(); ++s) {
      worst = std::max(worst, std::abs(f[s] - messages.factor_to_variable[e][s]));
      worst = std::max(worst, std::abs(v[s] - messages.variable_to_factor[e][s]));
    }
  }
  return worst;
}

}  // namespace bnkit
