#include <algorithm>
#include <cmath>

#include "bnkit/approx.hpp"
#include "internal.hpp"

namespace bnkit {

namespace {

// Mean-field bookkeeping: each CPT is a factor over (v, parents); q holds
// the current distribution of every variable (point mass when observed).
struct MeanField {
  const BayesianNetwork& net;
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> log_cpt;
  std::vector<std::vector<double>> zero_cpt;  // 1 where the entry was floored

  MeanField(const BayesianNetwork& n, double floor) : net(n) {
    log_cpt.resize(net.size());
    zero_cpt.resize(net.size());
    for (VarId v = 0; v < net.size(); ++v) {
      for (double p : net.cpt(v)) {
        log_cpt[v].push_back(std::log(std::max(p, floor)));
        zero_cpt[v].push_back(p > 0.0 ? 0.0 : 1.0);
      }
    }
  }

  std::vector<VarId> scope(VarId f) const {
    std::vector<VarId> s{f};
    s.insert(s.end(), net.parents(f).begin(), net.parents(f).end());
    return s;
  }

  // Calls fn(weight, table_index, states) over the scope of factor f, where
  // the weight is the product of q over all scope members except `skip`.
  template <typename Fn>
  void expect(VarId f, std::optional<VarId> skip, Fn&& fn) const {
    const auto vars = scope(f);
    std::vector<std::size_t> cards;
    for (VarId v : vars) cards.push_back(net.cardinality(v));
    std::size_t index = 0;
    for_each_configuration(cards, [&](const std::vector<std::size_t>& x) {
      double w = 1.0;
      for (std::size_t i = 0; i < vars.size() && w != 0.0; ++i) {
        if (skip && vars[i] == *skip) continue;
        w *= q[vars[i]][x[i]];
      }
      if (w != 0.0) fn(w, index, x);
      ++index;
    });
  }

  double expected_log_joint() const {
    double total = 0.0;
    for (VarId f = 0; f < net.size(); ++f) {
      expect(f, std::nullopt, [&](double w, std::size_t i, const auto&) { total += w * log_cpt[f][i]; });
    }
    return total;
  }

  double zero_mass() const {
    double total = 0.0;
    for (VarId f = 0; f < net.size(); ++f) {
      expect(f, std::nullopt, [&](double w, std::size_t i, const auto&) { total += w * zero_cpt[f][i]; });
    }
    return total;
  }

  double entropy(const std::vector<VarId>& hidden) const {
    double h = 0.0;
    for (VarId v : hidden) {
      for (double p : q[v]) {
        if (p > 0.0) h -= p * std::log(p);
      }
    }
    return h;
  }

  void update(VarId h) {
    std::vector<double> acc(net.cardinality(h), 0.0);
    std::vector<VarId> factors{h};
    factors.insert(factors.end(), net.children(h).begin(), net.children(h).end());
    for (VarId f : factors) {
      const auto vars = scope(f);
      const std::size_t pos =
          static_cast<std::size_t>(std::find(vars.begin(), vars.end(), h) - vars.begin());
      expect(f, h, [&](double w, std::size_t i, const std::vector<std::size_t>& x) {
        acc[x[pos]] += w * log_cpt[f][i];
      });
    }
    const double top = *std::max_element(acc.begin(), acc.end());
    double total = 0.0;
    for (double& a : acc) {
      a = std::exp(a - top);
      total += a;
    }
    for (double& a : acc) a /= total;
    q[h] = std::move(acc);
  }
};

}  // namespace

double free_energy(const BayesianNetwork& net, const Assignment& evidence,
                   const std::map<VarId, Distribution>& q, double log_floor) {
  net.require_valid();
  const auto observed = detail::observed_states(net, evidence);
  MeanField mf(net, log_floor);
  mf.q.resize(net.size());
  std::vector<VarId> hidden;
  for (VarId v = 0; v < net.size(); ++v) {
    if (observed[v]) {
      mf.q[v] = Distribution::point(v, net.cardinality(v), *observed[v]).probabilities;
    } else {
      mf.q[v] = q.at(v).probabilities;
      hidden.push_back(v);
    }
  }
  return mf.expected_log_joint() + mf.entropy(hidden);
}

VmpResult vmp_query(const BayesianNetwork& net, const Assignment& evidence, const VmpConfig& cfg) {
  detail::Stopwatch clock;
  net.require_valid();
  const auto observed = detail::observed_states(net, evidence);
  MeanField mf(net, cfg.log_floor);
  mf.q.resize(net.size());
  std::vector<VarId> hidden;
  for (VarId v : topological_order(net)) {
    const std::size_t card = net.cardinality(v);
    if (observed[v]) {
      mf.q[v] = Distribution::point(v, card, *observed[v]).probabilities;
    } else {
      mf.q[v].assign(card, 1.0 / static_cast<double>(card));
      hidden.push_back(v);
    }
  }

  VmpResult out;
  auto& trace = out.state.free_energy_trace;
  double previous = mf.expected_log_joint() + mf.entropy(hidden);
  bool converged = false;
  std::size_t sweeps = 0;
  while (sweeps < cfg.max_sweeps) {
    for (VarId h : hidden) mf.update(h);
    ++sweeps;
    const double current = mf.expected_log_joint() + mf.entropy(hidden);
    trace.push_back(current);
    if (hidden.empty() || std::abs(current - previous) < cfg.tolerance) {
      converged = true;
      break;
    }
    previous = current;
  }
  // Q concentrated on zero-probability configurations means no consistent
  // completion of the evidence was found.
  if (mf.zero_mass() >= 0.5) {
    throw Error(errc::kImpossibleEvidence, "evidence has zero probability");
  }

  auto& result = out.query;
  result.diagnostics.engine = "vmp";
  result.diagnostics.iterations = sweeps;
  result.diagnostics.converged = converged;
  result.diagnostics.free_energy_trace = trace;
  for (VarId v = 0; v < net.size(); ++v) {
    Distribution d{v, mf.q[v]};
    result.posteriors.emplace(v, d);
    if (!observed[v]) out.state.q.emplace(v, std::move(d));
  }
  result.diagnostics.wall_time_ms = clock.elapsed_ms();
  return out;
}

}  // namespace bnkit
