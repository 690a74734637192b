#include "bnkit/evaluation.hpp"

#include <algorithm>
#include <set>

#include "bnkit/canonical.hpp"
#include "bnkit/rng.hpp"
#include "json.hpp"

namespace bnkit {

namespace detail {
extern const std::string_view kHeartAttackFixture;
extern const std::string_view kHeadacheFixture;
}  // namespace detail

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kFalse = 0;
constexpr std::size_t kTrue = 1;

std::string names(const BayesianNetwork& net, VarId v) { return net.variable(v).name; }

Json name_list(const BayesianNetwork& net, const std::vector<VarId>& vars) {
  Json out = Json::array();
  for (VarId v : vars) out.push_back(net.variable(v).name);
  return out;
}

Json engine_list(const std::vector<EngineId>& engines) {
  Json out = Json::array();
  for (EngineId e : engines) out.push_back(std::string(engine_name(e)));
  return out;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"heart_attack", "headache"};
  return names;
}

std::string_view fixture_source(std::string_view name) {
  if (name == "heart_attack") return detail::kHeartAttackFixture;
  if (name == "headache") return detail::kHeadacheFixture;
  throw Error(errc::kUnknownFixture, "unknown fixture '" + std::string(name) + "'");
}

ModelDocument load_fixture(std::string_view name) { return parse_model(fixture_source(name)); }

std::vector<VarId> resolve_variables(const BayesianNetwork& net,
                                     const std::vector<std::string>& names) {
  std::vector<VarId> out;
  for (const auto& n : names) out.push_back(net.id(n));
  return out;
}

void validate_plan(const EvaluationPlan& plan) {
  const auto& net = plan.model.network;
  net.require_valid();
  if (plan.diagnosis_vars.empty() || plan.characteristic_vars.empty()) {
    throw Error(errc::kInvalidPlan, "diagnosis and characteristic sets must be non-empty");
  }
  if (plan.generation_engines.empty() || plan.classification_engines.empty()) {
    throw Error(errc::kInvalidPlan, "at least one generation and one classification engine needed");
  }
  std::set<VarId> seen;
  for (VarId v : plan.diagnosis_vars) {
    if (v >= net.size()) throw Error(errc::kUnknownVariable, "diagnosis index out of range");
    if (!is_boolean(net.variable(v))) {
      throw Error(errc::kInvalidPlan, "diagnosis '" + names(net, v) + "' must have states false,true");
    }
    if (!seen.insert(v).second) throw Error(errc::kInvalidPlan, "diagnosis listed twice");
  }
  for (VarId v : plan.characteristic_vars) {
    if (v >= net.size()) throw Error(errc::kUnknownVariable, "characteristic index out of range");
    if (!seen.insert(v).second) {
      throw Error(errc::kInvalidPlan, "'" + names(net, v) + "' is listed twice or as both kinds");
    }
  }
}

std::vector<LabeledExample> generate_examples(const EvaluationPlan& plan, EngineId generator) {
  validate_plan(plan);
  const auto& net = plan.model.network;
  const InferenceEngine engine(net, generator, plan.engine_config);
  std::vector<LabeledExample> out;
  out.reserve(plan.diagnosis_vars.size() * plan.per_diagnosis_count);
  if (plan.per_diagnosis_count == 0) return out;
  for (std::size_t di = 0; di < plan.diagnosis_vars.size(); ++di) {
    const VarId target = plan.diagnosis_vars[di];
    Assignment forced;
    for (VarId d : plan.diagnosis_vars) forced.bind(d, d == target ? kTrue : kFalse);
    QueryResult marginals;
    try {
      marginals = engine.query(forced);
    } catch (const Error& e) {
      throw Error(e.code(), "cannot generate examples for '" + names(net, target) + "': " + e.what(),
                  SourceLocation{names(net, target), 0, 0});
    }
    for (std::size_t k = 0; k < plan.per_diagnosis_count; ++k) {
      LabeledExample ex;
      ex.example_id = di * plan.per_diagnosis_count + k;
      ex.expected_diagnosis = target;
      ex.generator = generator;
      Rng rng = Rng::stream(plan.seed, ex.example_id);
      for (VarId c : plan.characteristic_vars) {
        const auto& p = marginals.posterior(c).probabilities;
        std::size_t s = rng.categorical(p);
        if (s == p.size()) {
          throw Error(errc::kImpossibleEvidence, "characteristic '" + names(net, c) + "' has no mass");
        }
        ex.observations.bind(c, s);
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

const AccuracyRow* AccuracyReport::find(VarId diagnosis, EngineId sampler, EngineId engine) const {
  for (const auto& r : rows) {
    if (r.diagnosis == diagnosis && r.sampler == sampler && r.engine == engine) return &r;
  }
  return nullptr;
}

AccuracyReport classify_examples(const EvaluationPlan& plan,
                                 const std::vector<LabeledExample>& examples) {
  validate_plan(plan);
  const auto& net = plan.model.network;
  AccuracyReport report;
  std::vector<EngineId> samplers;
  for (const auto& ex : examples) {
    if (std::find(samplers.begin(), samplers.end(), ex.generator) == samplers.end()) {
      samplers.push_back(ex.generator);
    }
  }
  for (EngineId sampler : samplers) {
    for (VarId d : plan.diagnosis_vars) {
      for (EngineId e : plan.classification_engines) report.rows.push_back(AccuracyRow{d, sampler, e, 0, 0});
    }
  }
  auto row = [&](VarId d, EngineId s, EngineId e) -> AccuracyRow& {
    for (auto& r : report.rows) {
      if (r.diagnosis == d && r.sampler == s && r.engine == e) return r;
    }
    throw Error(errc::kInvalidPlan, "example diagnosis is not part of the plan");
  };

  for (EngineId e : plan.classification_engines) {
    const InferenceEngine engine(net, e, plan.engine_config);
    for (const auto& ex : examples) {
      ExampleOutcome outcome;
      outcome.example_id = ex.example_id;
      outcome.sampler = ex.generator;
      outcome.engine = e;
      outcome.expected = ex.expected_diagnosis;
      AccuracyRow& r = row(ex.expected_diagnosis, ex.generator, e);
      ++r.total;
      try {
        const QueryResult q = engine.query(ex.observations);
        std::size_t best = 0;
        for (std::size_t i = 0; i < plan.diagnosis_vars.size(); ++i) {
          outcome.posterior.push_back(q.posterior(plan.diagnosis_vars[i])[kTrue]);
          if (outcome.posterior[i] > outcome.posterior[best]) best = i;
        }
        outcome.chosen = plan.diagnosis_vars[best];
        if (*outcome.chosen == ex.expected_diagnosis) {
          ++r.correct;
        } else {
          const auto expected_at = static_cast<std::size_t>(
              std::find(plan.diagnosis_vars.begin(), plan.diagnosis_vars.end(), ex.expected_diagnosis) -
              plan.diagnosis_vars.begin());
          report.misclassifications.push_back(Misclassification{
              ex.example_id, ex.generator, e, ex.expected_diagnosis, *outcome.chosen,
              outcome.posterior[best] - outcome.posterior[expected_at]});
        }
      } catch (const Error& err) {
        outcome.error = err.code();
      }
      report.outcomes.push_back(std::move(outcome));
    }
  }
  return report;
}

AccuracyReport run_evaluation(const EvaluationPlan& plan) {
  AccuracyReport all;
  for (EngineId gen : plan.generation_engines) {
    AccuracyReport part = classify_examples(plan, generate_examples(plan, gen));
    all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
    all.outcomes.insert(all.outcomes.end(), part.outcomes.begin(), part.outcomes.end());
    all.misclassifications.insert(all.misclassifications.end(), part.misclassifications.begin(),
                                  part.misclassifications.end());
  }
  return all;
}

std::string report_to_csv(const EvaluationPlan& plan, const AccuracyReport& report) {
  const auto& net = plan.model.network;
  std::string out = "diagnosis,sampler,engine,correct,total,percent\n";
  for (const auto& r : report.rows) {
    out += names(net, r.diagnosis) + ',' + std::string(engine_name(r.sampler)) + ',' +
           std::string(engine_name(r.engine)) + ',' + std::to_string(r.correct) + ',' +
           std::to_string(r.total) + ',' + format_number(r.percent()) + '\n';
  }
  return out;
}

std::string report_to_json(const EvaluationPlan& plan, const AccuracyReport& report) {
  const auto& net = plan.model.network;
  Json meta;
  meta["fixture_version"] = plan.model.property("fixtureVersion").value_or("");
  meta["seed"] = plan.seed;
  meta["per_diagnosis_count"] = plan.per_diagnosis_count;
  meta["forced_diagnoses"] = name_list(net, plan.diagnosis_vars);
  meta["characteristics"] = name_list(net, plan.characteristic_vars);
  std::vector<VarId> latent;
  for (VarId v = 0; v < net.size(); ++v) {
    const bool listed =
        std::find(plan.diagnosis_vars.begin(), plan.diagnosis_vars.end(), v) != plan.diagnosis_vars.end() ||
        std::find(plan.characteristic_vars.begin(), plan.characteristic_vars.end(), v) !=
            plan.characteristic_vars.end();
    if (!listed) latent.push_back(v);
  }
  meta["latent_variables"] = name_list(net, latent);
  meta["generation_engines"] = engine_list(plan.generation_engines);
  meta["classification_engines"] = engine_list(plan.classification_engines);

  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"diagnosis", names(net, r.diagnosis)},
                        {"sampler", engine_name(r.sampler)},
                        {"engine", engine_name(r.engine)},
                        {"correct", r.correct},
                        {"total", r.total},
                        {"percent", r.percent()}});
  }
  Json matrix = Json::array();
  for (const auto& o : report.outcomes) {
    Json entry{{"example", o.example_id},
               {"sampler", engine_name(o.sampler)},
               {"engine", engine_name(o.engine)},
               {"expected", names(net, o.expected)}};
    entry["chosen"] = o.chosen ? Json(names(net, *o.chosen)) : Json(nullptr);
    Json post = Json::object();
    for (std::size_t i = 0; i < o.posterior.size(); ++i) {
      post[names(net, plan.diagnosis_vars[i])] = o.posterior[i];
    }
    entry["posterior"] = std::move(post);
    if (o.error) entry["error"] = *o.error;
    matrix.push_back(std::move(entry));
  }
  Json wrong = Json::array();
  for (const auto& m : report.misclassifications) {
    wrong.push_back(Json{{"example", m.example_id},
                         {"sampler", engine_name(m.sampler)},
                         {"engine", engine_name(m.engine)},
                         {"expected", names(net, m.expected)},
                         {"chosen", names(net, m.chosen)},
                         {"gap", m.gap}});
  }
  Json out;
  out["metadata"] = std::move(meta);
  out["rows"] = std::move(rows);
  out["posteriors"] = std::move(matrix);
  out["misclassifications"] = std::move(wrong);
  return out.dump(2) + "\n";
}

}  // namespace bnkit
