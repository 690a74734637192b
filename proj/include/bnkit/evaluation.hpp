#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnkit/engine.hpp"
#include "bnkit/knowledge_io.hpp"

namespace bnkit {

/// Names of the networks shipped with the library: heart_attack, headache.
const std::vector<std::string>& fixture_names();
/// Raw .pgmx text of a shipped network. Throws unknown-fixture.
std::string_view fixture_source(std::string_view name);
ModelDocument load_fixture(std::string_view name);

/// Self-sampling quality check: examples are generated from the network with
/// one diagnosis forced true, then classified again by each engine.
struct EvaluationPlan {
  ModelDocument model;
  std::vector<VarId> diagnosis_vars;
  std::vector<VarId> characteristic_vars;
  std::size_t per_diagnosis_count = 200;
  std::vector<EngineId> generation_engines{EngineId::JunctionTree};
  std::vector<EngineId> classification_engines{EngineId::JunctionTree};
  std::uint64_t seed = 0;
  EngineConfig engine_config;
};

/// Resolves variable names against plan.model. Throws unknown-variable.
std::vector<VarId> resolve_variables(const BayesianNetwork& net,
                                     const std::vector<std::string>& names);

/// Throws invalid-plan when the sets overlap, are empty, or a diagnosis has
/// no "true" state.
void validate_plan(const EvaluationPlan& plan);

struct LabeledExample {
  std::size_t example_id = 0;
  VarId expected_diagnosis = 0;
  EngineId generator = EngineId::JunctionTree;
  Assignment observations;
};

/// Examples for every diagnosis, per_diagnosis_count each. Characteristic
/// values are drawn independently from their marginals given the forced
/// diagnoses, using Rng::stream(seed, example_id).
std::vector<LabeledExample> generate_examples(const EvaluationPlan& plan, EngineId generator);

struct AccuracyRow {
  VarId diagnosis = 0;
  EngineId sampler = EngineId::JunctionTree;
  EngineId engine = EngineId::JunctionTree;
  std::size_t correct = 0;
  std::size_t total = 0;

  double percent() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total); }
};

struct ExampleOutcome {
  std::size_t example_id = 0;
  EngineId sampler = EngineId::JunctionTree;
  EngineId engine = EngineId::JunctionTree;
  VarId expected = 0;
  std::optional<VarId> chosen;
  /// P(diagnosis = true | observations), in plan.diagnosis_vars order.
  std::vector<double> posterior;
  /// Error code when the engine failed on this example.
  std::optional<std::string> error;
};

struct Misclassification {
  std::size_t example_id = 0;
  EngineId sampler = EngineId::JunctionTree;
  EngineId engine = EngineId::JunctionTree;
  VarId expected = 0;
  VarId chosen = 0;
  /// P(chosen) - P(expected).
  double gap = 0.0;
};

struct AccuracyReport {
  std::vector<AccuracyRow> rows;
  std::vector<ExampleOutcome> outcomes;
  std::vector<Misclassification> misclassifications;

  const AccuracyRow* find(VarId diagnosis, EngineId sampler, EngineId engine) const;
};

/// Classifies `examples` with every classification engine; rows are added
/// per (diagnosis, sampler, engine).
AccuracyReport classify_examples(const EvaluationPlan& plan,
                                 const std::vector<LabeledExample>& examples);

/// Generates with every generation engine and classifies with every
/// classification engine.
AccuracyReport run_evaluation(const EvaluationPlan& plan);

/// CSV with header diagnosis,sampler,engine,correct,total,percent.
std::string report_to_csv(const EvaluationPlan& plan, const AccuracyReport& report);
/// Rows, posterior matrix, misclassifications and plan metadata.
std::string report_to_json(const EvaluationPlan& plan, const AccuracyReport& report);

}  // namespace bnkit
