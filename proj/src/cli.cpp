#include "bnkit/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "bnkit/approx.hpp"
#include "bnkit/engine.hpp"
#include "bnkit/evaluation.hpp"
#include "bnkit/knowledge_io.hpp"

namespace bnkit {

namespace {

bool is_usage_code(const std::string& code) {
  static const std::set<std::string> usage{
      errc::kMalformedXml,    errc::kUnknownElement,   errc::kUnknownAttribute,
      errc::kMissingAttribute, errc::kMissingElement,  errc::kInvalidValue,
      errc::kDanglingLink,    errc::kLinkMismatch,     errc::kDuplicatePotential,
      errc::kMissingPotential, errc::kUnsupportedVersion, errc::kIoError,
      errc::kUnknownEngine,   errc::kUnknownVariable,  errc::kUnknownState,
      errc::kOverlappingSets, errc::kInvalidConfig,    errc::kInvalidPlan,
      errc::kUnknownFixture,  errc::kDuplicateVariable, errc::kDuplicateState,
      errc::kQueryObserved,
  };
  return usage.count(code) != 0;
}

void print_finding(std::ostream& os, const char* kind, const Finding& f) {
  os << kind << ": " << f.code << ": " << f.message;
  const std::string loc = f.location.to_string();
  if (!loc.empty()) os << " (" << loc << ")";
  os << '\n';
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BNKIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(errc::kInvalidConfig, "BNKIT_SEED must be an unsigned integer");
    }
  }
  return 0;
}

/// Loads a model; structural problems are usage errors, validation errors
/// are domain errors. Both are reported on `err`.
struct Loaded {
  std::optional<ModelDocument> doc;
  int status = kExitOk;
};

Loaded load(const std::string& path, std::ostream& err) {
  Loaded out;
  ParseOutcome outcome = check_model(read_text_file(path));
  for (const auto& f : outcome.report.errors) print_finding(err, "error", f);
  if (!outcome.document) {
    out.status = kExitUsageError;
  } else if (!outcome.report.ok()) {
    out.status = kExitDomainError;
  } else {
    out.doc = std::move(outcome.document);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> split_bindings(const std::vector<std::string>& items) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : items) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw Error(errc::kInvalidValue, "evidence '" + item + "' must look like Name=state");
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

std::set<VarId> resolve_set(const BayesianNetwork& net, const std::vector<std::string>& names) {
  std::set<VarId> out;
  for (const auto& n : names) {
    if (!n.empty()) out.insert(net.id(n));
  }
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

struct QueryFlags {
  std::string file;
  std::vector<std::string> evidence;
  std::vector<std::string> targets;
  std::string engine = "jt";
  std::optional<std::size_t> iterations;
  std::optional<double> tolerance;
  std::string schedule = "sequential";
  double damping = 0.0;
  std::size_t samples = 10000;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> burn_in;
  std::string format = "table";
  std::string output;
  bool timing = false;
};

EngineConfig engine_config(const QueryFlags& f) {
  EngineConfig cfg;
  if (f.iterations) {
    cfg.lbp.max_iterations = *f.iterations;
    cfg.vmp.max_sweeps = *f.iterations;
  }
  if (f.tolerance) {
    cfg.lbp.tolerance = *f.tolerance;
    cfg.vmp.tolerance = *f.tolerance;
  }
  if (f.schedule == "flooding") {
    cfg.lbp.schedule = Schedule::Flooding;
  } else if (f.schedule != "sequential") {
    throw Error(errc::kInvalidConfig, "schedule must be sequential or flooding");
  }
  cfg.lbp.damping = f.damping;
  cfg.sampler.sample_count = f.samples;
  cfg.sampler.seed = f.seed ? *f.seed : default_seed();
  cfg.sampler.burn_in = f.burn_in;
  return cfg;
}

std::string format_table(const QueryResult& r, const BayesianNetwork& net) {
  std::ostringstream os;
  for (const auto& [v, d] : r.posteriors) {
    const auto& var = net.variable(v);
    os << var.name << ':';
    for (std::size_t s = 0; s < var.cardinality(); ++s) {
      os << ' ' << var.states[s] << '=' << std::setprecision(6) << std::fixed << d[s];
    }
    os << '\n';
  }
  os.unsetf(std::ios::floatfield);
  if (r.evidence_probability) os << "P(e) = " << std::setprecision(10) << *r.evidence_probability << '\n';
  const auto& dg = r.diagnostics;
  os << "engine=" << dg.engine << " iterations=" << dg.iterations
     << " converged=" << (dg.converged ? "true" : "false");
  if (dg.samples) os << " samples=" << dg.samples;
  if (dg.accepted) os << " accepted=" << dg.accepted;
  if (dg.acceptance_rate) os << " acceptance=" << *dg.acceptance_rate;
  if (dg.messages) os << " messages=" << dg.messages;
  os << '\n';
  return os.str();
}

int cmd_validate(const std::string& file, const std::string& format, std::ostream& out) {
  ParseOutcome outcome = check_model(read_text_file(file));
  if (format == "json") {
    auto list = [](const std::vector<Finding>& fs) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& f : fs) {
        arr.push_back({{"code", f.code},
                       {"message", f.message},
                       {"variable", f.location.variable},
                       {"line", f.location.line},
                       {"column", f.location.column}});
      }
      return arr;
    };
    nlohmann::ordered_json j;
    j["ok"] = outcome.report.ok();
    j["errors"] = list(outcome.report.errors);
    j["warnings"] = list(outcome.report.warnings);
    out << j.dump(2) << '\n';
  } else {
    for (const auto& f : outcome.report.errors) print_finding(out, "error", f);
    for (const auto& f : outcome.report.warnings) print_finding(out, "warning", f);
    if (outcome.report.ok()) out << "ok\n";
  }
  if (!outcome.document) return kExitUsageError;
  return outcome.report.ok() ? kExitOk : kExitDomainError;
}

int cmd_query(const QueryFlags& f, std::ostream& out, std::ostream& err) {
  Loaded m = load(f.file, err);
  if (!m.doc) return m.status;
  const auto& net = m.doc->network;
  const EngineId id = parse_engine(f.engine);
  const Assignment evidence = make_assignment(net, split_bindings(f.evidence));
  QueryResult r = run_engine(net, id, evidence, engine_config(f));
  if (!f.targets.empty()) {
    std::map<VarId, Distribution> kept;
    for (VarId v : resolve_set(net, f.targets)) kept.emplace(v, r.posterior(v));
    r.posteriors = std::move(kept);
  }
  if (f.format == "json") {
    emit(query_result_to_json(r, net, f.timing), f.output, out);
  } else if (f.format == "table") {
    emit(format_table(r, net), f.output, out);
  } else {
    throw Error(errc::kInvalidConfig, "query format must be table or json");
  }
  return kExitOk;
}

int cmd_sample(const std::string& file, std::size_t n, std::optional<std::uint64_t> seed,
               const std::string& output, std::ostream& out, std::ostream& err) {
  Loaded m = load(file, err);
  if (!m.doc) return m.status;
  const auto& net = m.doc->network;
  SamplerConfig cfg;
  cfg.sample_count = n;
  cfg.seed = seed ? *seed : default_seed();
  std::string csv;
  for (VarId v = 0; v < net.size(); ++v) csv += (v ? "," : "") + net.variable(v).name;
  csv += '\n';
  for (const auto& s : direct_sample(net, cfg)) {
    for (VarId v = 0; v < net.size(); ++v) csv += (v ? "," : "") + net.variable(v).states[s[v]];
    csv += '\n';
  }
  emit(csv, output, out);
  return kExitOk;
}

struct EvaluateFlags {
  std::string file;
  std::vector<std::string> diagnoses;
  std::vector<std::string> characteristics;
  std::size_t per_diagnosis = 200;
  std::vector<std::string> generators{"jt"};
  std::vector<std::string> engines{"jt"};
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string output;
  std::string json_output;
};

int cmd_evaluate(const EvaluateFlags& f, std::ostream& out, std::ostream& err) {
  Loaded m = load(f.file, err);
  if (!m.doc) return m.status;
  EvaluationPlan plan;
  plan.model = std::move(*m.doc);
  plan.diagnosis_vars = resolve_variables(plan.model.network, f.diagnoses);
  plan.characteristic_vars = resolve_variables(plan.model.network, f.characteristics);
  plan.per_diagnosis_count = f.per_diagnosis;
  plan.generation_engines.clear();
  for (const auto& g : f.generators) plan.generation_engines.push_back(parse_engine(g));
  plan.classification_engines.clear();
  for (const auto& e : f.engines) plan.classification_engines.push_back(parse_engine(e));
  plan.seed = f.seed ? *f.seed : default_seed();
  const AccuracyReport report = run_evaluation(plan);
  if (f.format == "csv") {
    emit(report_to_csv(plan, report), f.output, out);
  } else if (f.format == "json") {
    emit(report_to_json(plan, report), f.output, out);
  } else {
    throw Error(errc::kInvalidConfig, "evaluate format must be csv or json");
  }
  if (!f.json_output.empty()) write_text_file(f.json_output, report_to_json(plan, report));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Bayesian network toolkit", "bnkit"};
  app.require_subcommand(1);

  std::string validate_file, validate_format = "table";
  auto* validate = app.add_subcommand("validate", "Check a .pgmx model and print its findings");
  validate->add_option("file", validate_file, "Model file")->required();
  validate->add_option("--format", validate_format, "table or json");

  QueryFlags q;
  auto* query = app.add_subcommand("query", "Posterior marginals under evidence");
  query->add_option("file", q.file, "Model file")->required();
  query->add_option("--evidence,-e", q.evidence, "Name=state bindings")->delimiter(',');
  query->add_option("--target,-t", q.targets, "Variables to report (default: all)")->delimiter(',');
  query->add_option("--engine", q.engine, "enum|sumprod|jt|lbp|direct|reject|lw|gibbs|vmp");
  query->add_option("--iterations", q.iterations, "LBP iterations / VMP sweeps");
  query->add_option("--tolerance", q.tolerance, "LBP message / VMP free-energy tolerance");
  query->add_option("--schedule", q.schedule, "LBP schedule: sequential or flooding");
  query->add_option("--damping", q.damping, "LBP damping in [0,1)");
  query->add_option("--samples,-n", q.samples, "Sample count (sweeps for gibbs)");
  query->add_option("--seed", q.seed, "RNG seed (default: BNKIT_SEED or 0)");
  query->add_option("--burn-in", q.burn_in, "Gibbs burn-in sweeps");
  query->add_option("--format", q.format, "table or json");
  query->add_option("--output,-o", q.output, "Write to file instead of stdout");
  query->add_flag("--timing", q.timing, "Include wall time in JSON output");

  std::string dsep_file;
  std::vector<std::string> xs, ys, given;
  auto* dsep = app.add_subcommand("dsep", "Test d-separation of X and Y given Z");
  dsep->add_option("file", dsep_file, "Model file")->required();
  dsep->add_option("--x", xs, "First set")->required()->delimiter(',');
  dsep->add_option("--y", ys, "Second set")->required()->delimiter(',');
  dsep->add_option("--given", given, "Conditioning set")->delimiter(',');

  std::string sample_file, sample_output;
  std::size_t sample_n = 1000;
  std::optional<std::uint64_t> sample_seed;
  auto* sample = app.add_subcommand("sample", "Draw ancestral samples as CSV");
  sample->add_option("file", sample_file, "Model file")->required();
  sample->add_option("-n,--samples", sample_n, "Number of samples");
  sample->add_option("--seed", sample_seed, "RNG seed (default: BNKIT_SEED or 0)");
  sample->add_option("--output,-o", sample_output, "Write to file instead of stdout");

  std::string convert_file, convert_output;
  bool expand = false;
  auto* convert = app.add_subcommand("convert", "Re-serialize a model");
  convert->add_option("file", convert_file, "Model file")->required();
  convert->add_flag("--expand", expand, "Write every potential as a flat table");
  convert->add_option("--output,-o", convert_output, "Write to file instead of stdout");

  EvaluateFlags ev;
  auto* evaluate = app.add_subcommand("evaluate", "Self-sampling classification accuracy");
  evaluate->add_option("file", ev.file, "Model file")->required();
  evaluate->add_option("--diagnoses", ev.diagnoses, "Diagnosis variables")->required()->delimiter(',');
  evaluate->add_option("--characteristics", ev.characteristics, "Observed characteristics")
      ->required()
      ->delimiter(',');
  evaluate->add_option("--per-diagnosis", ev.per_diagnosis, "Examples per diagnosis");
  evaluate->add_option("--gen-engine", ev.generators, "Generation engine(s)")->delimiter(',');
  evaluate->add_option("--engines", ev.engines, "Classification engines")->delimiter(',');
  evaluate->add_option("--seed", ev.seed, "RNG seed (default: BNKIT_SEED or 0)");
  evaluate->add_option("--format", ev.format, "csv or json");
  evaluate->add_option("--output,-o", ev.output, "Write to file instead of stdout");
  evaluate->add_option("--json-output", ev.json_output, "Also write the JSON report here");

  std::string fixture_name;
  auto* fixture = app.add_subcommand("fixture", "Print a bundled network (heart_attack, headache)");
  fixture->add_option("name", fixture_name, "Fixture name")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (*validate) return cmd_validate(validate_file, validate_format, out);
    if (*query) return cmd_query(q, out, err);
    if (*dsep) {
      Loaded m = load(dsep_file, err);
      if (!m.doc) return m.status;
      const auto& net = m.doc->network;
      const bool sep = d_separated(net, resolve_set(net, xs), resolve_set(net, ys), resolve_set(net, given));
      out << (sep ? "true" : "false") << '\n';
      return kExitOk;
    }
    if (*sample) return cmd_sample(sample_file, sample_n, sample_seed, sample_output, out, err);
    if (*convert) {
      Loaded m = load(convert_file, err);
      if (!m.doc) return m.status;
      emit(serialize_model(*m.doc, expand), convert_output, out);
      return kExitOk;
    }
    if (*evaluate) return cmd_evaluate(ev, out, err);
    if (*fixture) {
      out << fixture_source(fixture_name);
      return kExitOk;
    }
  } catch (const Error& e) {
    print_finding(err, "error", Finding{e.code(), e.what(), e.location()});
    return is_usage_code(e.code()) ? kExitUsageError : kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace bnkit
