#include "bnkit/knowledge_io.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace bnkit {

namespace {

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<XmlNode>> children;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct DomBuilder {
  XML_Parser parser = nullptr;
  std::unique_ptr<XmlNode> root;
  std::vector<XmlNode*> stack;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* b = static_cast<DomBuilder*>(data);
  auto node = std::make_unique<XmlNode>();
  node->name = name;
  node->line = XML_GetCurrentLineNumber(b->parser);
  node->column = XML_GetCurrentColumnNumber(b->parser) + 1;
  for (std::size_t i = 0; atts[i] != nullptr; i += 2) node->attributes.emplace_back(atts[i], atts[i + 1]);
  XmlNode* raw = node.get();
  if (b->stack.empty()) {
    b->root = std::move(node);
  } else {
    b->stack.back()->children.push_back(std::move(node));
  }
  b->stack.push_back(raw);
}

void XMLCALL on_end(void* data, const XML_Char*) { static_cast<DomBuilder*>(data)->stack.pop_back(); }

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<DomBuilder*>(data);
  if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

std::unique_ptr<XmlNode> parse_dom(std::string_view xml) {
  DomBuilder b;
  b.parser = XML_ParserCreate("UTF-8");
  if (b.parser == nullptr) throw Error(errc::kMalformedXml, "cannot create XML parser");
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, on_start, on_end);
  XML_SetCharacterDataHandler(b.parser, on_text);
  const auto status = XML_Parse(b.parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    SourceLocation loc{"", XML_GetCurrentLineNumber(b.parser),
                       XML_GetCurrentColumnNumber(b.parser) + 1};
    std::string msg = XML_ErrorString(XML_GetErrorCode(b.parser));
    XML_ParserFree(b.parser);
    throw Error(errc::kMalformedXml, "malformed XML: " + msg, loc);
  }
  XML_ParserFree(b.parser);
  return std::move(b.root);
}

SourceLocation where(const XmlNode& n, std::string variable = {}) {
  return SourceLocation{std::move(variable), n.line, n.column};
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

const std::string* attribute(const XmlNode& n, std::string_view key) {
  for (const auto& [k, v] : n.attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& required(const XmlNode& n, std::string_view key) {
  if (const auto* v = attribute(n, key)) return *v;
  throw Error(errc::kMissingAttribute,
              "<" + n.name + "> needs attribute '" + std::string(key) + "'", where(n));
}

void allow_attributes(const XmlNode& n, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : n.attributes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw Error(errc::kUnknownAttribute, "<" + n.name + "> has unknown attribute '" + k + "'",
                  where(n));
    }
  }
}

/// Checks child names against `allowed` and rejects stray text.
void allow_children(const XmlNode& n, std::initializer_list<std::string_view> allowed,
                    bool text_allowed = false) {
  for (const auto& c : n.children) {
    if (std::find(allowed.begin(), allowed.end(), c->name) == allowed.end()) {
      throw Error(errc::kUnknownElement, "unexpected <" + c->name + "> inside <" + n.name + ">",
                  where(*c));
    }
  }
  if (!text_allowed && !trim(n.text).empty()) {
    throw Error(errc::kInvalidValue, "unexpected text inside <" + n.name + ">", where(n));
  }
}

std::vector<const XmlNode*> children_named(const XmlNode& n, std::string_view name) {
  std::vector<const XmlNode*> out;
  for (const auto& c : n.children) {
    if (c->name == name) out.push_back(c.get());
  }
  return out;
}

const XmlNode* optional_child(const XmlNode& n, std::string_view name) {
  auto found = children_named(n, name);
  if (found.size() > 1) {
    throw Error(errc::kInvalidValue, "<" + n.name + "> repeats <" + std::string(name) + ">",
                where(*found[1]));
  }
  return found.empty() ? nullptr : found.front();
}

const XmlNode& required_child(const XmlNode& n, std::string_view name) {
  if (const auto* c = optional_child(n, name)) return *c;
  throw Error(errc::kMissingElement, "<" + n.name + "> needs <" + std::string(name) + ">",
              where(n));
}

std::vector<double> parse_values(const XmlNode& n) {
  allow_attributes(n, {});
  allow_children(n, {}, true);
  std::vector<double> out;
  std::istringstream in(n.text);
  std::string token;
  while (in >> token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw Error(errc::kInvalidValue, "'" + token + "' is not a number", where(n));
    }
    out.push_back(v);
  }
  return out;
}

bool parse_bool(const XmlNode& n, const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw Error(errc::kInvalidValue, "attribute '" + key + "' must be true or false", where(n));
}

double expect_scalar(const XmlNode& values, const std::string& variable) {
  auto v = parse_values(values);
  if (v.size() != 1) {
    throw Error(errc::kShapeMismatch, "expected exactly one value", where(values, variable));
  }
  return v[0];
}

struct VariableEntry {
  DiscreteVariable variable;
  const XmlNode* node = nullptr;
};

struct PotentialEntry {
  std::vector<std::string> parents;
  Potential potential;
  const XmlNode* node = nullptr;
  const XmlNode* values = nullptr;  // <Values> of a Table, for positions
};

class DocumentReader {
 public:
  ModelDocument read(const XmlNode& root, ValidationReport& report) {
    if (root.name != "ProbModelXML") {
      throw Error(errc::kUnknownElement, "root element must be <ProbModelXML>", where(root));
    }
    allow_attributes(root, {"formatVersion"});
    allow_children(root, {"ProbNet"});
    ModelDocument doc;
    doc.format_version = required(root, "formatVersion");
    if (doc.format_version != kFormatVersion) {
      throw Error(errc::kUnsupportedVersion,
                  "format version '" + doc.format_version + "' is not supported", where(root));
    }
    const XmlNode& net = required_child(root, "ProbNet");
    allow_attributes(net, {"type"});
    allow_children(net, {"Comment", "Properties", "Variables", "Links", "Potentials"});
    if (required(net, "type") != "BayesianNetwork") {
      throw Error(errc::kInvalidValue, "only BayesianNetwork models are supported", where(net));
    }
    if (const auto* c = optional_child(net, "Comment")) {
      allow_attributes(*c, {});
      allow_children(*c, {}, true);
      doc.provenance = trim(c->text);
    }
    if (const auto* props = optional_child(net, "Properties")) {
      allow_attributes(*props, {});
      allow_children(*props, {"Property"});
      for (const auto* p : children_named(*props, "Property")) {
        allow_attributes(*p, {"name", "value"});
        allow_children(*p, {});
        doc.properties.emplace_back(required(*p, "name"), required(*p, "value"));
      }
    }
    read_variables(required_child(net, "Variables"));
    if (const auto* links = optional_child(net, "Links")) read_links(*links);
    read_potentials(required_child(net, "Potentials"));
    doc.network = assemble(net, report);
    return doc;
  }

 private:
  std::vector<VariableEntry> variables_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::set<std::string>> link_parents_;
  std::map<std::string, PotentialEntry> potentials_;

  const VariableEntry& lookup(const XmlNode& n, const std::string& name, const char* code) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw Error(code, "unknown variable '" + name + "'", where(n, name));
    }
    return variables_[it->second];
  }

  void read_variables(const XmlNode& vars) {
    allow_attributes(vars, {});
    allow_children(vars, {"Variable"});
    for (const auto* v : children_named(vars, "Variable")) {
      allow_attributes(*v, {"name", "type", "ordered"});
      allow_children(*v, {"States"});
      VariableEntry entry;
      entry.node = v;
      entry.variable.name = required(*v, "name");
      if (required(*v, "type") != "finiteStates") {
        throw Error(errc::kInvalidValue, "variable type must be finiteStates",
                    where(*v, entry.variable.name));
      }
      if (const auto* o = attribute(*v, "ordered")) entry.variable.ordered = parse_bool(*v, "ordered", *o);
      const XmlNode& states = required_child(*v, "States");
      allow_attributes(states, {});
      allow_children(states, {"State"});
      for (const auto* s : children_named(states, "State")) {
        allow_attributes(*s, {"name"});
        allow_children(*s, {});
        const std::string& name = required(*s, "name");
        if (entry.variable.state_index(name)) {
          throw Error(errc::kDuplicateState, "state '" + name + "' is listed twice",
                      where(*s, entry.variable.name));
        }
        entry.variable.states.push_back(name);
      }
      if (entry.variable.states.empty()) {
        throw Error(errc::kMissingElement, "variable needs at least one <State>",
                    where(states, entry.variable.name));
      }
      if (!index_.emplace(entry.variable.name, variables_.size()).second) {
        throw Error(errc::kDuplicateVariable, "variable '" + entry.variable.name + "' is declared twice",
                    where(*v, entry.variable.name));
      }
      variables_.push_back(std::move(entry));
    }
  }

  void read_links(const XmlNode& links) {
    allow_attributes(links, {});
    allow_children(links, {"Link"});
    for (const auto* l : children_named(links, "Link")) {
      allow_attributes(*l, {"directed"});
      allow_children(*l, {"Variable"});
      if (!parse_bool(*l, "directed", required(*l, "directed"))) {
        throw Error(errc::kInvalidValue, "only directed links are supported", where(*l));
      }
      auto ends = children_named(*l, "Variable");
      if (ends.size() != 2) {
        throw Error(errc::kInvalidValue, "<Link> needs exactly two <Variable> ends", where(*l));
      }
      for (const auto* e : ends) {
        allow_attributes(*e, {"name"});
        allow_children(*e, {});
      }
      const std::string& parent = required(*ends[0], "name");
      const std::string& child = required(*ends[1], "name");
      lookup(*ends[0], parent, errc::kDanglingLink);
      lookup(*ends[1], child, errc::kDanglingLink);
      if (!link_parents_[child].insert(parent).second) {
        throw Error(errc::kInvalidValue, "link " + parent + " -> " + child + " is repeated",
                    where(*l, child));
      }
    }
  }

  void read_potentials(const XmlNode& pots) {
    allow_attributes(pots, {});
    allow_children(pots, {"Potential"});
    for (const auto* p : children_named(pots, "Potential")) read_potential(*p);
  }

  void read_potential(const XmlNode& p) {
    const std::string& type = required(p, "type");
    if (const auto* role = attribute(p, "role"); role && *role != "conditionalProbability") {
      throw Error(errc::kInvalidValue, "potential role must be conditionalProbability", where(p));
    }
    const XmlNode& vars = required_child(p, "Variables");
    allow_attributes(vars, {});
    allow_children(vars, {"Variable"});
    std::vector<const VariableEntry*> scope;
    for (const auto* v : children_named(vars, "Variable")) {
      allow_attributes(*v, {"name"});
      allow_children(*v, {});
      scope.push_back(&lookup(*v, required(*v, "name"), errc::kUnknownVariable));
    }
    if (scope.empty()) {
      throw Error(errc::kMissingElement, "potential needs at least the child <Variable>", where(vars));
    }
    const std::string& child = scope[0]->variable.name;
    PotentialEntry entry;
    entry.node = &p;
    for (std::size_t i = 1; i < scope.size(); ++i) entry.parents.push_back(scope[i]->variable.name);

    if (type == "Table") {
      allow_attributes(p, {"type", "role"});
      allow_children(p, {"Variables", "Values"});
      entry.values = &required_child(p, "Values");
      entry.potential = TablePotential{parse_values(*entry.values)};
    } else if (type == "Function") {
      allow_attributes(p, {"type", "role", "name"});
      allow_children(p, {"Variables"});
      auto fn = parse_deterministic_fn(required(p, "name"));
      if (!fn) {
        throw Error(errc::kInvalidValue, "unknown function '" + required(p, "name") + "'",
                    where(p, child));
      }
      entry.potential = FunctionPotential{*fn};
    } else if (type == "ICIModel") {
      entry.potential = read_ici(p, scope);
    } else {
      throw Error(errc::kInvalidValue, "unknown potential type '" + type + "'", where(p, child));
    }
    if (!potentials_.emplace(child, std::move(entry)).second) {
      throw Error(errc::kDuplicatePotential, "variable '" + child + "' has two potentials",
                  where(p, child));
    }
  }

  Potential read_ici(const XmlNode& p, const std::vector<const VariableEntry*>& scope) {
    allow_attributes(p, {"type", "role", "model"});
    allow_children(p, {"Variables", "Subpotential", "Leak"});
    const std::string& model = required(p, "model");
    const DiscreteVariable& child = scope[0]->variable;
    if (model != "OR" && model != "MAX" && model != "AND") {
      throw Error(errc::kInvalidValue, "unknown ICI model '" + model + "'", where(p, child.name));
    }
    const std::size_t n = scope.size() - 1;
    std::vector<const XmlNode*> blocks(n, nullptr);
    for (const auto* s : children_named(p, "Subpotential")) {
      allow_attributes(*s, model == "AND" ? std::initializer_list<std::string_view>{"parent", "s"}
                                          : std::initializer_list<std::string_view>{"parent"});
      allow_children(*s, {"Values"});
      const std::string& parent = required(*s, "parent");
      std::size_t k = 0;
      while (k < n && scope[k + 1]->variable.name != parent) ++k;
      if (k == n) {
        throw Error(errc::kInvalidValue, "subpotential for '" + parent + "', which is not a parent",
                    where(*s, child.name));
      }
      if (blocks[k] != nullptr) {
        throw Error(errc::kDuplicatePotential, "parent '" + parent + "' has two subpotentials",
                    where(*s, child.name));
      }
      blocks[k] = s;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (blocks[k] == nullptr) {
        throw Error(errc::kMissingElement,
                    "no subpotential for parent '" + scope[k + 1]->variable.name + "'",
                    where(p, child.name));
      }
    }
    const XmlNode* leak = optional_child(p, "Leak");
    if (leak != nullptr) {
      allow_attributes(*leak, {});
      allow_children(*leak, {"Values"});
      if (model == "AND") {
        throw Error(errc::kUnknownElement, "noisy AND takes no leak", where(*leak, child.name));
      }
    }

    if (model == "OR") {
      NoisyOrPotential out;
      for (const auto* b : blocks) out.c.push_back(expect_scalar(required_child(*b, "Values"), child.name));
      if (leak) out.leak = expect_scalar(required_child(*leak, "Values"), child.name);
      return out;
    }
    if (model == "AND") {
      NoisyAndPotential out;
      for (const auto* b : blocks) {
        out.c.push_back(expect_scalar(required_child(*b, "Values"), child.name));
        const std::string& s = required(*b, "s");
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
          throw Error(errc::kInvalidValue, "'" + s + "' is not a number", where(*b, child.name));
        }
        out.s.push_back(v);
      }
      return out;
    }
    NoisyMaxPotential out;
    const std::size_t cols = child.cardinality();
    for (std::size_t k = 0; k < n; ++k) {
      const XmlNode& values = required_child(*blocks[k], "Values");
      const auto flat = parse_values(values);
      const std::size_t rows = scope[k + 1]->variable.cardinality();
      if (flat.size() != rows * cols) {
        throw Error(errc::kShapeMismatch,
                    "subpotential needs " + std::to_string(rows * cols) + " values",
                    where(values, child.name));
      }
      StateMatrix m(rows);
      for (std::size_t r = 0; r < rows; ++r) m[r].assign(flat.begin() + r * cols, flat.begin() + (r + 1) * cols);
      out.c.push_back(std::move(m));
    }
    if (leak) {
      const XmlNode& values = required_child(*leak, "Values");
      out.leak = parse_values(values);
      if (out.leak->size() != cols) {
        throw Error(errc::kShapeMismatch, "leak needs one value per child state",
                    where(values, child.name));
      }
    }
    return out;
  }

  BayesianNetwork assemble(const XmlNode& net, ValidationReport& report) {
    std::vector<NodeSpec> nodes;
    for (const auto& v : variables_) {
      auto it = potentials_.find(v.variable.name);
      if (it == potentials_.end()) {
        throw Error(errc::kMissingPotential, "variable '" + v.variable.name + "' has no potential",
                    where(*v.node, v.variable.name));
      }
      const std::set<std::string> declared(it->second.parents.begin(), it->second.parents.end());
      const auto links = link_parents_.find(v.variable.name);
      const std::set<std::string> linked =
          links == link_parents_.end() ? std::set<std::string>{} : links->second;
      if (declared != linked || declared.size() != it->second.parents.size()) {
        throw Error(errc::kLinkMismatch,
                    "parents of '" + v.variable.name + "' in the potential differ from the links",
                    where(*it->second.node, v.variable.name));
      }
      nodes.push_back(NodeSpec{v.variable, it->second.parents, it->second.potential});
    }
    (void)net;
    BayesianNetwork network = BayesianNetwork::from_nodes(std::move(nodes));
    auto locate = [&](Finding f) {
      if (!f.location.has_position()) {
        auto it = potentials_.find(f.location.variable);
        if (it != potentials_.end()) {
          const XmlNode* n = it->second.values ? it->second.values : it->second.node;
          f.location.line = n->line;
          f.location.column = n->column;
        }
      }
      return f;
    };
    for (const auto& f : network.validation().errors) report.errors.push_back(locate(f));
    for (const auto& f : network.validation().warnings) report.warnings.push_back(locate(f));
    return network;
  }
};

void escape_into(std::string& out, std::string_view s) {
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
}

std::string attr_value(std::string_view s) {
  std::string out = "\"";
  escape_into(out, s);
  out += '"';
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_number(values[i]);
  }
  return out;
}

void write_scope(std::string& out, const BayesianNetwork& net, VarId v) {
  out += "      <Variables>\n";
  out += "        <Variable name=" + attr_value(net.variable(v).name) + "/>\n";
  for (VarId p : net.parents(v)) out += "        <Variable name=" + attr_value(net.variable(p).name) + "/>\n";
  out += "      </Variables>\n";
}

void write_potential(std::string& out, const BayesianNetwork& net, VarId v, bool expand) {
  const Potential table = TablePotential{net.cpt(v)};
  const Potential& pot = expand ? table : net.potential(v);
  const auto parent_name = [&](std::size_t k) { return attr_value(net.variable(net.parents(v)[k]).name); };
  if (const auto* t = std::get_if<TablePotential>(&pot)) {
    out += "    <Potential type=\"Table\" role=\"conditionalProbability\">\n";
    write_scope(out, net, v);
    out += "      <Values>" + join_numbers(t->values) + "</Values>\n";
  } else if (const auto* f = std::get_if<FunctionPotential>(&pot)) {
    out += "    <Potential type=\"Function\" role=\"conditionalProbability\" name=" +
           attr_value(to_string(f->fn)) + ">\n";
    write_scope(out, net, v);
  } else if (const auto* o = std::get_if<NoisyOrPotential>(&pot)) {
    out += "    <Potential type=\"ICIModel\" role=\"conditionalProbability\" model=\"OR\">\n";
    write_scope(out, net, v);
    for (std::size_t k = 0; k < o->c.size(); ++k) {
      out += "      <Subpotential parent=" + parent_name(k) + "><Values>" + format_number(o->c[k]) +
             "</Values></Subpotential>\n";
    }
    if (o->leak) out += "      <Leak><Values>" + format_number(*o->leak) + "</Values></Leak>\n";
  } else if (const auto* m = std::get_if<NoisyMaxPotential>(&pot)) {
    out += "    <Potential type=\"ICIModel\" role=\"conditionalProbability\" model=\"MAX\">\n";
    write_scope(out, net, v);
    for (std::size_t k = 0; k < m->c.size(); ++k) {
      std::vector<double> flat;
      for (const auto& row : m->c[k]) flat.insert(flat.end(), row.begin(), row.end());
      out += "      <Subpotential parent=" + parent_name(k) + "><Values>" + join_numbers(flat) +
             "</Values></Subpotential>\n";
    }
    if (m->leak) out += "      <Leak><Values>" + join_numbers(*m->leak) + "</Values></Leak>\n";
  } else if (const auto* a = std::get_if<NoisyAndPotential>(&pot)) {
    out += "    <Potential type=\"ICIModel\" role=\"conditionalProbability\" model=\"AND\">\n";
    write_scope(out, net, v);
    for (std::size_t k = 0; k < a->c.size(); ++k) {
      out += "      <Subpotential parent=" + parent_name(k) + " s=" + attr_value(format_number(a->s[k])) +
             "><Values>" + format_number(a->c[k]) + "</Values></Subpotential>\n";
    }
  }
  out += "    </Potential>\n";
}

}  // namespace

std::optional<std::string> ModelDocument::property(std::string_view name) const {
  for (const auto& [k, v] : properties) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::string format_number(double value) {
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc()) {
    ptr = std::to_chars(buf, buf + sizeof buf, value).ptr;
  }
  return std::string(buf, ptr);
}

ParseOutcome check_model(std::string_view xml) {
  ParseOutcome outcome;
  try {
    auto root = parse_dom(xml);
    DocumentReader reader;
    outcome.document = reader.read(*root, outcome.report);
  } catch (const Error& e) {
    outcome.document.reset();
    outcome.report.errors.push_back(Finding{e.code(), e.what(), e.location()});
  }
  return outcome;
}

ModelDocument parse_model(std::string_view xml) {
  ParseOutcome outcome = check_model(xml);
  if (!outcome.report.errors.empty()) {
    const Finding& f = outcome.report.errors.front();
    throw Error(f.code, f.message, f.location);
  }
  return std::move(*outcome.document);
}

std::string serialize_model(const ModelDocument& doc, bool expand) {
  const BayesianNetwork& net = doc.network;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<ProbModelXML formatVersion=" + attr_value(doc.format_version) + ">\n";
  out += "  <ProbNet type=\"BayesianNetwork\">\n";
  if (doc.provenance) {
    out += "  <Comment>";
    escape_into(out, *doc.provenance);
    out += "</Comment>\n";
  }
  if (!doc.properties.empty()) {
    out += "  <Properties>\n";
    for (const auto& [k, v] : doc.properties) {
      out += "    <Property name=" + attr_value(k) + " value=" + attr_value(v) + "/>\n";
    }
    out += "  </Properties>\n";
  }
  out += "  <Variables>\n";
  for (const auto& var : net.variables()) {
    out += "    <Variable name=" + attr_value(var.name) + " type=\"finiteStates\"" +
           (var.ordered ? " ordered=\"true\"" : "") + ">\n";
    out += "      <States>\n";
    for (const auto& s : var.states) out += "        <State name=" + attr_value(s) + "/>\n";
    out += "      </States>\n";
    out += "    </Variable>\n";
  }
  out += "  </Variables>\n";
  bool any_link = false;
  for (VarId v = 0; v < net.size(); ++v) any_link = any_link || !net.parents(v).empty();
  if (any_link) {
    out += "  <Links>\n";
    for (VarId v = 0; v < net.size(); ++v) {
      for (VarId p : net.parents(v)) {
        out += "    <Link directed=\"true\"><Variable name=" + attr_value(net.variable(p).name) +
               "/><Variable name=" + attr_value(net.variable(v).name) + "/></Link>\n";
      }
    }
    out += "  </Links>\n";
  }
  out += "  <Potentials>\n";
  for (VarId v = 0; v < net.size(); ++v) write_potential(out, net, v, expand);
  out += "  </Potentials>\n";
  out += "  </ProbNet>\n";
  out += "</ProbModelXML>\n";
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::kIoError, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(errc::kIoError, "write to '" + path.string() + "' failed");
}

ModelDocument load_model_file(const std::filesystem::path& path) {
  return parse_model(read_text_file(path));
}

}  // namespace bnkit
