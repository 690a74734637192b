#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bnkit/model.hpp"

namespace bnkit {

inline constexpr const char* kFormatVersion = "1.0";

/// A parsed .pgmx knowledge base.
struct ModelDocument {
  std::string format_version = kFormatVersion;
  BayesianNetwork network;
  /// Free text of the <Comment> element, whitespace-trimmed.
  std::optional<std::string> provenance;
  /// <Property name value> pairs in document order.
  std::vector<std::pair<std::string, std::string>> properties;

  std::optional<std::string> property(std::string_view name) const;
  bool operator==(const ModelDocument&) const = default;
};

/// Result of a non-throwing parse. `document` is empty when the file could
/// not be turned into a network at all; otherwise `report` holds the
/// network's validation findings with source positions filled in.
struct ParseOutcome {
  std::optional<ModelDocument> document;
  ValidationReport report;
};

ParseOutcome check_model(std::string_view xml);

/// Throws Error carrying the first finding's code and location.
ModelDocument parse_model(std::string_view xml);

/// Deterministic output. expand=true writes every potential as a flat table.
std::string serialize_model(const ModelDocument& doc, bool expand = false);

/// Shortest fixed-notation decimal that reads back to the same double.
std::string format_number(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

ModelDocument load_model_file(const std::filesystem::path& path);

}  // namespace bnkit
