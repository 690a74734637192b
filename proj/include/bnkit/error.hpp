#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnkit {

/// Position of a finding inside a model: the variable it concerns and, for
/// parsed documents, the line/column of the originating XML element.
struct SourceLocation {
  std::string variable;
  std::size_t line = 0;
  std::size_t column = 0;

  bool has_position() const { return line != 0; }
  std::string to_string() const;
};

/// Library error carrying a stable machine-readable code such as
/// "impossible-evidence" or "unknown-parent".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, SourceLocation location = {});

  const std::string& code() const noexcept { return code_; }
  const SourceLocation& location() const noexcept { return location_; }

 private:
  std::string code_;
  SourceLocation location_;
};

namespace errc {
inline constexpr const char* kUnknownParent = "unknown-parent";
inline constexpr const char* kParentAfterChild = "parent-after-child";
inline constexpr const char* kDuplicateVariable = "duplicate-variable";
inline constexpr const char* kDuplicateState = "duplicate-state";
inline constexpr const char* kUnknownVariable = "unknown-variable";
inline constexpr const char* kUnknownState = "unknown-state";
inline constexpr const char* kStateOutOfRange = "state-out-of-range";
inline constexpr const char* kIncompleteAssignment = "incomplete-assignment";
inline constexpr const char* kCycle = "cycle";
inline constexpr const char* kRowNotNormalized = "row-not-normalized";
inline constexpr const char* kTableSizeMismatch = "table-size-mismatch";
inline constexpr const char* kNegativeProbability = "negative-probability";
inline constexpr const char* kProbabilityAboveOne = "probability-above-one";
inline constexpr const char* kParameterOutOfRange = "parameter-out-of-range";
inline constexpr const char* kNonBinary = "non-binary";
inline constexpr const char* kStateOrder = "state-order";
inline constexpr const char* kNotOrdered = "not-ordered";
inline constexpr const char* kArityMismatch = "arity-mismatch";
inline constexpr const char* kIncompatibleStates = "incompatible-states";
inline constexpr const char* kShapeMismatch = "shape-mismatch";
inline constexpr const char* kDisconnected = "disconnected-variable";
inline constexpr const char* kInvalidNetwork = "invalid-network";
inline constexpr const char* kOverlappingSets = "overlapping-sets";
inline constexpr const char* kImpossibleEvidence = "impossible-evidence";
inline constexpr const char* kQueryObserved = "query-observed";
inline constexpr const char* kTooLarge = "too-large";
inline constexpr const char* kNotPolytree = "not-polytree";
inline constexpr const char* kNoAcceptedSamples = "no-accepted-samples";
inline constexpr const char* kZeroWeight = "zero-weight";
inline constexpr const char* kNoRetainedSamples = "no-retained-samples";
inline constexpr const char* kNoHiddenVariables = "no-hidden-variables";
inline constexpr const char* kEvidenceUnsupported = "evidence-unsupported";
inline constexpr const char* kInvalidConfig = "invalid-config";
inline constexpr const char* kUnboundLevel = "unbound-level";
inline constexpr const char* kUnknownEngine = "unknown-engine";
inline constexpr const char* kUnknownFixture = "unknown-fixture";
inline constexpr const char* kInvalidPlan = "invalid-plan";
// knowledge_io
inline constexpr const char* kMalformedXml = "malformed-xml";
inline constexpr const char* kUnknownElement = "unknown-element";
inline constexpr const char* kUnknownAttribute = "unknown-attribute";
inline constexpr const char* kMissingAttribute = "missing-attribute";
inline constexpr const char* kMissingElement = "missing-element";
inline constexpr const char* kInvalidValue = "invalid-value";
inline constexpr const char* kDanglingLink = "dangling-link";
inline constexpr const char* kLinkMismatch = "link-mismatch";
inline constexpr const char* kDuplicatePotential = "duplicate-potential";
inline constexpr const char* kMissingPotential = "missing-potential";
inline constexpr const char* kUnsupportedVersion = "unsupported-version";
inline constexpr const char* kIoError = "io-error";
}  // namespace errc

}  // namespace bnkit
