#include "bnkit/error.hpp"

namespace bnkit {

std::string SourceLocation::to_string() const {
  std::string out;
  if (has_position()) {
    out = "line " + std::to_string(line) + ", column " + std::to_string(column);
  }
  if (!variable.empty()) {
    if (!out.empty()) out += ", ";
    out += "variable '" + variable + "'";
  }
  return out;
}

Error::Error(std::string code, const std::string& message, SourceLocation location)
    : std::runtime_error(message), code_(std::move(code)), location_(std::move(location)) {}

}  // namespace bnkit
