#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace archive_lens {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  MalformedXml,
  MalformedInput,
  ProtocolError,
  TransportError,
  ConfigError,
  CycleError,
  OrphanParentError,
  DepthError,
  DuplicateCodeError,
  DuplicateLabelError,
  MalformedLine,
  SpecError,
  ArityViolation,
  UnknownCategory,
  EmptyInput,
  NonPositiveWeight,
  EmptyTree,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the core carries a machine-readable code. `detail`
/// holds a code-specific payload (the OAI-PMH error code for ProtocolError,
/// the offending category code for tree errors), possibly empty.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace archive_lens
