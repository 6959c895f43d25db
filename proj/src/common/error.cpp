#include "common/error.hpp"

namespace archive_lens {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::CycleError: return "CycleError";
    case ErrorCode::OrphanParentError: return "OrphanParentError";
    case ErrorCode::DepthError: return "DepthError";
    case ErrorCode::DuplicateCodeError: return "DuplicateCodeError";
    case ErrorCode::DuplicateLabelError: return "DuplicateLabelError";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::ArityViolation: return "ArityViolation";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::EmptyTree: return "EmptyTree";
  }
  return "Unknown";
}

}  // namespace archive_lens
