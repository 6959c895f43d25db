#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace archive_lens {

using Timestamp = std::chrono::sys_seconds;

// Accepts the two OAI-PMH granularities: YYYY-MM-DD and YYYY-MM-DDThh:mm:ssZ.
std::optional<Timestamp> parse_utc_timestamp(std::string_view text);

// Always second granularity, e.g. 2012-01-12T10:27:57Z.
std::string format_utc_timestamp(Timestamp t);

}  // namespace archive_lens
