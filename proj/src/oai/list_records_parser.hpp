#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oai/raw_record.hpp"

namespace archive_lens::oai {

/// Flow-control state carried by a ListRecords response. A missing token means
/// the list is complete.
struct ResumptionState {
  std::optional<std::string> token;
  std::optional<long long> complete_list_size;
  std::optional<long long> cursor;
  int pages_fetched = 0;

  bool complete() const { return !token.has_value(); }
};

struct ListRecordsPage {
  std::vector<RawRecord> records;
  ResumptionState resumption;
};

/// Parses a ListRecords response. Every <record> element anywhere in the
/// document becomes one RawRecord; element matching is by local name so
/// unusual or undeclared prefixes do not matter.
///
/// Throws Error(MalformedXml) when the document is not well-formed and
/// Error(ProtocolError, detail = OAI error code) when it carries <error>.
ListRecordsPage parse_list_records_page(std::string_view xml);

/// Same record semantics over a concatenation of <record> elements (optionally
/// preceded by an XML declaration), as found in archive dumps.
std::vector<RawRecord> parse_record_sequence(std::string_view xml);

}  // namespace archive_lens::oai
