#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/timestamp.hpp"

namespace archive_lens::oai {

/// One child element of the oai_dc container. Elements in the Dublin Core
/// namespace are stored by local name ("title"); anything else keeps its
/// qualified name ("dcterms:abstract") and reports known() == false.
struct DcElement {
  std::string name;
  std::string value;

  bool known() const;
  bool operator==(const DcElement&) const = default;
};

bool is_dublin_core_element(std::string_view name);

/// A harvested record exactly as the feed delivered it.
struct RawRecord {
  std::string identifier;
  std::string datestamp;  // verbatim
  std::vector<std::string> set_specs;
  bool deleted = false;
  std::vector<DcElement> dc_elements;

  /// Null when the datestamp does not match an OAI-PMH granularity.
  std::optional<Timestamp> parsed_datestamp() const { return parse_utc_timestamp(datestamp); }

  std::vector<std::string> values(std::string_view element) const;
  std::size_t unknown_element_count() const;

  bool operator==(const RawRecord&) const = default;
};

/// Line-delimited raw export: one JSON object per line with keys
/// identifier, datestamp, deleted, setSpecs, dc.
std::string to_export_line(const RawRecord& record);
RawRecord from_export_line(std::string_view line);

std::string to_export(const std::vector<RawRecord>& records);

/// XML rendering of one <record> element in the OAI 2.0 namespace.
std::string render_record_xml(const RawRecord& record);

std::string xml_escape(std::string_view s);

}  // namespace archive_lens::oai
