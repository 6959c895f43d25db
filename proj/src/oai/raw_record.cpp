#include "oai/raw_record.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

#include "common/error.hpp"

namespace archive_lens::oai {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 15> kDublinCoreElements = {
    "contributor", "coverage", "creator",  "date",    "description",
    "format",      "identifier", "language", "publisher", "relation",
    "rights",      "source",   "subject",  "title",   "type"};

}  // namespace

bool is_dublin_core_element(std::string_view name) {
  return std::find(kDublinCoreElements.begin(), kDublinCoreElements.end(), name) !=
         kDublinCoreElements.end();
}

bool DcElement::known() const { return is_dublin_core_element(name); }

std::vector<std::string> RawRecord::values(std::string_view element) const {
  std::vector<std::string> out;
  for (const auto& e : dc_elements)
    if (e.name == element) out.push_back(e.value);
  return out;
}

std::size_t RawRecord::unknown_element_count() const {
  return static_cast<std::size_t>(
      std::count_if(dc_elements.begin(), dc_elements.end(), [](const DcElement& e) { return !e.known(); }));
}

std::string to_export_line(const RawRecord& record) {
  json dc = json::array();
  for (const auto& e : record.dc_elements) dc.push_back(json::array({e.name, e.value}));
  json j = {{"identifier", record.identifier},
            {"datestamp", record.datestamp},
            {"deleted", record.deleted},
            {"setSpecs", record.set_specs},
            {"dc", std::move(dc)}};
  return j.dump();
}

RawRecord from_export_line(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::MalformedInput, "raw export line is not a JSON object");
  try {
    RawRecord r;
    r.identifier = j.at("identifier").get<std::string>();
    r.datestamp = j.at("datestamp").get<std::string>();
    r.deleted = j.at("deleted").get<bool>();
    r.set_specs = j.at("setSpecs").get<std::vector<std::string>>();
    for (const auto& pair : j.at("dc")) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error(ErrorCode::MalformedInput, "dc entry must be a [name, value] pair");
      r.dc_elements.push_back({pair[0].get<std::string>(), pair[1].get<std::string>()});
    }
    if (r.identifier.empty()) throw Error(ErrorCode::MalformedInput, "raw record without identifier");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("raw export line: ") + e.what());
  }
}

std::string to_export(const std::vector<RawRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_export_line(r);
    out += '\n';
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_record_xml(const RawRecord& record) {
  std::string out = "<record>\n  <header";
  if (record.deleted) out += " status=\"deleted\"";
  out += ">\n    <identifier>" + xml_escape(record.identifier) + "</identifier>\n";
  out += "    <datestamp>" + xml_escape(record.datestamp) + "</datestamp>\n";
  for (const auto& s : record.set_specs) out += "    <setSpec>" + xml_escape(s) + "</setSpec>\n";
  out += "  </header>\n";
  if (!record.deleted || !record.dc_elements.empty()) {
    out +=
        "  <metadata>\n    <oai_dc:dc xmlns:oai_dc=\"http://www.openarchives.org/OAI/2.0/oai_dc/\" "
        "xmlns:dc=\"http://purl.org/dc/elements/1.1/\">\n";
    for (const auto& e : record.dc_elements) {
      std::string tag = e.name.find(':') == std::string::npos ? "dc:" + e.name : e.name;
      out += "      <" + tag + ">" + xml_escape(e.value) + "</" + tag + ">\n";
    }
    out += "    </oai_dc:dc>\n  </metadata>\n";
  }
  out += "</record>\n";
  return out;
}

}  // namespace archive_lens::oai
