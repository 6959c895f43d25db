#include "oai/dump.hpp"

#include "common/error.hpp"
#include "common/text.hpp"
#include "oai/list_records_parser.hpp"

namespace archive_lens::oai {

std::vector<RawRecord> ingest_dump_contents(std::string_view contents) {
  std::string_view body = contents;
  if (text::starts_with(body, "\xEF\xBB\xBF")) body.remove_prefix(3);
  auto first = body.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};

  if (body[first] == '<') {
    try {
      return parse_record_sequence(body);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedInput, std::string("XML dump: ") + e.what());
    }
  }
  if (body[first] != '{')
    throw Error(ErrorCode::MalformedInput, "unrecognised dump format (expected '<' or '{')");

  std::vector<RawRecord> out;
  std::size_t line_no = 0;
  for (auto line : text::lines(body)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(from_export_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<RawRecord> ingest_dump(const std::filesystem::path& path) {
  return ingest_dump_contents(text::read_file(path));
}

}  // namespace archive_lens::oai
