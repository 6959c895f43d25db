#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "oai/raw_record.hpp"

namespace archive_lens::oai {

/// Reads a local dump: either concatenated <record> elements (first
/// significant byte '<') or the line-delimited raw export ('{'). Duplicate
/// records are kept; deduplication belongs to the catalogue.
std::vector<RawRecord> ingest_dump(const std::filesystem::path& path);
std::vector<RawRecord> ingest_dump_contents(std::string_view contents);

}  // namespace archive_lens::oai
