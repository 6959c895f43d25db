#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "catalogue/category_tree.hpp"
#include "catalogue/rights.hpp"
#include "oai/raw_record.hpp"

namespace archive_lens::catalogue {

/// One archived dataset after normalization.
struct DatasetRecord {
  std::string easy_id;
  std::string oai_identifier;
  std::string datestamp;
  std::optional<std::string> persistent_id;
  std::vector<std::string> other_identifiers;
  std::vector<std::string> titles;
  std::vector<std::string> creators;
  std::vector<CategoryPath> categories;  // deduplicated, first-seen order
  AccessClass access = AccessClass::Other;
  std::vector<std::string> raw_rights;
  bool in_driver_set = false;
  std::vector<std::string> subjects;
  std::vector<std::string> coverages;
  std::vector<std::string> dates_verbatim;  // roles (created/available/...) are not recoverable
  std::vector<std::string> unrecognized_sets;
  std::vector<oai::DcElement> other_elements;
  std::string landing_url;

  bool operator==(const DatasetRecord&) const = default;
};

struct NormalizeOptions {
  RightsMap rights = RightsMap::defaults();
  std::string local_id_prefix = "easy-dataset:";
  std::string persistent_id_prefix = "urn:nbn:";
  std::string ui_prefix = "https://easy.dans.knaw.nl/ui/datasets/id/";
  /// When set and the record has a persistent id, landing_url = resolver + pid.
  std::optional<std::string> resolver_prefix;
};

struct Skipped {};

enum class QuarantineReason { MissingIdentifier, MissingTitle, NoCategoryPath, UnresolvedCategory };
std::string_view to_string(QuarantineReason r);
std::optional<QuarantineReason> parse_quarantine_reason(std::string_view s);

struct Quarantined {
  QuarantineReason reason = QuarantineReason::NoCategoryPath;
  std::string detail;
  bool in_driver = false;
  std::string easy_id;  // candidate id when one could be derived

  bool operator==(const Quarantined&) const = default;
};

using NormalizeResult = std::variant<DatasetRecord, Skipped, Quarantined>;

/// Total: deleted records come back Skipped, records that cannot be placed
/// in the tree come back Quarantined.
NormalizeResult normalize(const oai::RawRecord& raw, const CategoryTree& tree,
                          const NormalizeOptions& options = {});

/// Re-serializes a normalized record into feed form; normalize() of the result
/// reproduces the record.
oai::RawRecord to_raw(const DatasetRecord& record, const NormalizeOptions& options = {});

/// Pairs of paths inside one record where one path is an ancestor of the
/// other (same branch, different levels).
std::vector<std::pair<CategoryPath, CategoryPath>> level_mixing_pairs(const DatasetRecord& record);

std::string to_json_line(const DatasetRecord& record);
DatasetRecord dataset_record_from_json_line(std::string_view line);

}  // namespace archive_lens::catalogue
