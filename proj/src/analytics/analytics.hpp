#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catalogue/snapshot.hpp"

namespace archive_lens::analytics {

using catalogue::AccessClass;
using catalogue::CategoryTree;
using catalogue::DatasetRecord;
using catalogue::Snapshot;

using ClassCounts = std::array<std::size_t, 4>;  // indexed by catalogue::index_of

struct CollectionStats {
  std::size_t n_records = 0;
  std::size_t n_categories_used = 0;  // distinct codes a path terminates at
  std::size_t n_tree_nodes = 0;
  std::size_t n_depositors = 0;
  std::size_t n_assignments = 0;
  std::size_t n_single_category = 0;
  double pct_single_category = 0.0;  // fraction in [0,1]
  std::size_t max_categories_per_record = 0;
  ClassCounts per_access_class{};
  std::size_t quarantine_count = 0;
  std::size_t n_level_mixing = 0;  // records tagging both a node and its ancestor

  bool operator==(const CollectionStats&) const = default;
};

CollectionStats collection_stats(const Snapshot& snapshot);
CollectionStats collection_stats(const CategoryTree& tree, std::span<const DatasetRecord> records,
                                 std::size_t quarantine_count = 0);

enum class RollupMode { Assignment, Unique };
std::string_view to_string(RollupMode mode);
std::optional<RollupMode> parse_rollup_mode(std::string_view text);

struct RollupEntry {
  std::size_t direct = 0;
  std::size_t assignment = 0;
  std::size_t unique = 0;

  std::size_t size(RollupMode mode) const { return mode == RollupMode::Assignment ? assignment : unique; }
  bool operator==(const RollupEntry&) const = default;
};

/// One entry per tree node, zero counts included.
using RollupMap = std::map<std::string, RollupEntry, std::less<>>;

class RollupTable {
 public:
  RollupTable() = default;
  explicit RollupTable(RollupMap entries) : entries_(std::move(entries)) {}

  const RollupEntry* find(std::string_view code) const;
  const RollupEntry& at(std::string_view code) const;  // throws UnknownCategory
  const RollupMap& entries() const { return entries_; }

  bool operator==(const RollupTable&) const = default;

 private:
  RollupMap entries_;
};

RollupTable rollup_counts(const Snapshot& snapshot);
RollupTable rollup_counts(const CategoryTree& tree, std::span<const DatasetRecord> records);

constexpr int kMaxArity = 9;

/// Throws Error(ArityViolation) when a record carries more than kMaxArity paths.
std::map<int, std::size_t> multi_assignment_histogram(std::span<const DatasetRecord> records);
std::map<int, std::size_t> multi_assignment_histogram(const Snapshot& snapshot);

struct DepositorProfile {
  std::string creator;
  std::size_t n_datasets = 0;
  ClassCounts per_access_class{};
  std::vector<std::string> categories;  // every code on any path, sorted

  bool operator==(const DepositorProfile&) const = default;
};

/// Sorted by n_datasets descending, then creator ascending.
std::vector<DepositorProfile> depositor_profiles(std::span<const DatasetRecord> records);
std::vector<DepositorProfile> depositor_profiles(const Snapshot& snapshot);

struct AccessBreakdownRow {
  std::string code;
  ClassCounts direct{};
  ClassCounts rolled{};
};

struct AccessBreakdown {
  std::optional<std::string> exclude;
  std::vector<AccessBreakdownRow> rows;  // tree order
  ClassCounts totals{};
  std::size_t expansion_total = 0;  // (record, path) pairs counted
};

/// Counts over the assignment expansion. `exclude` drops every path that
/// passes through that node. Throws Error(UnknownCategory).
AccessBreakdown access_breakdown_by_category(const Snapshot& snapshot, std::optional<std::string_view> exclude = {});

enum class Classification { ExplainedEmbargo, Error };
std::string_view to_string(Classification c);

struct ConsistencyDifference {
  std::string easy_id;
  bool in_driver = false;
  AccessClass access = AccessClass::Other;
  Classification classification = Classification::Error;

  bool operator==(const ConsistencyDifference&) const = default;
};

struct ConsistencyReport {
  std::vector<ConsistencyDifference> differences;  // sorted by easy_id
  std::size_t n_differences = 0;
  std::size_t n_explained_embargo = 0;
  std::size_t n_error = 0;
};

ConsistencyReport driver_consistency_check(std::span<const DatasetRecord> records,
                                           const std::set<std::string, std::less<>>& embargo_ids = {});
ConsistencyReport driver_consistency_check(const Snapshot& snapshot,
                                           const std::set<std::string, std::less<>>& embargo_ids = {});

/// One id per line; blank lines and lines starting with '#' are skipped.
std::set<std::string, std::less<>> parse_id_list(std::string_view text);

// Serialized reports. Keys are sorted; output ends with a newline.
std::string to_json(const CollectionStats& stats);
std::string to_json(const RollupTable& table);
std::string histogram_json(const std::map<int, std::size_t>& histogram);
std::string to_json(const std::vector<DepositorProfile>& profiles, std::size_t limit = 0);
std::string to_json(const AccessBreakdown& breakdown);
std::string to_json(const ConsistencyReport& report);

}  // namespace archive_lens::analytics
