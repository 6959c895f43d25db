#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "catalogue/category_tree.hpp"
#include "catalogue/dataset_record.hpp"
#include "oai/raw_record.hpp"

namespace archive_lens::catalogue {

struct DedupeConflict {
  std::string easy_id;
  std::string field;

  bool operator==(const DedupeConflict&) const = default;
};

struct DedupeResult {
  std::vector<DatasetRecord> records;
  std::size_t duplicates_removed = 0;
  std::vector<DedupeConflict> conflicts;
};

/// Keeps the first occurrence per easy_id and unions the category paths of
/// later duplicates into it (first-appearance order). Disagreement on any
/// other field is reported in `conflicts`; the first record wins.
DedupeResult dedupe(std::vector<DatasetRecord> records);

enum class SnapshotSource { Harvest, Dump, Synthetic };
std::string_view to_string(SnapshotSource s);

struct Provenance {
  SnapshotSource source = SnapshotSource::Dump;
  std::string taken_at;

  bool operator==(const Provenance&) const = default;
};

struct QuarantineEntry {
  oai::RawRecord raw;
  Quarantined reason;

  bool operator==(const QuarantineEntry&) const = default;
};

/// Immutable, deduplicated collection plus its category tree. Every category
/// path of every record resolves in the tree.
class Snapshot {
 public:
  /// Throws Error(MalformedInput) if a record id repeats or a path does not
  /// resolve.
  Snapshot(std::vector<DatasetRecord> records, CategoryTree tree, Provenance provenance,
           std::vector<QuarantineEntry> quarantine);

  const std::vector<DatasetRecord>& records() const { return records_; }
  const CategoryTree& tree() const { return tree_; }
  const Provenance& provenance() const { return provenance_; }
  const std::vector<QuarantineEntry>& quarantine() const { return quarantine_; }

  const DatasetRecord* find(std::string_view easy_id) const;
  const QuarantineEntry* find_quarantined(std::string_view easy_id) const;

 private:
  std::vector<DatasetRecord> records_;
  CategoryTree tree_;
  Provenance provenance_;
  std::vector<QuarantineEntry> quarantine_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct BuildSummary {
  std::size_t unique = 0;
  std::size_t duplicates_removed = 0;
  std::size_t deleted_skipped = 0;
  std::size_t quarantined = 0;
  std::vector<DedupeConflict> conflicts;
};

struct BuildResult {
  std::shared_ptr<const Snapshot> snapshot;
  BuildSummary summary;
};

/// normalize -> drop deleted -> dedupe -> attach quarantine. When
/// `provenance.taken_at` is empty the latest raw datestamp is used.
BuildResult build_snapshot(const std::vector<oai::RawRecord>& raws, CategoryTree tree,
                           const NormalizeOptions& options = {}, Provenance provenance = {});

std::string summary_json(const BuildSummary& summary);

/// Directory layout: records (one JSON object per line), tree.csv,
/// provenance, quarantine. save -> load -> save is byte-identical.
void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir);
std::shared_ptr<const Snapshot> load_snapshot(const std::filesystem::path& dir);

std::string serialize_records(const Snapshot& snapshot);
std::string serialize_quarantine(const Snapshot& snapshot);
std::string serialize_provenance(const Provenance& provenance);

}  // namespace archive_lens::catalogue
