#include "catalogue/snapshot.hpp"

#include <algorithm>

#include <json.hpp>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::catalogue {

using nlohmann::json;

DedupeResult dedupe(std::vector<DatasetRecord> records) {
  DedupeResult result;
  std::unordered_map<std::string, std::size_t> first;
  for (auto& rec : records) {
    auto [it, inserted] = first.emplace(rec.easy_id, result.records.size());
    if (inserted) {
      result.records.push_back(std::move(rec));
      continue;
    }
    ++result.duplicates_removed;
    auto& kept = result.records[it->second];
    for (auto& path : rec.categories)
      if (std::find(kept.categories.begin(), kept.categories.end(), path) == kept.categories.end())
        kept.categories.push_back(std::move(path));
    auto note = [&](bool differs, const char* field) {
      if (differs) result.conflicts.push_back({kept.easy_id, field});
    };
    note(kept.access != rec.access, "access");
    note(kept.titles != rec.titles, "titles");
    note(kept.creators != rec.creators, "creators");
    note(kept.raw_rights != rec.raw_rights, "rawRights");
    note(kept.in_driver_set != rec.in_driver_set, "inDriverSet");
    note(kept.persistent_id != rec.persistent_id, "persistentId");
  }
  return result;
}

std::string_view to_string(SnapshotSource s) {
  switch (s) {
    case SnapshotSource::Harvest: return "harvest";
    case SnapshotSource::Dump: return "dump";
    case SnapshotSource::Synthetic: return "synthetic";
  }
  return "dump";
}

Snapshot::Snapshot(std::vector<DatasetRecord> records, CategoryTree tree, Provenance provenance,
                   std::vector<QuarantineEntry> quarantine)
    : records_(std::move(records)),
      tree_(std::move(tree)),
      provenance_(std::move(provenance)),
      quarantine_(std::move(quarantine)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!index_.emplace(r.easy_id, i).second)
      throw Error(ErrorCode::MalformedInput, "duplicate record id in snapshot: " + r.easy_id);
    if (r.categories.empty()) throw Error(ErrorCode::MalformedInput, "record without category: " + r.easy_id);
    for (const auto& p : r.categories)
      if (!tree_.resolves(p))
        throw Error(ErrorCode::MalformedInput, "record " + r.easy_id + " path " + p.to_string() + " not in tree");
  }
}

const DatasetRecord* Snapshot::find(std::string_view easy_id) const {
  auto it = index_.find(std::string(easy_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

const QuarantineEntry* Snapshot::find_quarantined(std::string_view easy_id) const {
  for (const auto& q : quarantine_)
    if (!q.reason.easy_id.empty() && q.reason.easy_id == easy_id) return &q;
  return nullptr;
}

BuildResult build_snapshot(const std::vector<oai::RawRecord>& raws, CategoryTree tree,
                           const NormalizeOptions& options, Provenance provenance) {
  BuildSummary summary;
  std::vector<DatasetRecord> normalized;
  std::vector<QuarantineEntry> quarantine;
  std::string latest;
  for (const auto& raw : raws) {
    if (raw.parsed_datestamp() && raw.datestamp > latest) latest = raw.datestamp;
    auto result = normalize(raw, tree, options);
    if (std::holds_alternative<Skipped>(result)) {
      ++summary.deleted_skipped;
    } else if (auto* q = std::get_if<Quarantined>(&result)) {
      quarantine.push_back({raw, std::move(*q)});
    } else {
      normalized.push_back(std::move(std::get<DatasetRecord>(result)));
    }
  }
  auto deduped = dedupe(std::move(normalized));
  summary.unique = deduped.records.size();
  summary.duplicates_removed = deduped.duplicates_removed;
  summary.quarantined = quarantine.size();
  summary.conflicts = std::move(deduped.conflicts);
  if (provenance.taken_at.empty()) provenance.taken_at = latest;
  auto snap = std::make_shared<const Snapshot>(std::move(deduped.records), std::move(tree), std::move(provenance),
                                               std::move(quarantine));
  return {std::move(snap), std::move(summary)};
}

std::string summary_json(const BuildSummary& s) {
  json conflicts = json::array();
  for (const auto& c : s.conflicts) conflicts.push_back({{"easyId", c.easy_id}, {"field", c.field}});
  json j = {{"unique", s.unique},
            {"duplicates_removed", s.duplicates_removed},
            {"deleted_skipped", s.deleted_skipped},
            {"quarantined", s.quarantined},
            {"conflicts", std::move(conflicts)}};
  return j.dump();
}

// --- store ------------------------------------------------------------------

std::string serialize_records(const Snapshot& snapshot) {
  std::string out;
  for (const auto& r : snapshot.records()) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::string serialize_quarantine(const Snapshot& snapshot) {
  std::string out;
  for (const auto& q : snapshot.quarantine()) {
    json j = {{"raw", json::parse(oai::to_export_line(q.raw))},
              {"reason", std::string(to_string(q.reason.reason))},
              {"detail", q.reason.detail},
              {"inDriver", q.reason.in_driver},
              {"easyId", q.reason.easy_id}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string serialize_provenance(const Provenance& p) {
  json j = {{"source", std::string(to_string(p.source))}, {"takenAt", p.taken_at}};
  return j.dump() + "\n";
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create snapshot directory " + dir.string() + ": " + ec.message());
  text::write_file(dir / "records", serialize_records(snapshot));
  text::write_file(dir / "tree.csv", serialize_category_tree(snapshot.tree()));
  text::write_file(dir / "provenance", serialize_provenance(snapshot.provenance()));
  text::write_file(dir / "quarantine", serialize_quarantine(snapshot));
}

std::shared_ptr<const Snapshot> load_snapshot(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::IoError, "not a snapshot directory: " + dir.string());
  auto tree = load_category_tree(dir / "tree.csv");

  std::vector<DatasetRecord> records;
  const std::string record_text = text::read_file(dir / "records");
  for (auto line : text::lines(record_text))
    if (!text::trim(line).empty()) records.push_back(dataset_record_from_json_line(line));

  Provenance provenance;
  {
    auto j = json::parse(text::read_file(dir / "provenance"), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedInput, "bad provenance file");
    auto src = j.value("source", "");
    if (src == "harvest") provenance.source = SnapshotSource::Harvest;
    else if (src == "dump") provenance.source = SnapshotSource::Dump;
    else if (src == "synthetic") provenance.source = SnapshotSource::Synthetic;
    else throw Error(ErrorCode::MalformedInput, "bad provenance source '" + src + "'");
    provenance.taken_at = j.value("takenAt", "");
  }

  std::vector<QuarantineEntry> quarantine;
  const std::string quarantine_text = text::read_file(dir / "quarantine");
  for (auto line : text::lines(quarantine_text)) {
    if (text::trim(line).empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedInput, "bad quarantine line");
    try {
      QuarantineEntry q;
      q.raw = oai::from_export_line(j.at("raw").dump());
      auto reason = parse_quarantine_reason(j.at("reason").get<std::string>());
      if (!reason) throw Error(ErrorCode::MalformedInput, "bad quarantine reason");
      q.reason = {*reason, j.at("detail").get<std::string>(), j.at("inDriver").get<bool>(),
                  j.at("easyId").get<std::string>()};
      quarantine.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, std::string("quarantine line: ") + e.what());
    }
  }
  return std::make_shared<const Snapshot>(std::move(records), std::move(tree), std::move(provenance),
                                          std::move(quarantine));
}

}  // namespace archive_lens::catalogue
