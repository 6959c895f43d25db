#include "catalogue/dataset_record.hpp"

#include <algorithm>

#include <json.hpp>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::catalogue {

using nlohmann::json;

std::string_view to_string(QuarantineReason r) {
  switch (r) {
    case QuarantineReason::MissingIdentifier: return "missing_identifier";
    case QuarantineReason::MissingTitle: return "missing_title";
    case QuarantineReason::NoCategoryPath: return "no_category_path";
    case QuarantineReason::UnresolvedCategory: return "unresolved_category";
  }
  return "no_category_path";
}

std::optional<QuarantineReason> parse_quarantine_reason(std::string_view s) {
  for (auto r : {QuarantineReason::MissingIdentifier, QuarantineReason::MissingTitle,
                 QuarantineReason::NoCategoryPath, QuarantineReason::UnresolvedCategory})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

namespace {

// oai:<namespace>:<local> -> <local>
std::string oai_local_identifier(std::string_view identifier) {
  if (!text::starts_with(identifier, "oai:")) return {};
  auto second = identifier.find(':', 4);
  if (second == std::string_view::npos || second + 1 >= identifier.size()) return {};
  return std::string(identifier.substr(second + 1));
}

}  // namespace

NormalizeResult normalize(const oai::RawRecord& raw, const CategoryTree& tree, const NormalizeOptions& options) {
  if (raw.deleted) return Skipped{};

  DatasetRecord rec;
  rec.oai_identifier = raw.identifier;
  rec.datestamp = raw.datestamp;

  for (const auto& e : raw.dc_elements) {
    if (e.name == "identifier") {
      if (rec.easy_id.empty() && text::starts_with(e.value, options.local_id_prefix)) rec.easy_id = e.value;
      else if (!rec.persistent_id && text::starts_with(e.value, options.persistent_id_prefix)) rec.persistent_id = e.value;
      else rec.other_identifiers.push_back(e.value);
    } else if (e.name == "title") {
      rec.titles.push_back(e.value);
    } else if (e.name == "creator") {
      rec.creators.push_back(e.value);
    } else if (e.name == "rights") {
      rec.raw_rights.push_back(e.value);
    } else if (e.name == "subject") {
      rec.subjects.push_back(e.value);
    } else if (e.name == "coverage") {
      rec.coverages.push_back(e.value);
    } else if (e.name == "date") {
      rec.dates_verbatim.push_back(e.value);
    } else {
      rec.other_elements.push_back(e);
    }
  }
  rec.access = options.rights.classify(rec.raw_rights);

  auto is_code = [&tree](std::string_view code) { return is_default_category_code(code) || tree.contains(code); };
  std::vector<std::string> unresolved;
  for (const auto& spec : raw.set_specs) {
    auto parsed = parse_set_spec(spec, is_code);
    if (std::holds_alternative<DriverSet>(parsed)) {
      rec.in_driver_set = true;
    } else if (auto* u = std::get_if<UnrecognizedSet>(&parsed)) {
      rec.unrecognized_sets.push_back(u->value);
    } else {
      auto& path = std::get<CategoryPath>(parsed);
      if (!tree.resolves(path)) unresolved.push_back(path.to_string());
      else if (std::find(rec.categories.begin(), rec.categories.end(), path) == rec.categories.end())
        rec.categories.push_back(std::move(path));
    }
  }

  if (rec.easy_id.empty()) {
    std::string local = oai_local_identifier(raw.identifier);
    if (local.empty())
      return Quarantined{QuarantineReason::MissingIdentifier, "no dataset identifier in '" + raw.identifier + "'",
                         rec.in_driver_set, ""};
    rec.easy_id = std::move(local);
  }
  if (rec.titles.empty())
    return Quarantined{QuarantineReason::MissingTitle, "record has no title", rec.in_driver_set, rec.easy_id};
  if (!unresolved.empty()) {
    std::string detail = "paths not in tree:";
    for (const auto& u : unresolved) detail += " " + u;
    return Quarantined{QuarantineReason::UnresolvedCategory, detail, rec.in_driver_set, rec.easy_id};
  }
  if (rec.categories.empty())
    return Quarantined{QuarantineReason::NoCategoryPath,
                       rec.in_driver_set ? "no category path (Driver set member)" : "no category path",
                       rec.in_driver_set, rec.easy_id};

  if (options.resolver_prefix && rec.persistent_id) rec.landing_url = *options.resolver_prefix + *rec.persistent_id;
  else rec.landing_url = options.ui_prefix + rec.easy_id;
  return rec;
}

oai::RawRecord to_raw(const DatasetRecord& record, const NormalizeOptions& options) {
  oai::RawRecord raw;
  raw.identifier = record.oai_identifier;
  raw.datestamp = record.datestamp;
  for (const auto& p : record.categories) raw.set_specs.push_back(p.to_string());
  raw.set_specs.insert(raw.set_specs.end(), record.unrecognized_sets.begin(), record.unrecognized_sets.end());
  if (record.in_driver_set) raw.set_specs.push_back("driver");
  auto add = [&raw](std::string_view name, const std::vector<std::string>& values) {
    for (const auto& v : values) raw.dc_elements.push_back({std::string(name), v});
  };
  add("coverage", record.coverages);
  add("creator", record.creators);
  add("date", record.dates_verbatim);
  // An id derived from the OAI identifier stays implicit so it re-derives the same way.
  if (text::starts_with(record.easy_id, options.local_id_prefix)) raw.dc_elements.push_back({"identifier", record.easy_id});
  if (record.persistent_id) raw.dc_elements.push_back({"identifier", *record.persistent_id});
  add("identifier", record.other_identifiers);
  add("rights", record.raw_rights);
  add("subject", record.subjects);
  add("title", record.titles);
  raw.dc_elements.insert(raw.dc_elements.end(), record.other_elements.begin(), record.other_elements.end());
  return raw;
}

std::vector<std::pair<CategoryPath, CategoryPath>> level_mixing_pairs(const DatasetRecord& record) {
  std::vector<std::pair<CategoryPath, CategoryPath>> out;
  for (const auto& a : record.categories)
    for (const auto& b : record.categories)
      if (a.is_strict_prefix_of(b)) out.emplace_back(a, b);
  return out;
}

std::string to_json_line(const DatasetRecord& r) {
  json categories = json::array();
  for (const auto& p : r.categories) categories.push_back(p.to_string());
  json other = json::array();
  for (const auto& e : r.other_elements) other.push_back(json::array({e.name, e.value}));
  json j = {{"easyId", r.easy_id},
            {"oaiIdentifier", r.oai_identifier},
            {"datestamp", r.datestamp},
            {"persistentId", r.persistent_id ? json(*r.persistent_id) : json(nullptr)},
            {"otherIdentifiers", r.other_identifiers},
            {"titles", r.titles},
            {"creators", r.creators},
            {"categories", std::move(categories)},
            {"access", std::string(to_string(r.access))},
            {"rawRights", r.raw_rights},
            {"inDriverSet", r.in_driver_set},
            {"subjects", r.subjects},
            {"coverages", r.coverages},
            {"dates", r.dates_verbatim},
            {"unrecognizedSets", r.unrecognized_sets},
            {"otherElements", std::move(other)},
            {"landingUrl", r.landing_url}};
  return j.dump();
}

DatasetRecord dataset_record_from_json_line(std::string_view line) {
  auto j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedInput, "record line is not a JSON object");
  try {
    DatasetRecord r;
    r.easy_id = j.at("easyId").get<std::string>();
    r.oai_identifier = j.at("oaiIdentifier").get<std::string>();
    r.datestamp = j.at("datestamp").get<std::string>();
    if (!j.at("persistentId").is_null()) r.persistent_id = j.at("persistentId").get<std::string>();
    r.other_identifiers = j.at("otherIdentifiers").get<std::vector<std::string>>();
    r.titles = j.at("titles").get<std::vector<std::string>>();
    r.creators = j.at("creators").get<std::vector<std::string>>();
    for (const auto& p : j.at("categories")) {
      auto path = CategoryPath::make(text::split(p.get<std::string>(), ':'));
      if (!path) throw Error(ErrorCode::MalformedInput, "bad category path in record " + r.easy_id);
      r.categories.push_back(std::move(*path));
    }
    auto access = parse_access_class(j.at("access").get<std::string>());
    if (!access) throw Error(ErrorCode::MalformedInput, "bad access class in record " + r.easy_id);
    r.access = *access;
    r.raw_rights = j.at("rawRights").get<std::vector<std::string>>();
    r.in_driver_set = j.at("inDriverSet").get<bool>();
    r.subjects = j.at("subjects").get<std::vector<std::string>>();
    r.coverages = j.at("coverages").get<std::vector<std::string>>();
    r.dates_verbatim = j.at("dates").get<std::vector<std::string>>();
    r.unrecognized_sets = j.at("unrecognizedSets").get<std::vector<std::string>>();
    for (const auto& e : j.at("otherElements")) r.other_elements.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
    r.landing_url = j.at("landingUrl").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("record line: ") + e.what());
  }
}

}  // namespace archive_lens::catalogue
