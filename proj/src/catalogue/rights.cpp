#include "catalogue/rights.hpp"

#include <json.hpp>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::catalogue {

std::string_view to_string(AccessClass c) {
  switch (c) {
    case AccessClass::Open: return "Open";
    case AccessClass::RestrictedGroup: return "RestrictedGroup";
    case AccessClass::Restricted: return "Restricted";
    case AccessClass::Other: return "Other";
  }
  return "Other";
}

std::optional<AccessClass> parse_access_class(std::string_view name) {
  for (auto c : kAccessClasses)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

RightsMap RightsMap::defaults() {
  RightsMap m;
  m.table_ = {{"OPEN_ACCESS", AccessClass::Open},
              {"GROUP_ACCESS", AccessClass::RestrictedGroup},
              {"RESTRICTED_GROUP", AccessClass::RestrictedGroup},
              {"RESTRICTED", AccessClass::Restricted},
              {"RESTRICTED_REQUEST", AccessClass::Restricted},
              {"NO_ACCESS", AccessClass::Other}};
  m.ignored_ = {"ACCEPT"};
  return m;
}

RightsMap RightsMap::from_json(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::ConfigError, "rights config is not a JSON object");
  RightsMap m = defaults();
  if (j.contains("classes")) {
    if (!j["classes"].is_object()) throw Error(ErrorCode::ConfigError, "rights config: 'classes' must be an object");
    for (const auto& [token, cls] : j["classes"].items()) {
      auto c = cls.is_string() ? parse_access_class(cls.get<std::string>()) : std::nullopt;
      if (!c) throw Error(ErrorCode::ConfigError, "rights config: unknown access class for token " + token);
      m.table_[text::to_upper_ascii(token)] = *c;
      m.ignored_.erase(text::to_upper_ascii(token));
    }
  }
  if (j.contains("ignore")) {
    if (!j["ignore"].is_array()) throw Error(ErrorCode::ConfigError, "rights config: 'ignore' must be an array");
    for (const auto& t : j["ignore"]) {
      if (!t.is_string()) throw Error(ErrorCode::ConfigError, "rights config: ignore entries must be strings");
      m.ignored_.insert(text::to_upper_ascii(t.get<std::string>()));
    }
  }
  return m;
}

RightsMap RightsMap::load(const std::filesystem::path& path) {
  try {
    return from_json(text::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw Error(ErrorCode::ConfigError, e.what());
    throw;
  }
}

AccessClass RightsMap::classify(const std::vector<std::string>& raw_rights) const {
  for (const auto& raw : raw_rights) {
    auto token = text::to_upper_ascii(text::trim(raw));
    if (token.empty() || ignored_.count(token)) continue;
    auto it = table_.find(token);
    return it == table_.end() ? AccessClass::Other : it->second;
  }
  return AccessClass::Other;
}

}  // namespace archive_lens::catalogue
