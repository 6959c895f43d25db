#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace archive_lens::catalogue {

enum class AccessClass { Open, RestrictedGroup, Restricted, Other };

inline constexpr std::array<AccessClass, 4> kAccessClasses = {AccessClass::Open, AccessClass::RestrictedGroup,
                                                               AccessClass::Restricted, AccessClass::Other};

std::string_view to_string(AccessClass c);
std::optional<AccessClass> parse_access_class(std::string_view name);
inline std::size_t index_of(AccessClass c) { return static_cast<std::size_t>(c); }

/// Maps feed rights tokens onto access classes. Tokens compare
/// case-insensitively; the first token that is not ignored decides, and a
/// record with no deciding token is Other.
class RightsMap {
 public:
  /// OPEN_ACCESS -> Open; GROUP_ACCESS, RESTRICTED_GROUP -> RestrictedGroup;
  /// RESTRICTED, RESTRICTED_REQUEST -> Restricted; everything else -> Other.
  /// "accept" (licence acceptance) is ignored.
  static RightsMap defaults();

  /// JSON: {"classes": {"TOKEN": "Open", ...}, "ignore": ["accept", ...]}.
  /// Entries merge over the defaults. Throws Error(ConfigError).
  static RightsMap from_json(std::string_view json_text);
  static RightsMap load(const std::filesystem::path& path);

  AccessClass classify(const std::vector<std::string>& raw_rights) const;
  const std::map<std::string, AccessClass>& table() const { return table_; }

 private:
  std::map<std::string, AccessClass> table_;
  std::set<std::string> ignored_;
};

}  // namespace archive_lens::catalogue
