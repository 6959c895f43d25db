#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace archive_lens::catalogue {

inline constexpr std::size_t kMaxTreeDepth = 3;

/// Root-to-node sequence of category codes, 1..3 long.
class CategoryPath {
 public:
  /// Nullopt when `codes` is empty, deeper than kMaxTreeDepth, or contains
  /// an empty code.
  static std::optional<CategoryPath> make(std::vector<std::string> codes);

  const std::vector<std::string>& codes() const { return codes_; }
  const std::string& leaf() const { return codes_.back(); }
  std::size_t depth() const { return codes_.size(); }
  bool contains(std::string_view code) const;
  /// True when this path is a proper prefix of `other` (ancestor relation).
  bool is_strict_prefix_of(const CategoryPath& other) const;

  std::string to_string() const;  // colon-joined, setSpec form

  auto operator<=>(const CategoryPath&) const = default;

 private:
  explicit CategoryPath(std::vector<std::string> codes) : codes_(std::move(codes)) {}
  std::vector<std::string> codes_;
};

struct DriverSet {
  bool operator==(const DriverSet&) const = default;
};
struct UnrecognizedSet {
  std::string value;
  bool operator==(const UnrecognizedSet&) const = default;
};
using SetSpecValue = std::variant<CategoryPath, DriverSet, UnrecognizedSet>;

/// Matches the default code alphabet `[A-Z][0-9]+`.
bool is_default_category_code(std::string_view code);

using CodePredicate = std::function<bool(std::string_view)>;

/// Classifies one setSpec value. Total: failures come back as UnrecognizedSet.
SetSpecValue parse_set_spec(std::string_view value, const CodePredicate& is_code = is_default_category_code);

struct CategoryNode {
  std::string code;
  std::string label;
  std::optional<std::string> parent;
  int depth = 1;
  std::vector<std::string> children;  // file order
};

struct TreeRow {
  std::string code;
  std::string parent;  // empty = root
  std::string label;
};

/// Validated category hierarchy. Nodes keep the order of the source rows.
class CategoryTree {
 public:
  CategoryTree() = default;

  /// Throws Error with DuplicateCodeError, OrphanParentError, CycleError,
  /// DepthError or DuplicateLabelError (detail = offending code).
  static CategoryTree from_rows(const std::vector<TreeRow>& rows);

  const CategoryNode* find(std::string_view code) const;
  const CategoryNode& at(std::string_view code) const;
  bool contains(std::string_view code) const { return find(code) != nullptr; }

  const std::vector<CategoryNode>& nodes() const { return nodes_; }
  const std::vector<std::string>& roots() const { return roots_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  CategoryPath path_to(std::string_view code) const;
  /// The path exists in the tree exactly as written (path consistency).
  bool resolves(const CategoryPath& path) const;
  /// `code` equals `ancestor` or lies below it.
  bool in_subtree(std::string_view code, std::string_view ancestor) const;

  std::vector<TreeRow> rows() const;

 private:
  std::vector<CategoryNode> nodes_;
  std::vector<std::string> roots_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// CSV with header `code,parent,label`; RFC 4180 quoting.
CategoryTree parse_category_tree(std::string_view csv);
CategoryTree load_category_tree(const std::filesystem::path& path);
std::string serialize_category_tree(const CategoryTree& tree);

}  // namespace archive_lens::catalogue
