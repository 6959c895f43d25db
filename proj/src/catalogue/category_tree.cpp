#include "catalogue/category_tree.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::catalogue {

std::optional<CategoryPath> CategoryPath::make(std::vector<std::string> codes) {
  if (codes.empty() || codes.size() > kMaxTreeDepth) return std::nullopt;
  for (const auto& c : codes)
    if (c.empty()) return std::nullopt;
  return CategoryPath(std::move(codes));
}

bool CategoryPath::contains(std::string_view code) const {
  return std::find(codes_.begin(), codes_.end(), code) != codes_.end();
}

bool CategoryPath::is_strict_prefix_of(const CategoryPath& other) const {
  return codes_.size() < other.codes_.size() &&
         std::equal(codes_.begin(), codes_.end(), other.codes_.begin());
}

std::string CategoryPath::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (i) out += ':';
    out += codes_[i];
  }
  return out;
}

bool is_default_category_code(std::string_view code) {
  if (code.size() < 2 || code[0] < 'A' || code[0] > 'Z') return false;
  return std::all_of(code.begin() + 1, code.end(), [](char c) { return c >= '0' && c <= '9'; });
}

SetSpecValue parse_set_spec(std::string_view value, const CodePredicate& is_code) {
  auto parts = text::split(value, ':');
  if (text::iequals(parts.front(), "driver")) return DriverSet{};
  for (const auto& p : parts)
    if (!is_code(p)) return UnrecognizedSet{std::string(value)};
  if (auto path = CategoryPath::make(std::move(parts))) return *path;
  return UnrecognizedSet{std::string(value)};
}

// --- tree -------------------------------------------------------------------

CategoryTree CategoryTree::from_rows(const std::vector<TreeRow>& rows) {
  CategoryTree tree;
  for (const auto& row : rows) {
    if (tree.index_.count(row.code))
      throw Error(ErrorCode::DuplicateCodeError, "duplicate category code " + row.code, row.code);
    tree.index_.emplace(row.code, tree.nodes_.size());
    CategoryNode node;
    node.code = row.code;
    node.label = row.label;
    if (!row.parent.empty()) node.parent = row.parent;
    tree.nodes_.push_back(std::move(node));
  }
  for (auto& node : tree.nodes_) {
    if (!node.parent) {
      tree.roots_.push_back(node.code);
      continue;
    }
    auto it = tree.index_.find(*node.parent);
    if (it == tree.index_.end())
      throw Error(ErrorCode::OrphanParentError,
                  "category " + node.code + " names undefined parent " + *node.parent, *node.parent);
    tree.nodes_[it->second].children.push_back(node.code);
  }
  // Depth by walking to a root; a walk longer than the node count is a cycle.
  for (auto& node : tree.nodes_) {
    int depth = 1;
    const CategoryNode* cur = &node;
    while (cur->parent) {
      cur = &tree.nodes_[tree.index_.at(*cur->parent)];
      if (++depth > static_cast<int>(tree.nodes_.size()))
        throw Error(ErrorCode::CycleError, "category " + node.code + " is part of a parent cycle", node.code);
    }
    node.depth = depth;
  }
  for (const auto& node : tree.nodes_) {
    if (node.depth > static_cast<int>(kMaxTreeDepth))
      throw Error(ErrorCode::DepthError,
                  "category " + node.code + " has depth " + std::to_string(node.depth) + " > 3", node.code);
  }
  auto check_labels = [&](const std::vector<std::string>& siblings) {
    std::set<std::string> seen;
    for (const auto& code : siblings) {
      const auto& label = tree.at(code).label;
      if (!seen.insert(label).second)
        throw Error(ErrorCode::DuplicateLabelError, "sibling label '" + label + "' repeated at " + code, code);
    }
  };
  check_labels(tree.roots_);
  for (const auto& node : tree.nodes_) check_labels(node.children);
  return tree;
}

const CategoryNode* CategoryTree::find(std::string_view code) const {
  auto it = index_.find(std::string(code));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const CategoryNode& CategoryTree::at(std::string_view code) const {
  if (const auto* n = find(code)) return *n;
  throw Error(ErrorCode::UnknownCategory, "unknown category " + std::string(code), std::string(code));
}

CategoryPath CategoryTree::path_to(std::string_view code) const {
  std::vector<std::string> codes;
  for (const CategoryNode* n = &at(code); n; n = n->parent ? find(*n->parent) : nullptr) codes.push_back(n->code);
  std::reverse(codes.begin(), codes.end());
  return *CategoryPath::make(std::move(codes));
}

bool CategoryTree::resolves(const CategoryPath& path) const {
  return contains(path.leaf()) && path_to(path.leaf()) == path;
}

bool CategoryTree::in_subtree(std::string_view code, std::string_view ancestor) const {
  for (const CategoryNode* n = find(code); n; n = n->parent ? find(*n->parent) : nullptr)
    if (n->code == ancestor) return true;
  return false;
}

std::vector<TreeRow> CategoryTree::rows() const {
  std::vector<TreeRow> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back({n.code, n.parent.value_or(""), n.label});
  return out;
}

// --- CSV --------------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> parse_csv(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t line = 1;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    bool blank = row.size() == 1 && row[0].empty() && !field_started;
    if (!blank) rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < csv.size(); ++i) {
    char c = csv[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw Error(ErrorCode::MalformedLine, "stray quote on line " + std::to_string(line));
        quoted = field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r': break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::MalformedLine, "unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string csv_field(const std::string& s) {
  bool needs = s.find_first_of(",\"\r\n") != std::string::npos ||
               (!s.empty() && (s.front() == ' ' || s.back() == ' '));
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

CategoryTree parse_category_tree(std::string_view csv) {
  if (text::starts_with(csv, "\xEF\xBB\xBF")) csv.remove_prefix(3);
  auto table = parse_csv(csv);
  if (table.empty()) throw Error(ErrorCode::MalformedLine, "category tree file is empty (missing header)");
  const auto& header = table.front();
  if (header.size() != 3 || header[0] != "code" || header[1] != "parent" || header[2] != "label")
    throw Error(ErrorCode::MalformedLine, "category tree header must be 'code,parent,label'");
  std::vector<TreeRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    auto& r = table[i];
    if (r.size() != 3)
      throw Error(ErrorCode::MalformedLine,
                  "tree row " + std::to_string(i) + " has " + std::to_string(r.size()) + " fields, expected 3");
    std::string code(text::trim(r[0])), parent(text::trim(r[1]));
    if (code.empty()) throw Error(ErrorCode::MalformedLine, "tree row " + std::to_string(i) + " has an empty code");
    if (code.find(':') != std::string::npos)
      throw Error(ErrorCode::MalformedLine, "category code may not contain ':' (" + code + ")");
    rows.push_back({std::move(code), std::move(parent), std::move(r[2])});
  }
  return CategoryTree::from_rows(rows);
}

CategoryTree load_category_tree(const std::filesystem::path& path) { return parse_category_tree(text::read_file(path)); }

std::string serialize_category_tree(const CategoryTree& tree) {
  std::string out = "code,parent,label\n";
  for (const auto& row : tree.rows())
    out += csv_field(row.code) + ',' + csv_field(row.parent) + ',' + csv_field(row.label) + '\n';
  return out;
}

}  // namespace archive_lens::catalogue
