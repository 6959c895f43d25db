#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catalogue/category_tree.hpp"
#include "catalogue/rights.hpp"
#include "oai/raw_record.hpp"

namespace archive_lens::catalogue {

/// Parameters of a synthetic archive. Every count the generator plants is
/// reproduced exactly by the analytics over the built snapshot.
struct CorpusSpec {
  struct TreeShape {
    int roots = 6;
    int children_per_root = 7;
    int grandchildren_per_child = 2;
    std::map<std::string, std::string> labels;  // code -> label overrides
  };
  struct Dominant {
    std::string code;
    double share = 0.0;
  };
  struct Depositors {
    int count = 1;
    std::string top_name = "Veteran Institute";
    int top_datasets = 1;
    double exponent = 1.0;
    double second_creator_fraction = 0.0;
  };

  int n_unique = 0;
  TreeShape tree;
  int n_categories_used = 1;
  std::optional<Dominant> dominant;
  std::map<std::string, double> category_profile;  // root code -> mass; empty = uniform
  std::map<int, int> multi_assignment_histogram;   // arity -> record count
  /// Expected assignment expansion; must equal the histogram's sum of arity * count.
  std::optional<long long> n_assignments;
  std::map<AccessClass, double> rights_mix;        // empty = all Open
  Depositors depositor_powerlaw;
  int driver_error_count = 0;
  int embargoed_count = 0;
  double duplicate_factor = 1.0;
  bool split_multi_category = false;
  int n_deleted = 0;
  int n_quarantined = 0;
  std::uint64_t seed = 1;

  /// Throws Error(SpecError) on malformed JSON or unknown keys.
  static CorpusSpec from_json(std::string_view json_text);
  std::string to_json() const;
};

struct RollupTruth {
  std::size_t direct = 0;
  std::size_t assignment = 0;
  std::size_t unique = 0;

  bool operator==(const RollupTruth&) const = default;
};

/// What the analytics must reproduce on the snapshot built from the corpus.
struct GroundTruth {
  std::size_t n_records = 0;
  std::size_t n_categories_used = 0;
  std::size_t n_tree_nodes = 0;
  std::size_t n_depositors = 0;
  std::size_t n_assignments = 0;
  std::size_t n_single_category = 0;
  double pct_single_category = 0.0;
  std::size_t max_categories_per_record = 0;
  std::array<std::size_t, 4> per_access_class{};
  std::size_t quarantine_count = 0;
  std::map<int, std::size_t> histogram;
  std::map<std::string, RollupTruth> rollups;

  std::size_t driver_differences = 0;
  std::vector<std::string> difference_ids;  // sorted
  std::vector<std::string> embargo_ids;     // sorted, subset of difference_ids

  std::optional<std::string> dominant_code;
  std::size_t dominant_unique_rollup = 0;
  double dominant_share = 0.0;
  std::size_t restricted_group_outside_dominant = 0;

  std::string top_depositor;
  std::size_t top_depositor_datasets = 0;

  std::size_t duplicates_removed = 0;
  std::size_t deleted_skipped = 0;

  std::string search_token;
  std::string search_easy_id;

  std::string to_json(const CorpusSpec& spec) const;
};

struct Corpus {
  std::vector<oai::RawRecord> raws;
  CategoryTree tree;
  GroundTruth truth;
};

/// Deterministic for a fixed spec (seed included). Throws Error(SpecError)
/// when the parameters cannot be planted together.
Corpus generate_corpus(const CorpusSpec& spec);

/// The synthetic tree alone (codes D<r><c><g>00, depth <= 3).
CategoryTree generate_tree(const CorpusSpec::TreeShape& shape);

}  // namespace archive_lens::catalogue
