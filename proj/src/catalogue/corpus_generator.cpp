#include "catalogue/corpus_generator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "common/error.hpp"
#include "common/timestamp.hpp"

namespace archive_lens::catalogue {

using nlohmann::json;

namespace {

[[noreturn]] void spec_error(const std::string& msg) { throw Error(ErrorCode::SpecError, "corpus spec: " + msg); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::array<const char*, 9> kRootLabels = {
    "Social sciences",          "Behavioural sciences", "Humanities",
    "Social-cultural sciences", "Life sciences and medicine", "Geospatial sciences",
    "Natural sciences",         "Technical sciences",   "Interdisciplinary"};

constexpr std::array<const char*, 12> kSurnames = {"Bakker", "Jansen",  "de Vries", "van Dijk", "Visser", "Smit",
                                                   "Meijer", "de Boer", "Mulder",   "de Groot", "Bos",    "Vos"};
constexpr std::array<const char*, 10> kTopics = {"Excavation",  "Census",  "Household", "Election", "Migration",
                                                 "Settlement",  "Labour",  "Health",    "Religion", "Trade"};
constexpr std::array<const char*, 8> kKinds = {"survey", "report", "register", "inventory",
                                               "panel",  "study",  "atlas",    "database"};
constexpr std::array<const char*, 8> kRegions = {"Brabant", "Flanders", "Holland", "Zeeland",
                                                 "Utrecht", "Gelderland", "Friesland", "Limburg"};

std::string pad(long long v, int width) {
  std::string s = std::to_string(v);
  return s.size() >= static_cast<std::size_t>(width) ? s : std::string(width - s.size(), '0') + s;
}

std::string depositor_name(std::size_t j) {
  return std::string(1, static_cast<char>('A' + j % 26)) + ". " + kSurnames[j % kSurnames.size()] + " " + pad(static_cast<long long>(j), 4);
}

std::string raw_rights_token(AccessClass c) {
  switch (c) {
    case AccessClass::Open: return "OPEN_ACCESS";
    case AccessClass::RestrictedGroup: return "GROUP_ACCESS";
    case AccessClass::Restricted: return "RESTRICTED_REQUEST";
    case AccessClass::Other: return "NO_ACCESS";
  }
  return "NO_ACCESS";
}

std::array<std::size_t, 4> largest_remainder(const std::map<AccessClass, double>& mix, std::size_t n) {
  std::array<std::size_t, 4> counts{};
  if (mix.empty()) {
    counts[index_of(AccessClass::Open)] = n;
    return counts;
  }
  std::array<double, 4> frac{};
  std::size_t assigned = 0;
  for (auto c : kAccessClasses) {
    auto it = mix.find(c);
    double quota = it == mix.end() ? 0.0 : it->second * static_cast<double>(n);
    counts[index_of(c)] = static_cast<std::size_t>(std::floor(quota));
    frac[index_of(c)] = quota - std::floor(quota);
    assigned += counts[index_of(c)];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % 4]];
  return counts;
}

struct GenRecord {
  bool dominant = false;
  int arity = 1;
  std::vector<std::string> leaves;
  AccessClass access = AccessClass::Open;
  bool in_driver = false;
  std::vector<std::size_t> creators;
  long long serial = 0;
};

bool comparable(const CategoryTree& tree, const std::string& a, const std::string& b) {
  return tree.in_subtree(a, b) || tree.in_subtree(b, a);
}

bool compatible(const CategoryTree& tree, const std::string& c, const std::vector<std::string>& chosen) {
  return std::none_of(chosen.begin(), chosen.end(), [&](const std::string& x) { return comparable(tree, c, x); });
}

// Largest antichain among `used` nodes of a forest: per node, either the node
// itself or the best antichains of its children.
std::size_t antichain_width(const CategoryTree& tree, const std::set<std::string>& used) {
  std::function<std::size_t(const std::string&)> width = [&](const std::string& code) -> std::size_t {
    std::size_t below = 0;
    for (const auto& c : tree.at(code).children) below += width(c);
    return std::max<std::size_t>(used.count(code) ? 1 : 0, below);
  };
  std::size_t total = 0;
  for (const auto& r : tree.roots()) total += width(r);
  return total;
}

void validate(const CorpusSpec& s) {
  if (s.n_unique < 0) spec_error("n_unique must be >= 0");
  const auto& t = s.tree;
  if (t.roots < 1 || t.roots > 9 || t.children_per_root < 0 || t.children_per_root > 9 ||
      t.grandchildren_per_child < 0 || t.grandchildren_per_child > 9)
    spec_error("tree shape counts must lie in 1..9 (roots) and 0..9 (children)");
  long long hist_total = 0, expansion = 0;
  for (const auto& [arity, count] : s.multi_assignment_histogram) {
    expansion += static_cast<long long>(arity) * count;
    if (arity < 1) spec_error("histogram arity must be >= 1");
    if (arity > 9) spec_error("histogram arity " + std::to_string(arity) + " exceeds the maximum of 9");
    if (count < 0) spec_error("histogram counts must be >= 0");
    hist_total += count;
  }
  if (hist_total != s.n_unique)
    spec_error("histogram counts sum to " + std::to_string(hist_total) + ", expected n_unique " +
               std::to_string(s.n_unique));
  if (s.n_assignments && *s.n_assignments != expansion)
    spec_error("histogram expands to " + std::to_string(expansion) + " assignments, expected n_assignments " +
               std::to_string(*s.n_assignments));
  if (!s.rights_mix.empty()) {
    double sum = 0;
    for (const auto& [c, m] : s.rights_mix) {
      if (m < 0) spec_error("rights_mix masses must be >= 0");
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-9) spec_error("rights_mix masses must sum to 1");
  }
  if (!s.category_profile.empty()) {
    double sum = 0;
    for (const auto& [c, m] : s.category_profile) {
      if (m < 0) spec_error("category_profile masses must be >= 0");
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-9) spec_error("category_profile masses must sum to 1 (+/- 1e-9)");
  }
  if (s.dominant && (s.dominant->share < 0 || s.dominant->share > 1)) spec_error("dominant.share must lie in [0,1]");
  if (s.n_categories_used < (s.n_unique > 0 ? 1 : 0)) spec_error("n_categories_used must be >= 1");
  if (s.driver_error_count < 0 || s.driver_error_count > s.n_unique)
    spec_error("driver_error_count must lie in [0, n_unique]");
  if (s.embargoed_count < 0 || s.embargoed_count > s.driver_error_count)
    spec_error("embargoed_count must lie in [0, driver_error_count]");
  if (s.duplicate_factor < 1.0) spec_error("duplicate_factor must be >= 1");
  if (s.n_deleted < 0 || s.n_quarantined < 0) spec_error("n_deleted and n_quarantined must be >= 0");
  const auto& d = s.depositor_powerlaw;
  if (s.n_unique > 0) {
    if (d.count < 1) spec_error("depositor_powerlaw.count must be >= 1");
    if (d.top_datasets < 1) spec_error("depositor_powerlaw.top_datasets must be >= 1");
    if (d.top_datasets + d.count - 1 > s.n_unique)
      spec_error("depositors cannot each own a dataset: top_datasets + count - 1 > n_unique");
    if (d.count > 1) {
      long long capacity = static_cast<long long>(d.count - 1) * (d.top_datasets - 1);
      if (capacity < s.n_unique - d.top_datasets)
        spec_error("top depositor cannot stay strictly largest with these counts");
    } else if (d.top_datasets != s.n_unique) {
      spec_error("a single depositor must own every dataset (top_datasets = n_unique)");
    }
  }
  if (d.second_creator_fraction < 0 || d.second_creator_fraction > 1)
    spec_error("second_creator_fraction must lie in [0,1]");
}

}  // namespace

CategoryTree generate_tree(const CorpusSpec::TreeShape& shape) {
  std::vector<TreeRow> rows;
  auto label_for = [&](const std::string& code, std::string fallback) {
    auto it = shape.labels.find(code);
    return it == shape.labels.end() ? fallback : it->second;
  };
  for (int r = 1; r <= shape.roots; ++r) {
    std::string root = "D" + std::to_string(r) + "0000";
    rows.push_back({root, "", label_for(root, kRootLabels[static_cast<std::size_t>(r - 1)])});
    for (int c = 1; c <= shape.children_per_root; ++c) {
      std::string child = "D" + std::to_string(r) + std::to_string(c) + "000";
      rows.push_back({child, root, label_for(child, "Field " + child)});
      for (int g = 1; g <= shape.grandchildren_per_child; ++g) {
        std::string grand = "D" + std::to_string(r) + std::to_string(c) + std::to_string(g) + "00";
        rows.push_back({grand, child, label_for(grand, "Field " + grand)});
      }
    }
  }
  return CategoryTree::from_rows(rows);
}

Corpus generate_corpus(const CorpusSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  CategoryTree tree = generate_tree(spec.tree);
  const std::size_t n = static_cast<std::size_t>(spec.n_unique);

  // --- category universe -----------------------------------------------------
  std::vector<std::string> dom_nodes, other_nodes;
  if (spec.dominant && !tree.contains(spec.dominant->code))
    spec_error("dominant code " + spec.dominant->code + " is not in the generated tree");
  for (const auto& node : tree.nodes()) {
    if (spec.dominant && tree.in_subtree(node.code, spec.dominant->code)) dom_nodes.push_back(node.code);
    else other_nodes.push_back(node.code);
  }
  const std::size_t n_used = static_cast<std::size_t>(spec.n_categories_used);
  if (n_used > tree.size()) spec_error("n_categories_used exceeds the number of tree nodes");
  if (n_used < dom_nodes.size()) spec_error("n_categories_used is smaller than the dominant subtree");
  rng.shuffle(other_nodes);
  std::vector<std::string> used_other(other_nodes.begin(),
                                      other_nodes.begin() + static_cast<std::ptrdiff_t>(n_used - dom_nodes.size()));
  const std::set<std::string> used_other_set(used_other.begin(), used_other.end());

  auto hist_count = [&](int arity) {
    auto it = spec.multi_assignment_histogram.find(arity);
    return it == spec.multi_assignment_histogram.end() ? 0 : it->second;
  };
  const std::size_t n_single = static_cast<std::size_t>(hist_count(1));
  const std::size_t n_dom =
      spec.dominant ? static_cast<std::size_t>(std::llround(spec.dominant->share * static_cast<double>(n))) : 0;
  if (n_dom > n_single) spec_error("dominant branch records must be single-category but exceed the arity-1 count");
  if (spec.dominant && n_dom < dom_nodes.size())
    spec_error("dominant branch has fewer records than categories to cover");

  // --- arities -----------------------------------------------------------------
  std::vector<GenRecord> recs(n);
  for (std::size_t i = 0; i < n_dom; ++i) recs[i].dominant = true;
  {
    std::vector<int> arities(n_single - n_dom, 1);
    int max_arity = 1;
    for (const auto& [arity, count] : spec.multi_assignment_histogram) {
      if (arity == 1) continue;
      arities.insert(arities.end(), static_cast<std::size_t>(count), arity);
      if (count > 0) max_arity = std::max(max_arity, arity);
    }
    rng.shuffle(arities);
    for (std::size_t i = n_dom; i < n; ++i) recs[i].arity = arities[i - n_dom];
    const std::size_t non_dom = n - n_dom;
    if (non_dom > 0 && used_other.empty()) spec_error("records outside the dominant branch but no category for them");
    if (non_dom < used_other.size()) spec_error("too few records to use every non-dominant category");
    if (non_dom > 0 && antichain_width(tree, used_other_set) < static_cast<std::size_t>(max_arity))
      spec_error("used categories admit no " + std::to_string(max_arity) + " mutually unrelated choices");
  }

  // --- categories ----------------------------------------------------------------
  for (std::size_t k = 0; k < dom_nodes.size(); ++k) recs[k].leaves = {dom_nodes[k]};
  for (std::size_t k = 0; k < used_other.size(); ++k) recs[n_dom + k].leaves = {used_other[k]};

  std::vector<std::string> profile_roots;
  std::vector<double> profile_cumulative;
  std::map<std::string, std::vector<std::string>> by_root;
  for (const auto& code : used_other) by_root[tree.path_to(code).codes().front()].push_back(code);
  for (auto& [root, codes] : by_root) std::sort(codes.begin(), codes.end());
  {
    double acc = 0;
    if (spec.category_profile.empty()) {
      for (const auto& [root, codes] : by_root) {
        profile_roots.push_back(root);
        profile_cumulative.push_back(acc += 1.0);
      }
    } else {
      for (const auto& [root, mass] : spec.category_profile) {
        const auto* node = tree.find(root);
        if (!node || node->parent) spec_error("category_profile key " + root + " is not a root code");
        if (mass > 0 && !by_root.count(root) && n > n_dom)
          spec_error("category_profile gives mass to " + root + " but none of its categories are used");
        if (mass <= 0) continue;
        profile_roots.push_back(root);
        profile_cumulative.push_back(acc += mass);
      }
    }
  }
  std::vector<std::string> used_other_leaves;  // used nodes with no used descendant
  for (const auto& code : used_other) {
    bool has_used_below = std::any_of(used_other.begin(), used_other.end(), [&](const std::string& o) {
      return o != code && tree.in_subtree(o, code);
    });
    if (!has_used_below) used_other_leaves.push_back(code);
  }
  std::sort(used_other_leaves.begin(), used_other_leaves.end());

  for (std::size_t i = 0; i < n; ++i) {
    auto& r = recs[i];
    if (r.dominant) {
      if (r.leaves.empty()) r.leaves = {dom_nodes[rng.below(dom_nodes.size())]};
      continue;
    }
    int attempts = 0;
    while (static_cast<int>(r.leaves.size()) < r.arity) {
      std::string pick;
      if (attempts < 32 && !profile_roots.empty()) {
        double u = rng.unit() * profile_cumulative.back();
        auto at = std::upper_bound(profile_cumulative.begin(), profile_cumulative.end(), u) - profile_cumulative.begin();
        const auto& pool = by_root[profile_roots[std::min<std::size_t>(static_cast<std::size_t>(at), profile_roots.size() - 1)]];
        if (!pool.empty()) {
          const auto& c = pool[rng.below(pool.size())];
          if (compatible(tree, c, r.leaves)) pick = c;
        }
        ++attempts;
      } else {
        std::vector<std::string> pool;
        for (const auto& c : used_other)
          if (compatible(tree, c, r.leaves)) pool.push_back(c);
        std::sort(pool.begin(), pool.end());
        if (!pool.empty()) {
          pick = pool[rng.below(pool.size())];
        } else {
          // Dead end: keep the forced first choice and fill from the leaf antichain.
          r.leaves.resize(1);
          for (const auto& c : used_other_leaves)
            if (static_cast<int>(r.leaves.size()) < r.arity && compatible(tree, c, r.leaves)) r.leaves.push_back(c);
          if (static_cast<int>(r.leaves.size()) < r.arity)
            spec_error("cannot place " + std::to_string(r.arity) + " unrelated categories on one record");
          break;
        }
      }
      if (!pick.empty()) r.leaves.push_back(pick);
    }
  }

  // --- access classes ----------------------------------------------------------
  auto counts = largest_remainder(spec.rights_mix, n);
  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<bool> taken(n, false);
    const std::size_t n_rg = counts[index_of(AccessClass::RestrictedGroup)];
    if (spec.dominant && n_rg > 0) {
      if (n_rg > n_dom) spec_error("RestrictedGroup count exceeds the dominant branch it is confined to");
      std::vector<std::size_t> dom_idx(n_dom);
      std::iota(dom_idx.begin(), dom_idx.end(), 0);
      rng.shuffle(dom_idx);
      for (std::size_t k = 0; k < n_rg; ++k) {
        recs[dom_idx[k]].access = AccessClass::RestrictedGroup;
        taken[dom_idx[k]] = true;
      }
    }
    std::vector<AccessClass> rest;
    for (auto c : kAccessClasses) {
      if (spec.dominant && c == AccessClass::RestrictedGroup) continue;
      rest.insert(rest.end(), counts[index_of(c)], c);
    }
    rng.shuffle(rest);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) recs[i].access = rest[k++];
  }

  // --- Driver membership and planted contradictions ----------------------------
  for (auto& r : recs) r.in_driver = r.access == AccessClass::Open;
  std::vector<std::size_t> flipped, embargoed;
  {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < n; ++i)
      if (recs[i].access == AccessClass::Open) open.push_back(i);
    if (static_cast<std::size_t>(spec.embargoed_count) > open.size())
      spec_error("embargoed_count exceeds the number of Open records");
    rng.shuffle(open);
    std::vector<bool> chosen(n, false);
    for (int k = 0; k < spec.embargoed_count; ++k) {
      embargoed.push_back(open[static_cast<std::size_t>(k)]);
      chosen[open[static_cast<std::size_t>(k)]] = true;
    }
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i)
      if (!chosen[i]) others.push_back(i);
    rng.shuffle(others);
    flipped = embargoed;
    for (std::size_t k = 0; k < static_cast<std::size_t>(spec.driver_error_count - spec.embargoed_count); ++k)
      flipped.push_back(others[k]);
    for (auto i : flipped) recs[i].in_driver = !recs[i].in_driver;
  }

  // --- identifiers ---------------------------------------------------------------
  {
    std::vector<long long> serials(n);
    std::iota(serials.begin(), serials.end(), 10001LL);
    rng.shuffle(serials);
    for (std::size_t i = 0; i < n; ++i) recs[i].serial = serials[i];
  }

  // --- depositors ----------------------------------------------------------------
  const auto& dep = spec.depositor_powerlaw;
  const std::size_t n_dep = n > 0 ? static_cast<std::size_t>(dep.count) : 0;
  std::vector<std::string> names(n_dep);
  std::vector<std::size_t> dep_counts(n_dep, 0);
  for (std::size_t j = 0; j < n_dep; ++j) names[j] = j == 0 ? dep.top_name : depositor_name(j);
  if (n > 0) {
    std::set<std::string> distinct(names.begin(), names.end());
    if (distinct.size() != names.size()) spec_error("depositor names collide with top_name");
    const std::size_t cap = static_cast<std::size_t>(dep.top_datasets) - 1;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::size_t pos = 0;
    for (; pos < static_cast<std::size_t>(dep.top_datasets); ++pos) recs[order[pos]].creators = {0};
    dep_counts[0] = static_cast<std::size_t>(dep.top_datasets);
    for (std::size_t j = 1; j < n_dep; ++j, ++pos) {
      recs[order[pos]].creators = {j};
      dep_counts[j] = 1;
    }
    std::vector<double> cumulative;
    double acc = 0;
    for (std::size_t j = 1; j < n_dep; ++j) cumulative.push_back(acc += 1.0 / std::pow(static_cast<double>(j), dep.exponent));
    auto draw_other = [&]() -> std::size_t {
      double u = rng.unit() * cumulative.back();
      auto at = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      std::size_t j = std::min(at, cumulative.size() - 1) + 1;
      for (std::size_t step = 0; step < n_dep - 1 && dep_counts[j] >= cap; ++step) j = j % (n_dep - 1) + 1;
      return j;
    };
    for (; pos < n; ++pos) {
      std::size_t j = draw_other();
      recs[order[pos]].creators = {j};
      ++dep_counts[j];
    }
    if (n_dep > 2 && dep.second_creator_fraction > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        auto& r = recs[i];
        if (r.creators.front() == 0 || rng.unit() >= dep.second_creator_fraction) continue;
        std::size_t j = 1 + rng.below(n_dep - 1);
        if (j == r.creators.front() || dep_counts[j] >= cap) continue;
        r.creators.push_back(j);
        ++dep_counts[j];
      }
    }
  }

  // --- raw records -----------------------------------------------------------------
  const std::vector<std::string> creator_names = names;
  std::vector<std::string> stamps(n);
  auto draw_datestamp = [&]() {
    using namespace std::chrono;
    auto day = sys_days{year{2011} / January / 1} + days{static_cast<int>(rng.below(384))};
    return format_utc_timestamp(Timestamp{day} + seconds{static_cast<long long>(rng.below(86400))});
  };
  for (auto& st : stamps) st = draw_datestamp();

  auto fill_dc = [&](oai::RawRecord& raw, long long serial, AccessClass access,
                     const std::vector<std::string>& creators) {
    const std::string sid = std::to_string(serial);
    const auto s = static_cast<std::size_t>(serial);
    const char* region = kRegions[s % kRegions.size()];
    raw.dc_elements.push_back({"coverage", region});
    raw.dc_elements.push_back({"coverage", std::to_string(1400 + s % 500) + " - " + std::to_string(1500 + s % 500)});
    for (const auto& c : creators) raw.dc_elements.push_back({"creator", c});
    raw.dc_elements.push_back({"date", "19" + pad(static_cast<long long>(50 + s % 50), 2) + "-01-" +
                                           pad(static_cast<long long>(1 + s % 28), 2)});
    raw.dc_elements.push_back({"date", raw.datestamp.substr(0, 10)});
    if (s % 3 == 0) raw.dc_elements.push_back({"identifier", "twips.dans.knaw.nl-" + sid});
    raw.dc_elements.push_back({"identifier", "urn:nbn:nl:ui:13-syn-" + sid});
    raw.dc_elements.push_back({"identifier", "easy-dataset:" + sid});
    raw.dc_elements.push_back({"rights", raw_rights_token(access)});
    raw.dc_elements.push_back({"rights", "accept"});
    raw.dc_elements.push_back({"subject", std::string(kTopics[(s / 7) % kTopics.size()])});
    raw.dc_elements.push_back({"title", std::string(kTopics[s % kTopics.size()]) + " " +
                                            kKinds[(s / 10) % kKinds.size()] + " " + region + " S" + pad(serial, 6)});
    if (s % 4 == 0) raw.dc_elements.push_back({"title", std::string("Onderzoek ") + region + " " + sid});
  };
  auto make_raw = [&](std::size_t i, const std::vector<std::string>& leaves) {
    const auto& r = recs[i];
    oai::RawRecord raw;
    raw.identifier = "oai:synthetic.archive:easy-dataset:" + std::to_string(r.serial);
    raw.datestamp = stamps[i];
    for (const auto& leaf : leaves) raw.set_specs.push_back(tree.path_to(leaf).to_string());
    if (r.in_driver) raw.set_specs.push_back("driver");
    std::vector<std::string> creators;
    for (auto c : r.creators) creators.push_back(creator_names[c]);
    fill_dc(raw, r.serial, r.access, creators);
    return raw;
  };

  std::vector<oai::RawRecord> raws;
  std::size_t kept_raws = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.split_multi_category && recs[i].leaves.size() > 1) {
      for (const auto& leaf : recs[i].leaves) raws.push_back(make_raw(i, {leaf}));
    } else {
      raws.push_back(make_raw(i, recs[i].leaves));
    }
  }
  if (n > 0) {
    const auto extra = static_cast<std::size_t>(std::llround((spec.duplicate_factor - 1.0) * static_cast<double>(n)));
    for (std::size_t k = 0; k < extra; ++k) {
      std::size_t i = rng.below(n);
      raws.push_back(make_raw(i, recs[i].leaves));
    }
  }
  kept_raws = raws.size();
  long long next_serial = 10001LL + static_cast<long long>(n);
  for (int k = 0; k < spec.n_deleted; ++k) {
    oai::RawRecord raw;
    raw.identifier = "oai:synthetic.archive:easy-dataset:" + std::to_string(next_serial++);
    raw.datestamp = draw_datestamp();
    raw.deleted = true;
    raws.push_back(std::move(raw));
  }
  for (int k = 0; k < spec.n_quarantined; ++k) {
    oai::RawRecord raw;
    const long long serial = next_serial++;
    raw.identifier = "oai:synthetic.archive:easy-dataset:" + std::to_string(serial);
    raw.datestamp = draw_datestamp();
    if (k % 2 == 0) {
      raw.set_specs = {"driver"};
    } else {
      raw.set_specs = {"Z99999"};
    }
    fill_dc(raw, serial, AccessClass::Restricted, {n_dep > 1 ? creator_names[1] : std::string("Unknown depositor")});
    raws.push_back(std::move(raw));
  }
  rng.shuffle(raws);

  // --- ground truth ----------------------------------------------------------------
  GroundTruth truth;
  truth.n_records = n;
  truth.n_tree_nodes = tree.size();
  std::set<std::string> assigned;
  std::map<std::string, std::size_t> direct;
  for (const auto& r : recs) {
    truth.n_assignments += r.leaves.size();
    ++truth.histogram[static_cast<int>(r.leaves.size())];
    truth.max_categories_per_record = std::max(truth.max_categories_per_record, r.leaves.size());
    ++truth.per_access_class[index_of(r.access)];
    for (const auto& l : r.leaves) {
      assigned.insert(l);
      ++direct[l];
    }
  }
  truth.n_categories_used = assigned.size();
  truth.n_single_category = truth.histogram.count(1) ? truth.histogram[1] : 0;
  truth.pct_single_category = n ? static_cast<double>(truth.n_single_category) / static_cast<double>(n) : 0.0;
  truth.quarantine_count = static_cast<std::size_t>(spec.n_quarantined);
  std::set<std::string> depositors;
  for (const auto& r : recs)
    for (auto c : r.creators) depositors.insert(creator_names[c]);
  truth.n_depositors = depositors.size();

  for (const auto& node : tree.nodes()) {
    RollupTruth t;
    auto d = direct.find(node.code);
    t.direct = d == direct.end() ? 0 : d->second;
    for (const auto& r : recs) {
      bool touches = false;
      for (const auto& l : r.leaves) {
        if (tree.in_subtree(l, node.code)) {
          ++t.assignment;
          touches = true;
        }
      }
      if (touches) ++t.unique;
    }
    truth.rollups[node.code] = t;
  }

  auto easy_id = [&](std::size_t i) { return "easy-dataset:" + std::to_string(recs[i].serial); };
  for (auto i : flipped) truth.difference_ids.push_back(easy_id(i));
  for (auto i : embargoed) truth.embargo_ids.push_back(easy_id(i));
  std::sort(truth.difference_ids.begin(), truth.difference_ids.end());
  std::sort(truth.embargo_ids.begin(), truth.embargo_ids.end());
  truth.driver_differences = truth.difference_ids.size();

  if (spec.dominant) {
    truth.dominant_code = spec.dominant->code;
    truth.dominant_unique_rollup = truth.rollups[spec.dominant->code].unique;
    truth.dominant_share = n ? static_cast<double>(truth.dominant_unique_rollup) / static_cast<double>(n) : 0.0;
    for (const auto& r : recs)
      if (r.access == AccessClass::RestrictedGroup && !r.dominant) ++truth.restricted_group_outside_dominant;
  }
  if (n_dep > 0) {
    truth.top_depositor = creator_names[0];
    truth.top_depositor_datasets = dep_counts[0];
  }
  truth.duplicates_removed = kept_raws - n;
  truth.deleted_skipped = static_cast<std::size_t>(spec.n_deleted);
  if (n > 0) {
    std::size_t probe = rng.below(n);
    truth.search_token = "S" + pad(recs[probe].serial, 6);
    truth.search_easy_id = easy_id(probe);
  }

  return Corpus{std::move(raws), std::move(tree), std::move(truth)};
}

// --- JSON ---------------------------------------------------------------------------

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) spec_error(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) spec_error("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    spec_error(std::string("bad value for ") + key + ": " + e.what());
  }
}

}  // namespace

CorpusSpec CorpusSpec::from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    spec_error(std::string("malformed JSON: ") + e.what());
  }
  check_keys(j,
             {"n_unique", "tree", "n_categories_used", "dominant", "category_profile", "multi_assignment_histogram",
              "n_assignments", "rights_mix", "depositor_powerlaw", "driver_error_count", "embargoed_count", "duplicate_factor",
              "split_multi_category", "n_deleted", "n_quarantined", "seed"},
             "spec");
  CorpusSpec s;
  read(j, "n_unique", s.n_unique);
  read(j, "n_categories_used", s.n_categories_used);
  read(j, "category_profile", s.category_profile);
  read(j, "driver_error_count", s.driver_error_count);
  read(j, "embargoed_count", s.embargoed_count);
  read(j, "duplicate_factor", s.duplicate_factor);
  read(j, "split_multi_category", s.split_multi_category);
  read(j, "n_deleted", s.n_deleted);
  read(j, "n_quarantined", s.n_quarantined);
  read(j, "seed", s.seed);
  if (j.contains("n_assignments") && !j["n_assignments"].is_null()) {
    if (!j["n_assignments"].is_number_integer()) spec_error("n_assignments must be an integer");
    s.n_assignments = j["n_assignments"].get<long long>();
  }
  if (j.contains("tree")) {
    const auto& t = j["tree"];
    check_keys(t, {"roots", "children_per_root", "grandchildren_per_child", "labels"}, "tree");
    read(t, "roots", s.tree.roots);
    read(t, "children_per_root", s.tree.children_per_root);
    read(t, "grandchildren_per_child", s.tree.grandchildren_per_child);
    read(t, "labels", s.tree.labels);
  }
  if (j.contains("dominant") && !j["dominant"].is_null()) {
    const auto& d = j["dominant"];
    check_keys(d, {"code", "share"}, "dominant");
    Dominant dom;
    read(d, "code", dom.code);
    read(d, "share", dom.share);
    s.dominant = dom;
  }
  if (j.contains("multi_assignment_histogram")) {
    const auto& h = j["multi_assignment_histogram"];
    if (!h.is_object()) spec_error("multi_assignment_histogram must be an object");
    for (const auto& [k, v] : h.items()) {
      int arity = 0;
      try {
        std::size_t used = 0;
        arity = std::stoi(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
      } catch (const std::exception&) {
        spec_error("histogram key '" + k + "' is not an integer");
      }
      if (!v.is_number_integer()) spec_error("histogram count for " + k + " must be an integer");
      s.multi_assignment_histogram[arity] = v.get<int>();
    }
  }
  if (j.contains("rights_mix")) {
    const auto& m = j["rights_mix"];
    if (!m.is_object()) spec_error("rights_mix must be an object");
    for (const auto& [k, v] : m.items()) {
      auto c = parse_access_class(k);
      if (!c) spec_error("unknown access class '" + k + "' in rights_mix");
      if (!v.is_number()) spec_error("rights_mix value for " + k + " must be a number");
      s.rights_mix[*c] = v.get<double>();
    }
  }
  if (j.contains("depositor_powerlaw")) {
    const auto& d = j["depositor_powerlaw"];
    check_keys(d, {"count", "top_name", "top_datasets", "exponent", "second_creator_fraction"}, "depositor_powerlaw");
    read(d, "count", s.depositor_powerlaw.count);
    read(d, "top_name", s.depositor_powerlaw.top_name);
    read(d, "top_datasets", s.depositor_powerlaw.top_datasets);
    read(d, "exponent", s.depositor_powerlaw.exponent);
    read(d, "second_creator_fraction", s.depositor_powerlaw.second_creator_fraction);
  }
  return s;
}

std::string CorpusSpec::to_json() const {
  json j;
  j["n_unique"] = n_unique;
  j["tree"] = {{"roots", tree.roots},
               {"children_per_root", tree.children_per_root},
               {"grandchildren_per_child", tree.grandchildren_per_child},
               {"labels", tree.labels}};
  j["n_categories_used"] = n_categories_used;
  j["dominant"] = dominant ? json{{"code", dominant->code}, {"share", dominant->share}} : json(nullptr);
  j["category_profile"] = category_profile;
  json hist = json::object();
  for (const auto& [a, c] : multi_assignment_histogram) hist[std::to_string(a)] = c;
  j["multi_assignment_histogram"] = hist;
  j["n_assignments"] = n_assignments ? json(*n_assignments) : json(nullptr);
  json mix = json::object();
  for (const auto& [c, m] : rights_mix) mix[std::string(archive_lens::catalogue::to_string(c))] = m;
  j["rights_mix"] = mix;
  j["depositor_powerlaw"] = {{"count", depositor_powerlaw.count},
                             {"top_name", depositor_powerlaw.top_name},
                             {"top_datasets", depositor_powerlaw.top_datasets},
                             {"exponent", depositor_powerlaw.exponent},
                             {"second_creator_fraction", depositor_powerlaw.second_creator_fraction}};
  j["driver_error_count"] = driver_error_count;
  j["embargoed_count"] = embargoed_count;
  j["duplicate_factor"] = duplicate_factor;
  j["split_multi_category"] = split_multi_category;
  j["n_deleted"] = n_deleted;
  j["n_quarantined"] = n_quarantined;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

std::string GroundTruth::to_json(const CorpusSpec& spec) const {
  json j;
  j["spec"] = json::parse(spec.to_json());
  j["nRecords"] = n_records;
  j["nCategoriesUsed"] = n_categories_used;
  j["nTreeNodes"] = n_tree_nodes;
  j["nDepositors"] = n_depositors;
  j["nAssignments"] = n_assignments;
  j["nSingleCategory"] = n_single_category;
  j["pctSingleCategory"] = pct_single_category;
  j["maxCategoriesPerRecord"] = max_categories_per_record;
  json per = json::object();
  for (auto c : kAccessClasses) per[std::string(archive_lens::catalogue::to_string(c))] = per_access_class[index_of(c)];
  j["perAccessClass"] = per;
  j["quarantineCount"] = quarantine_count;
  json hist = json::object();
  for (const auto& [a, c] : histogram) hist[std::to_string(a)] = c;
  j["histogram"] = hist;
  json roll = json::object();
  for (const auto& [code, t] : rollups)
    roll[code] = {{"direct", t.direct}, {"assignment", t.assignment}, {"unique", t.unique}};
  j["rollups"] = roll;
  j["driverDifferences"] = driver_differences;
  j["differenceIds"] = difference_ids;
  j["embargoIds"] = embargo_ids;
  j["dominantCode"] = dominant_code ? json(*dominant_code) : json(nullptr);
  j["dominantUniqueRollup"] = dominant_unique_rollup;
  j["dominantShare"] = dominant_share;
  j["restrictedGroupOutsideDominant"] = restricted_group_outside_dominant;
  j["topDepositor"] = top_depositor;
  j["topDepositorDatasets"] = top_depositor_datasets;
  j["duplicatesRemoved"] = duplicates_removed;
  j["deletedSkipped"] = deleted_skipped;
  j["searchToken"] = search_token;
  j["searchEasyId"] = search_easy_id;
  return j.dump(2) + "\n";
}

}  // namespace archive_lens::catalogue
