#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "tripleid/dictionary.hpp"
#include "tripleid/kernel.hpp"

namespace tripleid {

namespace vocab {
inline constexpr std::string_view kRdfType = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
inline constexpr std::string_view kSubClassOf = "<http://www.w3.org/2000/01/rdf-schema#subClassOf>";
inline constexpr std::string_view kSubPropertyOf = "<http://www.w3.org/2000/01/rdf-schema#subPropertyOf>";
inline constexpr std::string_view kDomain = "<http://www.w3.org/2000/01/rdf-schema#domain>";
inline constexpr std::string_view kRange = "<http://www.w3.org/2000/01/rdf-schema#range>";
}  // namespace vocab

/// A two-stage RDFS rule. Stage 1 searches (?, stage1_predicate, ?); each
/// hit yields a link value (the shared variable) and a partner. Stage 2
/// searches one key per distinct link, either (link, stage2_predicate, ?) or
/// (?, link, ?) when the link is itself a predicate.
///
///   rdfs2   s p o  &  p domain D         =>  s type D
///   rdfs3   s p o  &  p range R          =>  o type R
///   rdfs5   p subPropertyOf q  &  q subPropertyOf r  =>  p subPropertyOf r
///   rdfs7   s p o  &  p subPropertyOf q  =>  s q o
///   rdfs9   s type x  &  x subClassOf y  =>  s type y
///   rdfs11  x subClassOf y  &  y subClassOf z  =>  x subClassOf z
enum class Stage2Partner : std::uint8_t { Subject, Object, SubjectObject };

struct EntailmentRule {
  int id;
  std::string_view stage1_predicate;
  Slot link_slot;     // slot of the stage-1 triple holding the link
  Slot partner_slot;  // slot of the stage-1 triple kept as partner
  bool link_is_predicate;
  std::string_view stage2_predicate;  // empty when link_is_predicate
  Stage2Partner stage2_partner;
  std::string_view conclusion_predicate;  // empty for rdfs7 (uses the partner)
};

/// Rule by number (2, 3, 5, 7, 9, 11); throws std::out_of_range otherwise.
const EntailmentRule& entailment_rule(int id);
std::span<const EntailmentRule> entailment_rules();

/// Partner IDs stored against a link. Single-term partners leave `second` 0;
/// rdfs7's stage 2 keeps (subject, object).
struct Partner {
  TermId first = 0;
  TermId second = 0;
  friend constexpr auto operator<=>(const Partner&, const Partner&) = default;
};

/// link -> distinct partners in first-seen order.
using StageTable = std::map<TermId, std::vector<Partner>>;

struct RuleCounts {
  std::uint64_t res1 = 0;   // stage-1 accepted triples
  std::uint64_t dist1 = 0;  // distinct stage-1 link values
  std::uint64_t res2 = 0;   // stage-2 accepted triples
  std::uint64_t dist2 = 0;  // distinct link values with a stage-2 hit
  std::uint64_t all = 0;    // distinct inferred triples
  friend constexpr bool operator==(const RuleCounts&, const RuleCounts&) = default;
};

struct RuleRun {
  int rule = 0;
  std::vector<std::uint64_t> stage1_indices;  // ascending global triple indices
  std::vector<std::uint64_t> stage2_indices;
  StageTable stage1;
  StageTable stage2;
  std::vector<Triple> inferred;  // distinct, in generation order
};

struct RuleOptions {
  unsigned workers = 1;
  std::uint64_t chunk_triples = std::uint64_t{1} << 20;
  /// Send only distinct link values to stage 2.
  bool dedup_links = true;
  /// Stage-2 keys per search pass, 1..32.
  std::size_t batch_width = kMaxSubqueries;
};

/// Runs one rule over a .tid file. The dictionary is mutable because a
/// missing conclusion predicate (rdf:type) is encoded on demand.
RuleRun run_rule(int rule_id, const std::filesystem::path& tid, Dictionary& dict, const RuleOptions& opts);

RuleCounts report_counts(const RuleRun& run);

}  // namespace tripleid
