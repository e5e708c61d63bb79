#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tripleid/dictionary.hpp"
#include "tripleid/kernel.hpp"
#include "tripleid/sparql.hpp"

namespace tripleid {

// ---------------------------------------------------------------------------
// Relationship analysis

/// How subquery j links to an earlier subquery i: the shared variable sits
/// in `left_slot` of q_i and `right_slot` of q_j (type "OS" = object of q_i,
/// subject of q_j).
struct Relationship {
  std::size_t i = 0;
  std::size_t j = 0;
  Slot left_slot = Slot::S;
  Slot right_slot = Slot::S;
  std::string variable;

  std::string type() const { return {slot_letter(left_slot), slot_letter(right_slot)}; }
};

/// One relationship per pattern after the first, linking it to the nearest
/// earlier pattern sharing a variable. With several shared variables the
/// first in q_i's SPO order is the join key. Throws DisconnectedPatterns when
/// a pattern shares nothing with its predecessors.
std::vector<Relationship> analyze_relationships(std::span<const TriplePattern> patterns);

// ---------------------------------------------------------------------------
// Merge join

/// Key/value vectors of one subquery's matches. key[r] is the triple's ID in
/// key_slot; the value row holds the IDs of the other variable slots.
struct BindingRelation {
  Slot key_slot = Slot::S;
  std::vector<Slot> value_slots;
  std::vector<TermId> keys;
  std::vector<TermId> values;  // row-major, value_slots.size() per row

  std::size_t rows() const noexcept { return keys.size(); }
  std::span<const TermId> value(std::size_t row) const {
    return {values.data() + row * value_slots.size(), value_slots.size()};
  }
  bool sorted() const noexcept;
  /// Stable sort by key, permuting values alongside.
  void sort_by_key();
};

BindingRelation build_relation(std::span<const Triple> matched, const TriplePattern& pattern, Slot join_slot);
/// Same, gathering the triples of subquery `q` out of a resident chunk.
BindingRelation build_relation(const MultiMatchResult& result, std::size_t q, const TripleChunk& chunk,
                               const TriplePattern& pattern, Slot join_slot);

inline constexpr std::size_t kDefaultMaxJoinRows = 50'000'000;

using JoinPairs = std::vector<std::pair<std::size_t, std::size_t>>;

/// All (l, r) with left[l] == right[r]. Inputs need not be sorted; indices
/// refer to the caller's row order. Output is grouped by key ascending, then
/// l, then r. Throws ResourceLimit past `max_pairs`.
JoinPairs merge_join(std::span<const TermId> left_keys, std::span<const TermId> right_keys,
                     std::size_t max_pairs = kDefaultMaxJoinRows);
JoinPairs merge_join(const BindingRelation& left, const BindingRelation& right,
                     std::size_t max_pairs = kDefaultMaxJoinRows);

// ---------------------------------------------------------------------------
// Binding tables

/// Marks a variable left unbound in a UNION branch.
inline constexpr TermId kUnbound = 0;

/// Solution rows over named variables. Rows are appended through add_row so
/// that zero-column tables (all-bound patterns) still count their rows.
struct BindingTable {
  std::vector<std::string> columns;
  std::vector<TermId> cells;  // row-major
  std::size_t n_rows = 0;

  std::size_t width() const noexcept { return columns.size(); }
  std::size_t rows() const noexcept { return n_rows; }
  std::span<const TermId> row(std::size_t r) const { return {cells.data() + r * width(), width()}; }
  void add_row(std::span<const TermId> row);
  std::optional<std::size_t> column_of(std::string_view var) const;
};

/// SPARQL str(): IRI without brackets, literal lexical value without quotes,
/// language tag or datatype. Blank nodes have no string form.
std::optional<std::string> term_str(std::string_view lexical);

/// Compiled FILTER with a per-ID verdict cache.
class RegexFilter {
 public:
  RegexFilter(std::string variable, const std::string& pattern);
  const std::string& variable() const noexcept { return variable_; }
  bool test(TermId id, const Dictionary& dict);

 private:
  std::string variable_;
  std::regex regex_;
  std::unordered_map<TermId, bool> cache_;
};

struct EvalOptions {
  unsigned workers = 1;
  std::uint64_t chunk_triples = std::uint64_t{1} << 20;
  std::size_t max_join_rows = kDefaultMaxJoinRows;
};

struct EvalTimings {
  double search_ms = 0;
  double join_ms = 0;
};

/// Matched triples per key, in file order. Keys are searched 32 at a time,
/// one pass over the file per batch.
std::vector<std::vector<Triple>> materialize_patterns(const std::filesystem::path& tid,
                                                      std::span<const PatternKey> keys, const EvalOptions& opts);

/// Filters, then joins left to right, the per-pattern matches of one group.
BindingTable join_group(const Group& group, const CompiledGroup& compiled, std::vector<std::vector<Triple>> matches,
                        const Dictionary& dict, const EvalOptions& opts);

/// Searches and joins one group against a .tid file.
BindingTable evaluate_group(const Group& group, const std::filesystem::path& tid, const Dictionary& dict,
                            const EvalOptions& opts, EvalTimings* timings = nullptr);

/// Concatenates branch tables over the union of their columns; cells of
/// columns a branch lacks are kUnbound.
BindingTable evaluate_union(std::span<const BindingTable> groups);

/// Keeps `projection` columns (all when empty/select-all) and, if `distinct`,
/// the first occurrence of each row.
BindingTable project_distinct(const BindingTable& table, std::span<const std::string> projection, bool select_all,
                              bool distinct);

/// Full pipeline for a parsed query.
BindingTable evaluate_query(const QueryAst& ast, const std::filesystem::path& tid, const Dictionary& dict,
                            const EvalOptions& opts, EvalTimings* timings = nullptr);

/// TSV: `?var` header, one line per row, verbatim N-Triples tokens, empty
/// cells for unbound variables. Throws UnknownId on undecodable IDs.
void decode_table(const BindingTable& table, const Dictionary& dict, std::ostream& out);
std::string decode_table(const BindingTable& table, const Dictionary& dict);

}  // namespace tripleid
