#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tripleid/dictionary.hpp"
#include "tripleid/kernel.hpp"
#include "tripleid/term.hpp"

namespace tripleid {

struct Var {
  std::string name;  // without the leading '?'
  friend bool operator==(const Var&, const Var&) = default;
};

/// A pattern slot: a variable, or a term already expanded to its N-Triples
/// spelling (prefixed names become `<...>`).
using PatternSlot = std::variant<Var, TermToken>;

/// Bound/free shape of a triple pattern; '?' marks a variable slot.
enum class PatternClass : std::uint8_t { SPO, SPx, SxO, xPO, Sxx, xPx, xxO, xxx };

std::string_view to_string(PatternClass c) noexcept;

struct TriplePattern {
  std::array<PatternSlot, 3> slots;

  const PatternSlot& at(Slot s) const { return slots[static_cast<int>(s)]; }
  /// Variable name in slot `s`, or nullptr if the slot holds a term.
  const std::string* var_at(Slot s) const;
  bool has_var(std::string_view name) const;
  /// First slot (SPO order) holding variable `name`.
  std::optional<Slot> slot_of(std::string_view name) const;
  /// Distinct variables in SPO order.
  std::vector<std::string> variables() const;
  PatternClass pattern_class() const;
};

/// FILTER(regex(str(?variable), "regex"))
struct Filter {
  std::string variable;
  std::string regex;
};

struct Group {
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;

  /// Distinct variables in order of first appearance.
  std::vector<std::string> variables() const;
};

struct QueryAst {
  std::map<std::string, std::string> prefixes;  // "rdf" -> IRI without brackets
  bool select_all = true;
  std::vector<std::string> projection;  // empty when select_all
  bool distinct = false;
  std::vector<Group> groups;  // UNION branches; one entry for a plain group

  std::vector<std::string> variables() const;
};

/// Parses the supported SPARQL subset:
///   PREFIX pn: <iri>*
///   SELECT [DISTINCT] (* | ?v+) [WHERE] { group (UNION group)* }
/// where a group is `{ (triple .)* (FILTER(regex(str(?v), "re")) .)* }` and
/// the braces may be dropped for a lone group.
QueryAst parse_query(std::string_view text);

/// A pattern lowered to a search key. var_slot[s] indexes the group's
/// variable list, -1 for bound slots.
struct CompiledPattern {
  PatternKey key;
  std::array<int, 3> var_slot{-1, -1, -1};
};

struct CompiledGroup {
  std::vector<std::string> variables;
  std::vector<CompiledPattern> patterns;
  /// False if some term is missing from the dictionary; the group then
  /// matches nothing.
  bool satisfiable = true;
};

CompiledGroup compile_group(const Group& group, const Dictionary& dict);
std::vector<CompiledGroup> compile_keys(const QueryAst& ast, const Dictionary& dict);

}  // namespace tripleid
