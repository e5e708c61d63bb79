#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tripleid/term.hpp"

namespace tripleid {

/// Bidirectional term <-> ID map with one ID space shared by all roles.
///
/// IDs are assigned densely from 1 in first-seen order. Each ID also records
/// the roles (subject, predicate, object) it has been encoded under; those
/// role sets back the .sid/.pid/.oid files.
///
/// Mutable during conversion only; concurrent reads are safe afterwards.
class Dictionary {
 public:
  explicit Dictionary(TermId capacity = std::numeric_limits<TermId>::max()) : capacity_(capacity) {}

  Dictionary(const Dictionary& other);
  Dictionary& operator=(const Dictionary& other);
  Dictionary(Dictionary&&) noexcept = default;
  Dictionary& operator=(Dictionary&&) noexcept = default;

  /// Returns the ID of `lexical`, assigning the next one if unseen, and
  /// records it under `role`. Throws CapacityExceeded when the ID space is full.
  TermId encode(std::string_view lexical, Role role);
  TermId encode(const TermToken& token, Role role) { return encode(token.lexical, role); }

  /// Lexical form of `id`; throws UnknownId for 0 or unassigned IDs.
  const std::string& lexical(TermId id) const;
  TermToken decode(TermId id) const { return make_token(lexical(id)); }

  std::optional<TermId> find(std::string_view lexical) const;

  bool in_role(TermId id, Role role) const noexcept;
  std::size_t role_count(Role role) const noexcept { return role_counts_[static_cast<int>(role)]; }
  /// IDs recorded under `role`, ascending.
  std::vector<TermId> ids_in_role(Role role) const;

  /// Highest assigned ID; also the number of distinct terms.
  TermId size() const noexcept { return static_cast<TermId>(terms_.size()); }
  bool empty() const noexcept { return terms_.empty(); }

  /// ceil(lg n) maximised over the three role-set sizes.
  unsigned min_id_bits() const noexcept;

  /// Writes `<base>.sid`, `.pid`, `.oid`: one `<id>\t<token>\n` line per ID
  /// in the matching role set, ascending by ID.
  void write_id_files(const std::filesystem::path& basename) const;
  static Dictionary read_id_files(const std::filesystem::path& basename);

  friend bool operator==(const Dictionary& a, const Dictionary& b);

 private:
  void rebuild_index();

  TermId capacity_;
  std::deque<std::string> terms_;  // stable storage; terms_[id - 1]
  std::vector<std::uint8_t> roles_;  // bit r set if encoded under Role r
  std::unordered_map<std::string_view, TermId> index_;
  std::size_t role_counts_[3] = {0, 0, 0};
};

/// ceil(lg n); 0 for n <= 1.
unsigned ceil_log2(std::uint64_t n) noexcept;

std::filesystem::path role_file_path(const std::filesystem::path& basename, Role role);

}  // namespace tripleid
