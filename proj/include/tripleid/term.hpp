#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tripleid {

/// Identifier of one RDF term. 0 is never assigned; it stands for a free
/// variable in search keys.
using TermId = std::uint32_t;
inline constexpr TermId kWildcard = 0;

/// Position of a term inside a triple.
enum class Slot : std::uint8_t { S = 0, P = 1, O = 2 };

/// Role a term is recorded under in the dictionary. Same ordering as Slot.
enum class Role : std::uint8_t { Subj = 0, Pred = 1, Obj = 2 };

constexpr Role role_of(Slot s) noexcept { return static_cast<Role>(s); }
constexpr char slot_letter(Slot s) noexcept { return "SPO"[static_cast<int>(s)]; }

struct Triple {
  TermId subj = 0;
  TermId pred = 0;
  TermId obj = 0;

  constexpr TermId at(Slot s) const noexcept {
    switch (s) {
      case Slot::S:
        return subj;
      case Slot::P:
        return pred;
      default:
        return obj;
    }
  }
  constexpr bool valid() const noexcept { return subj != 0 && pred != 0 && obj != 0; }

  friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

enum class TermKind : std::uint8_t { Iri, Literal, BlankNode };

/// One term in its verbatim N-Triples spelling: `<iri>`, `"lit"@en`,
/// `"lit"^^<dt>` or `_:label`.
struct TermToken {
  TermKind kind = TermKind::Iri;
  std::string lexical;

  friend bool operator==(const TermToken&, const TermToken&) = default;
};

/// Kind implied by the first character of a lexical form.
constexpr TermKind kind_of_lexical(std::string_view lexical) noexcept {
  if (!lexical.empty() && lexical.front() == '"') return TermKind::Literal;
  if (!lexical.empty() && lexical.front() == '_') return TermKind::BlankNode;
  return TermKind::Iri;
}

inline TermToken make_token(std::string lexical) {
  TermKind k = kind_of_lexical(lexical);
  return TermToken{k, std::move(lexical)};
}

}  // namespace tripleid
