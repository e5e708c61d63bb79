#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "tripleid/store.hpp"
#include "tripleid/term.hpp"

namespace tripleid {

/// Search key; 0 in a field marks a free variable.
struct PatternKey {
  TermId subj = 0;
  TermId pred = 0;
  TermId obj = 0;

  /// 4 = subject bound, 2 = predicate bound, 1 = object bound.
  constexpr std::uint8_t bound_mask() const noexcept {
    return static_cast<std::uint8_t>((subj ? 4 : 0) | (pred ? 2 : 0) | (obj ? 1 : 0));
  }
  constexpr TermId at(Slot s) const noexcept {
    return s == Slot::S ? subj : s == Slot::P ? pred : obj;
  }
  friend constexpr bool operator==(const PatternKey&, const PatternKey&) = default;
};

/// Which fields of a triple equal the key:
///   7 SPO, 6 SP?, 5 S?O, 3 ?PO, 4 S??, 2 ?P?, 1 ??O, 0 none.
struct AnswerBits {
  std::uint8_t value = 0;
  friend constexpr bool operator==(AnswerBits, AnswerBits) = default;
};

/// Plain field equality; a 0 key field never equals a stored ID.
constexpr AnswerBits match_bits(const Triple& t, const PatternKey& key) noexcept {
  return AnswerBits{static_cast<std::uint8_t>((t.subj == key.subj ? 4 : 0) | (t.pred == key.pred ? 2 : 0) |
                                              (t.obj == key.obj ? 1 : 0))};
}

/// Every bound field matched. A fully free key accepts everything.
constexpr bool accepts(AnswerBits bits, const PatternKey& key) noexcept {
  const auto mask = key.bound_mask();
  return (bits.value & mask) == mask;
}

struct Match {
  std::uint64_t index = 0;  // global triple index
  AnswerBits bits;
  friend constexpr bool operator==(const Match&, const Match&) = default;
};
using MatchResult = std::vector<Match>;

/// Bit q set iff the triple is accepted by subquery q's key.
using MarkSet = std::uint32_t;
inline constexpr std::size_t kMaxSubqueries = 32;

struct MultiMatch {
  std::uint64_t index = 0;
  MarkSet marks = 0;
  friend constexpr bool operator==(const MultiMatch&, const MultiMatch&) = default;
};
using MultiMatchResult = std::vector<MultiMatch>;

/// Triples handed to one worker per stride step. Worker t of T owns blocks
/// t, t+T, t+2T, ... of this many consecutive triples.
inline constexpr std::size_t kStrideBlockTriples = 1024;

/// Records, per position-array slot, how many times it was written and by
/// which worker. Used to check that workers never share a slot.
struct WriteTrace {
  explicit WriteTrace(std::size_t slots) : writes(slots), writer(slots, 0) {}
  std::vector<std::atomic<std::uint32_t>> writes;
  std::vector<std::uint32_t> writer;
  unsigned workers_used = 0;
};

/// Parallel brute-force search of one chunk. Results are sorted by index and
/// identical for every worker count.
MatchResult search_chunk(const TripleChunk& chunk, const PatternKey& key, unsigned workers);

/// Multi-key search; throws TooManySubqueries for more than 32 keys.
MultiMatchResult search_multi(const TripleChunk& chunk, std::span<const PatternKey> keys, unsigned workers,
                              WriteTrace* trace = nullptr);

using ChunkVisitor = std::function<void(const TripleChunk&, const MultiMatchResult&)>;

/// Reads `path` chunk by chunk and calls `visit` with every chunk and its
/// matches while the chunk is resident.
void scan_file(const std::filesystem::path& path, std::span<const PatternKey> keys, unsigned workers,
               std::uint64_t chunk_triples, const ChunkVisitor& visit);

MultiMatchResult search_file(const std::filesystem::path& path, std::span<const PatternKey> keys, unsigned workers,
                             std::uint64_t chunk_triples);

/// Sequential reference kernels: same contract, one thread, no striding.
namespace serial {
MatchResult search_chunk(const TripleChunk& chunk, const PatternKey& key);
MultiMatchResult search_multi(const TripleChunk& chunk, std::span<const PatternKey> keys);
}  // namespace serial

/// TRIPLEID_WORKERS if set to a positive integer, else the OpenMP default.
unsigned default_workers();

}  // namespace tripleid
