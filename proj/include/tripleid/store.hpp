#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "tripleid/term.hpp"

namespace tripleid {

// .tid layout, little-endian:
//   "TID1" | u32 version (=1) | u64 triple count | count * 3 * u32 ids
inline constexpr char kTidMagic[4] = {'T', 'I', 'D', '1'};
inline constexpr std::uint32_t kTidVersion = 1;
inline constexpr std::size_t kTidHeaderBytes = 16;

/// A run of consecutive triples held as the flat [s0,p0,o0,s1,...] ID array
/// the search kernel scans.
struct TripleChunk {
  std::vector<TermId> data;
  std::uint64_t base_index = 0;

  std::size_t size() const noexcept { return data.size() / 3; }
  bool empty() const noexcept { return data.empty(); }
  Triple at(std::size_t i) const noexcept { return {data[3 * i], data[3 * i + 1], data[3 * i + 2]}; }
  /// Triple with global index `g`; `g` must fall inside this chunk.
  Triple global(std::uint64_t g) const noexcept { return at(static_cast<std::size_t>(g - base_index)); }

  static TripleChunk from_triples(std::span<const Triple> triples, std::uint64_t base_index = 0);
};

/// Streaming .tid writer. The triple count is patched into the header by
/// finish(); a writer destroyed without finish() leaves an invalid file.
class TidWriter {
 public:
  explicit TidWriter(const std::filesystem::path& path);
  TidWriter(const TidWriter&) = delete;
  TidWriter& operator=(const TidWriter&) = delete;
  ~TidWriter() = default;

  /// Throws InvariantViolation on a zero ID.
  void append(const Triple& t);
  void finish();
  std::uint64_t count() const noexcept { return count_; }

 private:
  void flush_buffer();

  std::filesystem::path path_;
  std::ofstream out_;
  std::vector<std::uint8_t> buffer_;
  std::uint64_t count_ = 0;
  bool finished_ = false;
};

void write_tid(std::span<const Triple> triples, const std::filesystem::path& path);

/// Sequential chunked reader. Validates the header on construction:
/// BadMagic, BadVersion, or TruncatedFile when the declared count exceeds
/// the bytes present.
class ChunkReader {
 public:
  ChunkReader(const std::filesystem::path& path, std::uint64_t chunk_triples);

  std::uint64_t total_triples() const noexcept { return total_; }
  std::uint64_t chunk_triples() const noexcept { return chunk_triples_; }
  std::uint64_t chunk_count() const noexcept;

  /// Reads the next chunk into `chunk`; false at end of file.
  bool next(TripleChunk& chunk);

 private:
  std::ifstream in_;
  std::uint64_t total_ = 0;
  std::uint64_t chunk_triples_;
  std::uint64_t consumed_ = 0;
};

/// Header-only inspection of a .tid file; same errors as ChunkReader.
std::uint64_t read_tid_count(const std::filesystem::path& path);

std::vector<TripleChunk> read_chunks(const std::filesystem::path& path, std::uint64_t chunk_triples);
std::vector<Triple> read_all_triples(const std::filesystem::path& path);

/// Bytes a search over an N-ID data array occupies: data array, N/3
/// position slots and the 3-ID key, all ID-sized.
std::uint64_t device_memory_bytes(std::uint64_t n_ids);

/// Largest chunk (in triples) whose device_memory_bytes fits `budget_bytes`,
/// rounded down to a multiple of 2^20 triples when at least one such unit
/// fits. Never less than 1.
std::uint64_t chunk_triples_for_budget(std::uint64_t budget_bytes);

inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{256} << 20;

}  // namespace tripleid
