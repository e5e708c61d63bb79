#include "tripleid/kernel.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

// Position slot for the single-key search: low 3 bits hold the answer
// bits, kAccepted marks triples every bound field matched.
constexpr std::uint8_t kAccepted = 0x8;

void check_key_count(std::size_t k) {
  if (k == 0) throw InvariantViolation("search needs at least one key");
  if (k > kMaxSubqueries)
    throw TooManySubqueries(std::to_string(k) + " subqueries exceed the limit of " + std::to_string(kMaxSubqueries));
}

// Grid-stride driver: worker t of T handles blocks t, t+T, ... and calls
// body(i) for each triple index in them. body writes only slot i.
template <typename Body>
unsigned grid_stride(std::size_t n, unsigned workers, Body&& body) {
  const std::size_t blocks = (n + kStrideBlockTriples - 1) / kStrideBlockTriples;
  unsigned used = 1;
#pragma omp parallel num_threads(static_cast<int>(std::max(1u, workers)))
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const auto stride = static_cast<std::size_t>(omp_get_num_threads());
#pragma omp single nowait
    used = static_cast<unsigned>(stride);
    for (std::size_t b = t; b < blocks; b += stride) {
      const std::size_t lo = b * kStrideBlockTriples;
      const std::size_t hi = std::min(n, lo + kStrideBlockTriples);
      for (std::size_t i = lo; i < hi; ++i) body(i, static_cast<unsigned>(t));
    }
  }
  return used;
}

}  // namespace

MatchResult search_chunk(const TripleChunk& chunk, const PatternKey& key, unsigned workers) {
  const std::size_t n = chunk.size();
  std::vector<std::uint8_t> positions(n);
  const TermId* data = chunk.data.data();
  const PatternKey k = key;
  grid_stride(n, workers, [&](std::size_t i, unsigned) {
    const Triple t{data[3 * i], data[3 * i + 1], data[3 * i + 2]};
    const AnswerBits bits = match_bits(t, k);
    positions[i] = static_cast<std::uint8_t>(bits.value | (accepts(bits, k) ? kAccepted : 0));
  });

  MatchResult out;
  for (std::size_t i = 0; i < n; ++i)
    if (positions[i] & kAccepted)
      out.push_back({chunk.base_index + i, AnswerBits{static_cast<std::uint8_t>(positions[i] & 0x7)}});
  return out;
}

MultiMatchResult search_multi(const TripleChunk& chunk, std::span<const PatternKey> keys, unsigned workers,
                              WriteTrace* trace) {
  check_key_count(keys.size());
  const std::size_t n = chunk.size();
  const std::size_t k = keys.size();
  PatternKey local[kMaxSubqueries];
  std::copy(keys.begin(), keys.end(), local);
  std::vector<MarkSet> positions(n);
  const TermId* data = chunk.data.data();

  auto mark = [&](std::size_t i) {
    const Triple t{data[3 * i], data[3 * i + 1], data[3 * i + 2]};
    MarkSet m = 0;
    for (std::size_t q = 0; q < k; ++q)
      if (accepts(match_bits(t, local[q]), local[q])) m |= MarkSet{1} << q;
    positions[i] = m;
  };

  if (trace) {
    trace->workers_used = grid_stride(n, workers, [&](std::size_t i, unsigned worker) {
      mark(i);
      trace->writes[i].fetch_add(1, std::memory_order_relaxed);
      trace->writer[i] = worker;
    });
  } else {
    grid_stride(n, workers, [&](std::size_t i, unsigned) { mark(i); });
  }

  MultiMatchResult out;
  for (std::size_t i = 0; i < n; ++i)
    if (positions[i]) out.push_back({chunk.base_index + i, positions[i]});
  return out;
}

void scan_file(const std::filesystem::path& path, std::span<const PatternKey> keys, unsigned workers,
               std::uint64_t chunk_triples, const ChunkVisitor& visit) {
  check_key_count(keys.size());
  ChunkReader reader(path, chunk_triples);
  TripleChunk chunk;
  while (reader.next(chunk)) visit(chunk, search_multi(chunk, keys, workers));
}

MultiMatchResult search_file(const std::filesystem::path& path, std::span<const PatternKey> keys, unsigned workers,
                             std::uint64_t chunk_triples) {
  MultiMatchResult all;
  scan_file(path, keys, workers, chunk_triples, [&](const TripleChunk&, const MultiMatchResult& part) {
    all.insert(all.end(), part.begin(), part.end());
  });
  return all;
}

namespace serial {

MatchResult search_chunk(const TripleChunk& chunk, const PatternKey& key) {
  MatchResult out;
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const AnswerBits bits = match_bits(chunk.at(i), key);
    if (accepts(bits, key)) out.push_back({chunk.base_index + i, bits});
  }
  return out;
}

MultiMatchResult search_multi(const TripleChunk& chunk, std::span<const PatternKey> keys) {
  check_key_count(keys.size());
  MultiMatchResult out;
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const Triple t = chunk.at(i);
    MarkSet m = 0;
    for (std::size_t q = 0; q < keys.size(); ++q)
      if (accepts(match_bits(t, keys[q]), keys[q])) m |= MarkSet{1} << q;
    if (m) out.push_back({chunk.base_index + i, m});
  }
  return out;
}

}  // namespace serial

unsigned default_workers() {
  if (const char* env = std::getenv("TRIPLEID_WORKERS")) {
    unsigned w = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, w);
    if (ec == std::errc() && ptr == end && w > 0) return w;
  }
  return static_cast<unsigned>(std::max(1, omp_get_max_threads()));
}

}  // namespace tripleid
