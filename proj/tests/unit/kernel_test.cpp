#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tripleid/error.hpp"
#include "tripleid/kernel.hpp"

using namespace tripleid;

TEST_CASE("answer bits examples") {
  CHECK(match_bits({1, 2, 1}, {1, 2, 0}).value == 6);
  CHECK(match_bits({5, 6, 7}, {5, 6, 7}).value == 7);
  CHECK(match_bits({5, 6, 7}, {0, 0, 0}).value == 0);
  CHECK(match_bits({31, 84, 77}, {0, 84, 0}).value == 2);
  CHECK(match_bits({3, 4, 9}, {0, 0, 9}).value == 1);
  CHECK(accepts(AnswerBits{6}, {1, 2, 0}));
  CHECK_FALSE(accepts(AnswerBits{2}, {1, 2, 0}));
  CHECK(accepts(AnswerBits{0}, {0, 0, 0}));
}

TEST_CASE("answer bits truth table") {
  for (int mask = 0; mask < 8; ++mask) {
    for (int eq = 0; eq < 8; ++eq) {
      const Triple t{10, 20, 30};
      PatternKey k;
      if (mask & 4) k.subj = (eq & 4) ? 10 : 11;
      if (mask & 2) k.pred = (eq & 2) ? 20 : 21;
      if (mask & 1) k.obj = (eq & 1) ? 30 : 31;
      const auto bits = match_bits(t, k);
      CAPTURE(mask);
      CAPTURE(eq);
      CHECK(bits.value == (mask & eq));
      CHECK(accepts(bits, k) == ((mask & eq) == mask));
    }
  }
}

TEST_CASE("rule 11 worked example search") {
  auto chunk = TripleChunk::from_triples(fixture::kRule11Example);
  for (unsigned w : {1u, 3u, 8u}) {
    auto r = search_chunk(chunk, {0, 84, 0}, w);
    REQUIRE(r.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r[i].index == i);
      CHECK(r[i].bits.value == 2);
    }
    auto exact = search_chunk(chunk, {44, 83, 2}, w);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0] == Match{4, AnswerBits{7}});
  }
}

TEST_CASE("multi-key marks") {
  SUBCASE("a triple answering two keys") {
    auto chunk = TripleChunk::from_triples(std::vector<Triple>{{1, 2, 3}, {1, 5, 6}, {7, 2, 9}});
    const PatternKey keys[] = {{1, 0, 0}, {0, 2, 0}};
    auto r = search_multi(chunk, keys, 2);
    REQUIRE(r.size() == 3);
    CHECK(r[0].marks == 0b11);
    CHECK(r[1].marks == 0b01);
    CHECK(r[2].marks == 0b10);
  }
  SUBCASE("same subject, three predicates") {
    auto chunk = TripleChunk::from_triples(std::vector<Triple>{{1, 2, 3}, {1, 4, 3}, {1, 5, 3}, {2, 2, 3}});
    const PatternKey keys[] = {{1, 2, 0}, {1, 4, 0}, {1, 5, 0}};
    auto r = search_multi(chunk, keys, 4);
    REQUIRE(r.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r[i].marks == (1u << i));
  }
  SUBCASE("one key equals search_chunk") {
    std::mt19937_64 rng(1);
    auto triples = fixture::random_triples(rng, 3000, 20);
    auto chunk = TripleChunk::from_triples(triples);
    const PatternKey key{0, 7, 0};
    auto single = search_chunk(chunk, key, 3);
    auto multi = search_multi(chunk, std::span(&key, 1), 3);
    REQUIRE(single.size() == multi.size());
    for (std::size_t i = 0; i < single.size(); ++i) CHECK(single[i].index == multi[i].index);
  }
  SUBCASE("width limit") {
    auto chunk = TripleChunk::from_triples(fixture::kRule11Example);
    std::vector<PatternKey> keys(33, PatternKey{0, 84, 0});
    CHECK_THROWS_AS(search_multi(chunk, keys, 1), TooManySubqueries);
    keys.pop_back();
    CHECK(search_multi(chunk, keys, 1).size() == 4);
  }
}

TEST_CASE("parallel equals serial and the oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    auto triples = fixture::random_triples(rng, 1 + rng() % 10000, 1 + rng() % 50);
    auto chunk = TripleChunk::from_triples(triples, 1000);
    std::vector<PatternKey> keys(1 + rng() % 6);
    for (auto& k : keys) {
      const Triple& t = triples[rng() % triples.size()];
      k = {rng() % 2 ? t.subj : 0, rng() % 2 ? t.pred : 0, rng() % 2 ? t.obj : 0};
    }
    const unsigned w = 1 + rng() % 8;
    auto par = search_multi(chunk, keys, w);
    CHECK(par == serial::search_multi(chunk, keys));
    auto want = oracle::naive_scan(triples, keys);
    for (auto& m : want) m.index += 1000;
    CHECK(par == want);
    CHECK(search_chunk(chunk, keys[0], w) == serial::search_chunk(chunk, keys[0]));
  }
}

TEST_CASE("workers write disjoint slots") {
  std::mt19937_64 rng(8);
  auto chunk = TripleChunk::from_triples(fixture::random_triples(rng, 20000, 10));
  const PatternKey keys[] = {{0, 3, 0}, {0, 0, 5}};
  for (unsigned w : {1u, 2u, 5u, 8u}) {
    WriteTrace trace(chunk.size());
    search_multi(chunk, keys, w, &trace);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      REQUIRE(trace.writes[i].load() == 1);
      const std::size_t block = i / kStrideBlockTriples;
      CHECK(trace.writer[i] == block % trace.workers_used);
    }
  }
}

TEST_CASE("file search: chunk invariance and empty file") {
  fixture::TempDir dir("search");
  std::mt19937_64 rng(77);
  auto triples = fixture::random_triples(rng, 10000, 30);
  write_tid(triples, dir / "d.tid");
  const PatternKey keys[] = {{0, 4, 0}, {5, 0, 0}, {0, 0, 6}, {5, 4, 0}};
  const auto want = oracle::naive_scan(triples, keys);
  for (std::uint64_t cs : {1ull, 3ull, 997ull, 10000ull, 1ull << 20})
    CHECK(search_file(dir / "d.tid", keys, 4, cs) == want);

  write_tid({}, dir / "e.tid");
  CHECK(search_file(dir / "e.tid", keys, 4, 100).empty());
}
