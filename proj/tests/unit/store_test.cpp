#include <doctest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "tripleid/error.hpp"
#include "tripleid/store.hpp"

using namespace tripleid;

TEST_CASE("file sizes follow the layout") {
  fixture::TempDir dir("store");
  write_tid({}, dir / "empty.tid");
  CHECK(std::filesystem::file_size(dir / "empty.tid") == 16);
  write_tid(fixture::kRule11Example, dir / "five.tid");
  CHECK(std::filesystem::file_size(dir / "five.tid") == 76);
  CHECK(read_tid_count(dir / "five.tid") == 5);
  CHECK(read_all_triples(dir / "five.tid") == fixture::kRule11Example);
}

TEST_CASE("header bytes are little-endian") {
  fixture::TempDir dir("le");
  write_tid(std::vector<Triple>{{1, 2, 0x01020304}}, dir / "a.tid");
  std::ifstream in(dir / "a.tid", std::ios::binary);
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), {});
  REQUIRE(b.size() == 28);
  CHECK(std::string(b.begin(), b.begin() + 4) == "TID1");
  CHECK(b[4] == 1);
  CHECK(b[8] == 1);
  CHECK(b[16] == 1);
  CHECK(b[24] == 0x04);
  CHECK(b[27] == 0x01);
}

TEST_CASE("zero ids are rejected") {
  fixture::TempDir dir("zero");
  CHECK_THROWS_AS(write_tid(std::vector<Triple>{{1, 0, 3}}, dir / "z.tid"), InvariantViolation);
}

TEST_CASE("chunking") {
  fixture::TempDir dir("chunks");
  std::mt19937_64 rng(5);
  auto triples = fixture::random_triples(rng, 7, 50);
  write_tid(triples, dir / "s.tid");
  auto chunks = read_chunks(dir / "s.tid", 3);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].size() == 3);
  CHECK(chunks[1].size() == 3);
  CHECK(chunks[2].size() == 1);
  CHECK(chunks[1].base_index == 3);
  CHECK(chunks[2].base_index == 6);
  CHECK(read_chunks(dir / "s.tid", 100).size() == 1);
  CHECK_THROWS_AS(read_chunks(dir / "s.tid", 0), InvariantViolation);
}

TEST_CASE("chunk-size invariance on random files") {
  fixture::TempDir dir("inv");
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto triples = fixture::random_triples(rng, rng() % 500, 1000);
    write_tid(triples, dir / "r.tid");
    const std::uint64_t cs = 1 + rng() % 64;
    std::vector<Triple> back;
    for (const auto& c : read_chunks(dir / "r.tid", cs)) {
      CHECK(c.base_index == back.size());
      for (std::size_t i = 0; i < c.size(); ++i) back.push_back(c.at(i));
    }
    CHECK(back == triples);
  }
}

TEST_CASE("corrupt files") {
  fixture::TempDir dir("bad");
  write_tid(fixture::kRule11Example, dir / "ok.tid");
  std::ifstream in(dir / "ok.tid", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});

  auto write = [&](const std::string& name, const std::string& b) {
    std::ofstream(dir / name, std::ios::binary) << b;
    return dir / name;
  };
  std::string magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(read_tid_count(write("m.tid", magic)), BadMagic);
  std::string version = bytes;
  version[4] = 2;
  CHECK_THROWS_AS(read_tid_count(write("v.tid", version)), BadVersion);
  CHECK_THROWS_AS(read_chunks(write("t.tid", bytes.substr(0, bytes.size() - 12)), 2), TruncatedFile);
  CHECK_THROWS_AS(read_tid_count(write("h.tid", bytes.substr(0, 10))), TruncatedFile);
  CHECK_THROWS_AS(read_tid_count(dir / "missing.tid"), IoError);
}

TEST_CASE("memory accounting") {
  CHECK(device_memory_bytes(0) == 12);
  CHECK(device_memory_bytes(3) == 28);
  CHECK(device_memory_bytes(15) == 92);
  CHECK(device_memory_bytes(3'000'000) == 16'000'012);
  CHECK_THROWS(device_memory_bytes(4));
  const auto per_mib = device_memory_bytes(3 << 20);
  CHECK(chunk_triples_for_budget(per_mib) == (1u << 20));
  CHECK(chunk_triples_for_budget(2 * per_mib + 1000) == (2u << 20));
  CHECK(chunk_triples_for_budget(1) >= 1);
  CHECK(chunk_triples_for_budget(kDefaultMemoryBudget) % (1u << 20) == 0);
}
