#include <doctest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "tripleid/dictionary.hpp"
#include "tripleid/error.hpp"

using namespace tripleid;

TEST_CASE("dense first-seen ids") {
  Dictionary d;
  CHECK(d.encode("<a>", Role::Subj) == 1);
  CHECK(d.encode("<p>", Role::Pred) == 2);
  CHECK(d.encode("<b>", Role::Obj) == 3);
  CHECK(d.encode("<a>", Role::Subj) == 1);
  CHECK(d.size() == 3);
}

TEST_CASE("one id space across roles") {
  Dictionary d;
  const TermId x = d.encode("<http://x>", Role::Subj);
  CHECK(d.encode("<http://x>", Role::Obj) == x);
  CHECK(d.in_role(x, Role::Subj));
  CHECK(d.in_role(x, Role::Obj));
  CHECK_FALSE(d.in_role(x, Role::Pred));
  CHECK(d.role_count(Role::Subj) == 1);
  CHECK(d.role_count(Role::Obj) == 1);
  CHECK(d.role_count(Role::Pred) == 0);
}

TEST_CASE("decode inverts encode; bad ids throw") {
  Dictionary d;
  std::mt19937_64 rng(3);
  std::vector<std::string> terms;
  for (int i = 0; i < 500; ++i) terms.push_back("<http://t/" + std::to_string(rng() % 300) + ">");
  for (const auto& t : terms) {
    const TermId id = d.encode(t, Role::Obj);
    CHECK(d.decode(id).lexical == t);
    CHECK(d.find(t) == id);
  }
  CHECK_THROWS_AS(d.lexical(0), UnknownId);
  CHECK_THROWS_AS(d.lexical(d.size() + 1), UnknownId);
  CHECK_FALSE(d.find("<never>"));
}

TEST_CASE("capacity") {
  Dictionary d(2);
  d.encode("<a>", Role::Subj);
  d.encode("<b>", Role::Subj);
  CHECK_THROWS_AS(d.encode("<c>", Role::Subj), CapacityExceeded);
  CHECK(d.encode("<a>", Role::Obj) == 1);
}

TEST_CASE("id bits lower bound") {
  Dictionary d;
  CHECK(d.min_id_bits() == 0);
  for (int i = 0; i < 5; ++i) d.encode("<s" + std::to_string(i) + ">", Role::Subj);
  d.encode("<p>", Role::Pred);
  CHECK(d.min_id_bits() == 3);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(1025) == 11);
}

TEST_CASE("id files round trip") {
  fixture::TempDir dir("dict");
  SUBCASE("empty") {
    Dictionary d;
    d.write_id_files(dir / "e");
    for (const char* ext : {".sid", ".pid", ".oid"}) CHECK(std::filesystem::file_size(dir / ("e" + std::string(ext))) == 0);
    CHECK(Dictionary::read_id_files(dir / "e") == d);
  }
  SUBCASE("three triples") {
    Dictionary d;
    const char* rows[][3] = {{"<a>", "<p>", "<b>"}, {"<b>", "<p>", "\"lit\"@en"}, {"_:x", "<q>", "<a>"}};
    for (auto& r : rows) {
      d.encode(r[0], Role::Subj);
      d.encode(r[1], Role::Pred);
      d.encode(r[2], Role::Obj);
    }
    d.write_id_files(dir / "t");
    std::ifstream sid(dir / "t.sid");
    std::string all((std::istreambuf_iterator<char>(sid)), {});
    CHECK(all == "1\t<a>\n3\t<b>\n5\t_:x\n");
    std::ifstream pid(dir / "t.pid");
    std::string p((std::istreambuf_iterator<char>(pid)), {});
    CHECK(p == "2\t<p>\n6\t<q>\n");
    auto back = Dictionary::read_id_files(dir / "t");
    CHECK(back == d);
    CHECK(back.find("<a>") == 1);
  }
  SUBCASE("random") {
    std::mt19937_64 rng(11);
    Dictionary d;
    for (int i = 0; i < 2000; ++i)
      d.encode("<http://r/" + std::to_string(rng() % 700) + ">", static_cast<Role>(rng() % 3));
    d.write_id_files(dir / "r");
    CHECK(Dictionary::read_id_files(dir / "r") == d);
  }
}

namespace {
void write(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}
}  // namespace

TEST_CASE("id file errors") {
  fixture::TempDir dir("dicterr");
  auto base = dir / "x";
  write(dir / "x.pid", "2\t<p>\n");
  write(dir / "x.oid", "3\t<b>\n");
  SUBCASE("malformed line") {
    write(dir / "x.sid", "1<a>\n");
    CHECK_THROWS_AS(Dictionary::read_id_files(base), FormatError);
  }
  SUBCASE("not ascending") {
    write(dir / "x.sid", "4\t<c>\n1\t<a>\n");
    CHECK_THROWS_AS(Dictionary::read_id_files(base), FormatError);
  }
  SUBCASE("same term, two ids") {
    write(dir / "x.sid", "1\t<b>\n");
    CHECK_THROWS_AS(Dictionary::read_id_files(base), ConsistencyError);
  }
  SUBCASE("consistent") {
    write(dir / "x.sid", "1\t<a>\n3\t<b>\n");
    auto d = Dictionary::read_id_files(base);
    CHECK(d.size() == 3);
    CHECK(d.in_role(3, Role::Subj));
    CHECK(d.in_role(3, Role::Obj));
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(Dictionary::read_id_files(base), Error);
  }
}
