#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "tripleid/cli.hpp"
#include "tripleid/dataset.hpp"
#include "tripleid/error.hpp"
#include "tripleid/generator.hpp"
#include "tripleid/store.hpp"

using namespace tripleid;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tripleid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> kv(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string k, v;
  while (std::getline(in, k, '\t') && std::getline(in, v)) m[k] = v;
  return m;
}

void write(const std::filesystem::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

const char* kFixture =
    "<http://ex/a> <http://ex/p> <http://ex/b> .\n"
    "<http://ex/b> <http://ex/p> \"v\"@en .\n"
    "# comment\n"
    "<http://ex/a> <http://ex/q> <http://ex/a> .\n";

}  // namespace

TEST_CASE("convert and stats on a 3-statement fixture") {
  fixture::TempDir dir("cli");
  write(dir / "in.nt", kFixture);
  auto r = cli({"convert", (dir / "in.nt").string(), "--out", (dir / "ds").string()});
  REQUIRE(r.code == 0);
  auto sum = kv(r.out);
  CHECK(sum["triples"] == "3");
  CHECK(sum["subjects"] == "2");
  CHECK(sum["predicates"] == "2");
  CHECK(sum["objects"] == "3");
  CHECK(sum["bytes_tid"] == "52");
  CHECK(read_tid_count(dir / "ds.tid") == 3);

  auto s = cli({"stats", (dir / "ds").string()});
  REQUIRE(s.code == 0);
  auto st = kv(s.out);
  CHECK(st["triples"] == "3");
  CHECK(st["subjects"] == "2");
  CHECK(st["objects"] == "3");
  CHECK(st["device_memory_bytes"] == std::to_string(device_memory_bytes(9)));

  auto ds = open_dataset(dir / "ds");
  verify_dataset(ds);
  CHECK(st["predicates"] == std::to_string(ds.dict.role_count(Role::Pred)));
}

TEST_CASE("convert round trip reproduces the statement multiset") {
  fixture::TempDir dir("rt");
  GenParams gp;
  gp.triples = 2000;
  gp.seed = 5;
  std::ostringstream nt;
  generate(gp, nt);
  std::istringstream in(nt.str() + nt.str().substr(0, nt.str().find('\n') + 1));  // one duplicate statement
  auto sum = convert(in, dir / "g", ParseMode::Strict);
  CHECK(sum.triples == 2001);
  auto ds = open_dataset(dir / "g");
  std::multiset<std::string> want, got;
  std::istringstream lines(in.str());
  for (std::string l; std::getline(lines, l);) want.insert(l);
  for (const auto& t : read_all_triples(ds.paths.tid()))
    got.insert(ds.dict.lexical(t.subj) + ' ' + ds.dict.lexical(t.pred) + ' ' + ds.dict.lexical(t.obj) + " .");
  CHECK(got == want);
}

TEST_CASE("empty input is a valid empty dataset") {
  fixture::TempDir dir("empty");
  write(dir / "e.nt", "");
  REQUIRE(cli({"convert", (dir / "e.nt").string(), "--out", (dir / "e").string()}).code == 0);
  auto st = kv(cli({"stats", (dir / "e").string()}).out);
  CHECK(st["triples"] == "0");
  CHECK(st["subjects"] == "0");
  CHECK(st["device_memory_bytes"] == "12");
}

TEST_CASE("strict convert fails cleanly") {
  fixture::TempDir dir("strict");
  write(dir / "bad.nt", std::string(kFixture) + "broken line\n");
  auto r = cli({"convert", (dir / "bad.nt").string(), "--out", (dir / "b").string(), "--strict"});
  CHECK(r.code == kExitParse);
  CHECK(std::distance(std::filesystem::directory_iterator(dir.path()), {}) == 1);

  auto lenient = cli({"convert", (dir / "bad.nt").string(), "--out", (dir / "b").string()});
  CHECK(lenient.code == 0);
  CHECK(kv(lenient.out)["malformed_lines"] == "1");
  CHECK(lenient.err.find("line 5") != std::string::npos);
}

TEST_CASE("exit codes") {
  fixture::TempDir dir("codes");
  write(dir / "in.nt", kFixture);
  cli({"convert", (dir / "in.nt").string(), "--out", (dir / "ds").string()});
  write(dir / "q.rq", "SELECT * WHERE { ?s <http://ex/p> ?o }");
  write(dir / "bad.rq", "SELECT * WHERE { ?s nope:p ?o }");
  CHECK(cli({"convert", (dir / "missing.nt").string(), "--out", (dir / "m").string()}).code == kExitIo);
  CHECK(cli({"query", (dir / "ds").string(), (dir / "bad.rq").string()}).code == kExitParse);
  CHECK(cli({"query", (dir / "nothing").string(), (dir / "q.rq").string()}).code == kExitDataset);
  CHECK(cli({"query", (dir / "ds").string(), (dir / "missing.rq").string()}).code == kExitIo);
  CHECK(cli({"entail", (dir / "nothing").string(), "--rule", "11"}).code == kExitDataset);
  CHECK(cli({"entail", (dir / "ds").string(), "--rule", "4"}).code != 0);
  CHECK(cli({"stats", (dir / "nothing").string()}).code == kExitDataset);

  std::filesystem::resize_file(dir / "ds.tid", 30);
  CHECK(cli({"query", (dir / "ds").string(), (dir / "q.rq").string()}).code == kExitDataset);
}

TEST_CASE("query output") {
  fixture::TempDir dir("query");
  write(dir / "in.nt", kFixture);
  cli({"convert", (dir / "in.nt").string(), "--out", (dir / "ds").string()});
  write(dir / "q.rq", "SELECT * WHERE { ?s <http://ex/p> ?o }");
  auto r = cli({"query", (dir / "ds").string(), (dir / "q.rq").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "?s\t?o\n<http://ex/a>\t<http://ex/b>\n<http://ex/b>\t\"v\"@en\n");
  for (const char* key : {"load_ms", "search_ms", "join_ms", "total_ms"}) CHECK(r.err.find(key) != std::string::npos);

  write(dir / "unknown.rq", "SELECT * WHERE { ?s <http://ex/never> ?o }");
  auto u = cli({"query", (dir / "ds").string(), (dir / "unknown.rq").string()});
  CHECK(u.code == 0);
  CHECK(u.out == "?s\t?o\n");

  auto w1 = cli({"query", (dir / "ds").string(), (dir / "q.rq").string(), "--workers", "1", "--chunk-triples", "1"});
  auto w8 = cli({"query", (dir / "ds").string(), (dir / "q.rq").string(), "--workers", "8"});
  CHECK(w1.out == r.out);
  CHECK(w8.out == r.out);
}

TEST_CASE("entail prints N-Triples and a counts row") {
  fixture::TempDir dir("entail");
  write(dir / "in.nt",
        "<http://ex/A> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex/B> .\n"
        "<http://ex/B> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex/C> .\n");
  cli({"convert", (dir / "in.nt").string(), "--out", (dir / "ds").string()});
  auto r = cli({"entail", (dir / "ds").string(), "--rule", "11"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "<http://ex/A> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex/C> .\n");
  CHECK(r.err.find("rule\tres1\tdist1\tres2\tdist2\tall\n11\t2\t2\t1\t1\t1\n") != std::string::npos);
}

TEST_CASE("bench") {
  fixture::TempDir dir("bench");
  write(dir / "in.nt", kFixture);
  cli({"convert", (dir / "in.nt").string(), "--out", (dir / "ds").string()});
  std::filesystem::create_directory(dir / "qs");
  write(dir / "qs" / "one.rq", "SELECT * WHERE { ?s <http://ex/p> ?o }");
  auto r = cli({"bench", (dir / "ds").string(), (dir / "qs").string(), "--repeat", "3"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "query\trun\tparse_ms\tload_ms\tsearch_ms\tjoin_ms\ttotal_ms\tresults");
  CHECK(lines[4].rfind("one\tmedian\t", 0) == 0);
  CHECK(lines[4].substr(lines[4].rfind('\t') + 1) == "2");
}

TEST_CASE("generator") {
  GenParams gp;
  gp.triples = 0;
  CHECK(generate_statements(gp).empty());

  gp.triples = 20000;
  gp.seed = 9;
  const auto a = generate_statements(gp);
  CHECK(a == generate_statements(gp));
  gp.seed = 10;
  CHECK(a != generate_statements(gp));

  fixture::TempDir dir("gen");
  for (auto [n, s, p, o] : {std::array<std::uint64_t, 4>{20000, 0, 20, 0}, {10000, 3000, 40, 1000},
                            {15000, 500, 7, 9000}}) {
    GenParams g;
    g.triples = n;
    g.subjects = s;
    g.predicates = p;
    g.objects = o;
    std::ostringstream nt;
    generate(g, nt);
    std::istringstream in(nt.str());
    auto sum = convert(in, dir / "g", ParseMode::Strict);
    CHECK(sum.triples == n);
    auto near = [](std::uint64_t got, std::uint64_t want) { return got * 100 >= want * 99 && got * 100 <= want * 101; };
    CHECK(near(sum.subjects, s ? s : n / 10));
    CHECK(near(sum.predicates, p));
    CHECK(near(sum.objects, o ? o : n / 5));
  }
}
