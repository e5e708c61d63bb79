#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tripleid/term.hpp"

namespace fixture {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("tripleid-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// n triples with IDs drawn from [1, vocab].
inline std::vector<tripleid::Triple> random_triples(std::mt19937_64& rng, std::size_t n, tripleid::TermId vocab) {
  std::uniform_int_distribution<tripleid::TermId> id(1, vocab);
  std::vector<tripleid::Triple> out(n);
  for (auto& t : out) t = {id(rng), id(rng), id(rng)};
  return out;
}

// The rule 11 worked example: predicate 84 is subClassOf.
inline const std::vector<tripleid::Triple> kRule11Example = {
    {76, 84, 56}, {31, 84, 77}, {56, 84, 78}, {56, 84, 77}, {44, 83, 2}};

}  // namespace fixture

#include "tripleid/dictionary.hpp"
#include "tripleid/entailment.hpp"

namespace fixture {

/// IDs 1..n map to <http://ex/t{id}>, except 84 which is rdfs:subClassOf so
/// that the rule 11 worked example data is meaningful.
inline tripleid::Dictionary example_dictionary(tripleid::TermId n = 90) {
  tripleid::Dictionary d;
  for (tripleid::TermId id = 1; id <= n; ++id) {
    const std::string term = id == 84 ? std::string(tripleid::vocab::kSubClassOf)
                                      : "<http://ex/t" + std::to_string(id) + ">";
    for (auto r : {tripleid::Role::Subj, tripleid::Role::Pred, tripleid::Role::Obj}) d.encode(term, r);
  }
  return d;
}

}  // namespace fixture
