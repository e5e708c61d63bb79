#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tripleid {

struct GenParams {
  std::uint64_t triples = 0;
  std::uint64_t subjects = 0;    // 0: triples / 10
  std::uint64_t predicates = 20;
  std::uint64_t objects = 0;     // 0: triples / 5
  std::uint64_t seed = 1;
  std::size_t iri_len = 48;      // target length of synthetic IRIs, brackets included
};

/// Deterministic synthetic N-Triples. Every pool term is used, so the
/// distinct subject/predicate/object counts equal the requested ones
/// (each clamped to `triples`). The vocabulary covers the terms the test
/// query corpus touches: owl:sameAs chains, rdf:type foaf:Person, a class
/// hierarchy, sub-properties with domains and ranges, data:DIG members and
/// a Croatia resource.
std::vector<std::string> generate_statements(const GenParams& params);

void generate(const GenParams& params, std::ostream& out);

}  // namespace tripleid
