#include "tripleid/generator.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <unordered_set>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

constexpr const char* kFixedPredicates[] = {
    "<http://www.w3.org/2002/07/owl#sameAs>",
    "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>",
    "<http://xmlns.com/foaf/0.1/name>",
    "<http://xmlns.com/foaf/0.1/knows>",
    "<http://xmlns.com/foaf/0.1/member>",
    "<http://xmlns.com/foaf/0.1/firstname>",
    "<http://xmlns.com/foaf/0.1/primaryTopic>",
    "<http://dbpedia.org/property/occupation>",
    "<http://vocab.org/relationship/spouseOf>",
    "<http://www.w3.org/2000/01/rdf-schema#subClassOf>",
    "<http://www.w3.org/2000/01/rdf-schema#subPropertyOf>",
    "<http://www.w3.org/2000/01/rdf-schema#domain>",
    "<http://www.w3.org/2000/01/rdf-schema#range>",
};
enum FixedPred { kSameAs, kType, kName, kKnows, kMember, kFirstname, kTopic, kOccupation, kSpouse, kSubClass,
                 kSubProp, kDomain, kRange, kFixedCount };

constexpr const char* kDig = "<http://dig.csail.mit.edu/data#DIG>";
constexpr const char* kPerson = "<http://xmlns.com/foaf/0.1/Person>";
constexpr const char* kCroatia = "<http://dbpedia.org/resource/Croatia>";

struct Range {
  std::size_t begin = 0, end = 0;
  std::size_t size() const { return end > begin ? end - begin : 0; }
};

struct Key {
  std::uint64_t s, p, o;
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = k.s * 0x9E3779B97F4A7C15ull;
    h ^= k.p + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    h ^= k.o * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class Builder {
 public:
  explicit Builder(const GenParams& p) : p_(p), rng_(p.seed) {}

  std::vector<std::string> run();

 private:
  std::string iri(const char* base, const std::string& tag);
  std::uint64_t pick(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  std::uint64_t pick(Range r, std::uint64_t fallback_n) {
    return r.size() ? r.begin + pick(r.size()) : pick(fallback_n);
  }
  void build_pools(std::uint64_t a, std::uint64_t b, std::uint64_t c);
  Key semantic(std::uint64_t pred);
  std::uint64_t bulk_predicate();

  GenParams p_;
  std::mt19937_64 rng_;
  std::vector<std::string> S_, P_, O_;
  std::vector<int> fixed_index_;  // FixedPred -> P_ index or -1
  Range s_classes_, s_preds_, s_shared_, o_classes_, o_preds_, o_shared_, o_literals_;
  std::vector<std::uint64_t> bulk_preds_;
};

std::string Builder::iri(const char* base, const std::string& tag) {
  std::string s = base;
  s += tag;
  s += '_';
  static constexpr char kAlpha[] = "abcdefghijklmnopqrstuvwxyz";
  while (s.size() + 1 < p_.iri_len) s += kAlpha[pick(26)];
  s += '>';
  return s;
}

void Builder::build_pools(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  for (std::uint64_t i = 0; i < b; ++i)
    P_.push_back(i < kFixedCount ? kFixedPredicates[i] : iri("<http://example.org/vocab/p", std::to_string(i)));
  fixed_index_.assign(kFixedCount, -1);
  for (std::uint64_t i = 0; i < std::min<std::uint64_t>(b, kFixedCount); ++i) fixed_index_[i] = static_cast<int>(i);
  for (std::uint64_t i = 0; i < b; ++i) {
    const bool schema = i == kSubClass || i == kSubProp || i == kDomain || i == kRange;
    if (!schema) bulk_preds_.push_back(i);
  }
  if (bulk_preds_.empty())
    for (std::uint64_t i = 0; i < b; ++i) bulk_preds_.push_back(i);

  const std::uint64_t classes = std::clamp<std::uint64_t>(std::min(a, c) / 200, 1, 500);
  const std::uint64_t shared = std::min(a, c) * 3 / 10;
  std::vector<std::string> class_iris{kPerson};
  for (std::uint64_t i = 1; i < classes; ++i) class_iris.push_back(iri("<http://example.org/class/C", std::to_string(i)));
  std::vector<std::string> shared_iris;
  for (std::uint64_t i = 0; i < shared; ++i) shared_iris.push_back(iri("<http://example.org/resource/e", std::to_string(i)));

  auto append = [](std::vector<std::string>& pool, const std::vector<std::string>& items, std::uint64_t cap) {
    Range r{pool.size(), pool.size()};
    for (const auto& s : items) {
      if (pool.size() >= cap) break;
      pool.push_back(s);
    }
    r.end = pool.size();
    return r;
  };

  if (a) S_.push_back(kDig);
  s_classes_ = append(S_, class_iris, a);
  s_preds_ = append(S_, P_, a);
  s_shared_ = append(S_, shared_iris, a);
  for (std::uint64_t i = 0; S_.size() < a; ++i) S_.push_back(iri("<http://example.org/resource/s", std::to_string(i)));

  o_classes_ = append(O_, class_iris, c);
  o_preds_ = append(O_, P_, c);
  // sameAs objects: the Croatia pair followed by the entities shared with S.
  o_shared_ = append(O_, {kCroatia, "\"Croatia\""}, c);
  o_shared_.end = append(O_, shared_iris, c).end;
  std::vector<std::string> literals;
  for (std::uint64_t i = 0; i < c / 5; ++i)
    literals.push_back(i % 3 == 0 ? "\"Name " + std::to_string(i) + "\"@en" : "\"Name " + std::to_string(i) + "\"");
  o_literals_ = append(O_, literals, c);
  for (std::uint64_t i = 0; O_.size() < c; ++i) O_.push_back(iri("<http://example.org/resource/o", std::to_string(i)));
}

std::uint64_t Builder::bulk_predicate() { return bulk_preds_[pick(bulk_preds_.size())]; }

Key Builder::semantic(std::uint64_t pred) {
  const std::uint64_t a = S_.size(), c = O_.size();
  auto any_subject = [&] { return pick(100) == 0 ? 0 : pick(a); };
  switch (pred) {
    case kType:
      return {any_subject(), pred, pick(o_classes_, c)};
    case kSubClass:
      return {pick(s_classes_, a), pred, pick(o_classes_, c)};
    case kSubProp:
      return {pick(s_preds_, a), pred, pick(o_preds_, c)};
    case kDomain:
    case kRange:
      return {pick(s_preds_, a), pred, pick(o_classes_, c)};
    case kName:
    case kFirstname:
      return {any_subject(), pred, pick(o_literals_, c)};
    case kSameAs:
      return {pick(a), pred, pick(o_shared_, c)};
    default:
      return {any_subject(), pred, pick(c)};
  }
}

std::vector<std::string> Builder::run() {
  const std::uint64_t n = p_.triples;
  if (n == 0) return {};
  const std::uint64_t a = std::clamp<std::uint64_t>(p_.subjects ? p_.subjects : n / 10, 1, n);
  const std::uint64_t b = std::clamp<std::uint64_t>(p_.predicates, 1, n);
  const std::uint64_t c = std::clamp<std::uint64_t>(p_.objects ? p_.objects : n / 5, 1, n);
  if (static_cast<long double>(a) * b * c < n)
    throw InvariantViolation("cannot draw " + std::to_string(n) + " distinct triples from the requested pools");
  build_pools(a, b, c);

  std::unordered_set<Key, KeyHash> seen;
  std::vector<Key> out;
  out.reserve(n);
  auto emit = [&](auto draw) {
    for (int attempt = 0;; ++attempt) {
      Key k = draw(attempt);
      if (seen.insert(k).second) {
        out.push_back(k);
        return;
      }
    }
  };

  // Coverage: triple i uses pool entry i of every pool long enough, so each
  // term appears at least once in its role.
  const std::uint64_t cover = std::max({a, b, c});
  for (std::uint64_t i = 0; i < cover && out.size() < n; ++i) {
    emit([&](int attempt) {
      const std::uint64_t pred = i < b ? i : bulk_predicate();
      Key k = attempt < 8 ? semantic(pred) : Key{pick(a), pred, pick(c)};
      if (i < a) k.s = i;
      if (i < c) k.o = i;
      return k;
    });
  }

  // Schema triples, kept sparse so the rule joins stay small.
  auto fixed = [&](FixedPred f) { return fixed_index_[f]; };
  const std::uint64_t quotas[][2] = {{kSubClass, 2 * std::max<std::uint64_t>(1, s_classes_.size())},
                                     {kSubProp, std::max<std::uint64_t>(1, b / 4)},
                                     {kDomain, std::max<std::uint64_t>(1, b / 4)},
                                     {kRange, std::max<std::uint64_t>(1, b / 4)}};
  for (const auto& [f, quota] : quotas) {
    if (fixed(static_cast<FixedPred>(f)) < 0) continue;
    for (std::uint64_t q = 0; q < quota && out.size() < n; ++q)
      emit([&](int attempt) { return attempt < 8 ? semantic(f) : Key{pick(a), pick(b), pick(c)}; });
  }

  while (out.size() < n)
    emit([&](int attempt) { return attempt < 8 ? semantic(bulk_predicate()) : Key{pick(a), pick(b), pick(c)}; });

  std::vector<std::string> lines;
  lines.reserve(out.size());
  for (const Key& k : out) lines.push_back(S_[k.s] + ' ' + P_[k.p] + ' ' + O_[k.o] + " .");
  return lines;
}

}  // namespace

std::vector<std::string> generate_statements(const GenParams& params) { return Builder(params).run(); }

void generate(const GenParams& params, std::ostream& out) {
  for (const auto& line : generate_statements(params)) out << line << '\n';
}

}  // namespace tripleid
