#include "tripleid/entailment.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

using namespace vocab;

constexpr EntailmentRule kRules[] = {
    {2, kDomain, Slot::S, Slot::O, true, {}, Stage2Partner::Subject, kRdfType},
    {3, kRange, Slot::S, Slot::O, true, {}, Stage2Partner::Object, kRdfType},
    {5, kSubPropertyOf, Slot::O, Slot::S, false, kSubPropertyOf, Stage2Partner::Object, kSubPropertyOf},
    {7, kSubPropertyOf, Slot::S, Slot::O, true, {}, Stage2Partner::SubjectObject, {}},
    {9, kRdfType, Slot::O, Slot::S, false, kSubClassOf, Stage2Partner::Object, kRdfType},
    {11, kSubClassOf, Slot::O, Slot::S, false, kSubClassOf, Stage2Partner::Object, kSubClassOf},
};

void add_partner(StageTable& table, TermId link, Partner p) {
  auto& partners = table[link];
  if (std::find(partners.begin(), partners.end(), p) == partners.end()) partners.push_back(p);
}

Partner stage2_partner(const EntailmentRule& rule, const Triple& t) {
  switch (rule.stage2_partner) {
    case Stage2Partner::Subject:
      return {t.subj, 0};
    case Stage2Partner::Object:
      return {t.obj, 0};
    default:
      return {t.subj, t.obj};
  }
}

}  // namespace

std::span<const EntailmentRule> entailment_rules() { return kRules; }

const EntailmentRule& entailment_rule(int id) {
  for (const auto& r : kRules)
    if (r.id == id) return r;
  throw std::out_of_range("no entailment rule " + std::to_string(id) + " (expected 2, 3, 5, 7, 9 or 11)");
}

RuleRun run_rule(int rule_id, const std::filesystem::path& tid, Dictionary& dict, const RuleOptions& opts) {
  const EntailmentRule& rule = entailment_rule(rule_id);
  if (opts.batch_width == 0 || opts.batch_width > kMaxSubqueries)
    throw TooManySubqueries("stage-2 batch width must be in 1.." + std::to_string(kMaxSubqueries));

  RuleRun run;
  run.rule = rule_id;
  auto p1 = dict.find(rule.stage1_predicate);
  std::optional<TermId> p2;
  if (!rule.link_is_predicate) p2 = dict.find(rule.stage2_predicate);
  if (!p1 || (!rule.link_is_predicate && !p2)) return run;

  // Stage 1
  std::vector<TermId> links_in_order;
  const PatternKey key1{0, *p1, 0};
  scan_file(tid, std::span(&key1, 1), opts.workers, opts.chunk_triples,
            [&](const TripleChunk& chunk, const MultiMatchResult& res) {
              for (const auto& m : res) {
                const Triple t = chunk.global(m.index);
                run.stage1_indices.push_back(m.index);
                const TermId link = t.at(rule.link_slot);
                links_in_order.push_back(link);
                add_partner(run.stage1, link, Partner{t.at(rule.partner_slot), 0});
              }
            });

  // Stage 2: one key per link value.
  std::vector<TermId> links;
  if (opts.dedup_links) {
    for (const auto& [link, _] : run.stage1) links.push_back(link);
  } else {
    links = links_in_order;
  }
  std::set<std::uint64_t> hits;
  for (std::size_t start = 0; start < links.size(); start += opts.batch_width) {
    const std::size_t n = std::min(opts.batch_width, links.size() - start);
    std::vector<PatternKey> keys;
    keys.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
      const TermId link = links[start + q];
      keys.push_back(rule.link_is_predicate ? PatternKey{0, link, 0} : PatternKey{link, *p2, 0});
    }
    scan_file(tid, keys, opts.workers, opts.chunk_triples, [&](const TripleChunk& chunk, const MultiMatchResult& res) {
      for (const auto& m : res) {
        const Triple t = chunk.global(m.index);
        hits.insert(m.index);
        for (MarkSet bits = m.marks; bits; bits &= bits - 1)
          add_partner(run.stage2, links[start + std::countr_zero(bits)], stage2_partner(rule, t));
      }
    });
  }
  run.stage2_indices.assign(hits.begin(), hits.end());

  // Combine on the link value.
  std::optional<TermId> conclusion_pred;
  std::set<Triple> emitted;
  for (const auto& [link, right] : run.stage2) {
    auto left = run.stage1.find(link);
    if (left == run.stage1.end()) continue;
    for (const Partner& a : left->second) {
      for (const Partner& b : right) {
        Triple t;
        if (rule.id == 7) {
          t = {b.first, a.first, b.second};
        } else {
          if (!conclusion_pred) conclusion_pred = dict.encode(rule.conclusion_predicate, Role::Pred);
          t = rule.link_is_predicate ? Triple{b.first, *conclusion_pred, a.first}
                                     : Triple{a.first, *conclusion_pred, b.first};
        }
        if (emitted.insert(t).second) run.inferred.push_back(t);
      }
    }
  }
  return run;
}

RuleCounts report_counts(const RuleRun& run) {
  RuleCounts c;
  c.res1 = run.stage1_indices.size();
  c.dist1 = run.stage1.size();
  c.res2 = run.stage2_indices.size();
  c.dist2 = run.stage2.size();
  c.all = run.inferred.size();
  return c;
}

}  // namespace tripleid
