#include "tripleid/query_ops.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

constexpr Slot kSlots[3] = {Slot::S, Slot::P, Slot::O};

// Stable order of row indices by key.
std::vector<std::size_t> sorted_order(std::span<const TermId> keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

struct RowHash {
  std::size_t operator()(const std::vector<TermId>& row) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (TermId id : row) {
      h ^= id;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Relationship> analyze_relationships(std::span<const TriplePattern> patterns) {
  std::vector<Relationship> rels;
  for (std::size_t j = 1; j < patterns.size(); ++j) {
    bool linked = false;
    for (std::size_t i = j; i-- > 0 && !linked;) {
      for (Slot s : kSlots) {
        const std::string* v = patterns[i].var_at(s);
        if (!v) continue;
        if (auto rs = patterns[j].slot_of(*v)) {
          rels.push_back({i, j, s, *rs, *v});
          linked = true;
          break;
        }
      }
    }
    if (!linked)
      throw DisconnectedPatterns("triple pattern " + std::to_string(j) +
                                 " shares no variable with an earlier pattern (cartesian products are unsupported)");
  }
  return rels;
}

// ---------------------------------------------------------------------------

bool BindingRelation::sorted() const noexcept { return std::is_sorted(keys.begin(), keys.end()); }

void BindingRelation::sort_by_key() {
  if (sorted()) return;
  auto order = sorted_order(keys);
  const std::size_t w = value_slots.size();
  std::vector<TermId> k(keys.size()), v(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    k[r] = keys[order[r]];
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(order[r] * w), w,
                v.begin() + static_cast<std::ptrdiff_t>(r * w));
  }
  keys = std::move(k);
  values = std::move(v);
}

BindingRelation build_relation(std::span<const Triple> matched, const TriplePattern& pattern, Slot join_slot) {
  BindingRelation rel;
  rel.key_slot = join_slot;
  const std::string* join_var = pattern.var_at(join_slot);
  std::vector<std::string> seen;
  if (join_var) seen.push_back(*join_var);
  for (Slot s : kSlots) {
    if (s == join_slot) continue;
    const std::string* v = pattern.var_at(s);
    if (!v || std::find(seen.begin(), seen.end(), *v) != seen.end()) continue;
    seen.push_back(*v);
    rel.value_slots.push_back(s);
  }
  rel.keys.reserve(matched.size());
  rel.values.reserve(matched.size() * rel.value_slots.size());
  for (const Triple& t : matched) {
    rel.keys.push_back(t.at(join_slot));
    for (Slot s : rel.value_slots) rel.values.push_back(t.at(s));
  }
  return rel;
}

BindingRelation build_relation(const MultiMatchResult& result, std::size_t q, const TripleChunk& chunk,
                               const TriplePattern& pattern, Slot join_slot) {
  std::vector<Triple> matched;
  for (const auto& m : result)
    if (m.marks & (MarkSet{1} << q)) matched.push_back(chunk.global(m.index));
  return build_relation(matched, pattern, join_slot);
}

JoinPairs merge_join(std::span<const TermId> left_keys, std::span<const TermId> right_keys, std::size_t max_pairs) {
  const auto lo = sorted_order(left_keys);
  const auto ro = sorted_order(right_keys);
  JoinPairs out;
  std::size_t a = 0, b = 0;
  while (a < lo.size() && b < ro.size()) {
    TermId lk = left_keys[lo[a]];
    TermId rk = right_keys[ro[b]];
    if (lk < rk) {
      ++a;
    } else if (rk < lk) {
      ++b;
    } else {
      std::size_t a_end = a, b_end = b;
      while (a_end < lo.size() && left_keys[lo[a_end]] == lk) ++a_end;
      while (b_end < ro.size() && right_keys[ro[b_end]] == lk) ++b_end;
      if (out.size() + (a_end - a) * (b_end - b) > max_pairs)
        throw ResourceLimit("join result exceeds the row cap of " + std::to_string(max_pairs));
      for (std::size_t x = a; x < a_end; ++x)
        for (std::size_t y = b; y < b_end; ++y) out.emplace_back(lo[x], ro[y]);
      a = a_end;
      b = b_end;
    }
  }
  return out;
}

JoinPairs merge_join(const BindingRelation& left, const BindingRelation& right, std::size_t max_pairs) {
  return merge_join(std::span<const TermId>(left.keys), std::span<const TermId>(right.keys), max_pairs);
}

// ---------------------------------------------------------------------------

void BindingTable::add_row(std::span<const TermId> row) {
  cells.insert(cells.end(), row.begin(), row.end());
  ++n_rows;
}

std::optional<std::size_t> BindingTable::column_of(std::string_view var) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == var) return c;
  return std::nullopt;
}

std::optional<std::string> term_str(std::string_view lex) {
  if (lex.empty()) return std::string();
  if (lex.front() == '<') return std::string(lex.substr(1, lex.size() - 2));
  if (lex.front() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i < lex.size(); ++i) {
    char c = lex[i];
    if (c == '"') break;
    if (c != '\\' || i + 1 >= lex.size()) {
      out += c;
      continue;
    }
    char e = lex[++i];
    switch (e) {
      case 't':
        out += '\t';
        break;
      case 'n':
        out += '\n';
        break;
      case 'r':
        out += '\r';
        break;
      case 'b':
        out += '\b';
        break;
      case 'f':
        out += '\f';
        break;
      case 'u':
      case 'U': {
        std::size_t len = e == 'u' ? 4 : 8;
        std::uint32_t cp = 0;
        if (i + len >= lex.size()) return std::string(lex);
        auto [ptr, ec] = std::from_chars(lex.data() + i + 1, lex.data() + i + 1 + len, cp, 16);
        if (ec != std::errc() || ptr != lex.data() + i + 1 + len) return std::string(lex);
        append_utf8(out, cp);
        i += len;
        break;
      }
      default:
        out += e;
    }
  }
  return out;
}

RegexFilter::RegexFilter(std::string variable, const std::string& pattern)
    : variable_(std::move(variable)), regex_(pattern, std::regex::ECMAScript) {}

bool RegexFilter::test(TermId id, const Dictionary& dict) {
  if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  auto s = term_str(dict.lexical(id));
  bool ok = s && std::regex_search(*s, regex_);
  cache_.emplace(id, ok);
  return ok;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Triple>> materialize_patterns(const std::filesystem::path& tid,
                                                      std::span<const PatternKey> keys, const EvalOptions& opts) {
  std::vector<std::vector<Triple>> out(keys.size());
  for (std::size_t start = 0; start < keys.size(); start += kMaxSubqueries) {
    auto batch = keys.subspan(start, std::min(kMaxSubqueries, keys.size() - start));
    scan_file(tid, batch, opts.workers, opts.chunk_triples, [&](const TripleChunk& chunk, const MultiMatchResult& res) {
      for (const auto& m : res) {
        const Triple t = chunk.global(m.index);
        for (MarkSet bits = m.marks; bits; bits &= bits - 1) out[start + std::countr_zero(bits)].push_back(t);
      }
    });
  }
  return out;
}

BindingTable join_group(const Group& group, const CompiledGroup& compiled, std::vector<std::vector<Triple>> matches,
                        const Dictionary& dict, const EvalOptions& opts) {
  BindingTable acc;
  acc.columns = compiled.variables;
  const auto& patterns = group.patterns;
  if (!compiled.satisfiable || patterns.empty()) return acc;

  // Repeated variable inside one pattern, e.g. ?x <p> ?x.
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto& vs = compiled.patterns[p].var_slot;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (vs[a] >= 0 && vs[a] == vs[b]) {
          std::erase_if(matches[p], [&](const Triple& t) {
            return t.at(static_cast<Slot>(a)) != t.at(static_cast<Slot>(b));
          });
        }
  }

  // FILTERs prune every pattern that binds the variable, before any join.
  for (const auto& f : group.filters) {
    RegexFilter filter(f.variable, f.regex);
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      auto slot = patterns[p].slot_of(f.variable);
      if (!slot) continue;
      std::erase_if(matches[p], [&](const Triple& t) { return !filter.test(t.at(*slot), dict); });
    }
  }

  const auto rels = analyze_relationships(patterns);

  // Seed with the first pattern's rows, columns in first-appearance order.
  BindingTable cur;
  for (const auto& v : patterns[0].variables()) cur.columns.push_back(v);
  std::vector<Slot> seed_slots;
  for (const auto& v : cur.columns) seed_slots.push_back(*patterns[0].slot_of(v));
  std::vector<TermId> row;
  for (const Triple& t : matches[0]) {
    row.clear();
    for (Slot s : seed_slots) row.push_back(t.at(s));
    cur.add_row(row);
  }

  for (const auto& rel : rels) {
    const auto& pat = patterns[rel.j];
    BindingRelation right = build_relation(matches[rel.j], pat, rel.right_slot);
    const std::size_t key_col = *cur.column_of(rel.variable);
    std::vector<TermId> left_keys(cur.rows());
    for (std::size_t r = 0; r < cur.rows(); ++r) left_keys[r] = cur.row(r)[key_col];

    // Value slots whose variable is already bound become equality checks;
    // the rest extend the row.
    std::vector<std::pair<std::size_t, std::size_t>> checks;  // (value index, existing column)
    std::vector<std::size_t> extend;                          // value index
    BindingTable next;
    next.columns = cur.columns;
    for (std::size_t k = 0; k < right.value_slots.size(); ++k) {
      const std::string& v = *pat.var_at(right.value_slots[k]);
      if (auto col = cur.column_of(v)) {
        checks.emplace_back(k, *col);
      } else {
        extend.push_back(k);
        next.columns.push_back(v);
      }
    }

    const auto pairs = merge_join(left_keys, right.keys, opts.max_join_rows);
    for (const auto& [l, r] : pairs) {
      auto lrow = cur.row(l);
      auto rval = right.value(r);
      bool ok = std::all_of(checks.begin(), checks.end(),
                            [&](const auto& c) { return rval[c.first] == lrow[c.second]; });
      if (!ok) continue;
      row.assign(lrow.begin(), lrow.end());
      for (std::size_t k : extend) row.push_back(rval[k]);
      next.add_row(row);
    }
    cur = std::move(next);
  }

  // Reorder to the group's variable order (identical by construction, kept
  // explicit so callers can rely on it).
  if (cur.columns == acc.columns) return cur;
  std::vector<std::size_t> map;
  for (const auto& v : acc.columns) map.push_back(*cur.column_of(v));
  for (std::size_t r = 0; r < cur.rows(); ++r) {
    row.clear();
    for (std::size_t c : map) row.push_back(cur.row(r)[c]);
    acc.add_row(row);
  }
  return acc;
}

BindingTable evaluate_group(const Group& group, const std::filesystem::path& tid, const Dictionary& dict,
                            const EvalOptions& opts, EvalTimings* timings) {
  const CompiledGroup compiled = compile_group(group, dict);
  if (!compiled.satisfiable) return join_group(group, compiled, {}, dict, opts);
  std::vector<PatternKey> keys;
  for (const auto& p : compiled.patterns) keys.push_back(p.key);
  auto t0 = Clock::now();
  auto matches = materialize_patterns(tid, keys, opts);
  auto t1 = Clock::now();
  auto table = join_group(group, compiled, std::move(matches), dict, opts);
  if (timings) {
    timings->search_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
    timings->join_ms += ms_since(t1);
  }
  return table;
}

BindingTable evaluate_union(std::span<const BindingTable> groups) {
  if (groups.size() == 1) return groups[0];
  BindingTable out;
  for (const auto& g : groups)
    for (const auto& c : g.columns)
      if (!out.column_of(c)) out.columns.push_back(c);
  std::vector<TermId> row(out.width());
  for (const auto& g : groups) {
    std::vector<std::size_t> target;
    for (const auto& c : g.columns) target.push_back(*out.column_of(c));
    for (std::size_t r = 0; r < g.rows(); ++r) {
      std::fill(row.begin(), row.end(), kUnbound);
      auto src = g.row(r);
      for (std::size_t c = 0; c < target.size(); ++c) row[target[c]] = src[c];
      out.add_row(row);
    }
  }
  return out;
}

BindingTable project_distinct(const BindingTable& table, std::span<const std::string> projection, bool select_all,
                              bool distinct) {
  BindingTable out;
  std::vector<std::size_t> cols;
  if (select_all) {
    out.columns = table.columns;
    cols.resize(table.width());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
  } else {
    for (const auto& v : projection) {
      auto c = table.column_of(v);
      if (!c) throw InvariantViolation("projected variable ?" + v + " is not a column");
      out.columns.push_back(v);
      cols.push_back(*c);
    }
  }
  std::unordered_set<std::vector<TermId>, RowHash> seen;
  std::vector<TermId> row;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    auto src = table.row(r);
    row.clear();
    for (std::size_t c : cols) row.push_back(src[c]);
    if (distinct && !seen.insert(row).second) continue;
    out.add_row(row);
  }
  return out;
}

BindingTable evaluate_query(const QueryAst& ast, const std::filesystem::path& tid, const Dictionary& dict,
                            const EvalOptions& opts, EvalTimings* timings) {
  const auto compiled = compile_keys(ast, dict);
  std::vector<PatternKey> keys;
  std::vector<std::size_t> first_key(compiled.size(), 0);
  for (std::size_t g = 0; g < compiled.size(); ++g) {
    first_key[g] = keys.size();
    if (!compiled[g].satisfiable) continue;
    for (const auto& p : compiled[g].patterns) keys.push_back(p.key);
  }

  auto t0 = Clock::now();
  std::vector<std::vector<Triple>> matches;
  if (!keys.empty()) matches = materialize_patterns(tid, keys, opts);
  auto t1 = Clock::now();

  std::vector<BindingTable> tables;
  for (std::size_t g = 0; g < compiled.size(); ++g) {
    std::vector<std::vector<Triple>> mine;
    if (compiled[g].satisfiable) {
      for (std::size_t p = 0; p < compiled[g].patterns.size(); ++p)
        mine.push_back(std::move(matches[first_key[g] + p]));
    }
    tables.push_back(join_group(ast.groups[g], compiled[g], std::move(mine), dict, opts));
  }
  auto result = project_distinct(evaluate_union(tables), ast.projection, ast.select_all, ast.distinct);
  if (timings) {
    timings->search_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
    timings->join_ms += ms_since(t1);
  }
  return result;
}

void decode_table(const BindingTable& table, const Dictionary& dict, std::ostream& out) {
  std::string line;
  for (std::size_t c = 0; c < table.width(); ++c) {
    if (c) line += '\t';
    line += '?';
    line += table.columns[c];
  }
  line += '\n';
  out << line;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    line.clear();
    auto row = table.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += '\t';
      if (row[c] != kUnbound) line += dict.lexical(row[c]);
    }
    line += '\n';
    out << line;
  }
}

std::string decode_table(const BindingTable& table, const Dictionary& dict) {
  std::ostringstream os;
  decode_table(table, dict, os);
  return os.str();
}

}  // namespace tripleid
