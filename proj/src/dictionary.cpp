#include "tripleid/dictionary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

constexpr const char* kRoleExtensions[3] = {".sid", ".pid", ".oid"};

}  // namespace

std::filesystem::path role_file_path(const std::filesystem::path& basename, Role role) {
  std::filesystem::path p = basename;
  p += kRoleExtensions[static_cast<int>(role)];
  return p;
}

unsigned ceil_log2(std::uint64_t n) noexcept {
  unsigned bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

Dictionary::Dictionary(const Dictionary& other)
    : capacity_(other.capacity_), terms_(other.terms_), roles_(other.roles_) {
  for (int r = 0; r < 3; ++r) role_counts_[r] = other.role_counts_[r];
  rebuild_index();
}

Dictionary& Dictionary::operator=(const Dictionary& other) {
  if (this != &other) {
    Dictionary copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Dictionary::rebuild_index() {
  index_.clear();
  index_.reserve(terms_.size());
  TermId id = 1;
  for (const auto& t : terms_) index_.emplace(std::string_view(t), id++);
}

TermId Dictionary::encode(std::string_view lexical, Role role) {
  TermId id;
  if (auto it = index_.find(lexical); it != index_.end()) {
    id = it->second;
  } else {
    if (terms_.size() >= capacity_) throw CapacityExceeded("term ID space exhausted at " + std::to_string(capacity_));
    terms_.emplace_back(lexical);
    roles_.push_back(0);
    id = static_cast<TermId>(terms_.size());
    index_.emplace(std::string_view(terms_.back()), id);
  }
  auto bit = static_cast<std::uint8_t>(1u << static_cast<int>(role));
  auto& mask = roles_[id - 1];
  if (!(mask & bit)) {
    mask |= bit;
    ++role_counts_[static_cast<int>(role)];
  }
  return id;
}

const std::string& Dictionary::lexical(TermId id) const {
  if (id == 0 || id > terms_.size()) throw UnknownId("unknown term id " + std::to_string(id));
  return terms_[id - 1];
}

std::optional<TermId> Dictionary::find(std::string_view lexical) const {
  auto it = index_.find(lexical);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Dictionary::in_role(TermId id, Role role) const noexcept {
  if (id == 0 || id > roles_.size()) return false;
  return roles_[id - 1] & (1u << static_cast<int>(role));
}

std::vector<TermId> Dictionary::ids_in_role(Role role) const {
  std::vector<TermId> out;
  out.reserve(role_count(role));
  for (TermId id = 1; id <= size(); ++id)
    if (in_role(id, role)) out.push_back(id);
  return out;
}

unsigned Dictionary::min_id_bits() const noexcept {
  unsigned bits = 0;
  for (auto n : role_counts_) bits = std::max(bits, ceil_log2(n));
  return bits;
}

void Dictionary::write_id_files(const std::filesystem::path& basename) const {
  for (int r = 0; r < 3; ++r) {
    auto role = static_cast<Role>(r);
    auto path = role_file_path(basename, role);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::string buf;
    for (TermId id = 1; id <= size(); ++id) {
      if (!in_role(id, role)) continue;
      buf += std::to_string(id);
      buf += '\t';
      buf += terms_[id - 1];
      buf += '\n';
      if (buf.size() > (1u << 20)) {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
  }
}

Dictionary Dictionary::read_id_files(const std::filesystem::path& basename) {
  // id -> (lexical, role mask), merged over the three files
  std::map<TermId, std::pair<std::string, std::uint8_t>> entries;
  std::unordered_map<std::string, TermId> seen;

  for (int r = 0; r < 3; ++r) {
    auto path = role_file_path(basename, static_cast<Role>(r));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    TermId prev = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto where = [&] { return path.string() + ":" + std::to_string(line_no); };
      auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
        throw FormatError(where() + ": expected <id>\\t<term>");
      TermId id = 0;
      auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, id);
      if (ec != std::errc() || ptr != line.data() + tab || id == 0) throw FormatError(where() + ": bad id");
      if (id <= prev) throw FormatError(where() + ": ids not strictly ascending");
      prev = id;
      std::string term = line.substr(tab + 1);

      auto [sit, fresh_term] = seen.emplace(term, id);
      if (!fresh_term && sit->second != id)
        throw ConsistencyError(where() + ": term " + term + " has ids " + std::to_string(sit->second) + " and " +
                               std::to_string(id));
      auto [eit, fresh_id] = entries.try_emplace(id, term, 0);
      if (!fresh_id && eit->second.first != term)
        throw ConsistencyError(where() + ": id " + std::to_string(id) + " names two terms");
      eit->second.second |= static_cast<std::uint8_t>(1u << r);
    }
    if (in.bad()) throw IoError("read failure on " + path.string());
  }

  Dictionary d;
  TermId expected = 1;
  for (auto& [id, entry] : entries) {
    if (id != expected) throw ConsistencyError("id " + std::to_string(expected) + " missing from all role files");
    d.terms_.push_back(std::move(entry.first));
    d.roles_.push_back(entry.second);
    for (int r = 0; r < 3; ++r)
      if (entry.second & (1u << r)) ++d.role_counts_[r];
    ++expected;
  }
  d.rebuild_index();
  return d;
}

bool operator==(const Dictionary& a, const Dictionary& b) {
  return a.terms_ == b.terms_ && a.roles_ == b.roles_;
}

}  // namespace tripleid
