#include "tripleid/store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

void put_le32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}
void put_le64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}
std::uint32_t get_le32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
std::uint64_t get_le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

constexpr std::size_t kWriteBufferTriples = 1 << 16;

struct Header {
  std::uint64_t count;
};

Header read_header(std::ifstream& in, const std::filesystem::path& path) {
  std::uint8_t raw[kTidHeaderBytes];
  in.read(reinterpret_cast<char*>(raw), kTidHeaderBytes);
  auto got = static_cast<std::size_t>(in.gcount());
  if (got < 4 || std::memcmp(raw, kTidMagic, 4) != 0) throw BadMagic(path.string() + ": not a TripleID file");
  if (got < kTidHeaderBytes) throw TruncatedFile(path.string() + ": header truncated");
  std::uint32_t version = get_le32(raw + 4);
  if (version != kTidVersion) throw BadVersion(path.string() + ": unsupported version " + std::to_string(version));
  return Header{get_le64(raw + 8)};
}

}  // namespace

TripleChunk TripleChunk::from_triples(std::span<const Triple> triples, std::uint64_t base_index) {
  TripleChunk c;
  c.base_index = base_index;
  c.data.reserve(triples.size() * 3);
  for (const auto& t : triples) {
    c.data.push_back(t.subj);
    c.data.push_back(t.pred);
    c.data.push_back(t.obj);
  }
  return c;
}

TidWriter::TidWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  std::uint8_t header[kTidHeaderBytes];
  std::memcpy(header, kTidMagic, 4);
  put_le32(header + 4, kTidVersion);
  put_le64(header + 8, 0);
  out_.write(reinterpret_cast<const char*>(header), kTidHeaderBytes);
  buffer_.reserve(kWriteBufferTriples * 12);
}

void TidWriter::append(const Triple& t) {
  if (!t.valid())
    throw InvariantViolation("triple " + std::to_string(count_) + " contains the reserved id 0");
  std::uint8_t rec[12];
  put_le32(rec, t.subj);
  put_le32(rec + 4, t.pred);
  put_le32(rec + 8, t.obj);
  buffer_.insert(buffer_.end(), rec, rec + 12);
  ++count_;
  if (buffer_.size() >= kWriteBufferTriples * 12) flush_buffer();
}

void TidWriter::flush_buffer() {
  out_.write(reinterpret_cast<const char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  buffer_.clear();
  if (!out_) throw IoError("write failed for " + path_.string());
}

void TidWriter::finish() {
  if (finished_) return;
  flush_buffer();
  std::uint8_t count[8];
  put_le64(count, count_);
  out_.seekp(8);
  out_.write(reinterpret_cast<const char*>(count), 8);
  out_.close();
  if (!out_) throw IoError("write failed for " + path_.string());
  finished_ = true;
}

void write_tid(std::span<const Triple> triples, const std::filesystem::path& path) {
  for (std::size_t i = 0; i < triples.size(); ++i)
    if (!triples[i].valid()) throw InvariantViolation("triple " + std::to_string(i) + " contains the reserved id 0");
  TidWriter w(path);
  for (const auto& t : triples) w.append(t);
  w.finish();
}

ChunkReader::ChunkReader(const std::filesystem::path& path, std::uint64_t chunk_triples)
    : in_(path, std::ios::binary), chunk_triples_(chunk_triples) {
  if (chunk_triples == 0) throw InvariantViolation("chunk size must be at least one triple");
  if (!in_) throw IoError("cannot open " + path.string());
  total_ = read_header(in_, path).count;
  std::error_code ec;
  auto bytes = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string());
  std::uint64_t payload = bytes - kTidHeaderBytes;
  if (total_ > payload / 12)
    throw TruncatedFile(path.string() + ": header declares " + std::to_string(total_) + " triples, file holds " +
                        std::to_string(payload / 12));
}

std::uint64_t ChunkReader::chunk_count() const noexcept {
  return (total_ + chunk_triples_ - 1) / chunk_triples_;
}

bool ChunkReader::next(TripleChunk& chunk) {
  if (consumed_ >= total_) return false;
  std::uint64_t n = std::min(chunk_triples_, total_ - consumed_);
  chunk.base_index = consumed_;
  chunk.data.resize(static_cast<std::size_t>(n * 3));
  auto bytes = static_cast<std::streamsize>(n * 12);
  if constexpr (std::endian::native == std::endian::little) {
    in_.read(reinterpret_cast<char*>(chunk.data.data()), bytes);
  } else {
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(bytes));
    in_.read(reinterpret_cast<char*>(raw.data()), bytes);
    for (std::size_t i = 0; i < chunk.data.size(); ++i) chunk.data[i] = get_le32(raw.data() + 4 * i);
  }
  if (in_.gcount() != bytes) throw TruncatedFile("unexpected end of TripleID data");
  consumed_ += n;
  return true;
}

std::uint64_t read_tid_count(const std::filesystem::path& path) {
  return ChunkReader(path, 1).total_triples();
}

std::vector<TripleChunk> read_chunks(const std::filesystem::path& path, std::uint64_t chunk_triples) {
  ChunkReader reader(path, chunk_triples);
  std::vector<TripleChunk> chunks;
  chunks.reserve(static_cast<std::size_t>(reader.chunk_count()));
  TripleChunk c;
  while (reader.next(c)) chunks.push_back(std::move(c));
  return chunks;
}

std::vector<Triple> read_all_triples(const std::filesystem::path& path) {
  std::vector<Triple> out;
  ChunkReader reader(path, std::max<std::uint64_t>(1, std::uint64_t{1} << 20));
  out.reserve(static_cast<std::size_t>(reader.total_triples()));
  TripleChunk c;
  while (reader.next(c))
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c.at(i));
  return out;
}

std::uint64_t device_memory_bytes(std::uint64_t n_ids) {
  if (n_ids % 3 != 0) throw InvariantViolation("data array length must be a multiple of 3");
  return (n_ids + n_ids / 3 + 3) * sizeof(TermId);
}

std::uint64_t chunk_triples_for_budget(std::uint64_t budget_bytes) {
  constexpr std::uint64_t unit = std::uint64_t{1} << 20;  // triples, i.e. 3 * 2^20 ids
  constexpr std::uint64_t per_triple = 4 * sizeof(TermId);
  constexpr std::uint64_t fixed = 3 * sizeof(TermId);
  if (budget_bytes <= fixed + per_triple) return 1;
  std::uint64_t fit = (budget_bytes - fixed) / per_triple;
  if (fit >= unit) return fit / unit * unit;
  return fit;
}

}  // namespace tripleid
