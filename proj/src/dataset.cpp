#include "tripleid/dataset.hpp"

#include <chrono>
#include <fstream>
#include <system_error>

#include "tripleid/error.hpp"
#include "tripleid/store.hpp"

namespace tripleid {

namespace fs = std::filesystem;

namespace {

fs::path with_suffix(const fs::path& basename, const char* ext) {
  fs::path p = basename;
  p += ext;
  return p;
}

std::uintmax_t size_or_zero(const fs::path& p) {
  std::error_code ec;
  auto n = fs::file_size(p, ec);
  return ec ? 0 : n;
}

// Removes every temporary it still owns when destroyed.
class Staging {
 public:
  explicit Staging(const fs::path& basename) : final_(basename) {
    tmp_ = basename;
    tmp_ += ".partial";
  }
  ~Staging() {
    if (committed_) return;
    std::error_code ec;
    for (const char* ext : kExts) fs::remove(with_suffix(tmp_, ext), ec);
  }
  const fs::path& basename() const { return tmp_; }

  void commit() {
    for (const char* ext : kExts) fs::rename(with_suffix(tmp_, ext), with_suffix(final_, ext));
    committed_ = true;
  }

 private:
  static constexpr const char* kExts[] = {".tid", ".sid", ".pid", ".oid"};
  fs::path final_;
  fs::path tmp_;
  bool committed_ = false;
};

}  // namespace

fs::path DatasetPaths::tid() const { return with_suffix(basename, ".tid"); }

std::uintmax_t DatasetPaths::total_bytes() const {
  return size_or_zero(tid()) + size_or_zero(role_file(Role::Subj)) + size_or_zero(role_file(Role::Pred)) +
         size_or_zero(role_file(Role::Obj));
}

ConvertSummary convert(std::istream& source, const fs::path& basename, ParseMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  if (basename.has_parent_path() && !fs::exists(basename.parent_path()))
    throw IoError("output directory does not exist: " + basename.parent_path().string());

  ConvertSummary sum;
  Staging staging(basename);
  Dictionary dict;
  {
    TidWriter writer(DatasetPaths{staging.basename()}.tid());
    sum.parse = parse_stream(source, mode, [&](RawStatement&& st) {
      const TermId s = dict.encode(st.subject, Role::Subj);
      const TermId p = dict.encode(st.predicate, Role::Pred);
      const TermId o = dict.encode(st.object, Role::Obj);
      writer.append({s, p, o});
    });
    if (source.bad()) throw IoError("read error on input");
    writer.finish();
    sum.triples = writer.count();
  }
  dict.write_id_files(staging.basename());
  staging.commit();

  const DatasetPaths out{basename};
  sum.subjects = dict.role_count(Role::Subj);
  sum.predicates = dict.role_count(Role::Pred);
  sum.objects = dict.role_count(Role::Obj);
  sum.terms = dict.size();
  sum.bytes_tid = size_or_zero(out.tid());
  sum.bytes_sid = size_or_zero(out.role_file(Role::Subj));
  sum.bytes_pid = size_or_zero(out.role_file(Role::Pred));
  sum.bytes_oid = size_or_zero(out.role_file(Role::Obj));
  sum.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

ConvertSummary convert_file(const fs::path& input, const fs::path& basename, ParseMode mode) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw IoError("cannot open " + input.string());
  return convert(in, basename, mode);
}

Dataset open_dataset(const fs::path& basename) {
  Dataset ds;
  ds.paths.basename = basename;
  for (const fs::path& p : {ds.paths.tid(), ds.paths.role_file(Role::Subj), ds.paths.role_file(Role::Pred),
                            ds.paths.role_file(Role::Obj)}) {
    if (!fs::exists(p)) throw IoError("missing dataset file " + p.string());
  }
  ds.dict = Dictionary::read_id_files(basename);
  ds.triples = read_tid_count(ds.paths.tid());
  return ds;
}

void verify_dataset(const Dataset& ds, std::uint64_t chunk_triples) {
  ChunkReader reader(ds.paths.tid(), chunk_triples);
  TripleChunk chunk;
  while (reader.next(chunk)) {
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const Triple t = chunk.at(i);
      if (!ds.dict.in_role(t.subj, Role::Subj) || !ds.dict.in_role(t.pred, Role::Pred) ||
          !ds.dict.in_role(t.obj, Role::Obj))
        throw ConsistencyError("triple " + std::to_string(chunk.base_index + i) +
                               " references an ID missing from its role file");
    }
  }
}

}  // namespace tripleid
