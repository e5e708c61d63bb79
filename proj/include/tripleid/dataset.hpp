#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "tripleid/dictionary.hpp"
#include "tripleid/nt_parser.hpp"

namespace tripleid {

/// basename + {.tid, .sid, .pid, .oid}
struct DatasetPaths {
  std::filesystem::path basename;

  std::filesystem::path tid() const;
  std::filesystem::path role_file(Role r) const { return role_file_path(basename, r); }
  std::uintmax_t total_bytes() const;
};

struct ConvertSummary {
  std::uint64_t triples = 0;
  std::size_t subjects = 0;
  std::size_t predicates = 0;
  std::size_t objects = 0;
  std::size_t terms = 0;
  ParseReport parse;
  std::uintmax_t bytes_tid = 0, bytes_sid = 0, bytes_pid = 0, bytes_oid = 0;
  double elapsed_ms = 0;
};

/// Single pass: parse, encode, write the four files. Output goes to
/// temporaries renamed into place only on success, so a strict-mode
/// ParseError or I/O failure leaves no files behind.
ConvertSummary convert(std::istream& source, const std::filesystem::path& basename, ParseMode mode);
ConvertSummary convert_file(const std::filesystem::path& input, const std::filesystem::path& basename,
                            ParseMode mode);

/// A dataset whose dictionary has been loaded and checked against the .tid
/// file: every ID in each slot is present in the matching role set.
struct Dataset {
  DatasetPaths paths;
  Dictionary dict;
  std::uint64_t triples = 0;
};

/// Loads the ID files and reads the .tid header. IoError when a file is
/// missing; FormatError/ConsistencyError from the readers.
Dataset open_dataset(const std::filesystem::path& basename);

/// Full scan of the .tid checking role membership. Throws ConsistencyError.
void verify_dataset(const Dataset& ds, std::uint64_t chunk_triples = std::uint64_t{1} << 20);

}  // namespace tripleid
