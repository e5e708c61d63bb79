#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tripleid/term.hpp"

namespace tripleid {

struct RawStatement {
  TermToken subject;
  TermToken predicate;
  TermToken object;
  std::size_t line_number = 0;

  /// Canonical N-Triples form: tokens joined by single spaces, then " .".
  std::string to_ntriples() const;
};

/// Parses one physical line (no trailing newline). Returns nullopt for blank
/// and comment lines. A fourth term (N-Quads graph label) is accepted and
/// dropped. Throws ParseError on malformed input.
std::optional<RawStatement> parse_line(std::string_view line, std::size_t line_number);

enum class ParseMode { Lenient, Strict };

struct ParseDiagnostic {
  std::size_t line = 0;
  std::size_t offset = 0;  // byte offset within the line, or within the stream for decode errors
  std::string message;
};

struct ParseReport {
  std::size_t statements = 0;
  std::size_t skipped = 0;
  std::vector<ParseDiagnostic> errors;
};

using StatementSink = std::function<void(RawStatement&&)>;

/// Streams statements to `sink` in input order. Lenient mode records and
/// skips malformed lines; strict mode rethrows the first ParseError.
ParseReport parse_stream(std::istream& source, ParseMode mode, const StatementSink& sink);

/// Convenience wrapper collecting every statement.
std::vector<RawStatement> parse_all(std::istream& source, ParseMode mode, ParseReport* report = nullptr);

/// Byte offset of the first invalid UTF-8 sequence, or nullopt if valid.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept;

}  // namespace tripleid
