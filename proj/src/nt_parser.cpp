#include "tripleid/nt_parser.hpp"

#include <cctype>
#include <istream>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_number) : line_(line), line_number_(line_number) {}

  void skip_space() {
    while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_number_, pos_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw ParseError(line_number_, at, what);
  }

  std::string_view scan_iri() {
    std::size_t start = pos_;
    std::size_t close = line_.find('>', pos_ + 1);
    if (close == std::string_view::npos) fail_at(start, "unterminated IRI");
    for (std::size_t i = start + 1; i < close; ++i) {
      if (line_[i] == '<' || is_space(line_[i])) fail_at(i, "invalid character inside IRI");
    }
    pos_ = close + 1;
    return line_.substr(start, pos_ - start);
  }

  std::string_view scan_literal() {
    std::size_t start = pos_;
    std::size_t i = pos_ + 1;
    for (;;) {
      if (i >= line_.size()) fail_at(start, "unterminated literal");
      char c = line_[i];
      if (c == '\\') {
        if (i + 1 >= line_.size()) fail_at(start, "unterminated literal");
        i += 2;
        continue;
      }
      if (c == '"') break;
      ++i;
    }
    pos_ = i + 1;
    if (pos_ < line_.size() && line_[pos_] == '@') {
      std::size_t tag = ++pos_;
      while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '-'))
        ++pos_;
      if (pos_ == tag) fail("empty language tag");
    } else if (pos_ + 1 < line_.size() && line_[pos_] == '^' && line_[pos_ + 1] == '^') {
      pos_ += 2;
      if (at_end() || peek() != '<') fail("datatype must be an IRI");
      scan_iri();
    }
    return line_.substr(start, pos_ - start);
  }

  std::string_view scan_blank() {
    std::size_t start = pos_;
    if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != ':') fail("malformed blank node");
    pos_ += 2;
    while (pos_ < line_.size() && !is_space(line_[pos_])) ++pos_;
    // A label may not end in '.', so a trailing '.' is the statement terminator.
    if (pos_ > start + 2 && line_[pos_ - 1] == '.') --pos_;
    if (pos_ == start + 2) fail_at(start, "empty blank node label");
    return line_.substr(start, pos_ - start);
  }

  // Next term or nullopt if the next significant character is the terminator.
  std::optional<TermToken> next_term() {
    skip_space();
    if (at_end()) fail("missing terminal '.'");
    switch (peek()) {
      case '<':
        return TermToken{TermKind::Iri, std::string(scan_iri())};
      case '"':
        return TermToken{TermKind::Literal, std::string(scan_literal())};
      case '_':
        return TermToken{TermKind::BlankNode, std::string(scan_blank())};
      case '.':
        return std::nullopt;
      default:
        fail(std::string("unexpected character '") + peek() + "'");
    }
  }

 private:
  std::string_view line_;
  std::size_t line_number_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string RawStatement::to_ntriples() const {
  std::string out;
  out.reserve(subject.lexical.size() + predicate.lexical.size() + object.lexical.size() + 4);
  out += subject.lexical;
  out += ' ';
  out += predicate.lexical;
  out += ' ';
  out += object.lexical;
  out += " .";
  return out;
}

std::optional<RawStatement> parse_line(std::string_view line, std::size_t line_number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  LineScanner scan(line, line_number);
  scan.skip_space();
  if (scan.at_end() || scan.peek() == '#') return std::nullopt;

  std::vector<TermToken> terms;
  terms.reserve(4);
  std::size_t predicate_pos = 0;
  for (;;) {
    scan.skip_space();
    if (terms.size() == 1) predicate_pos = scan.pos();
    auto term = scan.next_term();
    if (!term) break;
    terms.push_back(std::move(*term));
    if (terms.size() > 4) scan.fail("more than 3 terms in statement");
    // Terms must be separated by whitespace unless the next char is the terminator.
    if (!scan.at_end() && !is_space(scan.peek()) && scan.peek() != '.') scan.fail("expected whitespace after term");
  }
  std::size_t dot = scan.pos();
  scan.advance();
  scan.skip_space();
  if (!scan.at_end() && scan.peek() != '#') scan.fail("trailing content after '.'");

  if (terms.size() < 3) LineScanner(line, line_number).fail_at(dot, "fewer than 3 terms in statement");
  if (terms[1].kind != TermKind::Iri) LineScanner(line, line_number).fail_at(predicate_pos, "predicate is not an IRI");
  if (terms[0].kind == TermKind::Literal) LineScanner(line, line_number).fail_at(0, "subject is a literal");
  if (terms.size() == 4 && terms[3].kind == TermKind::Literal)
    LineScanner(line, line_number).fail_at(dot, "graph label is a literal");

  RawStatement st{std::move(terms[0]), std::move(terms[1]), std::move(terms[2]), line_number};
  return st;
}

std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept {
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > bytes.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF))
      return i;
    i += len;
  }
  return std::nullopt;
}

ParseReport parse_stream(std::istream& source, ParseMode mode, const StatementSink& sink) {
  ParseReport report;
  std::string line;
  std::size_t line_number = 0;
  std::size_t stream_offset = 0;
  while (std::getline(source, line)) {
    ++line_number;
    std::size_t line_start = stream_offset;
    stream_offset += line.size() + 1;
    if (auto bad = find_invalid_utf8(line)) {
      ParseError err(line_number, line_start + *bad, "invalid UTF-8");
      if (mode == ParseMode::Strict) throw err;
      report.errors.push_back({line_number, line_start + *bad, "invalid UTF-8"});
      continue;
    }
    try {
      auto st = parse_line(line, line_number);
      if (!st) {
        ++report.skipped;
        continue;
      }
      ++report.statements;
      sink(std::move(*st));
    } catch (const ParseError& e) {
      if (mode == ParseMode::Strict) throw;
      report.errors.push_back({e.line(), e.offset(), e.message()});
    }
  }
  if (source.bad()) throw IoError("read failure after line " + std::to_string(line_number));
  return report;
}

std::vector<RawStatement> parse_all(std::istream& source, ParseMode mode, ParseReport* report) {
  std::vector<RawStatement> out;
  ParseReport r = parse_stream(source, mode, [&](RawStatement&& st) { out.push_back(std::move(st)); });
  if (report) *report = std::move(r);
  return out;
}

}  // namespace tripleid
