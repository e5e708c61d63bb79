#include "tripleid/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "tripleid/error.hpp"

namespace tripleid {

namespace {

constexpr std::string_view kRdfType = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

enum class Tok { End, Iri, PName, Var, String, Word, Punct, Number };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // Iri: with brackets; String: quoted literal plus any @lang; Punct: the char
  std::string datatype;  // String only: `<iri>` or prefixed name after ^^
  std::size_t pos = 0;
};

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' || c == '%' || u >= 0x80;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = pos_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (c == '<') {
      auto close = text_.find('>', pos_);
      auto nl = text_.find_first_of(" \t\r\n", pos_);
      if (close == std::string_view::npos || (nl != std::string_view::npos && nl < close))
        throw SyntaxError(pos_, "unterminated IRI");
      t.kind = Tok::Iri;
      t.text = std::string(text_.substr(pos_, close + 1 - pos_));
      pos_ = close + 1;
    } else if (c == '?' || c == '$') {
      std::size_t start = ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              static_cast<unsigned char>(text_[pos_]) >= 0x80))
        ++pos_;
      if (pos_ == start) throw SyntaxError(t.pos, "empty variable name");
      t.kind = Tok::Var;
      t.text = std::string(text_.substr(start, pos_ - start));
    } else if (c == '"' || c == '\'') {
      t.kind = Tok::String;
      t.text = scan_string(c, t.datatype);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      t.kind = Tok::Number;
      t.text = std::string(text_.substr(t.pos, pos_ - t.pos));
    } else if (std::string_view("{}().,*;").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      ++pos_;
    } else if (is_name_char(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      while (pos_ > start + 1 && text_[pos_ - 1] == '.') --pos_;  // trailing '.' ends the triple
      t.text = std::string(text_.substr(start, pos_ - start));
      t.kind = t.text.find(':') != std::string::npos ? Tok::PName : Tok::Word;
    } else {
      throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Returns the literal re-spelled with double quotes, keeping escapes and
  // any @lang suffix verbatim. A ^^ datatype is returned through `datatype`.
  std::string scan_string(char quote, std::string& datatype) {
    std::size_t start = pos_;
    std::string body;
    ++pos_;
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') throw SyntaxError(start, "unterminated string");
      char c = text_[pos_];
      if (c == '\\') {
        if (pos_ + 1 >= text_.size()) throw SyntaxError(start, "unterminated string");
        body += c;
        body += text_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      if (c == quote) break;
      if (c == '"') body += '\\';  // single-quoted string containing a double quote
      body += c;
      ++pos_;
    }
    ++pos_;
    std::string out = "\"" + body + "\"";
    if (pos_ < text_.size() && text_[pos_] == '@') {
      std::size_t s = pos_++;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
        ++pos_;
      out += text_.substr(s, pos_ - s);
    } else if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
      pos_ += 2;
      Token dt = next();
      if (dt.kind != Tok::Iri && dt.kind != Tok::PName) throw SyntaxError(dt.pos, "datatype must be an IRI");
      datatype = dt.text;
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

const char* unsupported_keywords[] = {"OPTIONAL", "MINUS",  "GRAPH", "BIND",   "VALUES", "SERVICE", "ORDER",
                                      "LIMIT",    "OFFSET", "GROUP", "HAVING", "FROM",   "BASE",    "ASK",
                                      "CONSTRUCT", "DESCRIBE", "REDUCED", "NOT", "EXISTS"};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { advance(); }

  QueryAst parse() {
    QueryAst ast;
    while (is_word("PREFIX")) {
      advance();
      if (cur_.kind != Tok::PName || cur_.text.back() != ':') fail("expected prefix name ending in ':'");
      std::string name = cur_.text.substr(0, cur_.text.size() - 1);
      advance();
      if (cur_.kind != Tok::Iri) fail("expected IRI after prefix name");
      ast.prefixes[name] = cur_.text.substr(1, cur_.text.size() - 2);
      advance();
    }
    prefixes_ = &ast.prefixes;
    check_unsupported();
    if (!is_word("SELECT")) fail("expected SELECT");
    advance();
    if (is_word("DISTINCT")) {
      ast.distinct = true;
      advance();
    }
    check_unsupported();
    std::size_t projection_pos = cur_.pos;
    if (is_punct('*')) {
      ast.select_all = true;
      advance();
    } else {
      ast.select_all = false;
      while (cur_.kind == Tok::Var || is_punct(',')) {
        if (cur_.kind == Tok::Var) ast.projection.push_back(cur_.text);
        advance();
      }
      if (ast.projection.empty()) fail("expected '*' or variables after SELECT");
      check_unsupported();
    }
    if (is_word("WHERE")) advance();
    check_unsupported();
    expect_punct('{');
    parse_body(ast);
    expect_punct('}');
    check_unsupported();
    if (cur_.kind != Tok::End) fail("unexpected trailing content");

    for (const auto& g : ast.groups) {
      auto vars = g.variables();
      for (const auto& f : g.filters)
        if (std::find(vars.begin(), vars.end(), f.variable) == vars.end())
          throw UnboundFilterVariable("FILTER variable ?" + f.variable + " does not occur in its group");
    }
    if (!ast.select_all) {
      auto all = ast.variables();
      for (const auto& v : ast.projection)
        if (std::find(all.begin(), all.end(), v) == all.end())
          throw SyntaxError(projection_pos, "projected variable ?" + v + " does not occur in the query body");
    }
    return ast;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(cur_.pos, what); }

  bool is_word(std::string_view kw) const { return cur_.kind == Tok::Word && upper(cur_.text) == kw; }
  bool is_punct(char c) const { return cur_.kind == Tok::Punct && cur_.text[0] == c; }

  void expect_punct(char c) {
    if (!is_punct(c)) {
      if (cur_.kind == Tok::End) fail(std::string("expected '") + c + "' before end of query");
      fail(std::string("expected '") + c + "' but found '" + cur_.text + "'");
    }
    advance();
  }

  void check_unsupported() const {
    if (cur_.kind != Tok::Word) return;
    auto u = upper(cur_.text);
    for (const char* kw : unsupported_keywords)
      if (u == kw) throw UnsupportedConstruct(u);
  }

  void parse_body(QueryAst& ast) {
    if (!is_punct('{')) {
      ast.groups.push_back(parse_group_content());
      return;
    }
    ast.groups.push_back(parse_braced_group());
    for (;;) {
      if (is_word("UNION")) {
        advance();
        ast.groups.push_back(parse_braced_group());
        continue;
      }
      if (is_punct('.')) {
        advance();
        continue;
      }
      break;
    }
    if (!is_punct('}')) {
      check_unsupported();
      if (is_punct('{')) throw UnsupportedConstruct("group join without UNION");
      throw UnsupportedConstruct("triples mixed with nested groups");
    }
  }

  Group parse_braced_group() {
    expect_punct('{');
    Group g = parse_group_content();
    expect_punct('}');
    return g;
  }

  Group parse_group_content() {
    Group g;
    for (;;) {
      if (is_punct('}') || cur_.kind == Tok::End) break;
      check_unsupported();
      if (is_word("FILTER")) {
        advance();
        g.filters.push_back(parse_filter());
        if (is_punct('.')) advance();
        continue;
      }
      if (is_punct('{')) throw UnsupportedConstruct("nested group");
      TriplePattern tp;
      for (int s = 0; s < 3; ++s) tp.slots[s] = parse_slot(static_cast<Slot>(s));
      g.patterns.push_back(std::move(tp));
      if (is_punct('.')) {
        advance();
      } else if (is_punct(';') || is_punct(',')) {
        throw UnsupportedConstruct("predicate-object list ('" + cur_.text + "')");
      } else if (!is_punct('}') && cur_.kind != Tok::Word) {
        fail("expected '.' or '}' after triple pattern");
      }
    }
    return g;
  }

  PatternSlot parse_slot(Slot slot) {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Var:
        advance();
        return Var{t.text};
      case Tok::Iri:
        advance();
        return TermToken{TermKind::Iri, t.text};
      case Tok::PName:
        advance();
        return TermToken{TermKind::Iri, expand(t)};
      case Tok::String: {
        std::string lit = t.text;
        if (!t.datatype.empty()) {
          lit += "^^";
          lit += t.datatype.front() == '<' ? t.datatype : expand(Token{Tok::PName, t.datatype, {}, t.pos});
        }
        advance();
        return TermToken{TermKind::Literal, lit};
      }
      case Tok::Word:
        if (t.text == "a" && slot == Slot::P) {
          advance();
          return TermToken{TermKind::Iri, std::string(kRdfType)};
        }
        check_unsupported();
        fail("unexpected keyword '" + t.text + "' in triple pattern");
      case Tok::Number:
        throw UnsupportedConstruct("numeric literal");
      case Tok::End:
        fail("unexpected end of query inside triple pattern");
      default:
        if (t.text == "_") throw UnsupportedConstruct("blank node in query");
        fail("unexpected '" + t.text + "' in triple pattern");
    }
  }

  std::string expand(const Token& t) const {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    if (prefix == "_") throw UnsupportedConstruct("blank node in query");
    auto it = prefixes_->find(prefix);
    if (it == prefixes_->end()) throw UnknownPrefix("unknown prefix '" + prefix + ":' at offset " + std::to_string(t.pos));
    return "<" + it->second + t.text.substr(colon + 1) + ">";
  }

  // After FILTER: ( regex ( str ( ?v ) , "pattern" ) ) with the outer
  // parentheses optional.
  Filter parse_filter() {
    bool outer = is_punct('(');
    if (outer) advance();
    if (!(cur_.kind == Tok::Word && upper(cur_.text) == "REGEX")) {
      std::string what = cur_.kind == Tok::Word ? upper(cur_.text) : cur_.text;
      throw UnsupportedConstruct("FILTER " + what);
    }
    advance();
    expect_punct('(');
    if (!(cur_.kind == Tok::Word && upper(cur_.text) == "STR")) {
      if (cur_.kind == Tok::Var) throw UnsupportedConstruct("regex on a term without str()");
      fail("expected str(?var) as regex subject");
    }
    advance();
    expect_punct('(');
    if (cur_.kind != Tok::Var) fail("expected variable inside str()");
    Filter f;
    f.variable = cur_.text;
    advance();
    expect_punct(')');
    expect_punct(',');
    if (cur_.kind != Tok::String) fail("expected string pattern in regex");
    std::size_t pattern_pos = cur_.pos;
    f.regex = unquote(cur_.text);
    advance();
    if (is_punct(',')) throw UnsupportedConstruct("regex flags");
    expect_punct(')');
    if (outer) expect_punct(')');
    try {
      std::regex check(f.regex, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw SyntaxError(pattern_pos, std::string("invalid regex: ") + e.what());
    }
    return f;
  }

  // Literal token text -> string value (SPARQL escapes decoded).
  static std::string unquote(const std::string& lit) {
    std::string out;
    auto end = lit.rfind('"');
    for (std::size_t i = 1; i < end; ++i) {
      char c = lit[i];
      if (c == '\\' && i + 1 < end) {
        char e = lit[++i];
        switch (e) {
          case 'n':
            out += '\n';
            break;
          case 't':
            out += '\t';
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
          default:
            out += e;
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  Lexer lex_;
  Token cur_;
  const std::map<std::string, std::string>* prefixes_ = nullptr;
};

void append_unique(std::vector<std::string>& out, const std::string& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

}  // namespace

std::string_view to_string(PatternClass c) noexcept {
  static constexpr std::string_view names[] = {"SPO", "SP?", "S?O", "?PO", "S??", "?P?", "??O", "???"};
  return names[static_cast<int>(c)];
}

const std::string* TriplePattern::var_at(Slot s) const {
  if (auto* v = std::get_if<Var>(&at(s))) return &v->name;
  return nullptr;
}

bool TriplePattern::has_var(std::string_view name) const { return slot_of(name).has_value(); }

std::optional<Slot> TriplePattern::slot_of(std::string_view name) const {
  for (int s = 0; s < 3; ++s)
    if (auto* v = var_at(static_cast<Slot>(s)); v && *v == name) return static_cast<Slot>(s);
  return std::nullopt;
}

std::vector<std::string> TriplePattern::variables() const {
  std::vector<std::string> out;
  for (int s = 0; s < 3; ++s)
    if (auto* v = var_at(static_cast<Slot>(s))) append_unique(out, *v);
  return out;
}

PatternClass TriplePattern::pattern_class() const {
  int bound = (var_at(Slot::S) ? 0 : 4) | (var_at(Slot::P) ? 0 : 2) | (var_at(Slot::O) ? 0 : 1);
  switch (bound) {
    case 7:
      return PatternClass::SPO;
    case 6:
      return PatternClass::SPx;
    case 5:
      return PatternClass::SxO;
    case 3:
      return PatternClass::xPO;
    case 4:
      return PatternClass::Sxx;
    case 2:
      return PatternClass::xPx;
    case 1:
      return PatternClass::xxO;
    default:
      return PatternClass::xxx;
  }
}

std::vector<std::string> Group::variables() const {
  std::vector<std::string> out;
  for (const auto& p : patterns)
    for (const auto& v : p.variables()) append_unique(out, v);
  return out;
}

std::vector<std::string> QueryAst::variables() const {
  std::vector<std::string> out;
  for (const auto& g : groups)
    for (const auto& v : g.variables()) append_unique(out, v);
  return out;
}

QueryAst parse_query(std::string_view text) { return Parser(text).parse(); }

CompiledGroup compile_group(const Group& group, const Dictionary& dict) {
  CompiledGroup cg;
  cg.variables = group.variables();
  for (const auto& p : group.patterns) {
    CompiledPattern cp;
    TermId ids[3] = {0, 0, 0};
    for (int s = 0; s < 3; ++s) {
      const auto& slot = p.slots[s];
      if (auto* v = std::get_if<Var>(&slot)) {
        auto it = std::find(cg.variables.begin(), cg.variables.end(), v->name);
        cp.var_slot[s] = static_cast<int>(it - cg.variables.begin());
      } else {
        auto id = dict.find(std::get<TermToken>(slot).lexical);
        if (!id) cg.satisfiable = false;
        ids[s] = id.value_or(0);
      }
    }
    cp.key = PatternKey{ids[0], ids[1], ids[2]};
    cg.patterns.push_back(cp);
  }
  return cg;
}

std::vector<CompiledGroup> compile_keys(const QueryAst& ast, const Dictionary& dict) {
  std::vector<CompiledGroup> out;
  out.reserve(ast.groups.size());
  for (const auto& g : ast.groups) out.push_back(compile_group(g, dict));
  return out;
}

}  // namespace tripleid
