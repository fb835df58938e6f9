#include "tmpn/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace tmpn {

namespace {

std::string compose_message(const source_span& sp, const std::vector<std::string>& expected,
                            const std::string& found) {
  std::ostringstream out;
  out << sp.line << ':' << sp.column << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
    out << expected[i];
  }
  out << ", found " << found;
  return out.str();
}

}  // namespace

parse_error::parse_error(const std::string& message, source_span sp,
                         std::vector<std::string> exp, std::string got)
    : error(message), span(sp), expected(std::move(exp)), found(std::move(got)) {}

namespace {

enum class tok {
  ident,
  integer,
  string,
  lbrace,
  rbrace,
  lparen,
  rparen,
  semi,
  colon,
  comma,
  caret,
  at,
  equals,
  minus,
  arrow,
  eof
};

const char* describe(tok k) {
  switch (k) {
    case tok::ident: return "an identifier";
    case tok::integer: return "an integer";
    case tok::string: return "a quoted name";
    case tok::lbrace: return "'{'";
    case tok::rbrace: return "'}'";
    case tok::lparen: return "'('";
    case tok::rparen: return "')'";
    case tok::semi: return "';'";
    case tok::colon: return "':'";
    case tok::comma: return "','";
    case tok::caret: return "'^'";
    case tok::at: return "'@'";
    case tok::equals: return "'='";
    case tok::minus: return "'-'";
    case tok::arrow: return "'->'";
    case tok::eof: return "end of input";
  }
  return "?";
}

struct token {
  tok kind = tok::eof;
  std::string text;      // identifier text, decoded string, or digits
  count_t value = 0;     // for integers
  source_span span;
};

class lexer {
 public:
  explicit lexer(std::string_view text) : text_(text) {}

  std::vector<token> run() {
    std::vector<token> out;
    for (;;) {
      skip_trivia();
      token t = next();
      bool done = t.kind == tok::eof;
      out.push_back(std::move(t));
      if (done) return out;
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, column_ = 1;

  bool eof() const { return pos_ >= text_.size(); }
  char cur() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  source_span here() const { return {pos_, pos_ + 1, line_, column_}; }

  [[noreturn]] void fail(source_span sp, const std::string& what, const std::string& found) {
    throw parse_error(compose_message(sp, {what}, found), sp, {what}, found);
  }

  void skip_trivia() {
    while (!eof()) {
      if (std::isspace(static_cast<unsigned char>(cur()))) {
        advance();
      } else if (cur() == '#') {
        while (!eof() && cur() != '\n') advance();
      } else {
        return;
      }
    }
  }

  token next() {
    if (eof()) return {tok::eof, "", 0, {pos_, pos_, line_, column_}};
    source_span start = here();
    char c = cur();

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')) {
        word += cur();
        advance();
      }
      start.end = pos_;
      return {tok::ident, std::move(word), 0, start};
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      count_t v = 0;
      std::string digits;
      while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) {
        count_t d = static_cast<count_t>(cur() - '0');
        if (v > (std::numeric_limits<count_t>::max() - d) / 10)
          fail(start, "an integer that fits in 64 bits", "a larger literal");
        v = v * 10 + d;
        digits += cur();
        advance();
      }
      start.end = pos_;
      return {tok::integer, std::move(digits), v, start};
    }

    if (c == '"') {
      advance();
      std::string value;
      while (true) {
        if (eof() || cur() == '\n') fail(start, "a closing '\"'", "end of line");
        char ch = cur();
        advance();
        if (ch == '"') break;
        if (ch == '\\') {
          if (eof()) fail(start, "a closing '\"'", "end of input");
          char esc = cur();
          advance();
          if (esc == '"' || esc == '\\')
            value += esc;
          else
            fail(start, "an escape ('\\\"' or '\\\\')", std::string("'\\") + esc + "'");
        } else {
          value += ch;
        }
      }
      start.end = pos_;
      return {tok::string, std::move(value), 0, start};
    }

    auto single = [&](tok kind) {
      advance();
      start.end = pos_;
      return token{kind, std::string(1, c), 0, start};
    };
    switch (c) {
      case '{': return single(tok::lbrace);
      case '}': return single(tok::rbrace);
      case '(': return single(tok::lparen);
      case ')': return single(tok::rparen);
      case ';': return single(tok::semi);
      case ':': return single(tok::colon);
      case ',': return single(tok::comma);
      case '^': return single(tok::caret);
      case '@': return single(tok::at);
      case '=': return single(tok::equals);
      case '-': {
        advance();
        if (!eof() && cur() == '>') {
          advance();
          start.end = pos_;
          return {tok::arrow, "->", 0, start};
        }
        start.end = pos_;
        return {tok::minus, "-", 0, start};
      }
      default:
        fail(start, "a token", "'" + std::string(1, c) + "'");
    }
  }
};

class parser {
 public:
  explicit parser(std::string_view text) : toks_(lexer(text).run()) {}

  const token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  token get() {
    token t = peek();
    if (t.kind != tok::eof) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const token& t = peek();
    std::string found =
        t.kind == tok::eof ? "end of input"
        : t.kind == tok::string ? "\"" + t.text + "\""
                                : "'" + t.text + "'";
    throw parse_error(compose_message(t.span, expected, found), t.span, std::move(expected),
                      std::move(found));
  }

  token expect(tok kind) {
    if (peek().kind != kind) fail({describe(kind)});
    return get();
  }

  bool at_word(const char* w) const { return peek().kind == tok::ident && peek().text == w; }
  bool accept_word(const char* w) {
    if (!at_word(w)) return false;
    get();
    return true;
  }
  void expect_word(const char* w) {
    if (!accept_word(w)) fail({"'" + std::string(w) + "'"});
  }

  count_t expect_count() { return expect(tok::integer).value; }

  int expect_small_int(const char* what, count_t cap) {
    const token& t = peek();
    count_t v = expect_count();
    if (v > cap)
      throw parse_error(compose_message(t.span, {what}, "the larger value " + t.text), t.span,
                        {what}, t.text);
    return static_cast<int>(v);
  }

 private:
  std::vector<token> toks_;
  std::size_t pos_ = 0;
};

// ---- membrane systems -------------------------------------------------------

constexpr int max_nesting = 256;
constexpr count_t max_delay_literal = 1000000000;
constexpr count_t max_label_literal = 1000000;

struct psystem_builder {
  timed_psystem sys;
  std::vector<std::pair<int, int>> parents;
  std::map<int, multiset> contents;
  std::set<std::string> labels_with_contents_clause;

  symbol resolve(const token& t) {
    if (auto s = sys.alphabet.find(t.text)) return *s;
    throw validation_error(std::to_string(t.span.line) + ":" + std::to_string(t.span.column) +
                           ": symbol " + t.text + " is not in the alphabet");
  }
};

multiset parse_mset(parser& p, psystem_builder& b) {
  multiset m;
  if (p.at_word("eps")) {
    p.get();
    return m;
  }
  if (p.peek().kind != tok::ident) p.fail({"a symbol", "'eps'"});
  while (p.peek().kind == tok::ident) {
    token t = p.get();
    if (t.text == "eps")
      throw validation_error("eps denotes the empty multiset and cannot appear as a factor");
    symbol s = b.resolve(t);
    count_t n = 1;
    if (p.peek().kind == tok::caret) {
      p.get();
      n = p.expect_count();
    }
    m.add(s, n);
  }
  return m;
}

void parse_rule(parser& p, psystem_builder& b, int membrane) {
  rule r;
  r.home = membrane;
  if (p.peek().kind != tok::ident) p.fail({"a rule name"});
  r.name = p.get().text;
  p.expect(tok::colon);
  r.lhs = parse_mset(p, b);
  p.expect(tok::arrow);

  if (p.accept_word("eps")) {
    // empty right-hand side
  } else {
    if (p.peek().kind != tok::lparen) p.fail({"'eps'", "'(' starting a product"});
    while (p.peek().kind == tok::lparen) {
      p.get();
      multiset ms = parse_mset(p, b);
      p.expect(tok::comma);
      if (p.accept_word("here")) {
        r.rhs_here.add(ms);
      } else if (p.accept_word("out")) {
        r.rhs_out.add(ms);
      } else if (p.accept_word("in")) {
        int child = p.expect_small_int("a membrane label", max_label_literal);
        if (!ms.empty()) r.rhs_in[child].add(ms);
      } else {
        p.fail({"'here'", "'out'", "'in'"});
      }
      p.expect(tok::rparen);
    }
  }

  if (p.peek().kind == tok::at) {
    p.get();
    r.delay = p.expect_small_int("a delay of at most 10^9", max_delay_literal);
  }
  p.expect(tok::semi);
  b.sys.rules.push_back(std::move(r));
}

void parse_membrane(parser& p, psystem_builder& b, int parent, int depth) {
  if (depth > max_nesting) throw validation_error("membranes nested deeper than 256 levels");
  p.expect_word("membrane");
  int label = p.expect_small_int("a membrane label", max_label_literal);
  b.parents.emplace_back(label, parent);
  p.expect(tok::lbrace);

  bool saw_contents = false;
  while (p.peek().kind != tok::rbrace) {
    if (p.at_word("contents")) {
      token t = p.get();
      if (saw_contents)
        throw validation_error(std::to_string(t.span.line) + ":" +
                               std::to_string(t.span.column) + ": duplicate contents clause");
      saw_contents = true;
      b.contents[label] = parse_mset(p, b);
      p.expect(tok::semi);
    } else if (p.at_word("rule")) {
      p.get();
      parse_rule(p, b, label);
    } else if (p.at_word("membrane")) {
      parse_membrane(p, b, label, depth + 1);
    } else {
      p.fail({"'contents'", "'rule'", "'membrane'", "'}'"});
    }
  }
  p.expect(tok::rbrace);
}

timed_psystem parse_psystem_at(parser& p) {
  psystem_builder b;
  p.expect_word("psystem");
  p.expect(tok::lbrace);

  p.expect_word("alphabet");
  if (p.peek().kind != tok::ident) p.fail({"a symbol"});
  while (p.peek().kind == tok::ident) {
    token t = p.get();
    if (t.text == "eps") throw validation_error("eps is reserved for the empty multiset");
    if (b.sys.alphabet.find(t.text))
      throw validation_error("duplicate symbol " + t.text + " in the alphabet");
    b.sys.alphabet.intern(t.text);
  }
  p.expect(tok::semi);

  parse_membrane(p, b, environment_label, 1);
  p.expect(tok::rbrace);
  p.expect(tok::eof);

  b.sys.structure = membrane_structure::from_parents(b.parents);
  b.sys.initial.assign(b.sys.structure.n, {});
  for (auto& [label, ms] : b.contents) b.sys.initial[label - 1] = std::move(ms);
  b.sys.finalize();
  return std::move(b.sys);
}

// ---- nets ---------------------------------------------------------------------

struct petri_builder {
  timed_petri_net net;
  std::map<std::string, std::size_t> place_ids;
  std::map<std::string, std::size_t> transition_ids;
  std::map<std::size_t, count_t> marking;
};

std::string parse_name(parser& p) {
  if (p.peek().kind == tok::ident || p.peek().kind == tok::string) return p.get().text;
  p.fail({"a name", "a quoted name"});
}

void parse_arc(parser& p, petri_builder& b) {
  token from_tok = p.peek();
  std::string from = parse_name(p);
  p.expect(tok::minus);
  count_t w = p.expect_count();
  p.expect(tok::arrow);
  token to_tok = p.peek();
  std::string to = parse_name(p);
  p.expect(tok::semi);

  auto place_from = b.place_ids.find(from);
  auto trans_from = b.transition_ids.find(from);
  auto place_to = b.place_ids.find(to);
  auto trans_to = b.transition_ids.find(to);

  if (place_from != b.place_ids.end() && trans_to != b.transition_ids.end()) {
    b.net.pre[trans_to->second].push_back({place_from->second, w});
  } else if (trans_from != b.transition_ids.end() && place_to != b.place_ids.end()) {
    b.net.post[trans_from->second].push_back({place_to->second, w});
  } else if (place_from == b.place_ids.end() && trans_from == b.transition_ids.end()) {
    throw validation_error(std::to_string(from_tok.span.line) + ":" +
                           std::to_string(from_tok.span.column) + ": unknown node " + from);
  } else if (place_to == b.place_ids.end() && trans_to == b.transition_ids.end()) {
    throw validation_error(std::to_string(to_tok.span.line) + ":" +
                           std::to_string(to_tok.span.column) + ": unknown node " + to);
  } else {
    throw validation_error(std::to_string(from_tok.span.line) + ":" +
                           std::to_string(from_tok.span.column) +
                           ": an arc must connect a place and a transition");
  }
}

timed_petri_net parse_petri_at(parser& p) {
  petri_builder b;
  p.expect_word("petri");
  p.expect(tok::lbrace);

  while (p.peek().kind != tok::rbrace) {
    if (p.accept_word("place")) {
      std::string name = parse_name(p);
      p.expect(tok::semi);
      if (b.place_ids.count(name) || b.transition_ids.count(name))
        throw validation_error("duplicate node name " + name);
      b.place_ids.emplace(name, b.net.places.size());
      b.net.places.push_back({std::move(name)});
    } else if (p.accept_word("transition")) {
      std::string name = parse_name(p);
      transition_decl t{name, 0, 0};
      bool saw_loc = false, saw_delay = false;
      for (;;) {
        if (p.at_word("loc")) {
          token lt = p.get();
          if (saw_loc)
            throw validation_error(std::to_string(lt.span.line) + ":" +
                                   std::to_string(lt.span.column) + ": duplicate loc");
          saw_loc = true;
          p.expect(tok::equals);
          t.locality = p.expect_small_int("a locality of at most 10^9", max_delay_literal);
        } else if (p.peek().kind == tok::at) {
          token at = p.get();
          if (saw_delay)
            throw validation_error(std::to_string(at.span.line) + ":" +
                                   std::to_string(at.span.column) + ": duplicate delay");
          saw_delay = true;
          t.delay = p.expect_small_int("a delay of at most 10^9", max_delay_literal);
        } else {
          break;
        }
      }
      p.expect(tok::semi);
      if (b.place_ids.count(name) || b.transition_ids.count(name))
        throw validation_error("duplicate node name " + name);
      b.transition_ids.emplace(std::move(name), b.net.transitions.size());
      b.net.transitions.push_back(std::move(t));
      b.net.pre.emplace_back();
      b.net.post.emplace_back();
    } else if (p.accept_word("arc")) {
      parse_arc(p, b);
    } else if (p.accept_word("marking")) {
      for (;;) {
        token nt = p.peek();
        std::string name = parse_name(p);
        p.expect(tok::equals);
        count_t v = p.expect_count();
        auto it = b.place_ids.find(name);
        if (it == b.place_ids.end())
          throw validation_error(std::to_string(nt.span.line) + ":" +
                                 std::to_string(nt.span.column) + ": unknown place " + name);
        if (!b.marking.emplace(it->second, v).second)
          throw validation_error("marking assigns " + name + " twice");
        if (p.peek().kind != tok::comma) break;
        p.get();
      }
      p.expect(tok::semi);
    } else {
      p.fail({"'place'", "'transition'", "'arc'", "'marking'", "'}'"});
    }
  }
  p.expect(tok::rbrace);
  p.expect(tok::eof);

  b.net.initial_marking.assign(b.net.places.size(), 0);
  for (const auto& [id, v] : b.marking) b.net.initial_marking[id] = v;
  b.net.finalize();
  return std::move(b.net);
}

}  // namespace

model_kind sniff_kind(std::string_view text) {
  parser p(text);
  if (p.at_word("psystem")) return model_kind::psystem;
  if (p.at_word("petri")) return model_kind::petri;
  p.fail({"'psystem'", "'petri'"});
}

timed_psystem parse_psystem(std::string_view text) {
  parser p(text);
  return parse_psystem_at(p);
}

timed_petri_net parse_petri(std::string_view text) {
  parser p(text);
  return parse_petri_at(p);
}

parsed_model parse_model(std::string_view text) {
  if (sniff_kind(text) == model_kind::psystem) return parse_psystem(text);
  return parse_petri(text);
}

// ---- printers ------------------------------------------------------------------

namespace {

bool bare_name(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string quoted(const std::string& s) {
  if (bare_name(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void print_membrane(std::ostringstream& out, const timed_psystem& sys, int label, int indent) {
  std::string pad(indent, ' ');
  out << pad << "membrane " << label << " {\n";
  out << pad << "  contents " << to_string(sys.initial[label - 1], sys.alphabet) << ";\n";
  for (std::size_t rid : sys.rules_of(label)) {
    const rule& r = sys.rules[rid];
    out << pad << "  rule " << r.name << ": " << to_string(r.lhs, sys.alphabet) << " ->";
    bool any = false;
    if (!r.rhs_here.empty()) {
      out << " (" << to_string(r.rhs_here, sys.alphabet) << ", here)";
      any = true;
    }
    if (!r.rhs_out.empty()) {
      out << " (" << to_string(r.rhs_out, sys.alphabet) << ", out)";
      any = true;
    }
    for (const auto& [child, ms] : r.rhs_in) {
      out << " (" << to_string(ms, sys.alphabet) << ", in " << child << ")";
      any = true;
    }
    if (!any) out << " eps";
    out << " @" << r.delay << ";\n";
  }
  for (int child : sys.structure.children[label]) print_membrane(out, sys, child, indent + 2);
  out << pad << "}\n";
}

}  // namespace

std::string print_psystem(const timed_psystem& sys) {
  std::ostringstream out;
  out << "psystem {\n  alphabet";
  for (const std::string& name : sys.alphabet.names()) out << ' ' << name;
  out << ";\n";
  print_membrane(out, sys, sys.structure.skin, 2);
  out << "}\n";
  return out.str();
}

std::string print_petri(const timed_petri_net& net) {
  std::ostringstream out;
  out << "petri {\n";
  for (const place_decl& p : net.places) out << "  place " << quoted(p.name) << ";\n";
  for (const transition_decl& t : net.transitions)
    out << "  transition " << quoted(t.name) << " loc=" << t.locality << " @" << t.delay
        << ";\n";
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    for (const arc& a : net.pre[t])
      out << "  arc " << quoted(net.places[a.place].name) << " -" << a.weight << "-> "
          << quoted(net.transitions[t].name) << ";\n";
    for (const arc& a : net.post[t])
      out << "  arc " << quoted(net.transitions[t].name) << " -" << a.weight << "-> "
          << quoted(net.places[a.place].name) << ";\n";
  }
  bool any = false;
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    if (net.initial_marking[p] == 0) continue;
    out << (any ? ", " : "  marking ") << quoted(net.places[p].name) << '='
        << net.initial_marking[p];
    any = true;
  }
  if (any) out << ";\n";
  out << "}\n";
  return out.str();
}

std::string print_model(const parsed_model& m) {
  if (std::holds_alternative<timed_psystem>(m)) return print_psystem(std::get<timed_psystem>(m));
  return print_petri(std::get<timed_petri_net>(m));
}

}  // namespace tmpn
