#include "pbn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "pbn/specializer.hpp"

namespace pbn {

ParseError::ParseError(SourceSpan span, const std::string& msg)
    : std::runtime_error(span.file + ":" + std::to_string(span.line) + ":" +
                         std::to_string(span.column) + ": " + msg),
      span_(std::move(span)),
      message_(msg) {}

namespace {

enum class Tok {
  End, Ident, Var, Number,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Dot, Colon, Semicolon, Tilde, Neck,
  Lt, Le, Eq, Ge, Gt, Plus, Minus,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = Tok::Ident;
        t.text = word();
      } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Var;
        t.text = word();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        t.text = number();
      } else {
        std::size_t start = pos_;
        t.kind = punct(c);
        t.text = std::string(text_.substr(start, pos_ - start));
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError({file_, line_, col_}, msg); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      advance();
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  bool digit_at(std::size_t i) const {
    return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
  }

  std::string number() {
    std::size_t start = pos_;
    while (digit_at(pos_)) advance();
    if (pos_ < text_.size() && text_[pos_] == '.' && digit_at(pos_ + 1)) {
      advance();
      while (digit_at(pos_)) advance();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (digit_at(look)) {
        while (pos_ < look) advance();
        while (digit_at(pos_)) advance();
      } else {
        pos_ = save;
      }
    }
    // A constant may start with digits (`1st`): keep trailing word characters.
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      advance();
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Tok punct(char c) {
    auto next = [&](char n) { return pos_ + 1 < text_.size() && text_[pos_ + 1] == n; };
    Tok k;
    int len = 1;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case ';': k = Tok::Semicolon; break;
      case '~': k = Tok::Tilde; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '=': k = Tok::Eq; break;
      case ':':
        if (next('-')) {
          k = Tok::Neck;
          len = 2;
        } else {
          k = Tok::Colon;
        }
        break;
      case '<':
        if (next('=')) {
          k = Tok::Le;
          len = 2;
        } else {
          k = Tok::Lt;
        }
        break;
      case '>':
        if (next('=')) {
          k = Tok::Ge;
          len = 2;
        } else {
          k = Tok::Gt;
        }
        break;
      default: {
        std::string shown = std::isprint(static_cast<unsigned char>(c))
                                ? std::string(1, c)
                                : "\\x" + std::to_string(static_cast<unsigned char>(c));
        fail("unexpected character '" + shown + "'");
      }
    }
    for (int i = 0; i < len; ++i) advance();
    return k;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const char* tok_name(Tok k) {
  switch (k) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "constant";
    case Tok::Var: return "variable";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Semicolon: return "';'";
    case Tok::Tilde: return "'~'";
    case Tok::Neck: return "':-'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Eq: return "'='";
    case Tok::Ge: return "'>='";
    case Tok::Gt: return "'>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
  }
  return "?";
}

bool is_integer_text(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct PendingEntry {
  bool specialized = false;
  int parrv = -1;
  std::vector<SymbolId> params;
  std::vector<Clause> clauses;
  SourceSpan span;
};

class Parser {
 public:
  Parser(std::string_view text, std::string file, bool extended)
      : file_(std::move(file)), extended_(extended) {
    toks_ = Lexer(text, file_).run();
  }

  Model& model() { return model_; }
  std::vector<PendingEntry>& entries() { return entries_; }

  void parse_program() {
    bool any = false;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail(t, std::string("expected a declaration, got ") + describe(t));
      if (t.text == "population") {
        population();
      } else if (t.text == "parrv") {
        parrv();
      } else if (t.text == "cpd") {
        int p = -1;
        Clause c = cpd_clause(&p);
        model_.cpds()[p].clauses.push_back(std::move(c));
      } else if (extended_ && (t.text == "specialized" || t.text == "unchanged")) {
        entry();
      } else {
        fail(t, "unknown declaration '" + t.text + "'");
      }
      any = true;
    }
    if (!any || (model_.populations().empty() && model_.parrvs().empty())) {
      fail(peek(), "no populations declared");
    }
    try {
      model_.finalize();
    } catch (const ModelError& e) {
      fail(peek(), e.what());
    }
  }

  // `grade(s1,c1)=b.` statements.
  Evidence parse_evidence(const Model& model) {
    Evidence ev;
    while (peek().kind != Tok::End) {
      const Token& start = peek();
      std::string name = expect(Tok::Ident, "RV name").text;
      std::vector<std::string> params;
      if (accept(Tok::LParen)) {
        if (!accept(Tok::RParen)) {
          do {
            params.push_back(constant_text());
          } while (accept(Tok::Comma));
          expect(Tok::RParen, "')'");
        }
      }
      expect(Tok::Eq, "'='");
      const Token& st = peek();
      std::string state = constant_text();
      expect(Tok::Dot, "'.'");

      std::string rv_text = name;
      if (!params.empty()) {
        rv_text += '(';
        for (std::size_t i = 0; i < params.size(); ++i) rv_text += (i ? "," : "") + params[i];
        rv_text += ')';
      }
      auto p = model.find_parrv(name);
      if (!p) fail(start, "unknown RV " + rv_text + ": no parrv named '" + name + "'");
      std::vector<SymbolId> syms;
      bool ok = params.size() == model.parrv(*p).param_types.size();
      for (const auto& s : params) {
        auto id = model.find_symbol(s);
        if (!id) {
          ok = false;
          break;
        }
        syms.push_back(*id);
      }
      RvIndex rv = ok ? model.rv_index(*p, syms) : -1;
      if (rv < 0) fail(start, "unknown RV " + rv_text);
      auto sid = model.find_symbol(state);
      int si = sid ? model.state_index(*p, *sid) : -1;
      if (si < 0) fail(st, "state '" + state + "' not in range of " + name);
      if (!ev.assignments.emplace(rv, si).second) {
        fail(start, "duplicate evidence for " + rv_text);
      }
    }
    return ev;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError({file_, t.line, t.column}, msg);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident || t.kind == Tok::Var || t.kind == Tok::Number) {
      return std::string(tok_name(t.kind)) + " '" + t.text + "'";
    }
    return tok_name(t.kind);
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what + ", got " + describe(peek()));
    return next();
  }
  bool accept_keyword(const char* kw) {
    if (peek().kind == Tok::Ident && peek().text == kw) {
      next();
      return true;
    }
    return false;
  }

  std::string constant_text() {
    const Token& t = peek();
    if (t.kind == Tok::Ident || (t.kind == Tok::Number && t.text.find('.') == std::string::npos)) {
      next();
      return t.text;
    }
    fail(t, "expected a constant, got " + describe(t));
  }

  std::vector<SymbolId> constant_set(const char* what) {
    expect(Tok::LBrace, "'{'");
    std::vector<SymbolId> out;
    if (peek().kind == Tok::RBrace) fail(peek(), std::string(what) + " must have at least one member");
    do {
      out.push_back(model_.intern(constant_text()));
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "'}'");
    return out;
  }

  void population() {
    next();
    const Token& name = expect(Tok::Ident, "population name");
    if (model_.find_population(name.text)) fail(name, "duplicate population '" + name.text + "'");
    expect(Tok::Eq, "'='");
    Population p;
    p.type_name = name.text;
    p.members = constant_set("population");
    expect(Tok::Dot, "'.'");
    try {
      model_.add_population(std::move(p));
    } catch (const ModelError& e) {
      fail(name, e.what());
    }
  }

  void parrv() {
    next();
    const Token& name = expect(Tok::Ident, "parrv name");
    if (model_.find_parrv(name.text)) fail(name, "duplicate parrv '" + name.text + "'");
    ParRVDecl d;
    d.name = name.text;
    if (accept(Tok::LParen)) {
      if (!accept(Tok::RParen)) {
        do {
          const Token& ty = expect(Tok::Ident, "population name");
          auto pop = model_.find_population(ty.text);
          if (!pop) fail(ty, "undeclared population '" + ty.text + "'");
          d.param_types.push_back(*pop);
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
    }
    if (!accept_keyword("states")) fail(peek(), "expected 'states', got " + describe(peek()));
    d.range = constant_set("states");
    expect(Tok::Dot, "'.'");
    try {
      model_.add_parrv(std::move(d));
    } catch (const ModelError& e) {
      fail(name, e.what());
    }
  }

  // Clause-local variable table.
  struct VarScope {
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> names;
    int get(const std::string& n) {
      if (n == "_") {
        names.push_back(n);
        return static_cast<int>(names.size()) - 1;
      }
      auto it = ids.find(n);
      if (it != ids.end()) return it->second;
      int id = static_cast<int>(names.size());
      names.push_back(n);
      ids.emplace(n, id);
      return id;
    }
  };

  Term term(VarScope& vars) {
    const Token& t = peek();
    if (t.kind == Tok::Var) {
      next();
      return Term::var(vars.get(t.text));
    }
    return Term::constant(model_.intern(constant_text()));
  }

  int parrv_ref(const Token& t) {
    auto p = model_.find_parrv(t.text);
    if (!p) fail(t, "undeclared parrv '" + t.text + "'");
    return *p;
  }

  Clause cpd_clause(int* parrv_out) {
    const Token& kw = next();
    const Token& name = expect(Tok::Ident, "parrv name");
    int p = parrv_ref(name);
    *parrv_out = p;
    Clause c;
    c.span = {file_, kw.line, kw.column};
    VarScope vars;
    if (accept(Tok::LParen)) {
      if (!accept(Tok::RParen)) {
        do {
          c.head.push_back(term(vars));
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
    }
    expect(Tok::Tilde, "'~'");
    c.distribution = distribution(p);
    if (accept(Tok::Neck)) c.body = disjunction(vars);
    expect(Tok::Dot, "'.'");
    c.var_names = std::move(vars.names);
    return c;
  }

  CategoricalDistribution distribution(int p) {
    const auto& decl = model_.parrv(p);
    const Token& open = expect(Tok::LBracket, "'['");
    std::vector<double> probs(decl.range.size(), 0.0);
    std::vector<char> seen(decl.range.size(), 0);
    do {
      const Token& st = peek();
      std::string s = constant_text();
      auto sym = model_.find_symbol(s);
      int si = sym ? model_.state_index(p, *sym) : -1;
      if (si < 0) fail(st, "state '" + s + "' not in range of " + decl.name);
      if (seen[si]) fail(st, "state '" + s + "' listed twice");
      seen[si] = 1;
      expect(Tok::Colon, "':'");
      const Token& num = expect(Tok::Number, "probability");
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), v);
      if (ec != std::errc() || ptr != num.text.data() + num.text.size()) {
        fail(num, "malformed probability '" + num.text + "'");
      }
      probs[si] = v;
    } while (accept(Tok::Comma));
    expect(Tok::RBracket, "']'");
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        fail(open, "distribution for " + decl.name + " misses state '" +
                       model_.symbol_name(decl.range[i]) + "'");
      }
    }
    return {std::move(probs)};
  }

  BodyFormula disjunction(VarScope& vars) {
    const Token& start = peek();
    std::vector<BodyFormula> items;
    items.push_back(conjunction(vars));
    while (peek().kind == Tok::Semicolon) {
      if (!extended_) fail(peek(), "disjunction is only allowed in specialized programs");
      next();
      items.push_back(conjunction(vars));
    }
    (void)start;
    return BodyFormula::disj(std::move(items));
  }

  BodyFormula conjunction(VarScope& vars) {
    std::vector<BodyFormula> items;
    do {
      items.push_back(atom(vars));
    } while (accept(Tok::Comma));
    return BodyFormula::conj(std::move(items));
  }

  Comparator comparator() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Lt: return Comparator::Less;
      case Tok::Le: return Comparator::LessEq;
      case Tok::Eq: return Comparator::Equal;
      case Tok::Ge: return Comparator::GreaterEq;
      case Tok::Gt: return Comparator::Greater;
      default: fail(t, "expected a comparison operator, got " + describe(t));
    }
  }

  int integer() {
    bool neg = accept(Tok::Minus);
    const Token& t = expect(Tok::Number, "integer");
    if (!is_integer_text(t.text)) fail(t, "expected an integer, got '" + t.text + "'");
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t, "integer out of range");
    (void)ptr;
    return neg ? -v : v;
  }

  BodyFormula atom(VarScope& vars) {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      BodyFormula f = disjunction(vars);
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident) fail(t, "expected a literal, got " + describe(t));
    if (t.text == "true") {
      next();
      return BodyFormula::truth();
    }
    if (t.text == "false") {
      next();
      return BodyFormula::falsity();
    }
    if (t.text == "not") {
      next();
      Literal l = literal(vars);
      l.positive = false;
      return BodyFormula::lit(std::move(l));
    }
    if (t.text == "count" && peek(1).kind == Tok::LParen) {
      next();
      next();
      const Token& v = expect(Tok::Var, "counted variable");
      if (v.text == "_") fail(v, "counted variable must be named");
      int var = vars.get(v.text);
      expect(Tok::Comma, "','");
      Literal goal = literal(vars);
      expect(Tok::RParen, "')'");
      Comparator cmp = comparator();
      int bound = integer();
      return BodyFormula::count_goal(var, std::move(goal), cmp, bound);
    }
    if (t.text == "count" && peek(1).kind == Tok::LBrace) {
      if (!extended_) fail(t, "grounded count is only allowed in specialized programs");
      next();
      next();
      std::vector<BodyFormula> items;
      if (!accept(Tok::RBrace)) {
        do {
          items.push_back(atom(vars));
        } while (accept(Tok::Comma));
        expect(Tok::RBrace, "'}'");
      }
      int offset = 0;
      if (accept(Tok::Plus)) offset = integer();
      Comparator cmp = comparator();
      int bound = integer();
      return BodyFormula::count_ground(std::move(items), offset, cmp, bound);
    }
    return BodyFormula::lit(literal(vars));
  }

  Literal literal(VarScope& vars) {
    const Token& name = expect(Tok::Ident, "literal");
    Literal l;
    l.parrv = parrv_ref(name);
    expect(Tok::LParen, "'('");
    std::vector<Term> terms;
    std::vector<Token> term_toks;
    do {
      term_toks.push_back(peek());
      terms.push_back(term(vars));
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    l.state = terms.back();
    terms.pop_back();
    l.args = std::move(terms);
    if (!l.state.is_var() && model_.state_index(l.parrv, l.state.id) < 0) {
      fail(term_toks.back(), "state '" + model_.symbol_name(l.state.id) + "' not in range of " +
                                 model_.parrv(l.parrv).name);
    }
    return l;
  }

  void entry() {
    const Token& kw = next();
    PendingEntry e;
    e.specialized = kw.text == "specialized";
    e.span = {file_, kw.line, kw.column};
    const Token& name = expect(Tok::Ident, "parrv name");
    e.parrv = parrv_ref(name);
    if (accept(Tok::LParen)) {
      if (!accept(Tok::RParen)) {
        do {
          e.params.push_back(model_.intern(constant_text()));
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
    }
    if (e.specialized) {
      expect(Tok::LBrace, "'{'");
      while (!accept(Tok::RBrace)) {
        if (!(peek().kind == Tok::Ident && peek().text == "cpd")) {
          fail(peek(), "expected 'cpd' or '}', got " + describe(peek()));
        }
        int p = -1;
        Clause c = cpd_clause(&p);
        if (p != e.parrv) fail(kw, "specialized clause for a different parrv");
        e.clauses.push_back(std::move(c));
      }
      if (e.clauses.empty()) fail(kw, "specialized list is empty");
    } else {
      expect(Tok::Dot, "'.'");
    }
    entries_.push_back(std::move(e));
  }

  std::string file_;
  bool extended_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Model model_;
  std::vector<PendingEntry> entries_;
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  std::string s(buf, ptr);
  // Keep the token a plain number for the lexer (`1e-05` is fine, `inf` is not).
  return s;
}

std::string term_text(const Model& m, const Term& t, const std::vector<std::string>& names) {
  if (!t.is_var()) return m.symbol_name(t.id);
  if (t.id >= 0 && t.id < static_cast<int>(names.size())) return names[t.id];
  return "_V" + std::to_string(t.id);
}

std::string body_text(const Model& m, const BodyFormula& f, const std::vector<std::string>& names,
                      bool nested) {
  switch (f.kind) {
    case BodyFormula::Kind::True: return "true";
    case BodyFormula::Kind::False: return "false";
    case BodyFormula::Kind::Lit: return m.literal_text(f.literal, names);
    case BodyFormula::Kind::Count: {
      std::string out;
      if (f.count.grounded) {
        out = "count{";
        for (std::size_t i = 0; i < f.children.size(); ++i) {
          if (i) out += ", ";
          out += body_text(m, f.children[i], names, true);
        }
        out += "}+" + std::to_string(f.count.offset);
      } else {
        out = "count(" + term_text(m, Term::var(f.count.counted_var), names) + ", " +
              m.literal_text(f.literal, names) + ")";
      }
      out += " ";
      out += comparator_text(f.count.cmp);
      out += " " + std::to_string(f.count.bound);
      return out;
    }
    case BodyFormula::Kind::And: {
      std::string out;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += ", ";
        out += body_text(m, f.children[i], names, true);
      }
      return nested ? "(" + out + ")" : out;
    }
    case BodyFormula::Kind::Or: {
      std::string out;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += " ; ";
        out += body_text(m, f.children[i], names, false);
      }
      return nested ? "(" + out + ")" : out;
    }
  }
  return "?";
}

}  // namespace

Model parse_model(std::string_view text, const std::string& file) {
  Parser p(text, file, false);
  p.parse_program();
  return std::move(p.model());
}

Evidence parse_evidence(std::string_view text, const Model& model, const std::string& file) {
  Parser p(text, file, false);
  return p.parse_evidence(model);
}

std::string serialize_distribution(const Model& model, int parrv,
                                   const CategoricalDistribution& d) {
  const auto& decl = model.parrv(parrv);
  std::string out = "[";
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    if (i) out += ',';
    out += i < decl.range.size() ? model.symbol_name(decl.range[i]) : "?";
    out += ':';
    out += format_double(d.probs[i]);
  }
  out += ']';
  return out;
}

std::string serialize_body(const Model& model, const BodyFormula& body,
                           const std::vector<std::string>& var_names) {
  // Top-level conjunctions print bare; an And directly in an Or does too,
  // since ',' binds tighter than ';'.
  if (body.kind == BodyFormula::Kind::Or) {
    std::string out;
    for (std::size_t i = 0; i < body.children.size(); ++i) {
      if (i) out += " ; ";
      const auto& c = body.children[i];
      out += c.kind == BodyFormula::Kind::And ? serialize_body(model, c, var_names)
                                              : body_text(model, c, var_names, true);
    }
    return out;
  }
  return body_text(model, body, var_names, false);
}

std::string serialize_clause(const Model& model, int parrv, const Clause& c) {
  std::string out = "cpd " + model.parrv(parrv).name;
  if (!c.head.empty()) {
    out += '(';
    for (std::size_t i = 0; i < c.head.size(); ++i) {
      if (i) out += ',';
      out += term_text(model, c.head[i], c.var_names);
    }
    out += ')';
  }
  out += " ~ " + serialize_distribution(model, parrv, c.distribution);
  if (!c.body.is_true()) out += " :- " + serialize_body(model, c.body, c.var_names);
  out += '.';
  return out;
}

std::string serialize_model(const Model& model) {
  std::ostringstream os;
  for (const auto& pop : model.populations()) {
    os << "population " << pop.type_name << " = { ";
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
      os << (i ? ", " : "") << model.symbol_name(pop.members[i]);
    }
    os << " }.\n";
  }
  for (const auto& d : model.parrvs()) {
    os << "parrv " << d.name;
    if (!d.param_types.empty()) {
      os << '(';
      for (std::size_t i = 0; i < d.param_types.size(); ++i) {
        os << (i ? ", " : "") << model.population(d.param_types[i]).type_name;
      }
      os << ')';
    }
    os << " states { ";
    for (std::size_t i = 0; i < d.range.size(); ++i) {
      os << (i ? ", " : "") << model.symbol_name(d.range[i]);
    }
    os << " }.\n";
  }
  for (int p = 0; p < static_cast<int>(model.parrvs().size()); ++p) {
    for (const auto& c : model.cpd(p).clauses) os << serialize_clause(model, p, c) << '\n';
  }
  return os.str();
}

std::string serialize_evidence(const Model& model, const Evidence& ev) {
  std::ostringstream os;
  for (const auto& [rv, st] : ev.assignments) {
    int p = model.rv_parrv(rv);
    os << model.rv_name(rv) << '=' << model.symbol_name(model.parrv(p).range.at(st)) << ".\n";
  }
  return os.str();
}

std::string serialize_specialized(const SpecializedProgram& prog) {
  const Model& model = *prog.model;
  std::ostringstream os;
  os << serialize_model(model);
  os << "% specialized decision lists, one entry per CPD-query\n";
  for (RvIndex q = 0; q < model.rv_count(); ++q) {
    int p = model.rv_parrv(q);
    if (prog.uses_original(q)) {
      os << "unchanged " << model.rv_name(q) << ".\n";
      continue;
    }
    os << "specialized " << model.rv_name(q) << " {\n";
    for (const auto& c : prog.lists[q]->clauses) os << serialize_clause(model, p, c) << '\n';
    os << "}\n";
  }
  return os.str();
}

SpecializedProgram parse_specialized(std::string_view text, const std::string& file) {
  Parser p(text, file, true);
  p.parse_program();
  auto model = std::make_shared<Model>(std::move(p.model()));
  SpecializedProgram prog;
  prog.lists.assign(model->rv_count(), std::nullopt);
  std::vector<char> seen(model->rv_count(), 0);
  for (auto& e : p.entries()) {
    RvIndex q = model->rv_index(e.parrv, e.params);
    if (q < 0) throw ParseError(e.span, "unknown CPD-query for " + model->parrv(e.parrv).name);
    if (seen[q]) throw ParseError(e.span, "duplicate entry for " + model->rv_name(q));
    seen[q] = 1;
    if (e.specialized) {
      for (const auto& c : e.clauses) {
        for (std::size_t i = 0; i < c.head.size(); ++i) {
          if (c.head[i].is_var() || i >= e.params.size() || c.head[i].id != e.params[i]) {
            throw ParseError(c.span, "specialized clause head must match " + model->rv_name(q));
          }
        }
        if (c.head.size() != e.params.size()) {
          throw ParseError(c.span, "specialized clause head must match " + model->rv_name(q));
        }
      }
      if (!e.clauses.back().body.is_true()) {
        throw ParseError(e.span, "specialized list for " + model->rv_name(q) + " is not total");
      }
      prog.lists[q] = DecisionList{std::move(e.clauses)};
    }
  }
  prog.model = std::move(model);
  return prog;
}

}  // namespace pbn
