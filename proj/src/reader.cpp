#include "reader.hpp"

#include <cctype>
#include <cstdlib>

namespace modlog {

namespace {

bool is_symbol_char(char c) {
  static const std::string set = "+-*/\\^<>=~:.?@#&$";
  return set.find(c) != std::string::npos;
}

bool is_alnum_(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class tokenizer {
 public:
  tokenizer(const std::string& text, std::string file)
      : src_(text), file_(std::move(file)) {}

  std::vector<token> run() {
    std::vector<token> out;
    while (true) {
      bool layout = skip_layout();
      source_loc loc = here();
      if (eof()) {
        out.push_back({token_kind::eof, "", 0, false, layout, loc});
        return out;
      }
      char c = peek();
      if (c == '.' && end_follows()) {
        get();
        out.push_back({token_kind::end, ".", 0, false, layout, loc});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(read_integer(loc, layout, false));
        continue;
      }
      if (c == '-' && !eof(1) && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) &&
          allows_negative(out)) {
        get();
        out.push_back(read_integer(loc, layout, true));
        continue;
      }
      if (std::islower(static_cast<unsigned char>(c))) {
        std::string s;
        while (!eof() && is_alnum_(peek())) s.push_back(get());
        out.push_back({token_kind::atom, s, 0, false, layout, loc});
        continue;
      }
      if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        std::string s;
        while (!eof() && is_alnum_(peek())) s.push_back(get());
        out.push_back({token_kind::variable, s, 0, false, layout, loc});
        continue;
      }
      if (c == '\'') {
        out.push_back(read_quoted(loc, layout));
        continue;
      }
      if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '|') {
        get();
        out.push_back({token_kind::punct, std::string(1, c), 0, false, layout, loc});
        continue;
      }
      if (c == '!' || c == ';') {
        get();
        out.push_back({token_kind::atom, std::string(1, c), 0, false, layout, loc});
        continue;
      }
      if (is_symbol_char(c)) {
        // Longest match: a '.' can only be the end token when it starts a
        // token (handled above), so inside a run it is an ordinary symbol
        // char; "X =.. L" therefore lexes '=..' even before layout.
        std::string s;
        while (!eof() && is_symbol_char(peek())) s.push_back(get());
        out.push_back({token_kind::atom, s, 0, false, layout, loc});
        continue;
      }
      throw syntax_error(loc, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  bool eof(std::size_t ahead = 0) const { return pos_ + ahead >= src_.size(); }
  char peek() const { return src_[pos_]; }

  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  source_loc here() const { return {file_, line_, col_}; }

  // True when the '.' at pos_ terminates a clause: end of input, layout, or
  // a '%' comment follows.
  bool end_follows() const {
    if (peek() != '.') return false;
    if (eof(1)) return true;
    char n = src_[pos_ + 1];
    return n == ' ' || n == '\t' || n == '\r' || n == '\n' || n == '%';
  }

  bool skip_layout() {
    bool any = false;
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
        any = true;
      } else if (c == '%') {
        while (!eof() && peek() != '\n') get();
        any = true;
      } else if (c == '/' && !eof(1) && src_[pos_ + 1] == '*') {
        source_loc loc = here();
        get();
        get();
        bool closed = false;
        while (!eof()) {
          char d = get();
          if (d == '*' && !eof() && peek() == '/') {
            get();
            closed = true;
            break;
          }
        }
        if (!closed) throw syntax_error(loc, "unterminated block comment");
        any = true;
      } else {
        break;
      }
    }
    return any;
  }

  // '-' glues to a following digit only where an operand is expected.
  static bool allows_negative(const std::vector<token>& out) {
    if (out.empty()) return true;
    const token& p = out.back();
    if (p.kind == token_kind::integer || p.kind == token_kind::variable) return false;
    if (p.kind == token_kind::punct && (p.text == ")" || p.text == "]")) return false;
    if (p.kind == token_kind::atom && p.quoted) return false;
    if (p.kind == token_kind::atom && !p.text.empty() &&
        (std::islower(static_cast<unsigned char>(p.text[0])) || p.text == "!"))
      return false;
    return true;
  }

  token read_integer(source_loc loc, bool layout, bool negative) {
    std::string digits;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(get());
    errno = 0;
    long long v = std::strtoll(digits.c_str(), nullptr, 10);
    if (errno != 0) throw syntax_error(loc, "integer literal out of range");
    if (negative) v = -v;
    return {token_kind::integer, (negative ? "-" : "") + digits, v, false, layout, loc};
  }

  token read_quoted(source_loc loc, bool layout) {
    get();  // opening quote
    std::string s;
    while (true) {
      if (eof()) throw syntax_error(loc, "unterminated quoted atom");
      char c = get();
      if (c == '\'') break;
      if (c == '\\') {
        if (eof()) throw syntax_error(loc, "unterminated quoted atom");
        char e = get();
        switch (e) {
          case 'n': s.push_back('\n'); break;
          case 't': s.push_back('\t'); break;
          case '\\': s.push_back('\\'); break;
          case '\'': s.push_back('\''); break;
          default:
            throw syntax_error(here(), std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        s.push_back(c);
      }
    }
    return {token_kind::atom, s, 0, true, layout, loc};
  }

  const std::string& src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace

std::vector<token> tokenize(const std::string& text, const std::string& file) {
  return tokenizer(text, file).run();
}

operator_table::operator_table() {
  infix_[":-"] = {1200, op_type::xfx};
  prefix_[":-"] = {1200, op_type::fx};
  infix_[";"] = {1100, op_type::xfy};
  infix_["->"] = {1050, op_type::xfy};
  infix_[","] = {1000, op_type::xfy};
  prefix_["\\+"] = {900, op_type::fy};
  infix_["="] = {700, op_type::xfx};
  infix_["\\="] = {700, op_type::xfx};
  infix_["=.."] = {700, op_type::xfx};
  infix_["/"] = {400, op_type::yfx};
  infix_[":"] = {200, op_type::xfy};
  infix_["::"] = {200, op_type::xfy};
}

std::optional<op_def> operator_table::infix(const std::string& name) const {
  auto it = infix_.find(name);
  if (it == infix_.end()) return std::nullopt;
  return it->second;
}

std::optional<op_def> operator_table::prefix(const std::string& name) const {
  auto it = prefix_.find(name);
  if (it == prefix_.end()) return std::nullopt;
  return it->second;
}

const operator_table& default_operators() {
  static const operator_table table;
  return table;
}

namespace {

class parser {
 public:
  parser(std::vector<token> toks, var_pool& pool)
      : toks_(std::move(toks)), pool_(pool), table_(default_operators()) {}

  term_ptr parse(int max_prec) {
    auto [t, prio] = parse_expr(max_prec);
    (void)prio;
    return t;
  }

  const token& current() const { return toks_[pos_]; }
  void expect_end() {
    if (current().kind != token_kind::end)
      throw syntax_error(current().loc, "expected '.' at end of clause");
    ++pos_;
  }
  bool at_eof() const { return current().kind == token_kind::eof; }
  void reset_vars() {
    varmap_.clear();
    names_.clear();
  }
  std::vector<std::pair<std::string, long long>> take_names() { return std::move(names_); }

 private:
  const token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  token next() { return toks_[pos_++]; }

  bool starts_operand(const token& t) const {
    switch (t.kind) {
      case token_kind::atom:
      case token_kind::variable:
      case token_kind::integer:
        return true;
      case token_kind::punct:
        return t.text == "(" || t.text == "[";
      default:
        return false;
    }
  }

  bool closes_operand(const token& t) const {
    if (t.kind == token_kind::end || t.kind == token_kind::eof) return true;
    if (t.kind == token_kind::punct)
      return t.text == ")" || t.text == "]" || t.text == "," || t.text == "|";
    return false;
  }

  term_ptr var_for(const token& t) {
    if (t.text == "_") return mk_var("_", pool_.fresh());
    auto it = varmap_.find(t.text);
    if (it != varmap_.end()) return mk_var(t.text, it->second);
    long long id = pool_.fresh();
    varmap_.emplace(t.text, id);
    names_.emplace_back(t.text, id);
    return mk_var(t.text, id);
  }

  std::pair<term_ptr, int> parse_primary(int max_prec) {
    token t = next();
    switch (t.kind) {
      case token_kind::integer:
        return {mk_int(t.ival), 0};
      case token_kind::variable:
        return {var_for(t), 0};
      case token_kind::punct:
        if (t.text == "(") {
          term_ptr inner = parse(1200);
          if (!(current().kind == token_kind::punct && current().text == ")"))
            throw syntax_error(current().loc, "expected ')'");
          ++pos_;
          return {inner, 0};
        }
        if (t.text == "[") return {parse_list(t.loc), 0};
        throw syntax_error(t.loc, "unexpected '" + t.text + "'");
      case token_kind::atom: {
        // Functor application binds only when '(' is adjacent.
        if (peek().kind == token_kind::punct && peek().text == "(" && !peek().layout_before) {
          ++pos_;
          std::vector<term_ptr> args;
          args.push_back(parse(999));
          while (current().kind == token_kind::punct && current().text == ",") {
            ++pos_;
            args.push_back(parse(999));
          }
          if (!(current().kind == token_kind::punct && current().text == ")"))
            throw syntax_error(current().loc, "expected ')' in argument list");
          ++pos_;
          return {mk_compound(t.text, std::move(args)), 0};
        }
        if (!t.quoted) {
          if (auto pre = table_.prefix(t.text)) {
            // Prefix parse unless the atom stands alone before a closer or an
            // infix operator consumes it as a plain operand.
            if (starts_operand(peek()) && pre->priority <= max_prec) {
              int argmax = pre->type == op_type::fy ? pre->priority : pre->priority - 1;
              term_ptr arg = parse(argmax);
              return {mk_compound(t.text, {arg}), pre->priority};
            }
          }
          if ((table_.infix(t.text) || table_.prefix(t.text)) && !closes_operand(peek())) {
            throw syntax_error(t.loc, "operator '" + t.text + "' used without operands");
          }
        }
        return {mk_atom(t.text), 0};
      }
      default:
        throw syntax_error(t.loc, "unexpected end of input");
    }
  }

  term_ptr parse_list(const source_loc& open) {
    if (current().kind == token_kind::punct && current().text == "]") {
      ++pos_;
      return mk_atom("[]");
    }
    std::vector<term_ptr> elems;
    elems.push_back(parse(999));
    while (current().kind == token_kind::punct && current().text == ",") {
      ++pos_;
      elems.push_back(parse(999));
    }
    term_ptr tail = nullptr;
    if (current().kind == token_kind::punct && current().text == "|") {
      ++pos_;
      tail = parse(999);
    }
    if (!(current().kind == token_kind::punct && current().text == "]"))
      throw syntax_error(open, "unterminated list");
    ++pos_;
    return mk_list(elems, tail);
  }

  std::pair<term_ptr, int> parse_expr(int max_prec) {
    auto [left, left_prio] = parse_primary(max_prec);
    while (true) {
      const token& t = current();
      std::string opname;
      if (t.kind == token_kind::atom && !t.quoted)
        opname = t.text;
      else if (t.kind == token_kind::punct && t.text == ",")
        opname = ",";
      else
        break;
      auto op = table_.infix(opname);
      if (!op || op->priority > max_prec) break;
      int left_max = op->type == op_type::yfx ? op->priority : op->priority - 1;
      if (left_prio > left_max) break;
      ++pos_;
      int right_max = op->type == op_type::xfy ? op->priority : op->priority - 1;
      term_ptr right = parse(right_max);
      left = mk_compound(opname, {left, right});
      left_prio = op->priority;
    }
    return {left, left_prio};
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
  var_pool& pool_;
  const operator_table& table_;
  std::map<std::string, long long> varmap_;
  std::vector<std::pair<std::string, long long>> names_;
};

}  // namespace

read_result parse_term(const std::string& text, const std::string& file, var_pool& pool) {
  parser p(tokenize(text, file), pool);
  term_ptr t = p.parse(1200);
  if (p.current().kind == token_kind::end) p.expect_end();
  if (!p.at_eof())
    throw syntax_error(p.current().loc, "unexpected input after term");
  return {t, p.take_names()};
}

std::vector<source_item> parse_program(const std::string& text, const std::string& file,
                                       var_pool& pool) {
  parser p(tokenize(text, file), pool);
  std::vector<source_item> items;
  while (!p.at_eof()) {
    p.reset_vars();
    source_loc loc = p.current().loc;
    term_ptr t = p.parse(1200);
    p.expect_end();
    if (is_functor(t, ":-", 1)) {
      items.push_back({item_kind::directive, t->args[0], p.take_names(), loc});
    } else {
      items.push_back({item_kind::clause, t, p.take_names(), loc});
    }
  }
  return items;
}

directive_form classify_directive(const term_ptr& t) {
  if (t->kind != term_kind::compound) return directive_form::unknown;
  const std::string& f = t->text;
  std::size_t n = t->args.size();
  if (f == "module" && (n == 1 || n == 2)) return directive_form::module_decl;
  if (f == "export" && n == 1) return directive_form::export_decl;
  if (f == "use_module" && (n == 1 || n == 2)) return directive_form::use_module;
  if (f == "meta_predicate" && n == 1) return directive_form::meta_predicate;
  if (f == "metapredicate" && n == 1) return directive_form::metapredicate_iso;
  if (f == "module_transparent" && n == 1) return directive_form::module_transparent;
  if (f == "tool" && n == 2) return directive_form::tool;
  return directive_form::unknown;
}

}  // namespace modlog
