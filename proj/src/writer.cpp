#include "writer.hpp"

#include <cctype>

#include "reader.hpp"

namespace modlog {

namespace {

bool is_symbol_char(char c) {
  static const std::string set = "+-*/\\^<>=~:.?@#&$";
  return set.find(c) != std::string::npos;
}

bool all_symbol_chars(const std::string& s) {
  for (char c : s)
    if (!is_symbol_char(c)) return false;
  return !s.empty();
}

bool plain_alpha_atom(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

class printer {
 public:
  explicit printer(bool quoted) : quoted_(quoted), table_(default_operators()) {}

  std::string result() && { return std::move(out_); }

  void write(const term_ptr& t, int max_prec) {
    switch (t->kind) {
      case term_kind::var:
        emit("_" + std::to_string(t->ival));
        return;
      case term_kind::int_:
        emit(std::to_string(t->ival));
        return;
      case term_kind::atom:
        write_atom(t->text);
        return;
      case term_kind::compound:
        write_compound(t, max_prec);
        return;
    }
  }

 private:
  // Inserts a space only where two adjacent tokens would otherwise fuse.
  void emit(const std::string& s) {
    if (!out_.empty() && !s.empty()) {
      char a = out_.back();
      char b = s.front();
      if (is_symbol_char(a) && is_symbol_char(b)) out_.push_back(' ');
    }
    out_ += s;
  }

  void write_atom(const std::string& name) {
    if (!quoted_ || !atom_needs_quotes(name)) {
      emit(name);
      return;
    }
    std::string q = "'";
    for (char c : name) {
      switch (c) {
        case '\\': q += "\\\\"; break;
        case '\'': q += "\\'"; break;
        case '\n': q += "\\n"; break;
        case '\t': q += "\\t"; break;
        default: q.push_back(c);
      }
    }
    q.push_back('\'');
    emit(q);
  }

  void write_compound(const term_ptr& t, int max_prec) {
    if (is_functor(t, ".", 2)) {
      write_list(t);
      return;
    }
    if (t->args.size() == 2) {
      if (auto op = table_.infix(t->text)) {
        bool parens = op->priority > max_prec;
        if (parens) emit("(");
        int lmax = op->type == op_type::yfx ? op->priority : op->priority - 1;
        int rmax = op->type == op_type::xfy ? op->priority : op->priority - 1;
        write(t->args[0], lmax);
        emit(t->text);
        write(t->args[1], rmax);
        if (parens) emit(")");
        return;
      }
    }
    if (t->args.size() == 1) {
      if (auto op = table_.prefix(t->text)) {
        bool parens = op->priority > max_prec;
        if (parens) emit("(");
        emit(t->text);
        if (!is_symbol_char(out_.back())) out_.push_back(' ');
        write(t->args[0], op->type == op_type::fy ? op->priority : op->priority - 1);
        if (parens) emit(")");
        return;
      }
    }
    write_atom(t->text);
    out_ += "(";
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) out_ += ",";
      write(t->args[i], 999);
    }
    out_ += ")";
  }

  void write_list(const term_ptr& t) {
    out_ += "[";
    term_ptr cur = t;
    bool first = true;
    while (true) {
      if (is_functor(cur, ".", 2)) {
        if (!first) out_ += ",";
        write(cur->args[0], 999);
        first = false;
        cur = cur->args[1];
        continue;
      }
      if (is_atom(cur, "[]")) break;
      out_ += "|";
      write(cur, 999);
      break;
    }
    out_ += "]";
  }

  bool quoted_;
  const operator_table& table_;
  std::string out_;
};

}  // namespace

bool atom_needs_quotes(const std::string& name) {
  if (plain_alpha_atom(name)) return false;
  if (all_symbol_chars(name)) return false;
  if (name == "[]" || name == "!" || name == ";" || name == "{}") return false;
  return true;
}

std::string write_canonical_term(const term_ptr& t, bool quoted) {
  printer p(quoted);
  p.write(t, 1200);
  return std::move(p).result();
}

}  // namespace modlog
