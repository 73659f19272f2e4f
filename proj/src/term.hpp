#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace modlog {

enum class term_kind : std::uint8_t { var, atom, int_, compound };

struct term;
using term_ptr = std::shared_ptr<const term>;

// Immutable term tree. Variables carry an id; bindings live in the engine,
// never inside the term itself.
struct term {
  term_kind kind;
  bool synthetic = false;  // ':'/2 cells inserted by the qualification machinery
  long long ival = 0;      // integer value, or variable id
  std::string text;        // atom name, functor, or variable name
  std::vector<term_ptr> args;
};

term_ptr mk_var(std::string name, long long id);
term_ptr mk_atom(std::string name);
term_ptr mk_int(long long value);
term_ptr mk_compound(std::string functor, std::vector<term_ptr> args,
                     bool synthetic = false);

bool is_atom(const term_ptr& t, std::string_view name);
bool is_functor(const term_ptr& t, std::string_view name, std::size_t arity);
inline bool is_callable(const term_ptr& t) {
  return t->kind == term_kind::atom || t->kind == term_kind::compound;
}
inline bool is_var(const term_ptr& t) { return t->kind == term_kind::var; }

// Module-qualification cell M:G.
inline bool is_qualified(const term_ptr& t) {
  return t->kind == term_kind::compound && t->args.size() == 2 && t->text == ":";
}

struct indicator {
  std::string name;
  int arity = 0;
  auto operator<=>(const indicator&) const = default;
};

std::string to_string(const indicator& i);
indicator functor_of(const term_ptr& t);  // pre: callable

struct indicator_hash {
  std::size_t operator()(const indicator& i) const {
    return std::hash<std::string>{}(i.name) * 31u + static_cast<std::size_t>(i.arity);
  }
};

// Fresh variable ids, shared by the reader and the engine so renamed clause
// variables never collide with parsed ones.
class var_pool {
 public:
  long long fresh() { return next_++; }
  long long peek() const { return next_; }

 private:
  long long next_ = 1;
};

// Rename every variable in t to a fresh one; `seen` is shared across one
// renaming so repeated occurrences stay identical.
term_ptr rename_term(const term_ptr& t, var_pool& pool,
                     std::unordered_map<long long, long long>& seen);

// Structural equality up to a bijection on variable ids.
bool alpha_equal(const term_ptr& a, const term_ptr& b);

// Exact structural equality, variable ids included.
bool term_equal(const term_ptr& a, const term_ptr& b);

// List helpers over '.'/2 with '[]' terminator.
term_ptr mk_list(const std::vector<term_ptr>& elems, term_ptr tail = nullptr);
std::optional<std::vector<term_ptr>> proper_list_elements(const term_ptr& t);

// Flatten a ','/2 chain: (a, (b, c)) -> [a, b, c]. Non-',' terms yield {t}.
std::vector<term_ptr> flatten_conjunction(const term_ptr& t);

// Parse a term of shape Name/Arity into an indicator.
std::optional<indicator> term_to_indicator(const term_ptr& t);

}  // namespace modlog
