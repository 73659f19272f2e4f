#pragma once

#include <string>

#include "term.hpp"

namespace modlog {

// Render a term in canonical, re-parseable syntax: operators from the fixed
// table print infix/prefix, lists print in bracket notation, unbound
// variables print as '_' followed by their id. `quoted` selects writeq-style
// atom quoting. The input must already be fully dereferenced.
std::string write_canonical_term(const term_ptr& t, bool quoted);

// True when `name` can be written without quotes.
bool atom_needs_quotes(const std::string& name);

}  // namespace modlog
