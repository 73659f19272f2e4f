#pragma once

#include <string>
#include <vector>

#include "moduledb.hpp"
#include "reader.hpp"

namespace modlog {

enum class lint_severity { info, warning, error };

struct lint_record {
  source_loc loc;
  std::string rule;  // SR1..SR3, D1..D4, P1..P2
  lint_severity sev;
  std::string message;
};

// Static checks over a loaded (uncommitted) module database:
//   SR1  heads of templated predicates must keep meta positions as fresh vars
//   SR2  call/N targets should be resolvable or declared meta arguments
//   SR3  closure arguments taking extras must be invoked with that many
//   D1   transparent / tool declarations rely on dynamic context
//   D2   malformed meta template positions
//   D3   extended mode atoms degraded to '?'
//   D4   meta template without clauses
//   P1   call/N beyond the arity ceiling
//   P2   =..-assembled goals that are then meta-called
// Records come back sorted by (file, line, col, rule).
std::vector<lint_record> lint_modules(const module_db& db, int call_ceiling);

// "file:line:col RULE severity message", one per line.
std::string format_records(const std::vector<lint_record>& rs);

// "file:line:col: severity: message [RULE]", one per line.
std::string format_text(const std::vector<lint_record>& rs);

// 0: clean (infos allowed), 1: warnings or errors present.
int lint_exit_code(const std::vector<lint_record>& rs);

}  // namespace modlog
