#pragma once

#include <string>
#include <vector>

#include "engine.hpp"
#include "moduledb.hpp"

namespace modlog {

struct specialize_stats {
  int sites = 0;       // call sites rewritten
  int aux_preds = 0;   // auxiliary predicates introduced
  std::vector<std::string> diagnostics;  // skipped sites, depth cap hits
};

// Rewrites body calls to meta predicates whose closure/context arguments are
// statically known: each such site gets an auxiliary predicate whose clauses
// are copies of the target's clauses with the meta arguments substituted and
// compliant call/N goals turned into direct calls. Runs after the load-time
// qualification pass; the database must be committed. Copied clauses draw
// fresh variables from `pool` so they never collide with stored ones.
specialize_stats specialize_all(module_db& db, var_pool& pool,
                                const interp_options& opts);

// Reloadable program listing: plain clauses for `user` (and modules that were
// never declared), then one segment per declared module with its directives.
std::string render_program(const module_db& db);

}  // namespace modlog
