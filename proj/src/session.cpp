#include "session.hpp"

#include <sstream>

#include "expander.hpp"
#include "lint.hpp"
#include "writer.hpp"

namespace modlog {

session::session(interp_options opts)
    : opts_(opts), eng_(db_, pool_, opts), loader_(db_, pool_) {
  loader_.set_tolerant(opts_.tolerant_templates);
}

void session::set_output(text_sink s) { eng_.set_output(std::move(s)); }

void session::set_error_output(text_sink s) {
  loader_.set_error_output(s);
  eng_.set_error_output(std::move(s));
}

void session::load_file(const std::string& path) { loader_.load_file(path); }

void session::load_string(const std::string& text, const std::string& name) {
  loader_.load_string(text, name);
}

void session::commit() {
  loader_.finalize();
  if (opts_.strict) {
    std::size_t errors = 0;
    for (const lint_record& r : lint_modules(db_, opts_.call_ceiling))
      if (r.sev == lint_severity::error) ++errors;
    if (errors > 0)
      throw load_error("strict mode: " + std::to_string(errors) +
                       " lint error(s) present");
  }
  if (opts_.expand) expand_all(db_);
}

bool session::solve(const std::string& goal_text,
                    const std::function<bool(const solution&)>& on_solution) {
  read_result rr = parse_term(goal_text, "<goal>", pool_);
  return eng_.run(rr.t, [&] {
    solution s;
    for (const auto& [name, id] : rr.var_names) {
      if (!name.empty() && name[0] == '_') continue;
      term_ptr v = eng_.resolve(mk_var(name, id));
      s.bindings.emplace_back(name, write_canonical_term(v, true));
    }
    return on_solution(s);
  });
}

std::string session::list_program() const {
  std::ostringstream out;
  for (const std::string& mname : db_.module_order()) {
    const module_def* m = db_.find(mname);
    for (const indicator& ind : m->pred_order) {
      const predicate_def& p = m->preds.at(ind);
      for (const clause_ptr& c : p.clauses) {
        if (c->erased) continue;
        term_ptr qh = mk_compound(":", {mk_atom(mname), c->head});
        term_ptr t = is_atom(c->body, "true")
                         ? qh
                         : mk_compound(":-", {qh, c->body});
        out << write_canonical_term(t, true) << ".\n";
      }
    }
  }
  return out.str();
}

}  // namespace modlog
