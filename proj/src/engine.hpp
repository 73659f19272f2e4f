#pragma once

#include <functional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "builtins.hpp"
#include "moduledb.hpp"
#include "term.hpp"

namespace modlog {

struct interp_options {
  // true: an explicit qualifier sets both the lookup and the calling context
  // (Quintus lineage). false: it sets the lookup context only (ECLiPSe
  // lineage); the calling context stays with the caller.
  bool colon_sets_calling_context = true;
  int max_call_n = 255;        // largest goal arity call/N may build
  bool occurs_check = false;
  bool strict = false;         // loader: lint errors abort the load
  bool strict_scope = false;   // unexported cross-module calls raise instead of warn
  bool expand = true;          // qualify meta arguments at load time
  bool call_n_via_univ = false;  // assemble call/N goals through =../2 lists
  long long depth_limit = 0;   // 0: unlimited
  int call_ceiling = 8;        // lint: call/N arity advisory threshold
  bool tolerant_templates = false;  // keep loading past malformed templates
};

// Execution context of one activation. `calling` is the context module
// (inherited by transparent predicates), `definition` is where unqualified
// body goals are looked up.
struct frame {
  std::string calling;
  std::string definition;
};

// Thrown for catch/throw and for ISO-style runtime errors. The ball is a
// detached copy, independent of the binding store.
struct prolog_error {
  term_ptr ball;
};

struct cut_signal {
  long long barrier;
};

class binding_store {
 public:
  term_ptr deref(term_ptr t) const;
  void bind(long long id, term_ptr t);
  std::size_t mark() const { return trail_.size(); }
  void undo_to(std::size_t m);
  void clear();

 private:
  std::unordered_map<long long, term_ptr> map_;
  std::vector<long long> trail_;
};

using text_sink = std::function<void(const std::string&)>;

class engine {
 public:
  engine(module_db& db, var_pool& pool, const interp_options& opts);

  void set_output(text_sink s) { out_ = std::move(s); }
  void set_error_output(text_sink s) { err_ = std::move(s); }

  // Proves `goal` from the top level (context module `user`). on_solution is
  // invoked per solution with bindings in place; it returns true to search
  // for more. Returns true when at least one solution was found. Throws
  // prolog_error for uncaught balls.
  bool run(const term_ptr& goal, const std::function<bool()>& on_solution);

  term_ptr deref(const term_ptr& t) const { return store_.deref(t); }
  term_ptr resolve(const term_ptr& t) const;  // deep binding substitution
  term_ptr detach(const term_ptr& t);         // resolve + fresh variable ids

  bool unify(const term_ptr& a, const term_ptr& b);
  binding_store& store() { return store_; }

  long long meta_call_count() const { return meta_calls_; }
  void reset_meta_call_count() { meta_calls_ = 0; }

 private:
  using cont = std::function<bool()>;

  bool solve(const term_ptr& goal, const frame& fr, long long barrier,
             long long depth, const cont& k);
  bool invoke(const term_ptr& plain, const std::string& lookup_mod,
              const std::string& qctx, bool user_qualifier, const frame& fr,
              long long barrier, long long depth, const cont& k);
  bool exec_seq(const builtin_info& b, const term_ptr& g, const frame& fr,
                long long barrier, long long depth, const cont& k);
  bool exec_builtin(const builtin_info& b, const term_ptr& g,
                    const std::string& qctx, const frame& fr, long long barrier,
                    long long depth, const cont& k);
  bool exec_call(const term_ptr& g, const frame& fr, long long depth,
                 const cont& k);
  bool exec_catch(const term_ptr& g, const frame& fr, long long depth,
                  const cont& k);
  bool exec_findall(const term_ptr& g, const frame& fr, long long depth,
                    const cont& k);
  bool exec_univ(const term_ptr& g, const cont& k);
  bool exec_assertz(const term_ptr& g, const cont& k);
  bool exec_retract(const term_ptr& g, const cont& k);
  bool exec_strip_module(const term_ptr& g, const cont& k);
  bool exec_predicate_property(const term_ptr& g, const cont& k);
  bool call_clauses(predicate_def& p, const term_ptr& goal, const frame& fr,
                    long long depth, const cont& k);

  term_ptr runtime_wrap(const meta_template& tmpl, const term_ptr& g,
                        const std::string& ctx);
  void scope_check(const frame& fr, const std::string& qmod, const indicator& ind);
  bool occurs(long long id, const term_ptr& t) const;
  term_ptr extend_goal(const term_ptr& plain, const std::vector<term_ptr>& extras);
  term_ptr extend_goal_univ(const term_ptr& plain,
                            const std::vector<term_ptr>& extras);

  [[noreturn]] void raise(term_ptr formal, term_ptr ctx);
  [[noreturn]] void type_err(const std::string& type, const term_ptr& culprit,
                             const indicator& op);
  [[noreturn]] void inst_err(const indicator& op);
  [[noreturn]] void existence_err(const std::string& mod, const indicator& ind);
  [[noreturn]] void permission_err(const std::string& op, const std::string& type,
                                   term_ptr culprit);

  module_db& db_;
  var_pool& pool_;
  interp_options opts_;
  binding_store store_;
  text_sink out_;
  text_sink err_;
  long long barrier_counter_ = 0;
  long long meta_calls_ = 0;
  std::set<std::string> warned_;
};

term_ptr mk_indicator_term(const indicator& ind);
term_ptr mk_qualified_indicator(const std::string& mod, const indicator& ind);

}  // namespace modlog
