/* modlog: a mini Prolog with a predicate-based module system.
 *
 * C interface over the interpreter. All functions are single-threaded per
 * interpreter; distinct interpreters are independent. Strings returned
 * through char** parameters are heap-allocated and must be released with
 * modlog_free().
 */
#ifndef MODLOG_H
#define MODLOG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct modlog_interp modlog_interp;

typedef enum modlog_status {
  MODLOG_OK = 0,
  MODLOG_FAIL = 1,        /* goal had no solution */
  MODLOG_ERR_SYNTAX = 2,  /* unreadable program or goal text */
  MODLOG_ERR_LOAD = 3,    /* inconsistent program, unreadable file */
  MODLOG_ERR_GOAL = 4,    /* uncaught exception while proving */
  MODLOG_ERR_USAGE = 5,   /* invalid argument to an API call */
  MODLOG_ERR_NOMEM = 6
} modlog_status;

typedef struct modlog_options {
  /* 1: an explicit M:Goal qualifier sets both the lookup module and the
   * calling context; 0: it sets the lookup module only. */
  int colon_sets_calling_context;
  int max_call_n;        /* largest goal arity call/N may build */
  int occurs_check;
  int strict;            /* commit fails when the lint pass reports errors */
  int strict_scope;      /* calls to unexported predicates raise */
  int expand;            /* qualify meta arguments at commit time */
  int call_n_via_univ;   /* assemble call/N goals through '=..' */
  long depth_limit;      /* resolution depth bound; 0: unlimited */
  int call_ceiling;      /* call/N arity the lint pass warns above */
  int tolerant_templates; /* keep loading past malformed meta templates */
} modlog_options;

/* Fills *opts with the defaults described above. */
void modlog_options_init(modlog_options* opts);

/* NULL opts means defaults. Returns NULL only on allocation failure. */
modlog_interp* modlog_create(const modlog_options* opts);
void modlog_destroy(modlog_interp* ip);

/* Receives everything the program writes (write/1, writeq/1, nl/0) or, for
 * the error channel, loader and scope warnings. Default: discarded. */
typedef void (*modlog_write_cb)(const char* text, size_t len, void* user);
void modlog_set_output(modlog_interp* ip, modlog_write_cb cb, void* user);
void modlog_set_error_output(modlog_interp* ip, modlog_write_cb cb, void* user);

modlog_status modlog_load_file(modlog_interp* ip, const char* path);
modlog_status modlog_load_string(modlog_interp* ip, const char* text,
                                 const char* name);

/* Validates imports/exports and applies the load-time qualification pass.
 * Must run after loading and before solving. */
modlog_status modlog_commit(modlog_interp* ip);

/* Called once per solution. `bindings` holds one "Name = Value\n" line per
 * named goal variable (empty string when there are none). Return nonzero to
 * search for further solutions. */
typedef int (*modlog_solution_cb)(const char* bindings, void* user);

/* MODLOG_OK when at least one solution was found, MODLOG_FAIL when none. */
modlog_status modlog_solve(modlog_interp* ip, const char* goal,
                           modlog_solution_cb cb, void* user);

/* Meta-call dispatches (call/N and template-driven goal positions) counted
 * during the most recent modlog_solve. */
long long modlog_meta_call_count(const modlog_interp* ip);

/* Database listing, one clause per line, heads module-qualified. */
modlog_status modlog_program_listing(modlog_interp* ip, char** out);

/* Reloadable source text: module/use_module/tool/meta directives, then
 * clauses, module by module. */
modlog_status modlog_program_source(modlog_interp* ip, char** out);

/* Rewrites committed clauses that call meta predicates with statically known
 * meta arguments into auxiliary first-order predicates. `diagnostics` (may be
 * NULL) receives skipped-site notes, one per line. */
modlog_status modlog_specialize(modlog_interp* ip, char** diagnostics);

/* Runs the style and cross-reference checks over the loaded program.
 * format: "text" or "records". exit_code receives 0 (clean or informational
 * only) or 1 (warnings or errors present). */
modlog_status modlog_lint(modlog_interp* ip, const char* format, char** out,
                          int* exit_code);

/* Loads `paths` into a fresh interpreter per variant and times full
 * enumeration of `goal`. Variants from {"runtime", "expanded", "specialized",
 * "univ"}; NULL/0 selects all four in that order. Writes a fixed-width table
 * to *out. */
modlog_status modlog_bench(const modlog_options* opts, const char* const* paths,
                           int npaths, const char* goal,
                           const char* const* variants, int nvariants,
                           int reps, char** out);

void modlog_free(char* text);

/* Message for the most recent failing call. Pass the interpreter involved,
 * or NULL for interpreter-less entry points such as modlog_bench. The
 * returned pointer stays valid until the next API call. */
const char* modlog_last_error(const modlog_interp* ip);

const char* modlog_version(void);

#ifdef __cplusplus
}
#endif

#endif /* MODLOG_H */
