#include "modlog.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bench.hpp"
#include "lint.hpp"
#include "reader.hpp"
#include "session.hpp"
#include "specialize.hpp"
#include "writer.hpp"

using namespace modlog;

struct modlog_interp {
  session s;
  std::string last_error;

  explicit modlog_interp(const interp_options& o) : s(o) {}
};

namespace {

thread_local std::string g_last_error;

interp_options to_cpp(const modlog_options* o) {
  interp_options r;
  if (!o) return r;
  r.colon_sets_calling_context = o->colon_sets_calling_context != 0;
  r.max_call_n = o->max_call_n;
  r.occurs_check = o->occurs_check != 0;
  r.strict = o->strict != 0;
  r.strict_scope = o->strict_scope != 0;
  r.expand = o->expand != 0;
  r.call_n_via_univ = o->call_n_via_univ != 0;
  r.depth_limit = o->depth_limit;
  r.call_ceiling = o->call_ceiling;
  r.tolerant_templates = o->tolerant_templates != 0;
  return r;
}

void set_err(modlog_interp* ip, const std::string& msg) {
  if (ip)
    ip->last_error = msg;
  else
    g_last_error = msg;
}

char* dup_text(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) return nullptr;
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

modlog_status put_text(modlog_interp* ip, char** out, const std::string& s) {
  if (!out) return MODLOG_OK;
  *out = dup_text(s);
  if (!*out) {
    set_err(ip, "out of memory");
    return MODLOG_ERR_NOMEM;
  }
  return MODLOG_OK;
}

std::string ball_message(const prolog_error& e) {
  return "uncaught exception: " + write_canonical_term(e.ball, true);
}

// Maps the exceptions an interpreter operation can raise onto statuses.
template <typename F>
modlog_status guarded(modlog_interp* ip, F&& f) {
  try {
    return f();
  } catch (const syntax_error& e) {
    set_err(ip, e.what());
    return MODLOG_ERR_SYNTAX;
  } catch (const load_error& e) {
    set_err(ip, e.what());
    return MODLOG_ERR_LOAD;
  } catch (const prolog_error& e) {
    set_err(ip, ball_message(e));
    return MODLOG_ERR_GOAL;
  } catch (const std::invalid_argument& e) {
    set_err(ip, e.what());
    return MODLOG_ERR_USAGE;
  } catch (const std::bad_alloc&) {
    set_err(ip, "out of memory");
    return MODLOG_ERR_NOMEM;
  } catch (const std::exception& e) {
    set_err(ip, e.what());
    return MODLOG_ERR_LOAD;
  }
}

}  // namespace

extern "C" {

void modlog_options_init(modlog_options* opts) {
  if (!opts) return;
  interp_options d;
  opts->colon_sets_calling_context = d.colon_sets_calling_context ? 1 : 0;
  opts->max_call_n = d.max_call_n;
  opts->occurs_check = d.occurs_check ? 1 : 0;
  opts->strict = d.strict ? 1 : 0;
  opts->strict_scope = d.strict_scope ? 1 : 0;
  opts->expand = d.expand ? 1 : 0;
  opts->call_n_via_univ = d.call_n_via_univ ? 1 : 0;
  opts->depth_limit = static_cast<long>(d.depth_limit);
  opts->call_ceiling = d.call_ceiling;
  opts->tolerant_templates = d.tolerant_templates ? 1 : 0;
}

modlog_interp* modlog_create(const modlog_options* opts) {
  try {
    return new modlog_interp(to_cpp(opts));
  } catch (...) {
    g_last_error = "out of memory";
    return nullptr;
  }
}

void modlog_destroy(modlog_interp* ip) { delete ip; }

void modlog_set_output(modlog_interp* ip, modlog_write_cb cb, void* user) {
  if (!ip) return;
  if (cb)
    ip->s.set_output(
        [cb, user](const std::string& t) { cb(t.c_str(), t.size(), user); });
  else
    ip->s.set_output([](const std::string&) {});
}

void modlog_set_error_output(modlog_interp* ip, modlog_write_cb cb, void* user) {
  if (!ip) return;
  if (cb)
    ip->s.set_error_output(
        [cb, user](const std::string& t) { cb(t.c_str(), t.size(), user); });
  else
    ip->s.set_error_output([](const std::string&) {});
}

modlog_status modlog_load_file(modlog_interp* ip, const char* path) {
  if (!ip || !path) {
    set_err(ip, "load_file: null argument");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&] {
    ip->s.load_file(path);
    return MODLOG_OK;
  });
}

modlog_status modlog_load_string(modlog_interp* ip, const char* text,
                                 const char* name) {
  if (!ip || !text) {
    set_err(ip, "load_string: null argument");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&] {
    ip->s.load_string(text, name ? name : "<string>");
    return MODLOG_OK;
  });
}

modlog_status modlog_commit(modlog_interp* ip) {
  if (!ip) {
    set_err(ip, "commit: null interpreter");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&] {
    ip->s.commit();
    return MODLOG_OK;
  });
}

modlog_status modlog_solve(modlog_interp* ip, const char* goal,
                           modlog_solution_cb cb, void* user) {
  if (!ip || !goal) {
    set_err(ip, "solve: null argument");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&]() -> modlog_status {
    bool found = ip->s.solve(goal, [&](const solution& sol) {
      if (!cb) return false;
      std::string text;
      for (const auto& b : sol.bindings)
        text += b.first + " = " + b.second + "\n";
      return cb(text.c_str(), user) != 0;
    });
    return found ? MODLOG_OK : MODLOG_FAIL;
  });
}

long long modlog_meta_call_count(const modlog_interp* ip) {
  return ip ? ip->s.meta_call_count() : 0;
}

modlog_status modlog_program_listing(modlog_interp* ip, char** out) {
  if (!ip || !out) {
    set_err(ip, "program_listing: null argument");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&] { return put_text(ip, out, ip->s.list_program()); });
}

modlog_status modlog_program_source(modlog_interp* ip, char** out) {
  if (!ip || !out) {
    set_err(ip, "program_source: null argument");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip,
                 [&] { return put_text(ip, out, render_program(ip->s.db())); });
}

modlog_status modlog_specialize(modlog_interp* ip, char** diagnostics) {
  if (!ip) {
    set_err(ip, "specialize: null interpreter");
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&] {
    specialize_stats st =
        specialize_all(ip->s.db(), ip->s.pool(), ip->s.options());
    std::string text;
    for (const std::string& d : st.diagnostics) text += d + "\n";
    return put_text(ip, diagnostics, text);
  });
}

modlog_status modlog_lint(modlog_interp* ip, const char* format, char** out,
                          int* exit_code) {
  if (!ip || !out) {
    set_err(ip, "lint: null argument");
    return MODLOG_ERR_USAGE;
  }
  std::string fmt = format ? format : "records";
  if (fmt != "records" && fmt != "text") {
    set_err(ip, "lint: unknown format: " + fmt);
    return MODLOG_ERR_USAGE;
  }
  return guarded(ip, [&] {
    std::vector<lint_record> rs =
        lint_modules(ip->s.db(), ip->s.options().call_ceiling);
    if (exit_code) *exit_code = lint_exit_code(rs);
    return put_text(ip, out,
                    fmt == "records" ? format_records(rs) : format_text(rs));
  });
}

modlog_status modlog_bench(const modlog_options* opts, const char* const* paths,
                           int npaths, const char* goal,
                           const char* const* variants, int nvariants,
                           int reps, char** out) {
  if (!goal || !out || (npaths > 0 && !paths) ||
      (nvariants > 0 && !variants)) {
    g_last_error = "bench: null argument";
    return MODLOG_ERR_USAGE;
  }
  return guarded(nullptr, [&]() -> modlog_status {
    std::vector<std::pair<std::string, std::string>> sources;
    for (int i = 0; i < npaths; ++i) {
      std::ifstream in(paths[i]);
      if (!in) throw load_error(std::string("cannot read file: ") + paths[i]);
      std::ostringstream buf;
      buf << in.rdbuf();
      sources.emplace_back(paths[i], buf.str());
    }
    std::vector<std::string> vs;
    if (nvariants > 0)
      for (int i = 0; i < nvariants; ++i) vs.emplace_back(variants[i]);
    else
      vs = bench_variants();
    std::vector<bench_row> rows =
        run_bench(sources, goal, vs, reps, to_cpp(opts));
    return put_text(nullptr, out, format_bench(rows));
  });
}

void modlog_free(char* text) { std::free(text); }

const char* modlog_last_error(const modlog_interp* ip) {
  return ip ? ip->last_error.c_str() : g_last_error.c_str();
}

const char* modlog_version(void) { return "0.1.0"; }

}  // extern "C"
