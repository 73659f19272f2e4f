#include "moduledb.hpp"

#include <algorithm>
#include <sstream>

namespace modlog {

predicate_def& module_def::pred(const indicator& i) {
  auto it = preds.find(i);
  if (it == preds.end()) {
    predicate_def def;
    def.ind = i;
    it = preds.emplace(i, std::move(def)).first;
    pred_order.push_back(i);
  }
  return it->second;
}

const predicate_def* module_def::find_pred(const indicator& i) const {
  auto it = preds.find(i);
  return it == preds.end() ? nullptr : &it->second;
}

module_db::module_db() { get_or_create("user"); }

module_def& module_db::get_or_create(const std::string& name) {
  auto it = mods_.find(name);
  if (it == mods_.end()) {
    module_def m;
    m.name = name;
    it = mods_.emplace(name, std::move(m)).first;
    order_.push_back(name);
  }
  return it->second;
}

module_def* module_db::find(const std::string& name) {
  auto it = mods_.find(name);
  return it == mods_.end() ? nullptr : &it->second;
}

const module_def* module_db::find(const std::string& name) const {
  auto it = mods_.find(name);
  return it == mods_.end() ? nullptr : &it->second;
}

module_def& module_db::declare_module(const std::string& name,
                                      const std::vector<indicator>& exports,
                                      const source_loc& loc) {
  module_def& m = get_or_create(name);
  if (m.declared)
    throw load_error(loc, "module '" + name + "' is already defined");
  m.declared = true;
  for (const auto& e : exports) {
    if (!m.exports.count(e)) {
      m.exports.insert(e);
      m.export_order.push_back(e);
    }
  }
  return m;
}

void module_db::register_import(const std::string& into, const std::string& from,
                                const std::vector<indicator>& which,
                                bool import_everything, const source_loc& loc,
                                bool skip_conflicts) {
  if (into == from) {
    if (skip_conflicts) return;
    throw load_error(loc, "module '" + into + "' cannot import from itself");
  }
  module_def& dst = get_or_create(into);
  const module_def* src = find(from);

  if (import_everything) {
    if (std::find(dst.import_all.begin(), dst.import_all.end(), from) ==
        dst.import_all.end())
      dst.import_all.push_back(from);
    return;
  }

  for (const auto& ind : which) {
    if (src && src->declared && !src->exports_ind(ind))
      throw load_error(loc, "module '" + from + "' does not export " +
                                to_string(ind));
    const predicate_def* local = dst.find_pred(ind);
    if (local && !local->clauses.empty()) {
      if (skip_conflicts) continue;
      throw load_error(loc, "import of " + to_string(ind) + " from '" + from +
                                "' conflicts with a local definition in '" +
                                into + "'");
    }
    auto it = dst.imports.find(ind);
    if (it != dst.imports.end()) {
      if (it->second == from) continue;
      if (skip_conflicts) continue;
      throw load_error(loc, to_string(ind) + " is already imported into '" +
                                into + "' from '" + it->second + "'");
    }
    dst.imports.emplace(ind, from);
  }
}

resolution module_db::lookup(const std::string& start, const indicator& ind) const {
  std::vector<std::string> path;
  return lookup_rec(start, ind, path);
}

resolution module_db::lookup_rec(const std::string& start, const indicator& ind,
                                 std::vector<std::string>& path) const {
  if (std::find(path.begin(), path.end(), start) != path.end()) {
    std::ostringstream os;
    os << "import cycle for " << to_string(ind) << ":";
    for (const auto& m : path) os << " " << m << " ->";
    os << " " << start;
    throw load_error(os.str());
  }
  path.push_back(start);

  const module_def* m = find(start);
  if (m) {
    auto pit = m->preds.find(ind);
    if (pit != m->preds.end()) {
      resolution r;
      r.k = resolution::kind::user;
      r.def_module = start;
      r.pred = const_cast<predicate_def*>(&pit->second);
      path.pop_back();
      return r;
    }
    auto tit = m->tools.find(ind);
    if (tit != m->tools.end()) {
      resolution r;
      r.k = resolution::kind::tool;
      r.def_module = start;
      r.tool_impl = tit->second;
      path.pop_back();
      return r;
    }
    auto iit = m->imports.find(ind);
    if (iit != m->imports.end()) {
      resolution r = lookup_rec(iit->second, ind, path);
      path.pop_back();
      if (r.k != resolution::kind::unresolved && r.k != resolution::kind::builtin)
        return r;
      // The edge exists but nothing backs it; report against the source.
      return r;
    }
    for (const auto& src_name : m->import_all) {
      const module_def* src = find(src_name);
      if (!src || !src->exports_ind(ind)) continue;
      resolution r = lookup_rec(src_name, ind, path);
      if (r.k != resolution::kind::unresolved && r.k != resolution::kind::builtin) {
        path.pop_back();
        return r;
      }
    }
  }
  path.pop_back();

  if (const builtin_info* b = find_builtin(ind.name, ind.arity)) {
    resolution r;
    r.k = resolution::kind::builtin;
    r.b = b;
    return r;
  }
  return resolution{};
}

template_spec_result analyze_template_spec(const term_ptr& spec, bool iso) {
  term_ptr s = spec;
  template_spec_result res;
  res.st = template_spec_result::status::malformed;
  res.spec = meta_arg_spec::normal(arg_mode::question);
  if (!s) return res;
  if (s->kind == term_kind::int_) {
    if (s->ival < 0) return res;
    res.st = template_spec_result::status::ok;
    res.spec = meta_arg_spec::closure(static_cast<int>(s->ival));
    return res;
  }
  if (s->kind != term_kind::atom) return res;
  const std::string& a = s->text;
  res.atom_text = a;
  if (a == ":") {
    res.st = template_spec_result::status::ok;
    res.spec = iso ? meta_arg_spec::closure(0) : meta_arg_spec::context_aware();
    return res;
  }
  if (a == "::") {
    // Logtalk-style goal position: a plain goal, no extra arguments.
    res.st = template_spec_result::status::ok;
    res.spec = meta_arg_spec::closure(0);
    return res;
  }
  if (a == "+") { res.st = template_spec_result::status::ok; res.spec = meta_arg_spec::normal(arg_mode::plus); return res; }
  if (a == "?") { res.st = template_spec_result::status::ok; res.spec = meta_arg_spec::normal(arg_mode::question); return res; }
  if (a == "@") { res.st = template_spec_result::status::ok; res.spec = meta_arg_spec::normal(arg_mode::at); return res; }
  if (a == "-") { res.st = template_spec_result::status::ok; res.spec = meta_arg_spec::normal(arg_mode::minus); return res; }
  if (a == "*") { res.st = template_spec_result::status::ok; res.spec = meta_arg_spec::normal(arg_mode::star); return res; }
  if (a.size() > 1 &&
      a.find_first_not_of("+-?@") == std::string::npos) {
    // Determinism/steadfastness annotations from extended mode systems.
    res.st = template_spec_result::status::extended_mode;
    res.spec = meta_arg_spec::normal(arg_mode::question);
    return res;
  }
  return res;
}

term_ptr template_to_term(const meta_template& t) {
  if (t.specs.empty()) return mk_atom(t.ind.name);
  std::vector<term_ptr> args;
  for (const auto& s : t.specs) {
    switch (s.k) {
      case meta_arg_spec::kind::closure:
        args.push_back(mk_int(s.closure_extra));
        break;
      case meta_arg_spec::kind::context_aware:
        args.push_back(mk_atom(":"));
        break;
      case meta_arg_spec::kind::normal:
        switch (s.mode) {
          case arg_mode::plus: args.push_back(mk_atom("+")); break;
          case arg_mode::question: args.push_back(mk_atom("?")); break;
          case arg_mode::at: args.push_back(mk_atom("@")); break;
          case arg_mode::minus: args.push_back(mk_atom("-")); break;
          case arg_mode::star: args.push_back(mk_atom("*")); break;
        }
        break;
    }
  }
  return mk_compound(t.ind.name, std::move(args));
}

template_result build_template(const term_ptr& raw, bool iso) {
  template_result out;
  if (!raw || (raw->kind != term_kind::atom && raw->kind != term_kind::compound)) {
    out.error = "meta template must be an atom or compound term";
    return out;
  }
  out.tmpl.ind.name = raw->text;
  out.tmpl.ind.arity = raw->kind == term_kind::compound
                           ? static_cast<int>(raw->args.size())
                           : 0;
  for (size_t i = 0; raw->kind == term_kind::compound && i < raw->args.size(); ++i) {
    template_spec_result r = analyze_template_spec(raw->args[i], iso);
    if (r.st == template_spec_result::status::malformed) {
      std::ostringstream os;
      os << "invalid meta template argument " << (i + 1) << " of "
         << to_string(out.tmpl.ind);
      out.error = os.str();
      return out;
    }
    if (r.st == template_spec_result::status::extended_mode)
      out.extended_atoms.push_back(r.atom_text);
    out.tmpl.specs.push_back(r.spec);
  }
  out.ok = true;
  return out;
}

}  // namespace modlog
