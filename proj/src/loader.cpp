#include "loader.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "expander.hpp"

namespace modlog {

namespace {

std::string at(const source_loc& loc) {
  return loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

std::vector<indicator> indicator_list(const term_ptr& t, const source_loc& loc,
                                      const char* what) {
  std::vector<indicator> out;
  auto one = [&](const term_ptr& x) {
    auto ind = term_to_indicator(x);
    if (!ind) throw load_error(loc, std::string(what) + " expects Name/Arity items");
    out.push_back(*ind);
  };
  if (auto elems = proper_list_elements(t)) {
    for (const auto& e : *elems) one(e);
  } else {
    for (const auto& e : flatten_conjunction(t)) one(e);
  }
  return out;
}

}  // namespace

loader::loader(module_db& db, var_pool& pool) : db_(db), pool_(pool) {
  err_ = [](const std::string&) {};
}

void loader::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw load_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  load_string(buf.str(), path);
}

void loader::load_string(const std::string& text, const std::string& name) {
  std::vector<source_item> items = parse_program(text, name, pool_);
  std::string current = "user";
  for (const auto& item : items) process(item, current);
}

void loader::process(const source_item& item, std::string& current) {
  if (item.kind == item_kind::directive)
    process_directive(item, current);
  else
    add_clause(item, current);
}

void loader::process_directive(const source_item& item, std::string& current) {
  const term_ptr& t = item.t;
  directive_form form = classify_directive(t);
  switch (form) {
    case directive_form::module_decl: {
      const term_ptr& name = t->args[0];
      if (name->kind != term_kind::atom)
        throw load_error(item.loc, "module name must be an atom");
      std::vector<indicator> exports;
      if (t->args.size() == 2) {
        auto elems = proper_list_elements(t->args[1]);
        if (!elems)
          throw load_error(item.loc, "module/2 expects a list of exports");
        for (const auto& e : *elems) {
          auto ind = term_to_indicator(e);
          if (!ind)
            throw load_error(item.loc, "exports must be Name/Arity items");
          exports.push_back(*ind);
        }
      }
      module_def& m = db_.declare_module(name->text, exports, item.loc);
      m.directives.push_back({t, form, item.loc});
      current = name->text;
      if (std::find(declared_order_.begin(), declared_order_.end(), current) ==
          declared_order_.end())
        declared_order_.push_back(current);
      return;
    }
    case directive_form::export_decl: {
      module_def& m = db_.get_or_create(current);
      m.directives.push_back({t, form, item.loc});
      for (const indicator& ind :
           indicator_list(t->args[0], item.loc, "export/1")) {
        if (!m.exports.count(ind)) {
          m.exports.insert(ind);
          m.export_order.push_back(ind);
        }
      }
      return;
    }
    case directive_form::use_module: {
      module_def& m = db_.get_or_create(current);
      m.directives.push_back({t, form, item.loc});
      term_ptr src = t->args[0];
      if (is_functor(src, "library", 1)) src = src->args[0];
      if (src->kind != term_kind::atom)
        throw load_error(item.loc, "use_module expects a module name");
      if (t->args.size() == 1) {
        db_.register_import(current, src->text, {}, true, item.loc);
      } else {
        auto elems = proper_list_elements(t->args[1]);
        if (!elems)
          throw load_error(item.loc, "use_module/2 expects an import list");
        std::vector<indicator> which;
        for (const auto& e : *elems) {
          auto ind = term_to_indicator(e);
          if (!ind)
            throw load_error(item.loc, "imports must be Name/Arity items");
          which.push_back(*ind);
        }
        db_.register_import(current, src->text, which, false, item.loc);
      }
      return;
    }
    case directive_form::meta_predicate:
    case directive_form::metapredicate_iso: {
      module_def& m = db_.get_or_create(current);
      m.directives.push_back({t, form, item.loc});
      bool iso = form == directive_form::metapredicate_iso;
      for (const term_ptr& raw : flatten_conjunction(t->args[0])) {
        template_result r = build_template(raw, iso);
        if (!r.ok) {
          if (tolerant_) continue;  // reported by the lint rules instead
          throw load_error(item.loc, r.error);
        }
        predicate_def& p = m.pred(r.tmpl.ind);
        if (p.transparent)
          throw load_error(item.loc,
                           "predicate " + to_string(r.tmpl.ind) +
                               " is transparent and cannot take a meta template");
        p.tmpl = r.tmpl;
        p.tmpl_loc = item.loc;
      }
      return;
    }
    case directive_form::module_transparent: {
      module_def& m = db_.get_or_create(current);
      m.directives.push_back({t, form, item.loc});
      for (const term_ptr& raw : flatten_conjunction(t->args[0])) {
        auto ind = term_to_indicator(raw);
        if (!ind)
          throw load_error(item.loc,
                           "module_transparent expects Name/Arity items");
        predicate_def& p = m.pred(*ind);
        if (p.tmpl)
          throw load_error(item.loc,
                           "predicate " + to_string(*ind) +
                               " has a meta template and cannot be transparent");
        p.transparent = true;
      }
      return;
    }
    case directive_form::tool: {
      module_def& m = db_.get_or_create(current);
      m.directives.push_back({t, form, item.loc});
      auto iface = term_to_indicator(t->args[0]);
      auto impl = term_to_indicator(t->args[1]);
      if (!iface || !impl)
        throw load_error(item.loc, "tool/2 expects Name/Arity pairs");
      if (impl->arity != iface->arity + 1)
        throw load_error(item.loc,
                         "tool implementation " + to_string(*impl) +
                             " must have arity " + std::to_string(iface->arity + 1));
      const predicate_def* p = m.find_pred(*iface);
      if (p && !p->clauses.empty())
        throw load_error(item.loc, "tool interface " + to_string(*iface) +
                                       " already has clauses");
      auto it = m.tools.find(*iface);
      if (it != m.tools.end() && !(it->second == *impl))
        throw load_error(item.loc, "tool interface " + to_string(*iface) +
                                       " is already linked to " +
                                       to_string(it->second));
      m.tools[*iface] = *impl;
      return;
    }
    case directive_form::unknown: {
      module_def& m = db_.get_or_create(current);
      m.directives.push_back({t, form, item.loc});
      indicator ind = is_callable(t) ? functor_of(t) : indicator{"?", 0};
      if (ind.name == "op" && ind.arity == 3) {
        err_(at(item.loc) +
             ": warning: op/3 ignored, the operator table is fixed\n");
      } else if (ind.name == "mode" && ind.arity == 2) {
        // recognised and preserved; carries no meaning here
      } else {
        err_(at(item.loc) + ": warning: unknown directive " + to_string(ind) +
             " ignored\n");
      }
      return;
    }
  }
}

void loader::add_clause(const source_item& item, const std::string& current) {
  term_ptr head;
  term_ptr body;
  if (is_functor(item.t, ":-", 2)) {
    head = item.t->args[0];
    body = item.t->args[1];
  } else {
    head = item.t;
    body = mk_atom("true");
  }

  peeled_goal p = peel_static(head);
  if (p.var_qualifier || p.bad_qualifier)
    throw load_error(item.loc, "invalid module qualifier on clause head");
  std::string mod = p.module.value_or(current);
  head = p.goal;

  if (!is_callable(head))
    throw load_error(item.loc, "clause head must be callable");
  if (body->kind == term_kind::int_)
    throw load_error(item.loc, "clause body must be callable");

  indicator ind = functor_of(head);
  if (find_builtin(ind.name, ind.arity))
    throw load_error(item.loc, "cannot redefine builtin " + to_string(ind));

  module_def& m = db_.get_or_create(mod);
  if (m.imports.count(ind))
    throw load_error(item.loc, "clause for predicate " + to_string(ind) +
                                   " imported into '" + mod + "'");
  if (m.tools.count(ind))
    throw load_error(item.loc, "tool interface " + to_string(ind) +
                                   " cannot have clauses");

  predicate_def& pd = m.pred(ind);
  auto c = std::make_shared<clause>();
  c->head = head;
  c->body = body;
  c->loc = item.loc;
  pd.clauses.push_back(std::move(c));
}

void loader::finalize() {
  // Import edges registered before their source module was loaded.
  for (const std::string& mname : db_.module_order()) {
    const module_def* m = db_.find(mname);
    for (const auto& e : m->imports) {
      const module_def* src = db_.find(e.second);
      if (src && src->declared && !src->exports_ind(e.first))
        throw load_error("module '" + e.second + "' does not export " +
                         to_string(e.first) + " (imported by '" + mname + "')");
    }
  }
  // Every export must be backed by something callable.
  for (const std::string& mname : db_.module_order()) {
    const module_def* m = db_.find(mname);
    if (!m->declared) continue;
    for (const indicator& e : m->export_order) {
      bool backed = m->find_pred(e) || m->tools.count(e) || m->imports.count(e);
      for (std::size_t i = 0; !backed && i < m->import_all.size(); ++i) {
        const module_def* src = db_.find(m->import_all[i]);
        backed = src && src->exports_ind(e);
      }
      if (!backed)
        throw load_error("module '" + mname + "' exports undefined " +
                         to_string(e));
    }
  }
  // Exports become reachable from the top level without qualification.
  source_loc loc{"<finalize>", 0, 0};
  for (const std::string& mname : declared_order_) {
    const module_def* m = db_.find(mname);
    for (const indicator& e : m->export_order)
      db_.register_import("user", mname, {e}, false, loc, /*skip_conflicts=*/true);
  }
}

}  // namespace modlog
