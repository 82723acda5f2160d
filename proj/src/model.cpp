#include "chasetc/model.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

namespace chasetc {

namespace {

// Names live in deques so handed-out references stay valid as tables grow.
struct string_interner {
  std::unordered_map<std::string, int32_t> ids;
  std::deque<std::string> names;

  int32_t intern(std::string_view s) {
    auto it = ids.find(std::string(s));
    if (it != ids.end()) return it->second;
    int32_t id = int32_t(names.size());
    names.emplace_back(s);
    ids.emplace(names.back(), id);
    return id;
  }
};

struct null_origin_hash {
  size_t operator()(const null_origin& o) const {
    size_t h = std::hash<int32_t>()(o.rule_id);
    h = h * 1000003u + std::hash<std::string>()(o.frontier_fingerprint);
    h = h * 1000003u + std::hash<std::string>()(o.var_name);
    return h;
  }
};

struct symbol_state {
  std::mutex mu;
  string_interner constants;
  string_interner variables;
  std::unordered_map<null_origin, int32_t, null_origin_hash> null_ids;
  std::vector<null_origin> null_origins;
};

symbol_state& sym() {
  static symbol_state s;
  return s;
}

struct pred_state {
  std::mutex mu;
  std::unordered_map<std::string, pred_id> by_key;  // "name/arity"
  std::deque<pred_info> infos;
};

pred_state& preds() {
  static pred_state s;
  return s;
}

}  // namespace

term symbols::constant(std::string_view name) {
  auto& s = sym();
  std::lock_guard lock(s.mu);
  return term{term_kind::constant, s.constants.intern(name)};
}

term symbols::variable(std::string_view name) {
  auto& s = sym();
  std::lock_guard lock(s.mu);
  return term{term_kind::variable, s.variables.intern(name)};
}

term symbols::null_for(const null_origin& origin) {
  auto& s = sym();
  std::lock_guard lock(s.mu);
  auto it = s.null_ids.find(origin);
  if (it != s.null_ids.end()) return term{term_kind::null, it->second};
  int32_t id = int32_t(s.null_origins.size());
  s.null_origins.push_back(origin);
  s.null_ids.emplace(origin, id);
  return term{term_kind::null, id};
}

const std::string& symbols::name(term t) {
  auto& s = sym();
  std::lock_guard lock(s.mu);
  if (t.kind == term_kind::constant) return s.constants.names.at(size_t(t.id));
  if (t.kind == term_kind::variable) return s.variables.names.at(size_t(t.id));
  throw std::logic_error("nulls have no plain name; use render()");
}

std::string symbols::render(term t) {
  if (t.kind == term_kind::null) return "_:n" + std::to_string(t.id);
  return name(t);
}

pred_id predicates::intern(std::string_view name, int arity) {
  if (arity < 1) throw std::invalid_argument("predicate arity must be >= 1");
  auto& s = preds();
  std::lock_guard lock(s.mu);
  std::string key = std::string(name) + "/" + std::to_string(arity);
  auto it = s.by_key.find(key);
  if (it != s.by_key.end()) return it->second;
  pred_id id = pred_id(s.infos.size());
  s.infos.push_back(pred_info{std::string(name), arity, -1, 0});
  s.by_key.emplace(std::move(key), id);
  return id;
}

pred_id predicates::shape_pred(pred_id base, shape_code code, int blocks) {
  std::string name;
  {
    auto& s = preds();
    std::lock_guard lock(s.mu);
    name = s.infos.at(size_t(base)).name;
  }
  int arity_of_base = predicates::arity(base);
  for (int i = 0; i < arity_of_base; ++i) {
    name += "_" + std::to_string((code >> (4 * i)) & 0xf);
  }
  pred_id id = intern(name, blocks);
  auto& s = preds();
  std::lock_guard lock(s.mu);
  s.infos[size_t(id)].base = base;
  s.infos[size_t(id)].code = code;
  return id;
}

const pred_info& predicates::info(pred_id p) {
  auto& s = preds();
  std::lock_guard lock(s.mu);
  return s.infos.at(size_t(p));
}

const std::string& predicates::name(pred_id p) { return info(p).name; }
int predicates::arity(pred_id p) { return info(p).arity; }
bool predicates::is_shape_pred(pred_id p) { return info(p).base >= 0; }

std::string render_position(const position& p) {
  return "(" + predicates::name(p.pred) + "," + std::to_string(p.idx) + ")";
}

std::string render_atom(const atom& a) {
  std::string out = predicates::name(a.pred) + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += symbols::render(a.args[i]);
  }
  return out + ")";
}

tgd make_tgd(int32_t id, std::vector<atom> body, std::vector<atom> head) {
  if (body.empty() || head.empty())
    throw std::invalid_argument("a rule needs a non-empty body and head");
  auto check = [](const std::vector<atom>& atoms) {
    for (const atom& a : atoms) {
      if (int(a.args.size()) != predicates::arity(a.pred))
        throw std::invalid_argument("atom arity mismatch for " +
                                    predicates::name(a.pred));
      for (const term& t : a.args)
        if (t.kind != term_kind::variable)
          throw std::invalid_argument("rules must be constant-free");
    }
  };
  check(body);
  check(head);

  std::set<term> body_vars, head_vars;
  for (const atom& a : body) body_vars.insert(a.args.begin(), a.args.end());
  for (const atom& a : head) head_vars.insert(a.args.begin(), a.args.end());

  tgd r;
  r.id = id;
  r.body = std::move(body);
  r.head = std::move(head);
  for (const term& v : body_vars)
    if (head_vars.count(v)) r.frontier.push_back(v);
  for (const term& v : head_vars)
    if (!body_vars.count(v)) r.existentials.push_back(v);

  r.simple = true;
  for (const atom& a : r.body) {
    std::set<term> in_atom;
    for (const term& t : a.args)
      if (!in_atom.insert(t).second) r.simple = false;
  }
  return r;
}

rule_class classify_rule_set(const std::vector<tgd>& rules) {
  bool all_simple = true;
  for (const tgd& r : rules) {
    if (!r.is_linear()) return rule_class::neither;
    if (!r.simple) all_simple = false;
  }
  return all_simple ? rule_class::simple_linear : rule_class::linear;
}

std::string to_string(rule_class c) {
  switch (c) {
    case rule_class::simple_linear: return "sl";
    case rule_class::linear: return "l";
    default: return "neither";
  }
}

std::vector<position> positions_of_variable(const std::vector<atom>& atoms,
                                            term x) {
  std::vector<position> out;
  for (const atom& a : atoms)
    for (size_t i = 0; i < a.args.size(); ++i)
      if (a.args[i] == x) out.push_back(position{a.pred, int32_t(i + 1)});
  return out;
}

bool database::insert(const atom& fact) {
  if (int(fact.args.size()) != predicates::arity(fact.pred))
    throw std::invalid_argument("fact arity mismatch for " +
                                predicates::name(fact.pred));
  for (const term& t : fact.args)
    if (t.kind != term_kind::constant)
      throw std::invalid_argument("database facts must be constant-only");
  if (!seen_.insert(fact).second) return false;
  relations_[fact.pred].push_back(fact.args);
  ++total_;
  return true;
}

bool database::contains(const atom& fact) const { return seen_.count(fact) > 0; }

std::set<pred_id> database::catalog() const {
  std::set<pred_id> out;
  for (const auto& [p, tuples] : relations_)
    if (!tuples.empty()) out.insert(p);
  return out;
}

pad_result pad_empty_frontier(const std::vector<tgd>& rules) {
  pad_result out;
  out.padded = 0;
  for (const tgd& r : rules)
    if (r.frontier.empty()) ++out.padded;
  if (out.padded == 0) {
    out.rules = rules;
    return out;
  }

  // Collect the schema and map every predicate to its widened twin.
  std::set<pred_id> schema;
  int32_t max_id = 0;
  for (const tgd& r : rules) {
    max_id = std::max(max_id, r.id);
    for (const atom& a : r.body) schema.insert(a.pred);
    for (const atom& a : r.head) schema.insert(a.pred);
  }
  std::map<pred_id, pred_id> widened;
  for (pred_id p : schema) {
    widened[p] =
        predicates::intern(predicates::name(p) + "__t", predicates::arity(p) + 1);
  }

  for (const tgd& r : rules) {
    std::set<std::string> used;
    for (const atom& a : r.body)
      for (const term& t : a.args) used.insert(symbols::name(t));
    for (const atom& a : r.head)
      for (const term& t : a.args) used.insert(symbols::name(t));
    std::string tag_name = "ytag";
    for (int i = 0; used.count(tag_name); ++i) tag_name = "ytag" + std::to_string(i);
    term tag = symbols::variable(tag_name);

    auto widen = [&](const atom& a) {
      atom w;
      w.pred = widened.at(a.pred);
      w.args = a.args;
      w.args.push_back(tag);
      return w;
    };
    std::vector<atom> body, head;
    for (const atom& a : r.body) body.push_back(widen(a));
    for (const atom& a : r.head) head.push_back(widen(a));
    out.rules.push_back(make_tgd(r.id, std::move(body), std::move(head)));
  }

  // Seed rules P(u1..um) -> P__t(u1..um,u1), one per schema predicate.
  int32_t next_id = max_id + 1;
  for (pred_id p : schema) {
    int m = predicates::arity(p);
    std::vector<term> us;
    for (int i = 1; i <= m; ++i) us.push_back(symbols::variable("u" + std::to_string(i)));
    atom body_atom{p, us};
    atom head_atom{widened.at(p), us};
    head_atom.args.push_back(us[0]);
    out.rules.push_back(make_tgd(next_id++, {body_atom}, {head_atom}));
  }
  return out;
}

}  // namespace chasetc
