#include "chasetc/simplify.hpp"

#include <algorithm>
#include <set>

namespace chasetc {

term specialization::apply(term v) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return image[i];
  return v;
}

std::string specialization::label() const {
  std::string out = "{";
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += symbols::name(vars[i]) + "->" + symbols::name(image[i]);
  }
  return out + "}";
}

std::vector<specialization> specializations(const std::vector<term>& body_args) {
  std::vector<term> vars;
  for (const term& t : body_args)
    if (std::find(vars.begin(), vars.end(), t) == vars.end()) vars.push_back(t);

  std::vector<specialization> out;
  for (shape_code code : all_partitions(int(vars.size()))) {
    std::vector<uint8_t> digits = unpack_digits(code, int(vars.size()));
    specialization f;
    f.vars = vars;
    f.image.reserve(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
      size_t leader = 0;
      while (digits[leader] != digits[i]) ++leader;
      f.image.push_back(vars[leader]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

tgd simplify_rule(const tgd& r, const specialization& f, int32_t new_id) {
  if (!r.is_linear()) throw std::invalid_argument("simplify_rule needs a linear rule");
  auto map_atom = [&](const atom& a) {
    atom m = a;
    for (term& t : m.args) t = f.apply(t);
    return simplify_atom(m);
  };
  std::vector<atom> body{map_atom(r.body[0])};
  std::vector<atom> head;
  head.reserve(r.head.size());
  for (const atom& a : r.head) head.push_back(map_atom(a));
  return make_tgd(new_id, std::move(body), std::move(head));
}

std::string canonical_key(const tgd& r) {
  std::unordered_map<int32_t, int> renames;
  std::string key;
  auto emit = [&](const atom& a) {
    key += predicates::name(a.pred);
    key += "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      auto it = renames.emplace(a.args[i].id, int(renames.size() + 1)).first;
      if (i) key += ",";
      key += "v" + std::to_string(it->second);
    }
    key += ")";
  };
  for (const atom& a : r.body) emit(a);
  key += "->";
  for (const atom& a : r.head) emit(a);
  return key;
}

std::set<std::string> simplified_rule_set::keys() const {
  std::set<std::string> out;
  for (const simplified_rule& sr : rules) out.insert(canonical_key(sr.rule));
  return out;
}

simplified_rule_set static_simplify(const std::vector<tgd>& rules) {
  simplified_rule_set out;
  std::set<std::string> seen;
  int32_t next_id = 1;
  for (const tgd& r : rules) {
    if (!r.is_linear())
      throw std::invalid_argument("static_simplify needs linear rules");
    for (const specialization& f : specializations(r.body[0].args)) {
      tgd s = simplify_rule(r, f, next_id);
      if (!seen.insert(canonical_key(s)).second) continue;
      ++next_id;
      out.rules.push_back(simplified_rule{std::move(s), r.id, f.label()});
    }
  }
  return out;
}

rule_index rule_index::build(const std::vector<tgd>& rules) {
  rule_index idx;
  idx.body_digits.reserve(rules.size());
  for (size_t i = 0; i < rules.size(); ++i) {
    if (!rules[i].is_linear())
      throw std::invalid_argument("rule index needs linear rules");
    idx.by_body_pred[rules[i].body[0].pred].push_back(i);
    idx.body_digits.push_back(unique_and_id(rules[i].body[0].args).second);
  }
  return idx;
}

namespace {

// h-compatibility: equal body variables must land in equal shape blocks. On
// success the h-specialization maps each variable to the variable at its
// shape block's first position.
bool h_specialization(const std::vector<uint8_t>& body_pattern,
                      const std::vector<uint8_t>& shape_digits,
                      const std::vector<term>& body_args, specialization& f) {
  std::vector<int> to_shape(body_pattern.size() + 1, 0);
  for (size_t i = 0; i < body_pattern.size(); ++i) {
    int& img = to_shape[body_pattern[i]];
    if (img == 0)
      img = shape_digits[i];
    else if (img != int(shape_digits[i]))
      return false;
  }
  f.vars.clear();
  f.image.clear();
  for (size_t i = 0; i < body_args.size(); ++i) {
    if (std::find(f.vars.begin(), f.vars.end(), body_args[i]) != f.vars.end())
      continue;
    size_t leader = 0;
    while (shape_digits[leader] != shape_digits[i]) ++leader;
    f.vars.push_back(body_args[i]);
    f.image.push_back(body_args[leader]);
  }
  return true;
}

}  // namespace

std::vector<simplified_rule> applicable(const shape_set& delta,
                                        const std::vector<tgd>& rules,
                                        const rule_index& index) {
  std::vector<simplified_rule> out;
  for (const shape& s : delta) {
    auto it = index.by_body_pred.find(s.pred);
    if (it == index.by_body_pred.end()) continue;
    std::vector<uint8_t> shape_digits = unpack_digits(s.code, predicates::arity(s.pred));
    for (size_t ri : it->second) {
      const tgd& r = rules[ri];
      specialization f;
      if (!h_specialization(index.body_digits[ri], shape_digits, r.body[0].args, f))
        continue;
      out.push_back(simplified_rule{simplify_rule(r, f, 0), r.id, f.label()});
    }
  }
  return out;
}

simplified_rule_set dyn_simplification(const shape_set& db_shapes,
                                       const std::vector<tgd>& rules) {
  rule_index index = rule_index::build(rules);

  std::set<pred_id> schema;
  for (const tgd& r : rules) {
    for (const atom& a : r.body) schema.insert(a.pred);
    for (const atom& a : r.head) schema.insert(a.pred);
  }

  shape_set s;  // S: all shapes seen so far
  for (const shape& sh : db_shapes)
    if (schema.count(sh.pred)) s.insert(sh);

  simplified_rule_set out;
  std::set<std::string> seen;
  int32_t next_id = 1;
  shape_set delta = s;
  while (!delta.empty()) {
    ++out.iterations;
    std::vector<simplified_rule> aux = applicable(delta, rules, index);
    shape_set head_shapes;
    for (simplified_rule& sr : aux) {
      for (const atom& a : sr.rule.head) head_shapes.insert(shape_of_pred(a.pred));
      if (!seen.insert(canonical_key(sr.rule)).second) continue;
      sr.rule.id = next_id++;
      out.rules.push_back(std::move(sr));
    }
    shape_set next_delta;
    for (const shape& sh : head_shapes)
      if (!s.count(sh)) next_delta.insert(sh);
    s.insert(next_delta.begin(), next_delta.end());
    delta = std::move(next_delta);
  }
  return out;
}

}  // namespace chasetc
