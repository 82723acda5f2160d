#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "chasetc/model.hpp"
#include "chasetc/shapes.hpp"

namespace chasetc {

// A specialization of the body tuple (x1..xn): a variable-to-variable map f
// with f(x1) = x1 and f(xi) either one of the earlier images or xi itself.
// Equivalently a partition of the distinct body variables in first-occurrence
// order, so the count for n distinct variables is the Bell number of n.
struct specialization {
  std::vector<term> vars;    // distinct body variables, first-occurrence order
  std::vector<term> image;   // f(vars[i])
  term apply(term v) const;  // identity off the domain (existentials)
  std::string label() const;
};

// All specializations of the body tuple, in lexicographic partition order.
std::vector<specialization> specializations(const std::vector<term>& body_args);

// simple(sigma, f): applies f and replaces every atom by its simplification
// R_<digits>(unique args). sigma must be linear.
tgd simplify_rule(const tgd& r, const specialization& f, int32_t new_id);

struct simplified_rule {
  tgd rule;
  int32_t source_id = 0;  // rule the simplification came from
  std::string spec;       // specialization label
};

struct simplified_rule_set {
  std::vector<simplified_rule> rules;
  int iterations = 0;  // worklist rounds (dynamic variant only)

  std::set<std::string> keys() const;  // canonical rule keys, for set equality
};

// Canonical body+head serialization under first-occurrence variable renaming;
// two rules are the same simplification iff their keys match.
std::string canonical_key(const tgd& r);

// simple(Sigma): every rule under every specialization of its body tuple,
// deduplicated by canonical key. Rules must all be linear.
simplified_rule_set static_simplify(const std::vector<tgd>& rules);

// Body-predicate index with per-rule body digit patterns, built once per set.
struct rule_index {
  std::unordered_map<pred_id, std::vector<size_t>> by_body_pred;
  std::vector<std::vector<uint8_t>> body_digits;  // per rule

  static rule_index build(const std::vector<tgd>& rules);
};

// All simplifications triggered by the given shapes: a rule applies to a
// shape of its body predicate when merging the body's repeated variables is
// consistent with the shape's equalities (then the h-specialization is the
// one whose partition matches the shape). Returned in (shape, rule) order,
// not deduplicated across calls.
std::vector<simplified_rule> applicable(const shape_set& delta,
                                        const std::vector<tgd>& rules,
                                        const rule_index& index);

// dsimple_D(Sigma): fixpoint of applicable() seeded with the database shapes
// (restricted to predicates of the rule schema), processing only the newly
// discovered shapes per round.
simplified_rule_set dyn_simplification(const shape_set& db_shapes,
                                       const std::vector<tgd>& rules);

}  // namespace chasetc
