#include "doctest.h"

#include <algorithm>

#include "chasetc/simplify.hpp"
#include "oracles.hpp"

using namespace chasetc;
using oracles::fact;
using oracles::rules_of;
using oracles::var;

namespace {

std::vector<std::string> labels_of(const std::vector<specialization>& specs) {
  std::vector<std::string> out;
  for (const specialization& s : specs) out.push_back(s.label());
  return out;
}

std::set<std::string> keys_of(const std::vector<simplified_rule>& rules) {
  std::set<std::string> out;
  for (const simplified_rule& r : rules) out.insert(canonical_key(r.rule));
  return out;
}

shape shape_for(const std::string& pred, int arity, std::vector<uint8_t> digits) {
  return shape{predicates::intern(pred, arity), pack_digits(digits)};
}

}  // namespace

TEST_CASE("specializations enumerate partitions of the distinct body variables") {
  term x = var("x"), y = var("y"), z = var("z");

  auto two = specializations({x, y});
  CHECK(labels_of(two) == std::vector<std::string>{"{x->x,y->x}", "{x->x,y->y}"});

  auto one = specializations({x, x});
  CHECK(labels_of(one) == std::vector<std::string>{"{x->x}"});

  auto five = specializations({x, y, z});
  CHECK(labels_of(five) == std::vector<std::string>{
                               "{x->x,y->x,z->x}",
                               "{x->x,y->x,z->z}",
                               "{x->x,y->y,z->x}",
                               "{x->x,y->y,z->y}",
                               "{x->x,y->y,z->z}",
                           });

  // Repeated variables shrink the domain: (x,y,x) has two distinct variables.
  CHECK(specializations({x, y, x}).size() == 2);
}

TEST_CASE("apply is the identity off the specialization domain") {
  term x = var("x"), y = var("y"), q = var("q");
  auto specs = specializations({x, y});
  CHECK(specs[0].apply(y) == x);
  CHECK(specs[0].apply(q) == q);  // existentials pass through
  CHECK(specs[1].apply(y) == y);
}

TEST_CASE("simplify_rule folds each atom onto its shape predicate") {
  auto rules = rules_of("R(x,x) -> R(z,x)\n");
  auto id = specializations(rules[0].body[0].args);
  REQUIRE(id.size() == 1);

  tgd got = simplify_rule(rules[0], id[0], 7);
  CHECK(got.id == 7);
  CHECK(render_rule(got) == "R_1_1(x) -> R_1_2(z,x)");
  CHECK(got.is_simple_linear());
  CHECK(got.existentials == std::vector<term>{var("z")});
}

TEST_CASE("simplify_rule under the identity and under a merge") {
  auto rules = rules_of("R(x,y) -> R(y,z)\n");
  auto specs = specializations(rules[0].body[0].args);
  REQUIRE(specs.size() == 2);

  // specs come in lexicographic partition order: the merge {y->x} first.
  tgd merged = simplify_rule(rules[0], specs[0], 1);
  CHECK(render_rule(merged) == "R_1_1(x) -> R_1_2(x,z)");

  tgd ident = simplify_rule(rules[0], specs[1], 2);
  CHECK(render_rule(ident) == "R_1_2(x,y) -> R_1_2(y,z)");
}

TEST_CASE("canonical_key identifies rules up to variable renaming") {
  auto a = rules_of("R(x,y) -> S(y,z)\n");
  auto b = rules_of("R(u,w) -> S(w,q)\n");
  auto c = rules_of("R(x,y) -> S(x,z)\n");
  CHECK(canonical_key(a[0]) == canonical_key(b[0]));
  CHECK(canonical_key(a[0]) != canonical_key(c[0]));
}

TEST_CASE("static_simplify sizes follow the specialization counts") {
  // Two distinct body variables -> two specializations, no collisions.
  auto set2 = static_simplify(rules_of("R(x,y) -> R(y,z)\n"));
  CHECK(set2.rules.size() == 2);
  CHECK(set2.keys() == std::set<std::string>{
                           canonical_key(rules_of("R_1_1(x) -> R_1_2(x,z)\n")[0]),
                           canonical_key(rules_of("R_1_2(x,y) -> R_1_2(y,z)\n")[0]),
                       });

  // A repeated body variable leaves a single specialization.
  auto set1 = static_simplify(rules_of("R(x,x) -> R(z,x)\n"));
  CHECK(set1.rules.size() == 1);
  CHECK(set1.rules[0].source_id == 1);
  CHECK(set1.rules[0].spec == "{x->x}");

  CHECK(static_simplify({}).rules.empty());
}

TEST_CASE("static_simplify deduplicates across source rules") {
  // Both rules collapse onto the same two simplifications.
  auto set = static_simplify(rules_of("R(x,y) -> R(y,z)\nR(u,w) -> R(w,v)\n"));
  CHECK(set.rules.size() == 2);
  CHECK(set.keys().size() == 2);
}

TEST_CASE("applicable: a repeated-variable body needs the merged shape") {
  auto rules = rules_of("R(x,x) -> R(z,x)\n");
  rule_index idx = rule_index::build(rules);

  // R_(1,2) is incompatible with the body's forced merge.
  CHECK(applicable({shape_for("R", 2, {1, 2})}, rules, idx).empty());

  auto hit = applicable({shape_for("R", 2, {1, 1})}, rules, idx);
  REQUIRE(hit.size() == 1);
  CHECK(render_rule(hit[0].rule) == "R_1_1(x) -> R_1_2(z,x)");

  CHECK(applicable({}, rules, idx).empty());
}

TEST_CASE("applicable picks the specialization matching the shape") {
  auto rules = rules_of("R(x,y) -> R(y,z)\n");
  rule_index idx = rule_index::build(rules);

  auto merged = applicable({shape_for("R", 2, {1, 1})}, rules, idx);
  REQUIRE(merged.size() == 1);
  CHECK(render_rule(merged[0].rule) == "R_1_1(x) -> R_1_2(x,z)");
  CHECK(merged[0].spec == "{x->x,y->x}");

  auto ident = applicable({shape_for("R", 2, {1, 2})}, rules, idx);
  REQUIRE(ident.size() == 1);
  CHECK(render_rule(ident[0].rule) == "R_1_2(x,y) -> R_1_2(y,z)");

  // Shapes of predicates no rule reads trigger nothing.
  CHECK(applicable({shape_for("S", 2, {1, 2})}, rules, idx).empty());
}

TEST_CASE("applicable matches the odometer enumeration on random instances") {
  for (uint64_t seed = 1; seed <= 120; ++seed) {
    auto inst = oracles::random_instance(seed, 4, 3, 6, 8, true);
    rule_index idx = rule_index::build(inst.rules);
    shape_set delta = find_shapes_memory(inst.db);
    CAPTURE(seed);
    CHECK(keys_of(applicable(delta, inst.rules, idx)) ==
          oracles::applicable_brute_keys(delta, inst.rules));
  }
}

TEST_CASE("dyn_simplification of an unmatched repeated-variable body is empty") {
  database db;
  db.insert(fact("R", {"a", "b"}));
  auto rules = rules_of("R(x,x) -> R(z,x)\n");
  auto got = dyn_simplification(find_shapes_memory(db), rules);
  CHECK(got.rules.empty());
  CHECK(got.iterations >= 1);
}

TEST_CASE("dyn_simplification saturates from the database shapes") {
  database db;
  db.insert(fact("R", {"a", "a"}));
  auto rules = rules_of("R(x,x) -> R(z,x)\nR(x,y) -> R(z,x)\n");
  auto got = dyn_simplification(find_shapes_memory(db), rules);

  // R_(1,1) triggers both rules onto the same simplification; the produced
  // R_(1,2) then re-triggers the unconstrained rule.
  CHECK(got.keys() == std::set<std::string>{
                          canonical_key(rules_of("R_1_1(x) -> R_1_2(z,x)\n")[0]),
                          canonical_key(rules_of("R_1_2(x,y) -> R_1_2(z,x)\n")[0]),
                      });
}

TEST_CASE("database shapes outside the rule schema are ignored") {
  database db;
  db.insert(fact("R", {"a", "a"}));
  db.insert(fact("Unrelated", {"a", "b", "c"}));
  auto rules = rules_of("R(x,y) -> R(y,z)\n");
  auto with = dyn_simplification(find_shapes_memory(db), rules);

  database only_r;
  only_r.insert(fact("R", {"a", "a"}));
  auto without = dyn_simplification(find_shapes_memory(only_r), rules);
  CHECK(with.keys() == without.keys());
}

TEST_CASE("the dynamic set is a subset of the static one") {
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    auto inst = oracles::random_instance(seed, 4, 3, 6, 10, true);
    auto dyn = dyn_simplification(find_shapes_memory(inst.db), inst.rules);
    auto all = static_simplify(inst.rules);
    auto dyn_keys = dyn.keys();
    auto all_keys = all.keys();
    CAPTURE(seed);
    CHECK(std::includes(all_keys.begin(), all_keys.end(), dyn_keys.begin(),
                        dyn_keys.end()));
  }
}

TEST_CASE("the delta worklist reaches the same fixpoint as full re-derivation") {
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    auto inst = oracles::random_instance(seed, 4, 3, 6, 10, true);
    shape_set s0 = find_shapes_memory(inst.db);
    auto got = dyn_simplification(s0, inst.rules);
    CAPTURE(seed);
    CHECK(got.keys() == oracles::dyn_full_keys(s0, inst.rules));
  }
}

TEST_CASE("iteration count is bounded by the schema's shape space") {
  database db;
  db.insert(fact("R", {"a", "a"}));
  auto rules = rules_of("R(x,y) -> R(y,z)\n");
  auto got = dyn_simplification(find_shapes_memory(db), rules);
  // sch has one binary predicate: at most 2 shapes, so at most 3 rounds.
  CHECK(got.iterations <= 3);
}
