#include "doctest.h"

#include <set>

#include "chasetc/model.hpp"
#include "oracles.hpp"

using namespace chasetc;
using oracles::fact;
using oracles::rules_of;
using oracles::var;

TEST_CASE("terms intern by name and kind") {
  term a1 = symbols::constant("a");
  term a2 = symbols::constant("a");
  term b = symbols::constant("b");
  term xa = symbols::variable("a");  // same spelling, different kind

  CHECK(a1 == a2);
  CHECK_FALSE(a1 == b);
  CHECK_FALSE(a1 == xa);
  CHECK(symbols::name(a1) == "a");
  CHECK(symbols::render(b) == "b");
}

TEST_CASE("null identity is the (rule, frontier fingerprint, variable) origin") {
  null_origin o1{7, "x=c:3;", "z"};
  null_origin o2{7, "x=c:3;", "z"};
  null_origin o3{7, "x=c:4;", "z"};
  null_origin o4{8, "x=c:3;", "z"};

  term n1 = symbols::null_for(o1);
  CHECK(n1 == symbols::null_for(o2));
  CHECK_FALSE(n1 == symbols::null_for(o3));
  CHECK_FALSE(n1 == symbols::null_for(o4));
  CHECK(symbols::render(n1) == "_:n" + std::to_string(n1.id));
  CHECK_THROWS_AS(symbols::name(n1), std::logic_error);
}

TEST_CASE("predicates are keyed by name and arity") {
  pred_id r2 = predicates::intern("MR", 2);
  CHECK(r2 == predicates::intern("MR", 2));
  pred_id r3 = predicates::intern("MR", 3);
  CHECK(r2 != r3);
  CHECK(predicates::arity(r2) == 2);
  CHECK(predicates::arity(r3) == 3);
  CHECK(predicates::name(r3) == "MR");
  CHECK_FALSE(predicates::is_shape_pred(r2));
  CHECK_THROWS_AS(predicates::intern("MR", 0), std::invalid_argument);
}

TEST_CASE("make_tgd derives frontier, existentials and the simple flag") {
  auto rules = rules_of("R(x,y) -> S(y,z)\n");
  REQUIRE(rules.size() == 1);
  const tgd& r = rules[0];

  CHECK(r.id == 1);
  CHECK(r.frontier == std::vector<term>{var("y")});
  CHECK(r.existentials == std::vector<term>{var("z")});
  CHECK(r.simple);
  CHECK(r.is_linear());
  CHECK(r.is_simple_linear());

  auto rep = rules_of("R(x,x) -> R(z,x)\n");
  CHECK_FALSE(rep[0].simple);
  CHECK(rep[0].is_linear());
  CHECK_FALSE(rep[0].is_simple_linear());
  CHECK(rep[0].frontier == std::vector<term>{var("x")});
}

TEST_CASE("make_tgd rejects malformed rules") {
  pred_id p = predicates::intern("MP", 2);
  atom ok{p, {var("x"), var("y")}};
  CHECK_THROWS_AS(make_tgd(1, {}, {ok}), std::invalid_argument);
  CHECK_THROWS_AS(make_tgd(1, {ok}, {}), std::invalid_argument);

  atom short_args{p, {var("x")}};
  CHECK_THROWS_AS(make_tgd(1, {short_args}, {ok}), std::invalid_argument);

  atom with_const{p, {var("x"), symbols::constant("c")}};
  CHECK_THROWS_AS(make_tgd(1, {with_const}, {ok}), std::invalid_argument);
}

TEST_CASE("classify_rule_set returns the finest class") {
  CHECK(classify_rule_set(rules_of("R(x,y) -> R(y,z)\n")) == rule_class::simple_linear);
  CHECK(classify_rule_set(rules_of("R(x,x) -> R(z,x)\n")) == rule_class::linear);
  CHECK(classify_rule_set(rules_of("R(x,y), S(y) -> T(x)\n")) == rule_class::neither);

  // A mix of simple and repeated-variable bodies is linear, not simple-linear.
  CHECK(classify_rule_set(rules_of("R(x,y) -> R(y,z)\nR(x,x) -> R(z,x)\n")) ==
        rule_class::linear);
  CHECK(classify_rule_set({}) == rule_class::simple_linear);

  CHECK(to_string(rule_class::simple_linear) == "sl");
  CHECK(to_string(rule_class::linear) == "l");
  CHECK(to_string(rule_class::neither) == "neither");
}

TEST_CASE("positions_of_variable lists 1-based body positions") {
  auto rules = rules_of("R(x,y,x) -> S(x)\n");
  pred_id r3 = predicates::intern("R", 3);

  auto px = positions_of_variable(rules[0].body, var("x"));
  CHECK(px == std::vector<position>{{r3, 1}, {r3, 3}});
  auto py = positions_of_variable(rules[0].body, var("y"));
  CHECK(py == std::vector<position>{{r3, 2}});
  CHECK(positions_of_variable(rules[0].body, var("zzz")).empty());

  CHECK(render_position(position{r3, 2}) == "(R,2)");
}

TEST_CASE("database deduplicates and keeps a non-empty catalog") {
  database db;
  CHECK(db.insert(fact("MD", {"a", "b"})));
  CHECK_FALSE(db.insert(fact("MD", {"a", "b"})));
  CHECK(db.insert(fact("MD", {"b", "a"})));
  CHECK(db.size() == 2);
  CHECK(db.contains(fact("MD", {"a", "b"})));
  CHECK_FALSE(db.contains(fact("MD", {"a", "c"})));

  std::set<pred_id> cat = db.catalog();
  CHECK(cat == std::set<pred_id>{predicates::intern("MD", 2)});

  atom with_var{predicates::intern("MD", 2), {var("x"), symbols::constant("a")}};
  CHECK_THROWS_AS(db.insert(with_var), std::invalid_argument);
}

TEST_CASE("pad_empty_frontier is the identity when every frontier is non-empty") {
  auto rules = rules_of("R(x,y) -> R(y,z)\nS(x) -> R(x,x)\n");
  pad_result padded = pad_empty_frontier(rules);
  CHECK(padded.padded == 0);
  REQUIRE(padded.rules.size() == rules.size());
  for (size_t i = 0; i < rules.size(); ++i) {
    CHECK(padded.rules[i].body == rules[i].body);
    CHECK(padded.rules[i].head == rules[i].head);
  }
}

TEST_CASE("pad_empty_frontier widens the schema and adds seed rules") {
  auto rules = rules_of("R(x,y) -> R(z,w)\n");
  pad_result padded = pad_empty_frontier(rules);
  CHECK(padded.padded == 1);
  // One rewritten rule plus one seed rule for the single body predicate.
  REQUIRE(padded.rules.size() == 2);

  const tgd& rewritten = padded.rules[0];
  CHECK(predicates::name(rewritten.body[0].pred) == "R__t");
  CHECK(predicates::arity(rewritten.body[0].pred) == 3);
  CHECK(rewritten.frontier.size() == 1);  // the tag variable
  CHECK(rewritten.simple);

  const tgd& seed = padded.rules[1];
  CHECK(predicates::name(seed.body[0].pred) == "R");
  CHECK(predicates::name(seed.head[0].pred) == "R__t");
  CHECK(seed.head[0].args.back() == seed.body[0].args[0]);
  CHECK(seed.existentials.empty());

  // Class preservation: a simple-linear input stays simple-linear.
  CHECK(classify_rule_set(padded.rules) == rule_class::simple_linear);
}

TEST_CASE("pad_empty_frontier avoids tag-variable capture") {
  // The default tag name is already used by the rule, so padding must pick a
  // fresh one rather than fusing positions.
  auto rules = rules_of("R(ytag,y) -> R(u,w)\n");
  pad_result padded = pad_empty_frontier(rules);
  const tgd& rewritten = padded.rules[0];
  REQUIRE(rewritten.body[0].args.size() == 3);
  term tag = rewritten.body[0].args[2];
  CHECK_FALSE(tag == var("ytag"));
  CHECK(rewritten.head[0].args[2] == tag);
}
