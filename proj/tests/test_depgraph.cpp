#include "doctest.h"

#include <sstream>

#include "chasetc/depgraph.hpp"
#include "oracles.hpp"

using namespace chasetc;
using oracles::dep_edges_brute;
using oracles::edge_triple;
using oracles::edges_of;
using oracles::rules_of;

namespace {

position pos(const std::string& name, int arity, int idx) {
  return position{predicates::intern(name, arity), idx};
}

}  // namespace

TEST_CASE("edges of R(x,y) -> R(y,z): frontier y feeds both targets") {
  // x never reaches the head, so (R,1) has no outgoing edges; the single
  // frontier position (R,2) gets the normal copy edge and the special edge
  // into the existential position.
  dep_graph g = build_dep_graph(rules_of("R(x,y) -> R(y,z)\n"));

  std::set<edge_triple> expected{
      {pos("R", 2, 2), pos("R", 2, 1), false},
      {pos("R", 2, 2), pos("R", 2, 2), true},
  };
  CHECK(edges_of(g) == expected);
  CHECK(edges_of(g) == dep_edges_brute(rules_of("R(x,y) -> R(y,z)\n")));

  CHECK(g.node_of(pos("R", 2, 1)) >= 0);
  CHECK(g.node_of(pos("R", 2, 2)) >= 0);
  CHECK(g.node_of(pos("R", 2, 3)) == -1);
}

TEST_CASE("edges of R(x,x) -> R(z,x): both body positions fan out") {
  dep_graph g = build_dep_graph(rules_of("R(x,x) -> R(z,x)\n"));

  std::set<edge_triple> expected{
      {pos("R", 2, 1), pos("R", 2, 2), false},
      {pos("R", 2, 2), pos("R", 2, 2), false},
      {pos("R", 2, 1), pos("R", 2, 1), true},
      {pos("R", 2, 2), pos("R", 2, 1), true},
  };
  CHECK(edges_of(g) == expected);
}

TEST_CASE("edges of R(x,y) -> P(x): one normal edge, no special edges") {
  dep_graph g = build_dep_graph(rules_of("R(x,y) -> P(x)\n"));
  std::set<edge_triple> expected{{pos("R", 2, 1), pos("P", 1, 1), false}};
  CHECK(edges_of(g) == expected);
}

TEST_CASE("repeated head atoms collapse to one edge per kind") {
  // x lands twice in T and z twice as well; each ordered pair keeps at most
  // one normal and one special edge.
  dep_graph g = build_dep_graph(rules_of("R(x,y) -> T(x,z), T(x,z)\n"));
  std::set<edge_triple> expected{
      {pos("R", 2, 1), pos("T", 2, 1), false},
      {pos("R", 2, 1), pos("T", 2, 2), true},
  };
  CHECK(edges_of(g) == expected);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("multi-head rules spread edges over every head atom") {
  dep_graph g = build_dep_graph(rules_of("R(x,y) -> S(x,z), P(z)\n"));
  std::set<edge_triple> expected{
      {pos("R", 2, 1), pos("S", 2, 1), false},
      {pos("R", 2, 1), pos("S", 2, 2), true},
      {pos("R", 2, 1), pos("P", 1, 1), true},
  };
  CHECK(edges_of(g) == expected);
}

TEST_CASE("reverse adjacency mirrors the forward edges exactly") {
  auto rules = rules_of(
      "R(x,y) -> R(y,z)\n"
      "R(x,x) -> S(x,x)\n"
      "S(x,y) -> R(x,w), S(w,y)\n");
  dep_graph g = build_dep_graph(rules);
  CHECK(edges_of(g) == oracles::rev_edges_of(g));
}

TEST_CASE("graph matches the literal edge enumeration on random rule sets") {
  for (uint64_t seed = 1; seed <= 150; ++seed) {
    auto inst = oracles::random_instance(seed, 5, 4, 10, 0, seed % 2 == 0);
    dep_graph g = build_dep_graph(inst.rules);
    CAPTURE(seed);
    CHECK(edges_of(g) == dep_edges_brute(inst.rules));
    CHECK(edges_of(g) == oracles::rev_edges_of(g));
  }
}

TEST_CASE("reverse_reachable walks a chain back to its sources") {
  dep_graph g = build_dep_graph(rules_of("A(x) -> B(x)\nB(x) -> C(x)\n"));
  int32_t a = g.node_of(pos("A", 1, 1));
  int32_t b = g.node_of(pos("B", 1, 1));
  int32_t c = g.node_of(pos("C", 1, 1));

  std::vector<int32_t> expected{a, b, c};
  std::sort(expected.begin(), expected.end());
  CHECK(reverse_reachable(g, {c}) == expected);
  CHECK(reverse_reachable(g, {a}) == std::vector<int32_t>{a});
}

TEST_CASE("reverse_reachable of an isolated node is just that node") {
  dep_graph g = oracles::graph_of(3, {{0, 1, false}});
  CHECK(reverse_reachable(g, {2}) == std::vector<int32_t>{2});
  CHECK_THROWS_AS(reverse_reachable(g, {7}), std::invalid_argument);
}

TEST_CASE("reverse_reachable from (R,2) in the copy-rule graph") {
  // Only (R,2) reaches itself: (R,1) has no outgoing edges at all.
  dep_graph g = build_dep_graph(rules_of("R(x,y) -> R(y,z)\n"));
  int32_t r2 = g.node_of(pos("R", 2, 2));
  CHECK(reverse_reachable(g, {r2}) == std::vector<int32_t>{r2});
}

TEST_CASE("reverse_reachable agrees with the dense closure on random graphs") {
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    dep_graph g = oracles::random_graph(seed, 50);
    rng r(seed);
    std::vector<int32_t> starts{int32_t(r.below(g.nodes.size()))};
    if (g.nodes.size() > 1) starts.push_back(int32_t(r.below(g.nodes.size())));
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    CAPTURE(seed);
    CHECK(reverse_reachable(g, starts) == oracles::reverse_reachable_brute(g, starts));
  }
}

TEST_CASE("dump_graph renders sorted labeled edges") {
  dep_graph g = build_dep_graph(rules_of("R(x,x) -> R(z,x)\n"));
  std::ostringstream out;
  dump_graph(g, out);
  CHECK(out.str() ==
        "(R,1) -[normal]-> (R,2)\n"
        "(R,1) -[special]-> (R,1)\n"
        "(R,2) -[normal]-> (R,2)\n"
        "(R,2) -[special]-> (R,1)\n");
}

TEST_CASE("node count stays within the schema position bound") {
  auto rules = rules_of("R(x,y) -> S(x,z)\nS(x,y) -> R(y,x)\n");
  dep_graph g = build_dep_graph(rules);
  CHECK(g.nodes.size() <= 4);  // two binary predicates
  for (const position& p : g.nodes) {
    CHECK(p.idx >= 1);
    CHECK(p.idx <= predicates::arity(p.pred));
  }
}
