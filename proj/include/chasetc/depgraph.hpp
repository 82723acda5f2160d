#pragma once

#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "chasetc/model.hpp"

namespace chasetc {

// Position dependency graph. Nodes are positions (R,i) touched by the rules;
// adjacency is doubly linked (every forward edge has its mirror in rev) and
// deduplicated: at most one normal and one special edge per ordered pair.
struct dep_graph {
  struct edge {
    int32_t to = -1;  // node index (source index for rev entries)
    bool special = false;
  };

  std::vector<position> nodes;
  std::vector<std::vector<edge>> fwd;
  std::vector<std::vector<edge>> rev;
  std::unordered_map<uint64_t, int32_t> index;  // packed (pred, idx) -> node

  int32_t node_of(const position& p) const {
    auto it = index.find((uint64_t(uint32_t(p.pred)) << 16) | uint32_t(p.idx));
    return it == index.end() ? -1 : it->second;
  }
  size_t edge_count() const {
    size_t n = 0;
    for (const auto& es : fwd) n += es.size();
    return n;
  }
};

// Builds the graph in one pass over the rules: for every rule, every frontier
// variable x and every body position pi of x, a normal edge goes from pi to
// each position of x in each head atom, and a special edge goes from pi to
// each position of each existential variable in each head atom.
dep_graph build_dep_graph(const std::vector<tgd>& rules);

// All nodes from which some node in `starts` is reachable (starts included).
// Returns sorted node indices.
std::vector<int32_t> reverse_reachable(const dep_graph& g,
                                       const std::vector<int32_t>& starts);

// One "(R,i) -[normal|special]-> (P,j)" line per edge, sorted.
void dump_graph(const dep_graph& g, std::ostream& out);

}  // namespace chasetc
