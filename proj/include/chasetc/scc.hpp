#pragma once

#include <vector>

#include "chasetc/depgraph.hpp"

namespace chasetc {

struct special_scc {
  std::vector<int32_t> members;  // node indices, sorted
  int32_t witness = -1;          // lowest-numbered member in visit order
};

// All strongly connected components that contain a special edge between two
// of their members (a singleton qualifies only via a special self-loop).
// Iterative Tarjan over an explicit stack; traversing a special edge pushes a
// token onto the component stack (even when the edge is ignored as a
// back/cross edge), a popped component is a candidate when a token is among
// its popped entries, and a cheap post-filter keeps only candidates with a
// genuine internal special edge. Components are returned sorted by smallest
// member; member order and the result set do not depend on adjacency
// insertion order.
std::vector<special_scc> find_special_scc(const dep_graph& g);

}  // namespace chasetc
