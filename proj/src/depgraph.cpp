#include "chasetc/depgraph.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

namespace chasetc {

namespace {

int32_t node_of_or_add(dep_graph& g, const position& p) {
  uint64_t key = (uint64_t(uint32_t(p.pred)) << 16) | uint32_t(p.idx);
  auto [it, fresh] = g.index.emplace(key, int32_t(g.nodes.size()));
  if (fresh) {
    g.nodes.push_back(p);
    g.fwd.emplace_back();
    g.rev.emplace_back();
  }
  return it->second;
}

}  // namespace

dep_graph build_dep_graph(const std::vector<tgd>& rules) {
  dep_graph g;
  std::unordered_set<uint64_t> dedup;
  auto add_edge = [&](int32_t src, int32_t tgt, bool special) {
    uint64_t key = ((uint64_t(uint32_t(src)) << 32) | uint32_t(tgt)) << 1 |
                   uint64_t(special);
    if (!dedup.insert(key).second) return;
    g.fwd[size_t(src)].push_back({tgt, special});
    g.rev[size_t(tgt)].push_back({src, special});
  };

  for (const tgd& r : rules) {
    // Head positions per variable, interned once per rule.
    std::map<term, std::vector<int32_t>> head_pos;
    for (const atom& a : r.head)
      for (size_t i = 0; i < a.args.size(); ++i)
        head_pos[a.args[i]].push_back(
            node_of_or_add(g, position{a.pred, int32_t(i + 1)}));

    std::vector<int32_t> existential_pos;
    for (const term& z : r.existentials) {
      const auto& ps = head_pos[z];
      existential_pos.insert(existential_pos.end(), ps.begin(), ps.end());
    }

    for (const term& x : r.frontier) {
      for (const position& pi : positions_of_variable(r.body, x)) {
        int32_t src = node_of_or_add(g, pi);
        for (int32_t tgt : head_pos[x]) add_edge(src, tgt, false);
        for (int32_t tgt : existential_pos) add_edge(src, tgt, true);
      }
    }
  }
  return g;
}

std::vector<int32_t> reverse_reachable(const dep_graph& g,
                                       const std::vector<int32_t>& starts) {
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<int32_t> stack;
  for (int32_t s : starts) {
    if (s < 0 || size_t(s) >= g.nodes.size())
      throw std::invalid_argument("reverse_reachable: start node out of range");
    if (!seen[size_t(s)]) {
      seen[size_t(s)] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    for (const auto& e : g.rev[size_t(v)]) {
      if (!seen[size_t(e.to)]) {
        seen[size_t(e.to)] = 1;
        stack.push_back(e.to);
      }
    }
  }
  std::vector<int32_t> out;
  for (size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(int32_t(i));
  return out;
}

void dump_graph(const dep_graph& g, std::ostream& out) {
  std::vector<std::string> lines;
  for (size_t v = 0; v < g.fwd.size(); ++v)
    for (const auto& e : g.fwd[v])
      lines.push_back(render_position(g.nodes[v]) +
                      (e.special ? " -[special]-> " : " -[normal]-> ") +
                      render_position(g.nodes[size_t(e.to)]));
  std::sort(lines.begin(), lines.end());
  for (const std::string& l : lines) out << l << "\n";
}

}  // namespace chasetc
