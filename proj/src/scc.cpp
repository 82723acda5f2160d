#include "chasetc/scc.hpp"

#include <algorithm>

namespace chasetc {

namespace {
constexpr int32_t kToken = -1;  // component-stack marker for a special edge
}

std::vector<special_scc> find_special_scc(const dep_graph& g) {
  const size_t n = g.nodes.size();
  std::vector<int32_t> visit(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int32_t> comp_stack;  // node ids interleaved with kToken entries

  struct frame {
    int32_t node;
    size_t next_edge;
  };
  std::vector<frame> dfs;

  int32_t counter = 0;
  int32_t n_comps = 0;
  std::vector<std::vector<int32_t>> candidates;  // members of token-marked comps
  std::vector<int32_t> witness_of;

  for (size_t root = 0; root < n; ++root) {
    if (visit[root] >= 0) continue;
    visit[root] = low[root] = counter++;
    comp_stack.push_back(int32_t(root));
    on_stack[root] = 1;
    dfs.push_back({int32_t(root), 0});

    while (!dfs.empty()) {
      frame& f = dfs.back();
      const auto& edges = g.fwd[size_t(f.node)];
      if (f.next_edge < edges.size()) {
        const auto e = edges[f.next_edge++];
        // Token for every traversed special edge, including edges into
        // already-visited nodes; over-attribution is fixed by the post-filter.
        if (e.special) comp_stack.push_back(kToken);
        if (visit[size_t(e.to)] < 0) {
          visit[size_t(e.to)] = low[size_t(e.to)] = counter++;
          comp_stack.push_back(e.to);
          on_stack[size_t(e.to)] = 1;
          dfs.push_back({e.to, 0});
        } else if (on_stack[size_t(e.to)]) {
          low[size_t(f.node)] = std::min(low[size_t(f.node)], visit[size_t(e.to)]);
        }
        continue;
      }

      int32_t v = f.node;
      dfs.pop_back();
      if (!dfs.empty())
        low[size_t(dfs.back().node)] = std::min(low[size_t(dfs.back().node)], low[size_t(v)]);

      if (low[size_t(v)] == visit[size_t(v)]) {
        // Pop the component; tokens above the root belong to it.
        std::vector<int32_t> members;
        bool token_seen = false;
        while (true) {
          int32_t entry = comp_stack.back();
          comp_stack.pop_back();
          if (entry == kToken) {
            token_seen = true;
            continue;
          }
          members.push_back(entry);
          on_stack[size_t(entry)] = 0;
          comp[size_t(entry)] = n_comps;
          if (entry == v) break;
        }
        ++n_comps;
        if (token_seen) {
          int32_t w = members[0];
          for (int32_t m : members)
            if (visit[size_t(m)] < visit[size_t(w)]) w = m;
          candidates.push_back(std::move(members));
          witness_of.push_back(w);
        } else {
          candidates.emplace_back();  // keep candidate index aligned with comp id
          witness_of.push_back(-1);
        }
      }
    }
  }

  // Post-filter: a candidate counts only with a special edge inside it.
  std::vector<special_scc> out;
  for (size_t c = 0; c < candidates.size(); ++c) {
    auto& members = candidates[c];
    if (members.empty()) continue;
    bool internal_special = false;
    for (int32_t m : members) {
      for (const auto& e : g.fwd[size_t(m)]) {
        if (e.special && comp[size_t(e.to)] == comp[size_t(m)]) {
          internal_special = true;
          break;
        }
      }
      if (internal_special) break;
    }
    if (!internal_special) continue;
    std::sort(members.begin(), members.end());
    out.push_back(special_scc{std::move(members), witness_of[c]});
  }
  std::sort(out.begin(), out.end(), [](const special_scc& a, const special_scc& b) {
    return a.members[0] < b.members[0];
  });
  return out;
}

}  // namespace chasetc
