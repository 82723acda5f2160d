#include "chasetc/termination.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

#include "chasetc/simplify.hpp"
#include "json.hpp"

namespace chasetc {

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

size_t count_predicates(const std::vector<tgd>& rules) {
  std::set<pred_id> ps;
  for (const tgd& r : rules) {
    for (const atom& a : r.body) ps.insert(a.pred);
    for (const atom& a : r.head) ps.insert(a.pred);
  }
  return ps.size();
}

// One special cycle inside a special SCC: a special edge (u,v) of the
// component plus a BFS path from v back to u through component members.
std::vector<std::string> special_cycle(const dep_graph& g, const special_scc& c) {
  std::set<int32_t> members(c.members.begin(), c.members.end());
  int32_t u = -1, v = -1;
  for (int32_t m : c.members) {
    for (const auto& e : g.fwd[size_t(m)]) {
      if (e.special && members.count(e.to)) {
        u = m;
        v = e.to;
        break;
      }
    }
    if (u >= 0) break;
  }
  std::vector<std::string> cycle{render_position(g.nodes[size_t(u)]),
                                 render_position(g.nodes[size_t(v)])};
  if (u == v) return cycle;  // special self-loop

  std::map<int32_t, int32_t> parent;
  std::deque<int32_t> queue{v};
  parent[v] = v;
  while (!queue.empty()) {
    int32_t x = queue.front();
    queue.pop_front();
    if (x == u) break;
    for (const auto& e : g.fwd[size_t(x)]) {
      if (members.count(e.to) && !parent.count(e.to)) {
        parent[e.to] = x;
        queue.push_back(e.to);
      }
    }
  }
  std::vector<std::string> path;
  for (int32_t x = u; x != v; x = parent.at(x))
    path.push_back(render_position(g.nodes[size_t(x)]));
  std::reverse(path.begin(), path.end());
  cycle.insert(cycle.end(), path.begin() + 1, path.end());
  cycle.push_back(render_position(g.nodes[size_t(u)]));
  return cycle;
}

}  // namespace

bool supports(const std::set<pred_id>& catalog, const std::vector<int32_t>& targets,
              const dep_graph& g, int32_t* hit_node) {
  for (int32_t node : reverse_reachable(g, targets)) {
    if (catalog.count(g.nodes[size_t(node)].pred)) {
      if (hit_node) *hit_node = node;
      return true;
    }
  }
  return false;
}

termination_report is_chase_finite_sl(const std::set<pred_id>& catalog,
                                      const std::vector<tgd>& rules,
                                      double t_parse_ms) {
  termination_report rep;
  rep.mode = rule_class::simple_linear;
  rep.t_parse = t_parse_ms;
  rep.n_rules = rules.size();
  rep.n_predicates = count_predicates(rules);

  pad_result padded = pad_empty_frontier(rules);
  rep.n_padded = size_t(padded.padded);
  if (classify_rule_set(padded.rules) != rule_class::simple_linear)
    throw std::invalid_argument("sl mode needs a simple-linear rule set");

  auto t0 = clock::now();
  dep_graph g = build_dep_graph(padded.rules);
  rep.t_graph = ms_since(t0);
  rep.n_nodes = g.nodes.size();
  rep.n_edges = g.edge_count();

  t0 = clock::now();
  std::vector<special_scc> sccs = find_special_scc(g);
  rep.verdict = chase_verdict::finite;
  for (const special_scc& c : sccs) {
    int32_t hit = -1;
    if (supports(catalog, {c.witness}, g, &hit)) {
      rep.verdict = chase_verdict::infinite;
      termination_witness w;
      for (int32_t m : c.members) w.scc.push_back(render_position(g.nodes[size_t(m)]));
      w.supported_by = predicates::name(g.nodes[size_t(hit)].pred);
      rep.witness = std::move(w);
      break;
    }
  }
  rep.t_comp = ms_since(t0);
  rep.t_total = rep.t_parse + rep.t_graph + rep.t_comp;
  return rep;
}

termination_report is_chase_finite_sl(const database& db, const std::vector<tgd>& rules,
                                      double t_parse_ms) {
  return is_chase_finite_sl(db.catalog(), rules, t_parse_ms);
}

termination_report is_chase_finite_l(const shape_set& db_shapes,
                                     const std::vector<tgd>& rules, double t_parse_ms,
                                     double t_shapes_ms) {
  termination_report rep;
  rep.mode = rule_class::linear;
  rep.t_parse = t_parse_ms;
  rep.t_shapes = t_shapes_ms;
  rep.n_rules = rules.size();
  rep.n_predicates = count_predicates(rules);
  rep.n_shapes = db_shapes.size();

  pad_result padded = pad_empty_frontier(rules);
  rep.n_padded = size_t(padded.padded);
  if (classify_rule_set(padded.rules) == rule_class::neither)
    throw std::invalid_argument("l mode needs a linear rule set");

  auto t0 = clock::now();
  simplified_rule_set dsimple = dyn_simplification(db_shapes, padded.rules);
  std::vector<tgd> simple_rules;
  simple_rules.reserve(dsimple.rules.size());
  for (const simplified_rule& sr : dsimple.rules) simple_rules.push_back(sr.rule);
  dep_graph g = build_dep_graph(simple_rules);
  rep.t_graph = ms_since(t0);
  rep.n_simplified = dsimple.rules.size();
  rep.n_nodes = g.nodes.size();
  rep.n_edges = g.edge_count();

  t0 = clock::now();
  std::vector<special_scc> sccs = find_special_scc(g);
  if (!sccs.empty()) {
    rep.verdict = chase_verdict::infinite;
    termination_witness w;
    for (int32_t m : sccs[0].members) w.scc.push_back(render_position(g.nodes[size_t(m)]));
    w.cycle = special_cycle(g, sccs[0]);
    rep.witness = std::move(w);
  }
  rep.t_comp = ms_since(t0);
  rep.t_total = rep.t_parse + rep.t_shapes + rep.t_graph + rep.t_comp;
  return rep;
}

termination_report is_chase_finite_l(const database& db, const std::vector<tgd>& rules,
                                     double t_parse_ms) {
  auto t0 = clock::now();
  shape_set shapes = find_shapes_memory(db);
  double t_shapes = ms_since(t0);
  return is_chase_finite_l(shapes, rules, t_parse_ms, t_shapes);
}

std::string termination_report::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict == chase_verdict::finite ? "finite" : "infinite";
  j["mode"] = to_string(mode);
  j["timings"] = {{"t_parse", t_parse}, {"t_shapes", t_shapes}, {"t_graph", t_graph},
                  {"t_comp", t_comp},   {"t_total", t_total}};
  j["counters"] = {{"n_rules", n_rules},
                  {"n_predicates", n_predicates},
                  {"n_padded_rules", n_padded},
                  {"n_shapes", n_shapes},
                  {"n_simplified_rules", n_simplified},
                  {"n_graph_nodes", n_nodes},
                  {"n_graph_edges", n_edges}};
  if (witness) {
    j["witness"]["scc"] = witness->scc;
    if (!witness->supported_by.empty()) j["witness"]["supported_by"] = witness->supported_by;
    if (!witness->cycle.empty()) j["witness"]["cycle"] = witness->cycle;
  }
  return j.dump(2);
}

std::string termination_report::csv_header() {
  return "verdict,mode,n_rules,n_predicates,n_padded_rules,n_shapes,"
         "n_simplified_rules,n_graph_nodes,n_graph_edges,t_parse,t_shapes,"
         "t_graph,t_comp,t_total";
}

std::string termination_report::to_csv_row() const {
  std::string row = verdict == chase_verdict::finite ? "finite" : "infinite";
  row += "," + to_string(mode);
  for (size_t v : {n_rules, n_predicates, n_padded, n_shapes, n_simplified, n_nodes, n_edges})
    row += "," + std::to_string(v);
  for (double t : {t_parse, t_shapes, t_graph, t_comp, t_total})
    row += "," + std::to_string(t);
  return row;
}

}  // namespace chasetc
