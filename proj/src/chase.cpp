#include "chasetc/chase.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <unordered_set>

namespace chasetc {

std::string frontier_fingerprint(const tgd& r, const std::map<term, term>& h) {
  // Frontier variables are stored sorted, so iteration order is canonical.
  std::string fp;
  for (const term& x : r.frontier) {
    const term& img = h.at(x);
    fp += symbols::name(x) + "=";
    fp += img.kind == term_kind::null ? "n:" + std::to_string(img.id)
                                      : "c:" + symbols::name(img);
    fp += ";";
  }
  return fp;
}

std::vector<atom> trigger_result(const tgd& r, const std::map<term, term>& h) {
  std::string fp = frontier_fingerprint(r, h);
  std::map<term, term> full = h;
  for (const term& z : r.existentials)
    full[z] = symbols::null_for(null_origin{r.id, fp, symbols::name(z)});
  std::vector<atom> out;
  out.reserve(r.head.size());
  for (const atom& a : r.head) {
    atom inst = a;
    for (term& t : inst.args) t = full.at(t);
    out.push_back(std::move(inst));
  }
  return out;
}

namespace {

struct instance {
  std::vector<atom> atoms;
  std::unordered_set<atom, atom_hash> seen;
  std::map<pred_id, std::vector<size_t>> by_pred;

  bool add(const atom& a) {
    if (!seen.insert(a).second) return false;
    by_pred[a.pred].push_back(atoms.size());
    atoms.push_back(a);
    return true;
  }
};

// Enumerates homomorphisms from the body atoms into the atom prefix visible
// this round (per-predicate index positions < the round snapshot). A match
// that stays entirely below `previous` was already enumerated in an earlier
// round, so only matches touching the last round's delta are emitted; when the
// final body atom is reached with the delta still untouched, the scan can
// start there directly. Emission order is a subsequence of the full scan, so
// firing order is unchanged.
void match_body(const instance& inst, const std::map<pred_id, size_t>& snapshot,
                const std::map<pred_id, size_t>& previous, const tgd& r,
                size_t atom_idx, bool in_delta, std::map<term, term>& h,
                const std::function<void(const std::map<term, term>&)>& emit) {
  if (atom_idx == r.body.size()) {
    if (in_delta) emit(h);
    return;
  }
  const atom& pattern = r.body[atom_idx];
  auto it = inst.by_pred.find(pattern.pred);
  if (it == inst.by_pred.end()) return;
  auto snap = snapshot.find(pattern.pred);
  size_t limit = snap == snapshot.end() ? 0 : snap->second;
  auto old = previous.find(pattern.pred);
  size_t fresh_from = old == previous.end() ? 0 : old->second;
  size_t start = !in_delta && atom_idx + 1 == r.body.size() ? fresh_from : 0;
  for (size_t k = start; k < it->second.size() && k < limit; ++k) {
    const atom& candidate = inst.atoms[it->second[k]];
    std::vector<term> bound;
    bool ok = true;
    for (size_t i = 0; i < pattern.args.size() && ok; ++i) {
      const term& v = pattern.args[i];
      auto [hit, fresh] = h.emplace(v, candidate.args[i]);
      if (fresh)
        bound.push_back(v);
      else if (!(hit->second == candidate.args[i]))
        ok = false;
    }
    if (ok)
      match_body(inst, snapshot, previous, r, atom_idx + 1,
                 in_delta || k >= fresh_from, h, emit);
    for (const term& v : bound) h.erase(v);
  }
}

}  // namespace

chase_result run_chase(const database& db, const std::vector<tgd>& rules,
                       size_t max_atoms, size_t max_rounds) {
  instance inst;
  for (const auto& [p, tuples] : db.relations())
    for (const auto& tuple : tuples) inst.add(atom{p, tuple});

  chase_result out;
  std::set<std::pair<size_t, std::vector<term>>> fired;  // (rule, frontier image)
  std::map<pred_id, size_t> previous;  // per-predicate sizes one round back

  for (size_t round = 1;; ++round) {
    if (round > max_rounds) {
      out.outcome = chase_outcome::round_budget_exceeded;
      break;
    }
    // Triggers see only the instance as of the end of the previous round.
    std::map<pred_id, size_t> snapshot;
    for (const auto& [p, idxs] : inst.by_pred) snapshot[p] = idxs.size();

    bool grew = false;
    bool atoms_blown = false;
    for (size_t ri = 0; ri < rules.size() && !atoms_blown; ++ri) {
      const tgd& r = rules[ri];
      std::map<term, term> h;
      match_body(inst, snapshot, previous, r, 0, round == 1, h,
                 [&](const std::map<term, term>& full) {
        if (atoms_blown) return;
        std::vector<term> image;
        image.reserve(r.frontier.size());
        for (const term& x : r.frontier) image.push_back(full.at(x));
        if (!fired.emplace(ri, std::move(image)).second) return;
        for (const atom& a : trigger_result(r, full)) {
          if (inst.add(a)) {
            grew = true;
            if (inst.atoms.size() > max_atoms) atoms_blown = true;
          }
        }
      });
    }
    out.rounds = round;
    if (atoms_blown) {
      out.outcome = chase_outcome::atom_budget_exceeded;
      break;
    }
    if (!grew) {
      out.outcome = chase_outcome::fixpoint;
      break;
    }
    previous = std::move(snapshot);
  }
  out.atoms = std::move(inst.atoms);
  return out;
}

void dump_instance(const chase_result& r, std::ostream& out) {
  for (const atom& a : r.atoms) out << render_atom(a) << ".\n";
}

namespace {

struct naive_graph {
  std::vector<position> nodes;
  std::map<position, int> index;
  std::vector<std::vector<char>> normal, special;  // adjacency matrices

  int node(const position& p) {
    auto it = index.find(p);
    if (it != index.end()) return it->second;
    int id = int(nodes.size());
    nodes.push_back(p);
    index.emplace(p, id);
    return id;
  }
};

}  // namespace

bool naive_wa_check(const std::set<pred_id>& catalog, const std::vector<tgd>& rules) {
  // Direct transcription of the edge rules, one pair of nested loops per rule.
  naive_graph g;
  struct raw_edge {
    position from, to;
    bool special;
  };
  std::vector<raw_edge> edges;
  for (const tgd& r : rules) {
    for (const term& x : r.frontier) {
      for (const position& pi : positions_of_variable(r.body, x)) {
        for (const atom& a : r.head) {
          for (size_t i = 0; i < a.args.size(); ++i) {
            position target{a.pred, int32_t(i + 1)};
            bool arg_is_existential =
                std::binary_search(r.existentials.begin(), r.existentials.end(), a.args[i]);
            if (a.args[i] == x) edges.push_back({pi, target, false});
            if (arg_is_existential) edges.push_back({pi, target, true});
          }
        }
        g.node(pi);
      }
    }
    for (const atom& a : r.head)
      for (size_t i = 0; i < a.args.size(); ++i) g.node(position{a.pred, int32_t(i + 1)});
  }
  for (const raw_edge& e : edges) {
    g.node(e.from);
    g.node(e.to);
  }

  size_t n = g.nodes.size();
  if (n > 60) throw std::invalid_argument("naive_wa_check is limited to 60 positions");
  g.normal.assign(n, std::vector<char>(n, 0));
  g.special.assign(n, std::vector<char>(n, 0));
  for (const raw_edge& e : edges) {
    auto& m = e.special ? g.special : g.normal;
    m[size_t(g.index.at(e.from))][size_t(g.index.at(e.to))] = 1;
  }

  // reach = transitive closure over both edge kinds (not reflexive).
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) reach[i][j] = g.normal[i][j] | g.special[i][j];
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  // Predicates reachable from the database: equal to a catalog predicate, or
  // at the end of a path starting in any position of one.
  std::set<pred_id> supported = catalog;
  for (size_t i = 0; i < n; ++i) {
    if (!catalog.count(g.nodes[i].pred)) continue;
    for (size_t j = 0; j < n; ++j)
      if (reach[i][j]) supported.insert(g.nodes[j].pred);
  }

  // A special edge (u,v), a way back from v to u, and a supported node lying
  // on some cycle through the edge.
  for (size_t u = 0; u < n; ++u) {
    for (size_t v = 0; v < n; ++v) {
      if (!g.special[u][v]) continue;
      if (!(u == v || reach[v][u])) continue;
      for (size_t w = 0; w < n; ++w) {
        bool from_v = (w == v) || reach[v][w];
        bool to_u = (w == u) || reach[w][u];
        if (from_v && to_u && supported.count(g.nodes[w].pred)) return true;
      }
    }
  }
  return false;
}

}  // namespace chasetc
