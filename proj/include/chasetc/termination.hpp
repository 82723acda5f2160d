#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chasetc/depgraph.hpp"
#include "chasetc/model.hpp"
#include "chasetc/scc.hpp"
#include "chasetc/shapes.hpp"

namespace chasetc {

enum class chase_verdict { finite, infinite };

struct termination_witness {
  std::vector<std::string> scc;          // rendered positions of one special SCC
  std::string supported_by;              // sl mode: the database predicate that supports it
  std::vector<std::string> cycle;        // l mode: one special cycle inside the SCC
};

// Phase timings are milliseconds; t_total is the exact sum of the phases
// reported for the mode (parse, graph, comp for sl; plus shapes for l).
struct termination_report {
  chase_verdict verdict = chase_verdict::finite;
  rule_class mode = rule_class::simple_linear;

  double t_parse = 0, t_shapes = 0, t_graph = 0, t_comp = 0, t_total = 0;

  size_t n_rules = 0;        // rules as given (before any padding)
  size_t n_predicates = 0;   // distinct predicates in the given rules
  size_t n_padded = 0;       // rules rewritten by empty-frontier padding
  size_t n_shapes = 0;       // database shapes (l mode)
  size_t n_simplified = 0;   // dsimple rules (l mode)
  size_t n_nodes = 0, n_edges = 0;

  std::optional<termination_witness> witness;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

// True iff some position of a non-empty database predicate lies in
// reverse_reachable(g, targets). On success the supporting node and its
// predicate are reported through the out-parameters when non-null.
bool supports(const std::set<pred_id>& catalog, const std::vector<int32_t>& targets,
              const dep_graph& g, int32_t* hit_node = nullptr);

// Decision procedure for simple-linear rules: infinite iff some special SCC
// of the dependency graph is supported by the database. Rules with an empty
// frontier are padded away first; the rules must (then) be simple-linear.
termination_report is_chase_finite_sl(const std::set<pred_id>& catalog,
                                      const std::vector<tgd>& rules,
                                      double t_parse_ms = 0);
termination_report is_chase_finite_sl(const database& db, const std::vector<tgd>& rules,
                                      double t_parse_ms = 0);

// Decision procedure for linear rules: infinite iff the dependency graph of
// dsimple_D(Sigma) has a special SCC (no supportedness check; every special
// cycle there is database-supported by construction). The graph-build timing
// includes the dynamic simplification.
termination_report is_chase_finite_l(const shape_set& db_shapes,
                                     const std::vector<tgd>& rules,
                                     double t_parse_ms = 0, double t_shapes_ms = 0);
termination_report is_chase_finite_l(const database& db, const std::vector<tgd>& rules,
                                     double t_parse_ms = 0);

}  // namespace chasetc
