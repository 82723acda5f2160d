#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chasetc/model.hpp"

namespace chasetc {

// A trigger is a rule plus a homomorphism from its body into the instance.
struct chase_trigger {
  size_t rule_idx = 0;
  std::map<term, term> h;  // body variable -> constant or null
};

// result(sigma, h): the instantiated head. Frontier variables map through h,
// each existential variable maps to the null identified by (rule id,
// canonical fingerprint of h restricted to the frontier, variable name).
std::vector<atom> trigger_result(const tgd& r, const std::map<term, term>& h);

// Canonical fingerprint of h restricted to the rule's frontier.
std::string frontier_fingerprint(const tgd& r, const std::map<term, term>& h);

enum class chase_outcome { fixpoint, atom_budget_exceeded, round_budget_exceeded };

struct chase_result {
  chase_outcome outcome = chase_outcome::fixpoint;
  std::vector<atom> atoms;  // insertion order: database first, then per-round
  size_t rounds = 0;        // rounds executed; at a fixpoint the last one adds nothing
  bool fixpoint() const { return outcome == chase_outcome::fixpoint; }
};

constexpr size_t kDefaultMaxAtoms = 100'000;
constexpr size_t kDefaultMaxRounds = 1'000;

// Breadth-first semi-oblivious chase: round i applies all triggers over the
// round i-1 instance; two triggers that agree on the frontier produce the
// same atoms (same nulls), so each (rule, frontier image) fires once. The
// result is a pure function of (db, rules, budgets).
chase_result run_chase(const database& db, const std::vector<tgd>& rules,
                       size_t max_atoms = kDefaultMaxAtoms,
                       size_t max_rounds = kDefaultMaxRounds);

void dump_instance(const chase_result& r, std::ostream& out);

// Literal weak-acyclicity-with-database check, for cross-validation only:
// enumerates the dependency edges directly from the definition, closes
// reachability with a dense matrix, and looks for a cycle through a special
// edge that contains a node whose predicate is database-supported (equal to
// a database predicate, or reachable from any position of one). Rejects
// graphs with more than 60 nodes.
bool naive_wa_check(const std::set<pred_id>& catalog, const std::vector<tgd>& rules);

}  // namespace chasetc
