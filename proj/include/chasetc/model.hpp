#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace chasetc {

// ---------------------------------------------------------------------------
// Terms. Constants, variables and labeled nulls are interned to small ids;
// equality and hashing never touch the string tables.
// ---------------------------------------------------------------------------

enum class term_kind : uint8_t { constant = 0, variable = 1, null = 2 };

struct term {
  term_kind kind = term_kind::constant;
  int32_t id = -1;

  bool operator==(const term&) const = default;
  bool operator<(const term& o) const {
    return kind != o.kind ? kind < o.kind : id < o.id;
  }
};

struct term_hash {
  size_t operator()(const term& t) const {
    return std::hash<uint64_t>()((uint64_t(t.kind) << 32) | uint32_t(t.id));
  }
};

// Identity of an invented null: which rule created it, for which restriction
// of the match to the frontier, and for which existential variable. Nulls are
// re-derivable from these three components alone; no global counters.
struct null_origin {
  int32_t rule_id = 0;
  std::string frontier_fingerprint;
  std::string var_name;

  bool operator==(const null_origin&) const = default;
};

// Process-wide symbol tables. All public model types are immutable value
// types; the tables only ever grow, so shared use from tests is safe.
class symbols {
 public:
  static term constant(std::string_view name);
  static term variable(std::string_view name);
  static term null_for(const null_origin& origin);

  static const std::string& name(term t);  // constants and variables
  static std::string render(term t);       // nulls render as _:n<k>
};

// ---------------------------------------------------------------------------
// Predicates. A predicate is identified by (name, arity); the same name at a
// different arity is a different predicate. Shape predicates R_1_2_... carry
// a back-pointer to their base predicate and partition code.
// ---------------------------------------------------------------------------

using pred_id = int32_t;
using shape_code = uint64_t;  // id-tuple digits packed 4 bits each, arity <= 15

struct pred_info {
  std::string name;
  int arity = 0;
  pred_id base = -1;        // >= 0 for shape predicates
  shape_code code = 0;      // partition code for shape predicates
};

class predicates {
 public:
  static pred_id intern(std::string_view name, int arity);
  // Registers (or finds) the shape predicate for base + partition code whose
  // digit tuple has `blocks` distinct values (the new predicate's arity).
  static pred_id shape_pred(pred_id base, shape_code code, int blocks);
  static const pred_info& info(pred_id p);
  static const std::string& name(pred_id p);
  static int arity(pred_id p);
  static bool is_shape_pred(pred_id p);
};

struct position {
  pred_id pred = -1;
  int32_t idx = 0;  // 1-based, matching (R, i) notation

  bool operator==(const position&) const = default;
  bool operator<(const position& o) const {
    return pred != o.pred ? pred < o.pred : idx < o.idx;
  }
};

std::string render_position(const position& p);

// ---------------------------------------------------------------------------
// Atoms and rules.
// ---------------------------------------------------------------------------

struct atom {
  pred_id pred = -1;
  std::vector<term> args;

  bool operator==(const atom&) const = default;
  bool operator<(const atom& o) const {
    return pred != o.pred ? pred < o.pred : args < o.args;
  }
};

struct atom_hash {
  size_t operator()(const atom& a) const {
    size_t h = std::hash<int32_t>()(a.pred);
    for (const term& t : a.args) h = h * 1000003u + term_hash()(t);
    return h;
  }
};

std::string render_atom(const atom& a);

// A tuple-generating dependency body -> exists(head). The frontier and the
// existential variables are derived on construction and kept sorted.
struct tgd {
  int32_t id = 0;
  std::vector<atom> body;
  std::vector<atom> head;
  std::vector<term> frontier;
  std::vector<term> existentials;
  bool simple = false;  // body atoms have no repeated variable

  bool is_linear() const { return body.size() == 1; }
  bool is_simple_linear() const { return is_linear() && simple; }
};

// Validates shape (non-empty body and head, variables-only arguments) and
// computes the derived fields. Empty frontiers are allowed here; the
// termination checkers pad them away first.
tgd make_tgd(int32_t id, std::vector<atom> body, std::vector<atom> head);

enum class rule_class { simple_linear, linear, neither };

rule_class classify_rule_set(const std::vector<tgd>& rules);
std::string to_string(rule_class c);

// All body positions of variable x, as (pred, 1-based index) pairs.
std::vector<position> positions_of_variable(const std::vector<atom>& atoms, term x);

// ---------------------------------------------------------------------------
// Databases: finite sets of constant-only facts, deduplicated.
// ---------------------------------------------------------------------------

class database {
 public:
  // Returns true if the fact was new. Throws if any argument is not a constant.
  bool insert(const atom& fact);
  bool contains(const atom& fact) const;

  size_t size() const { return total_; }
  const std::map<pred_id, std::vector<std::vector<term>>>& relations() const {
    return relations_;
  }
  std::set<pred_id> catalog() const;  // predicates with at least one tuple

 private:
  std::map<pred_id, std::vector<std::vector<term>>> relations_;
  std::unordered_set<atom, atom_hash> seen_;
  size_t total_ = 0;
};

// ---------------------------------------------------------------------------
// Empty-frontier padding. When some rule has an empty frontier, the whole
// rule set is rewritten over suffixed predicates P__t/arity+1: every rule
// propagates a fresh universal tag variable appended to its body atom and to
// all head atoms, and one seed rule P(u1..um) -> P__t(u1..um,u1) per
// predicate copies a constant of the matched tuple into the tag column. Tags
// therefore always originate from database constants, so a rewritten rule
// fires at most once per tag and chase finiteness is preserved for linear
// sets. Rule classes (simple-linear / linear) are preserved.
// ---------------------------------------------------------------------------

struct pad_result {
  std::vector<tgd> rules;
  int padded = 0;  // number of original rules that had an empty frontier
};

pad_result pad_empty_frontier(const std::vector<tgd>& rules);

}  // namespace chasetc
