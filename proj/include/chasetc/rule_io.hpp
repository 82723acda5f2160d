#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chasetc/model.hpp"

namespace chasetc {

// Parse or load failure with a 1-based source location.
struct parse_error : std::runtime_error {
  int line = 0;
  int col = 0;
  parse_error(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

struct rule_file {
  std::vector<tgd> rules;
  double t_parse_ms = 0.0;
};

// One rule per line: "A1, ..., Ak -> B1, ..., Bm". '#' starts a comment,
// blank lines are skipped, whitespace is insignificant. Arguments must be
// lowercase-initial identifiers (variables); quantification is implicit.
// A predicate name used at two different arities is an error.
rule_file parse_rules(std::istream& in);
rule_file parse_rules_file(const std::string& path);

std::string render_rule(const tgd& r);
void write_rules(std::ostream& out, const std::vector<tgd>& rules);

// Fact files: one "R(c1,...,cn)." per line, '#' comments. Constants are
// bare tokens over [A-Za-z0-9_.-]. Facts deduplicate (set semantics).
database load_fact_file(const std::string& path);
void write_fact_file(std::ostream& out, const database& db);

// CSV directory: one <Predicate>.csv per relation, no header row; arity is
// taken from the first row and enforced on the rest.
database load_csv_dir(const std::string& path);
void write_csv_dir(const std::string& dir, const database& db);

// Dispatch on path kind: directory -> CSV directory, file -> fact file.
database load_database(const std::string& path);

}  // namespace chasetc
