#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chasetc/chase.hpp"
#include "chasetc/genbench.hpp"
#include "chasetc/rule_io.hpp"
#include "chasetc/shapes_sql.hpp"
#include "chasetc/simplify.hpp"
#include "chasetc/termination.hpp"

namespace {

using namespace chasetc;

// Exit codes: 0 finite/ok, 10 infinite (or chase budget exceeded), >10 error.
constexpr int kExitInfinite = 10;
constexpr int kExitIo = 11;
constexpr int kExitSemantic = 12;
constexpr int kExitSql = 13;
constexpr int kExitUsage = 64;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct check_options {
  std::string tgds, db, dsn, mode = "auto", shapes = "in-memory", out = "json";
  std::string dump_graph_path, dump_shapes_path, dump_simplified_path;
};

int run_check(const check_options& opt) {
  rule_file rf = parse_rules_file(opt.tgds);

  std::string dsn = opt.dsn;
  if (dsn.empty()) {
    if (const char* env = std::getenv("CHASE_DSN")) dsn = env;
  }
  if (opt.db.empty() == dsn.empty())
    throw std::invalid_argument("provide exactly one of --db and --dsn/CHASE_DSN");
  if (opt.shapes == "in-db" && dsn.empty())
    throw std::invalid_argument("--shapes in-db needs --dsn or CHASE_DSN");

  rule_class cls = classify_rule_set(rf.rules);
  std::string mode = opt.mode;
  if (mode == "auto") {
    if (cls == rule_class::simple_linear) mode = "sl";
    else if (cls == rule_class::linear) mode = "l";
    else throw std::invalid_argument("rule set is not linear; no mode applies");
  }
  if (mode == "sl" && cls != rule_class::simple_linear)
    throw std::invalid_argument("--mode sl needs a simple-linear rule set");
  if (mode == "l" && cls == rule_class::neither)
    throw std::invalid_argument("--mode l needs a linear rule set");

  termination_report report;
  if (mode == "sl") {
    if (!dsn.empty()) {
      sqlite_db store(dsn);
      report = is_chase_finite_sl(catalog_preds(store.catalog()), rf.rules, rf.t_parse_ms);
    } else {
      report = is_chase_finite_sl(load_database(opt.db), rf.rules, rf.t_parse_ms);
    }
  } else {
    shape_set shapes;
    double t_shapes = 0;
    auto t0 = std::chrono::steady_clock::now();
    if (!dsn.empty()) {
      sqlite_db store(dsn);
      auto catalog = store.catalog();
      shapes = opt.shapes == "in-db" ? find_shapes_sql(catalog, store)
                                     : find_shapes_memory(catalog, store);
    } else {
      shapes = find_shapes_memory(load_database(opt.db));
    }
    t_shapes = ms_since(t0);
    report = is_chase_finite_l(shapes, rf.rules, rf.t_parse_ms, t_shapes);

    if (!opt.dump_shapes_path.empty()) {
      std::ostringstream os;
      dump_shapes(shapes, os);
      write_file(opt.dump_shapes_path, os.str());
    }
    if (!opt.dump_simplified_path.empty()) {
      pad_result padded = pad_empty_frontier(rf.rules);
      simplified_rule_set dsimple = dyn_simplification(shapes, padded.rules);
      std::ostringstream os;
      for (const simplified_rule& sr : dsimple.rules) os << render_rule(sr.rule) << "\n";
      write_file(opt.dump_simplified_path, os.str());
    }
  }

  if (!opt.dump_graph_path.empty()) {
    // The graph the verdict was computed on: padded rules, simplified in l mode.
    pad_result padded = pad_empty_frontier(rf.rules);
    std::ostringstream os;
    if (mode == "sl") {
      dump_graph(build_dep_graph(padded.rules), os);
    } else {
      shape_set shapes;
      if (!dsn.empty()) {
        sqlite_db store(dsn);
        auto catalog = store.catalog();
        shapes = opt.shapes == "in-db" ? find_shapes_sql(catalog, store)
                                       : find_shapes_memory(catalog, store);
      } else {
        shapes = find_shapes_memory(load_database(opt.db));
      }
      simplified_rule_set dsimple = dyn_simplification(shapes, padded.rules);
      std::vector<tgd> rules;
      for (const simplified_rule& sr : dsimple.rules) rules.push_back(sr.rule);
      dump_graph(build_dep_graph(rules), os);
    }
    write_file(opt.dump_graph_path, os.str());
  }

  if (opt.out == "csv")
    std::cout << termination_report::csv_header() << "\n" << report.to_csv_row() << "\n";
  else
    std::cout << report.to_json() << "\n";
  return report.verdict == chase_verdict::finite ? 0 : kExitInfinite;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-oblivious chase termination toolkit"};
  app.require_subcommand(1);

  check_options copt;
  CLI::App* check = app.add_subcommand("check", "decide chase finiteness");
  check->add_option("--tgds", copt.tgds, "rule file")->required();
  check->add_option("--db", copt.db, "fact file or CSV directory");
  check->add_option("--dsn", copt.dsn, "SQLite store (or set CHASE_DSN)");
  check->add_option("--mode", copt.mode, "sl|l|auto")
      ->check(CLI::IsMember({"sl", "l", "auto"}));
  check->add_option("--shapes", copt.shapes, "in-memory|in-db")
      ->check(CLI::IsMember({"in-memory", "in-db"}));
  check->add_option("--out", copt.out, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  check->add_option("--dump-graph", copt.dump_graph_path, "write the dependency graph");
  check->add_option("--dump-shapes", copt.dump_shapes_path, "write the database shapes");
  check->add_option("--dump-simplified", copt.dump_simplified_path,
                    "write the simplified rules");

  std::string ch_tgds, ch_db, ch_dump;
  size_t max_atoms = kDefaultMaxAtoms, max_rounds = kDefaultMaxRounds;
  CLI::App* chase_cmd = app.add_subcommand("chase", "run the bounded chase");
  chase_cmd->add_option("--tgds", ch_tgds, "rule file")->required();
  chase_cmd->add_option("--db", ch_db, "fact file or CSV directory")->required();
  chase_cmd->add_option("--max-atoms", max_atoms, "atom budget");
  chase_cmd->add_option("--max-rounds", max_rounds, "round budget");
  chase_cmd->add_option("--dump-instance", ch_dump, "write the chased instance");

  int gd_preds = 5, gd_min = 1, gd_max = 3, gd_dsize = 100, gd_rsize = 100;
  uint64_t gd_seed = 1;
  std::string gd_out, gd_csv_dir, gd_sqlite;
  CLI::App* gen_db = app.add_subcommand("generate-db", "generate a random database");
  gen_db->add_option("--preds", gd_preds, "number of predicates");
  gen_db->add_option("--min-arity", gd_min, "minimum arity");
  gen_db->add_option("--max-arity", gd_max, "maximum arity");
  gen_db->add_option("--dsize", gd_dsize, "domain size");
  gen_db->add_option("--rsize", gd_rsize, "tuples per predicate");
  gen_db->add_option("--seed", gd_seed, "random seed");
  gen_db->add_option("--out", gd_out, "fact file to write")->required();
  gen_db->add_option("--csv-dir", gd_csv_dir, "also write a CSV directory");
  gen_db->add_option("--sqlite", gd_sqlite, "also write a SQLite store");

  int gt_schema = 10, gt_ssize = 5, gt_min = 1, gt_max = 3, gt_tsize = 10;
  uint64_t gt_seed = 1;
  std::string gt_class = "sl", gt_out;
  CLI::App* gen_tgds = app.add_subcommand("generate-tgds", "generate random rules");
  gen_tgds->add_option("--schema-size", gt_schema, "schema predicates");
  gen_tgds->add_option("--ssize", gt_ssize, "predicates used by rules");
  gen_tgds->add_option("--min-arity", gt_min, "minimum arity");
  gen_tgds->add_option("--max-arity", gt_max, "maximum arity");
  gen_tgds->add_option("--tsize", gt_tsize, "number of rules");
  gen_tgds->add_option("--tclass", gt_class, "sl|l")->check(CLI::IsMember({"sl", "l"}));
  gen_tgds->add_option("--seed", gt_seed, "random seed");
  gen_tgds->add_option("--out", gt_out, "rule file to write")->required();

  std::string bench_grid, bench_out = "results.csv";
  int bench_reps = 1;
  uint64_t bench_seed = 1;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark grid");
  bench->add_option("--grid", bench_grid, "grid JSON file");
  bench->add_option("--reps", bench_reps, "repetitions per cell");
  bench->add_option("--out", bench_out, "CSV output path");
  bench->add_option("--seed", bench_seed, "base seed when the grid has none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(copt);

    if (chase_cmd->parsed()) {
      rule_file rf = parse_rules_file(ch_tgds);
      chase_result result = run_chase(load_database(ch_db), rf.rules, max_atoms, max_rounds);
      if (!ch_dump.empty()) {
        std::ostringstream os;
        dump_instance(result, os);
        write_file(ch_dump, os.str());
      }
      const char* outcome = result.fixpoint() ? "fixpoint"
                            : result.outcome == chase_outcome::atom_budget_exceeded
                                ? "atom-budget-exceeded"
                                : "round-budget-exceeded";
      std::cout << "{\"outcome\": \"" << outcome << "\", \"atoms\": " << result.atoms.size()
                << ", \"rounds\": " << result.rounds << "}\n";
      return result.fixpoint() ? 0 : kExitInfinite;
    }

    if (gen_db->parsed()) {
      data_gen_spec spec;
      spec.schema = generate_schema(gd_preds, gd_min, gd_max, gd_seed);
      spec.dsize = gd_dsize;
      spec.rsize = gd_rsize;
      spec.seed = gd_seed + 1;
      database db = generate_database(spec);
      std::ostringstream os;
      write_fact_file(os, db);
      write_file(gd_out, os.str());
      if (!gd_csv_dir.empty()) write_csv_dir(gd_csv_dir, db);
      if (!gd_sqlite.empty()) {
        std::remove(gd_sqlite.c_str());
        sqlite_db store(gd_sqlite);
        for (const auto& [p, tuples] : db.relations()) {
          store.create_table(predicates::name(p), predicates::arity(p));
          std::vector<std::vector<std::string>> rows;
          for (const auto& tuple : tuples) {
            std::vector<std::string> row;
            for (const term& t : tuple) row.push_back(symbols::name(t));
            rows.push_back(std::move(row));
          }
          store.insert_rows(predicates::name(p), rows);
        }
      }
      return 0;
    }

    if (gen_tgds->parsed()) {
      tgd_gen_spec spec;
      spec.schema = generate_schema(gt_schema, gt_min, gt_max, gt_seed);
      spec.ssize = gt_ssize;
      spec.min_arity = gt_min;
      spec.max_arity = gt_max;
      spec.tsize = gt_tsize;
      spec.tclass = gt_class == "l" ? rule_class::linear : rule_class::simple_linear;
      spec.seed = gt_seed + 1;
      tgd_gen_result rules = generate_tgds(spec);
      std::ostringstream os;
      write_rules(os, rules.rules);
      write_file(gt_out, os.str());
      return 0;
    }

    if (bench->parsed()) {
      std::string grid = "{\"mode\": \"sl\", \"seed\": " + std::to_string(bench_seed) +
                         ", \"cells\": [{\"preds\": 20, \"min_arity\": 1, \"max_arity\": 5,"
                         " \"ssize\": 20, \"tsize\": 1000}]}";
      if (!bench_grid.empty()) {
        std::ifstream in(bench_grid);
        if (!in) throw std::runtime_error("cannot open grid file " + bench_grid);
        std::stringstream ss;
        ss << in.rdbuf();
        grid = ss.str();
      }
      std::ofstream out(bench_out);
      if (!out) throw std::runtime_error("cannot write " + bench_out);
      run_bench(grid, bench_reps, out);
      return 0;
    }
  } catch (const sql_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSql;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
