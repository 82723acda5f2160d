#include "chasetc/genbench.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <ostream>
#include <set>

#include "chasetc/shapes.hpp"
#include "chasetc/termination.hpp"
#include "json.hpp"

namespace chasetc {

uint64_t rng::below(uint64_t n) {
  // Rejection sampling keeps the draw unbiased and platform-stable.
  if (n == 0) throw std::invalid_argument("rng::below(0)");
  uint64_t limit = std::numeric_limits<uint64_t>::max() -
                   std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do {
    v = eng();
  } while (v >= limit);
  return v % n;
}

int rng::between(int lo, int hi) { return lo + int(below(uint64_t(hi - lo + 1))); }

bool rng::chance(double p) {
  return double(eng() >> 11) * (1.0 / 9007199254740992.0) < p;  // 53-bit mantissa
}

std::vector<schema_entry> generate_schema(int preds, int min_arity, int max_arity,
                                          uint64_t seed) {
  if (preds < 1 || min_arity < 1 || max_arity < min_arity)
    throw std::invalid_argument("bad schema parameters");
  rng r(seed);
  std::vector<schema_entry> out;
  out.reserve(size_t(preds));
  for (int i = 1; i <= preds; ++i)
    out.push_back({"P" + std::to_string(i), r.between(min_arity, max_arity)});
  return out;
}

database generate_database(const data_gen_spec& spec) {
  int max_arity = 0;
  for (const auto& e : spec.schema) max_arity = std::max(max_arity, e.arity);
  if (spec.dsize < max_arity)
    throw std::invalid_argument(
        "domain too small: an all-distinct shape needs dsize >= max arity");
  if (spec.rsize < 0 || spec.schema.empty())
    throw std::invalid_argument("bad database parameters");

  rng r(spec.seed);
  database db;
  for (const auto& e : spec.schema) {
    pred_id p = predicates::intern(e.name, e.arity);
    const auto& partitions = all_partitions(e.arity);
    for (int t = 0; t < spec.rsize; ++t) {
      shape_code code = partitions[r.below(partitions.size())];
      std::vector<uint8_t> digits = unpack_digits(code, e.arity);
      int blocks = block_count(code, e.arity);
      // Pairwise-distinct block values via rejection.
      std::vector<int> values;
      while (int(values.size()) < blocks) {
        int v = int(r.below(uint64_t(spec.dsize)));
        if (std::find(values.begin(), values.end(), v) == values.end())
          values.push_back(v);
      }
      std::vector<term> args;
      args.reserve(size_t(e.arity));
      for (uint8_t d : digits)
        args.push_back(symbols::constant("c" + std::to_string(values[size_t(d - 1)])));
      db.insert(atom{p, std::move(args)});
    }
  }
  return db;
}

tgd_gen_result generate_tgds(const tgd_gen_spec& spec) {
  std::vector<schema_entry> in_range;
  for (const auto& e : spec.schema)
    if (e.arity >= spec.min_arity && e.arity <= spec.max_arity) in_range.push_back(e);
  if (spec.ssize < 1 || spec.ssize > int(in_range.size()))
    throw std::invalid_argument("ssize exceeds the predicates in the arity window");
  if (spec.tsize < 0 || (spec.tclass != rule_class::simple_linear &&
                         spec.tclass != rule_class::linear))
    throw std::invalid_argument("bad rule-generation parameters");

  rng r(spec.seed);
  // Draw the ssize-subset without replacement.
  std::vector<schema_entry> subset;
  {
    std::vector<size_t> idx(in_range.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int k = 0; k < spec.ssize; ++k) {
      size_t j = size_t(k) + size_t(r.below(idx.size() - size_t(k)));
      std::swap(idx[size_t(k)], idx[j]);
      subset.push_back(in_range[idx[size_t(k)]]);
    }
  }

  tgd_gen_result out;

  // One rule attempt; an empty frontier yields no rule and the caller redraws.
  // force_repeat restricts the body shape to ones with a repeated position.
  auto draw_rule = [&](int32_t id, bool force_repeat) -> std::optional<tgd> {
    const schema_entry& bp = subset[r.below(subset.size())];
    const schema_entry& hp = subset[r.below(subset.size())];

    // Body variables; for linear rules a random body shape dictates repeats.
    std::vector<term> body_args;
    std::vector<term> body_vars;
    if (spec.tclass == rule_class::simple_linear) {
      for (int i = 1; i <= bp.arity; ++i) {
        term v = symbols::variable("x" + std::to_string(i));
        body_args.push_back(v);
        body_vars.push_back(v);
      }
    } else {
      std::vector<shape_code> partitions = all_partitions(bp.arity);
      if (force_repeat) {
        std::erase_if(partitions, [&](shape_code c) {
          return block_count(c, bp.arity) == bp.arity;
        });
        if (partitions.empty()) return std::nullopt;  // arity 1: no repeats exist
      }
      std::vector<uint8_t> digits =
          unpack_digits(partitions[r.below(partitions.size())], bp.arity);
      int blocks = 0;
      for (uint8_t d : digits) blocks = std::max(blocks, int(d));
      for (int b = 1; b <= blocks; ++b)
        body_vars.push_back(symbols::variable("x" + std::to_string(b)));
      for (uint8_t d : digits) body_args.push_back(body_vars[size_t(d - 1)]);
    }

    std::vector<term> head_args;
    int existentials = 0;
    for (int i = 1; i <= hp.arity; ++i) {
      ++out.head_positions_drawn;
      if (r.chance(0.10)) {
        ++out.head_existentials_drawn;
        head_args.push_back(symbols::variable("z" + std::to_string(++existentials)));
      } else {
        head_args.push_back(body_vars[r.below(body_vars.size())]);
      }
    }

    tgd rule = make_tgd(id, {atom{predicates::intern(bp.name, bp.arity), body_args}},
                        {atom{predicates::intern(hp.name, hp.arity), head_args}});
    if (rule.frontier.empty()) return std::nullopt;  // redraw; draws stay counted
    return rule;
  };

  int32_t next_id = 1;
  while (int(out.rules.size()) < spec.tsize) {
    if (auto rule = draw_rule(next_id, false)) {
      ++next_id;
      out.rules.push_back(std::move(*rule));
    }
  }

  // A linear draw can come out all-simple by chance; the contract is that the
  // emitted set classifies as its tclass, so replace one rule with a
  // repeated-position body. Impossible only if the whole window is unary.
  if (spec.tclass == rule_class::linear && !out.rules.empty() &&
      classify_rule_set(out.rules) == rule_class::simple_linear &&
      std::any_of(subset.begin(), subset.end(),
                  [](const schema_entry& e) { return e.arity >= 2; })) {
    for (;;) {
      if (auto rule = draw_rule(out.rules.back().id, true)) {
        out.rules.back() = std::move(*rule);
        break;
      }
    }
  }
  return out;
}

database database_for_rules(const std::vector<tgd>& rules) {
  std::set<pred_id> schema;
  for (const tgd& r : rules) {
    for (const atom& a : r.body) schema.insert(a.pred);
    for (const atom& a : r.head) schema.insert(a.pred);
  }
  database db;
  int next = 0;
  for (pred_id p : schema) {
    std::vector<term> args;
    for (int i = 0; i < predicates::arity(p); ++i)
      args.push_back(symbols::constant("d" + std::to_string(next++)));
    db.insert(atom{p, std::move(args)});
  }
  return db;
}

std::string bench_csv_header() {
  return "pred_profile,rule_profile,db_size,rep,n_rules,n_pred,n_shapes,verdict,"
         "t_parse,t_shapes,t_graph,t_comp,t_total";
}

void run_bench(const std::string& grid_json, int reps, std::ostream& csv) {
  nlohmann::json grid = nlohmann::json::parse(grid_json);
  csv << bench_csv_header() << "\n";
  if (!grid.contains("cells")) return;  // empty grid: header only

  std::string mode = grid.value("mode", "sl");
  uint64_t seed0 = grid.value("seed", uint64_t(1));
  int cell_no = 0;
  for (const auto& cell : grid["cells"]) {
    ++cell_no;
    int preds = cell.value("preds", 10);
    int min_arity = cell.value("min_arity", 1);
    int max_arity = cell.value("max_arity", 5);
    int ssize = cell.value("ssize", preds);
    int tsize = cell.value("tsize", 100);
    int dsize = cell.value("dsize", 100);
    int rsize = cell.value("rsize", 0);

    for (int rep = 0; rep < reps; ++rep) {
      uint64_t seed = seed0 + uint64_t(cell_no) * 1000003u + uint64_t(rep);
      tgd_gen_spec tspec;
      tspec.schema = generate_schema(preds, min_arity, max_arity, seed);
      tspec.ssize = std::min(ssize, preds);
      tspec.min_arity = min_arity;
      tspec.max_arity = max_arity;
      tspec.tsize = tsize;
      tspec.tclass = mode == "l" ? rule_class::linear : rule_class::simple_linear;
      tspec.seed = seed + 17;
      tgd_gen_result rules = generate_tgds(tspec);

      termination_report rep_out;
      size_t db_size = 0;
      if (mode == "l") {
        data_gen_spec dspec;
        dspec.schema = tspec.schema;
        dspec.dsize = std::max(dsize, max_arity);
        dspec.rsize = rsize;
        dspec.seed = seed + 31;
        database db = generate_database(dspec);
        db_size = db.size();
        rep_out = is_chase_finite_l(db, rules.rules);
      } else {
        database db = database_for_rules(rules.rules);
        db_size = db.size();
        rep_out = is_chase_finite_sl(db, rules.rules);
      }

      csv << "p[" << preds << "," << min_arity << "-" << max_arity << "]"
          << ",r[" << tsize << "," << mode << "]"
          << "," << db_size << "," << rep << "," << rep_out.n_rules << ","
          << rep_out.n_predicates << "," << rep_out.n_shapes << ","
          << (rep_out.verdict == chase_verdict::finite ? "finite" : "infinite") << ","
          << rep_out.t_parse << "," << rep_out.t_shapes << "," << rep_out.t_graph << ","
          << rep_out.t_comp << "," << rep_out.t_total << "\n";
    }
  }
}

}  // namespace chasetc
