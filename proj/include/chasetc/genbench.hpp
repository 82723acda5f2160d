#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "chasetc/model.hpp"

namespace chasetc {

// Deterministic bounded draws on top of mt19937_64 (identical across
// platforms, unlike the standard distributions).
struct rng {
  std::mt19937_64 eng;
  explicit rng(uint64_t seed) : eng(seed) {}
  uint64_t below(uint64_t n);                 // uniform in [0, n)
  int between(int lo, int hi);                // uniform in [lo, hi]
  bool chance(double p);                      // true with probability p
};

struct schema_entry {
  std::string name;
  int arity = 0;
};

// preds predicate names P1..Pn with arities uniform in [min_arity, max_arity].
std::vector<schema_entry> generate_schema(int preds, int min_arity, int max_arity,
                                          uint64_t seed);

struct data_gen_spec {
  std::vector<schema_entry> schema;
  int dsize = 0;  // domain size; must be >= the largest arity
  int rsize = 0;  // tuples per predicate
  uint64_t seed = 0;
};

// rsize tuples per predicate: each tuple draws a uniform random shape of the
// predicate's arity, then fills its blocks with pairwise-distinct domain
// constants c0..c<dsize-1>, so the tuple's shape is exactly the drawn one.
database generate_database(const data_gen_spec& spec);

struct tgd_gen_spec {
  std::vector<schema_entry> schema;
  int ssize = 0;  // predicates drawn into the rule subset
  int min_arity = 1, max_arity = 1;  // arity window for the subset
  int tsize = 0;  // rules to generate
  rule_class tclass = rule_class::simple_linear;  // sl or l
  uint64_t seed = 0;
};

struct tgd_gen_result {
  std::vector<tgd> rules;
  // Telemetry over all draws, counted before any empty-frontier redraw.
  uint64_t head_positions_drawn = 0;
  uint64_t head_existentials_drawn = 0;
};

// tsize single-head rules over an ssize-subset of the schema (body and head
// predicates drawn uniformly with repetition). Head positions become a fresh
// existential with probability 0.10, otherwise a uniformly random body
// variable. Simple-linear bodies use distinct variables; linear bodies draw a
// uniform random body shape that dictates variable repetition. Rules that
// come out with an empty frontier are redrawn.
tgd_gen_result generate_tgds(const tgd_gen_spec& spec);

// One all-distinct-constants fact per predicate occurring in the rules: the
// canonical database that supports every position.
database database_for_rules(const std::vector<tgd>& rules);

// Benchmark grid: JSON of the form
//   {"mode": "sl"|"l", "cells": [{"preds": n, "min_arity": a, "max_arity": b,
//     "ssize": s, "tsize": t, "dsize": d, "rsize": r}, ...], "seed": s0}
// sl cells ignore dsize/rsize and run against database_for_rules. Each cell
// runs `reps` times with derived seeds; one CSV row per run.
void run_bench(const std::string& grid_json, int reps, std::ostream& csv);

std::string bench_csv_header();

}  // namespace chasetc
