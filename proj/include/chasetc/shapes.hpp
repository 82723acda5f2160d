#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "chasetc/model.hpp"

namespace chasetc {

// A shape is a predicate plus the canonical partition of its argument
// positions, encoded as a restricted growth string: digit i is the 1-based
// index of the block position i belongs to, blocks numbered by first
// occurrence. E.g. (x,y,x,z,y) -> digits (1,2,1,3,2). Digits are packed four
// bits each into a shape_code, so arity is capped at 15.
struct shape {
  pred_id pred = -1;
  shape_code code = 0;

  bool operator==(const shape&) const = default;
  bool operator<(const shape& o) const {
    return pred != o.pred ? pred < o.pred : code < o.code;
  }
};

constexpr int kMaxShapeArity = 15;

shape_code pack_digits(const std::vector<uint8_t>& digits);
std::vector<uint8_t> unpack_digits(shape_code code, int arity);
int block_count(shape_code code, int arity);

// Keeps the first occurrence of every value / assigns block digits.
// E.g. (x,y,x,z,y) -> unique (x,y,z), id (1,2,1,3,2).
std::pair<std::vector<term>, std::vector<uint8_t>> unique_and_id(
    const std::vector<term>& args);

shape atom_shape(const atom& a);

// R(args) -> R_<digits>(unique(args)); registers the shape predicate.
atom simplify_atom(const atom& a);
database simplify_database(const database& db);

// The shape a shape-predicate stands for (pred must be a shape predicate).
shape shape_of_pred(pred_id p);

// All partitions of {1..arity} as packed codes, in lexicographic digit
// order; size is the Bell number of arity. Cached per arity.
const std::vector<shape_code>& all_partitions(int arity);
uint64_t bell_number(int arity);

// Display form "R_(1,2,1)".
std::string shape_display(const shape& s);

using shape_set = std::set<shape>;

struct shape_scan_stats {
  size_t tuples = 0;
  size_t chunks = 0;
};

constexpr size_t kDefaultChunkSize = 1'000'000;

// One pass over the stored relations, buffered in chunks of chunk_size tuples.
shape_set find_shapes_memory(const database& db,
                             size_t chunk_size = kDefaultChunkSize,
                             shape_scan_stats* stats = nullptr);

void dump_shapes(const shape_set& s, std::ostream& out);  // sorted, one per line

}  // namespace chasetc
