#include "chasetc/shapes.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>

namespace chasetc {

shape_code pack_digits(const std::vector<uint8_t>& digits) {
  if (digits.size() > kMaxShapeArity)
    throw std::invalid_argument("shape arity exceeds " + std::to_string(kMaxShapeArity));
  shape_code code = 0;
  for (size_t i = 0; i < digits.size(); ++i)
    code |= shape_code(digits[i]) << (4 * i);
  return code;
}

std::vector<uint8_t> unpack_digits(shape_code code, int arity) {
  std::vector<uint8_t> digits(size_t(arity), 0);
  for (int i = 0; i < arity; ++i) digits[size_t(i)] = uint8_t((code >> (4 * i)) & 0xf);
  return digits;
}

int block_count(shape_code code, int arity) {
  int m = 0;
  for (int i = 0; i < arity; ++i) m = std::max(m, int((code >> (4 * i)) & 0xf));
  return m;
}

std::pair<std::vector<term>, std::vector<uint8_t>> unique_and_id(
    const std::vector<term>& args) {
  std::vector<term> unique;
  std::vector<uint8_t> digits;
  digits.reserve(args.size());
  for (const term& t : args) {
    uint8_t d = 0;
    for (size_t j = 0; j < unique.size(); ++j) {
      if (unique[j] == t) {
        d = uint8_t(j + 1);
        break;
      }
    }
    if (d == 0) {
      unique.push_back(t);
      d = uint8_t(unique.size());
    }
    digits.push_back(d);
  }
  return {std::move(unique), std::move(digits)};
}

shape atom_shape(const atom& a) {
  auto [unique, digits] = unique_and_id(a.args);
  return shape{a.pred, pack_digits(digits)};
}

atom simplify_atom(const atom& a) {
  auto [unique, digits] = unique_and_id(a.args);
  pred_id sp = predicates::shape_pred(a.pred, pack_digits(digits), int(unique.size()));
  return atom{sp, std::move(unique)};
}

database simplify_database(const database& db) {
  database out;
  for (const auto& [p, tuples] : db.relations())
    for (const auto& tuple : tuples) out.insert(simplify_atom(atom{p, tuple}));
  return out;
}

shape shape_of_pred(pred_id p) {
  const pred_info& info = predicates::info(p);
  if (info.base < 0)
    throw std::invalid_argument(info.name + " is not a shape predicate");
  return shape{info.base, info.code};
}

const std::vector<shape_code>& all_partitions(int arity) {
  if (arity < 1 || arity > kMaxShapeArity)
    throw std::invalid_argument("partition arity out of range");
  static std::mutex mu;
  static std::map<int, std::vector<shape_code>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(arity);
  if (it != cache.end()) return it->second;

  // Restricted growth strings in lexicographic order: digit i may be any
  // value in 1..(max of previous digits)+1.
  std::vector<shape_code> out;
  std::vector<uint8_t> digits(size_t(arity), 1);
  auto emit = [&](auto&& self, int i, uint8_t prev_max) -> void {
    if (i == arity) {
      out.push_back(pack_digits(digits));
      return;
    }
    for (uint8_t d = 1; d <= prev_max + 1; ++d) {
      digits[size_t(i)] = d;
      self(self, i + 1, std::max(prev_max, d));
    }
  };
  emit(emit, 1, 1);  // digit 0 is always 1
  return cache.emplace(arity, std::move(out)).first->second;
}

uint64_t bell_number(int arity) { return all_partitions(arity).size(); }

std::string shape_display(const shape& s) {
  std::string out = predicates::name(s.pred) + "_(";
  int arity = predicates::arity(s.pred);
  for (int i = 0; i < arity; ++i) {
    if (i) out += ",";
    out += std::to_string((s.code >> (4 * i)) & 0xf);
  }
  return out + ")";
}

shape_set find_shapes_memory(const database& db, size_t chunk_size,
                             shape_scan_stats* stats) {
  if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  shape_set out;
  shape_scan_stats local;
  std::vector<const std::vector<term>*> buffer;
  buffer.reserve(std::min(chunk_size, size_t(1) << 20));

  for (const auto& [p, tuples] : db.relations()) {
    pred_id pred = p;
    auto flush = [&] {
      if (buffer.empty()) return;
      for (const auto* tuple : buffer)
        out.insert(shape{pred, pack_digits(unique_and_id(*tuple).second)});
      local.chunks += 1;
      buffer.clear();
    };
    for (const auto& tuple : tuples) {
      buffer.push_back(&tuple);
      ++local.tuples;
      if (buffer.size() == chunk_size) flush();
    }
    flush();  // chunks never span relations
  }
  if (stats) *stats = local;
  return out;
}

void dump_shapes(const shape_set& s, std::ostream& out) {
  std::vector<std::string> lines;
  for (const shape& sh : s) lines.push_back(shape_display(sh));
  std::sort(lines.begin(), lines.end());
  for (const std::string& l : lines) out << l << "\n";
}

}  // namespace chasetc
