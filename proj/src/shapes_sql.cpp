#include "chasetc/shapes_sql.hpp"

#include <sqlite3.h>

#include <algorithm>

namespace chasetc {

struct sqlite_db::impl {
  sqlite3* handle = nullptr;
};

namespace {

std::string strip_dsn(const std::string& dsn) {
  const std::string prefix = "sqlite://";
  return dsn.rfind(prefix, 0) == 0 ? dsn.substr(prefix.size()) : dsn;
}

[[noreturn]] void raise(sqlite3* h, const std::string& what) {
  throw sql_error(what + ": " + (h ? sqlite3_errmsg(h) : "no connection"));
}

struct stmt {
  sqlite3_stmt* s = nullptr;
  stmt(sqlite3* h, const std::string& sql) {
    if (sqlite3_prepare_v2(h, sql.c_str(), -1, &s, nullptr) != SQLITE_OK)
      raise(h, "prepare failed for: " + sql);
  }
  ~stmt() { sqlite3_finalize(s); }
};

}  // namespace

sqlite_db::sqlite_db(const std::string& dsn) : impl_(new impl) {
  std::string path = strip_dsn(dsn);
  if (sqlite3_open(path.c_str(), &impl_->handle) != SQLITE_OK) {
    std::string msg = impl_->handle ? sqlite3_errmsg(impl_->handle) : "out of memory";
    throw sql_error("cannot open store '" + path + "': " + msg);
  }
}

sqlite_db::~sqlite_db() {
  if (impl_ && impl_->handle) sqlite3_close(impl_->handle);
}

std::vector<table_info> sqlite_db::catalog() const {
  std::vector<table_info> out;
  stmt tables(impl_->handle,
              "SELECT name FROM sqlite_master WHERE type='table' "
              "AND name NOT LIKE 'sqlite_%' ORDER BY name");
  ++queries_;
  std::vector<std::string> names;
  while (true) {
    int rc = sqlite3_step(tables.s);
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) raise(impl_->handle, "catalog scan failed");
    names.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(tables.s, 0)));
  }
  for (const std::string& name : names) {
    stmt cols(impl_->handle, "SELECT COUNT(*) FROM pragma_table_info('" + name + "')");
    ++queries_;
    if (sqlite3_step(cols.s) != SQLITE_ROW) raise(impl_->handle, "pragma failed");
    int arity = sqlite3_column_int(cols.s, 0);
    if (arity < 1) continue;
    if (!exec_bool("SELECT CASE WHEN EXISTS (SELECT * FROM " + name +
                   ") THEN 1 ELSE 0 END"))
      continue;  // empty tables stay out of the catalog
    out.push_back(table_info{name, arity});
  }
  return out;
}

bool sqlite_db::exec_bool(const std::string& sql) const {
  stmt s(impl_->handle, sql);
  ++queries_;
  int rc = sqlite3_step(s.s);
  if (rc != SQLITE_ROW) raise(impl_->handle, "query failed: " + sql);
  return sqlite3_column_int(s.s, 0) != 0;
}

void sqlite_db::scan_table(
    const std::string& table, int arity, size_t chunk_size,
    const std::function<void(const std::vector<std::vector<std::string>>&)>& on_chunk)
    const {
  if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  stmt s(impl_->handle, "SELECT * FROM " + table);
  ++queries_;
  std::vector<std::vector<std::string>> chunk;
  chunk.reserve(std::min<size_t>(chunk_size, 65536));
  while (true) {
    int rc = sqlite3_step(s.s);
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) raise(impl_->handle, "scan failed on " + table);
    std::vector<std::string> row;
    row.reserve(size_t(arity));
    for (int i = 0; i < arity; ++i) {
      const unsigned char* v = sqlite3_column_text(s.s, i);
      row.emplace_back(v ? reinterpret_cast<const char*>(v) : "");
    }
    chunk.push_back(std::move(row));
    if (chunk.size() == chunk_size) {
      on_chunk(chunk);
      chunk.clear();
    }
  }
  if (!chunk.empty()) on_chunk(chunk);
}

void sqlite_db::create_table(const std::string& name, int arity) {
  std::string sql = "CREATE TABLE " + name + " (";
  for (int i = 1; i <= arity; ++i) {
    if (i > 1) sql += ", ";
    sql += "a" + std::to_string(i) + " TEXT";
  }
  sql += ")";
  char* err = nullptr;
  ++queries_;
  if (sqlite3_exec(impl_->handle, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    throw sql_error("create_table failed: " + msg);
  }
}

void sqlite_db::insert_rows(const std::string& name,
                            const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::string sql = "INSERT INTO " + name + " VALUES (";
  for (size_t i = 0; i < rows[0].size(); ++i) sql += i ? ",?" : "?";
  sql += ")";
  sqlite3_exec(impl_->handle, "BEGIN", nullptr, nullptr, nullptr);
  stmt s(impl_->handle, sql);
  ++queries_;
  for (const auto& row : rows) {
    sqlite3_reset(s.s);
    for (size_t i = 0; i < row.size(); ++i)
      sqlite3_bind_text(s.s, int(i + 1), row[i].c_str(), -1, SQLITE_TRANSIENT);
    if (sqlite3_step(s.s) != SQLITE_DONE) raise(impl_->handle, "insert failed");
  }
  sqlite3_exec(impl_->handle, "COMMIT", nullptr, nullptr, nullptr);
}

std::string shape_probe_sql(const std::string& table, const std::vector<uint8_t>& digits,
                            bool relaxed) {
  // Within-block equalities against each block's first column.
  std::vector<int> first_col(digits.size() + 1, 0);  // block digit -> 1-based col
  std::vector<std::string> conds;
  for (size_t i = 0; i < digits.size(); ++i) {
    int& first = first_col[digits[i]];
    if (first == 0) {
      first = int(i + 1);
    } else {
      conds.push_back("a" + std::to_string(first) + " = a" + std::to_string(i + 1));
    }
  }
  if (!relaxed) {
    // One disequality per unordered block pair, first columns on both sides.
    int blocks = 0;
    for (uint8_t d : digits) blocks = std::max(blocks, int(d));
    for (int b1 = 1; b1 <= blocks; ++b1)
      for (int b2 = b1 + 1; b2 <= blocks; ++b2)
        conds.push_back("a" + std::to_string(first_col[size_t(b1)]) + " != a" +
                        std::to_string(first_col[size_t(b2)]));
  }
  std::string sql = "SELECT CASE WHEN EXISTS (SELECT * FROM " + table;
  for (size_t i = 0; i < conds.size(); ++i)
    sql += (i == 0 ? " WHERE " : " AND ") + conds[i];
  return sql + ") THEN 1 ELSE 0 END";
}

namespace {

// True when s merges at least the blocks of f (every f-equality holds in s).
bool coarsens(const std::vector<uint8_t>& s, const std::vector<uint8_t>& f) {
  std::vector<int> image(f.size() + 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    int& img = image[f[i]];
    if (img == 0)
      img = s[i];
    else if (img != int(s[i]))
      return false;
  }
  return true;
}

}  // namespace

shape_set find_shapes_sql(const std::vector<table_info>& catalog, const sqlite_db& db) {
  shape_set out;
  for (const table_info& t : catalog) {
    pred_id pred = predicates::intern(t.name, t.arity);

    // Finest first: decreasing block count, ties in lexicographic digit order
    // (the cached enumeration is already lexicographic).
    std::vector<shape_code> order = all_partitions(t.arity);
    std::stable_sort(order.begin(), order.end(), [&](shape_code a, shape_code b) {
      return block_count(a, t.arity) > block_count(b, t.arity);
    });

    std::vector<std::vector<uint8_t>> failed;  // relaxed probes that came back empty
    for (shape_code code : order) {
      std::vector<uint8_t> digits = unpack_digits(code, t.arity);
      bool pruned = false;
      for (const auto& f : failed) {
        if (coarsens(digits, f)) {
          pruned = true;
          break;
        }
      }
      if (pruned) continue;
      if (!db.exec_bool(shape_probe_sql(t.name, digits, /*relaxed=*/true))) {
        failed.push_back(std::move(digits));
        continue;
      }
      if (db.exec_bool(shape_probe_sql(t.name, digits, /*relaxed=*/false)))
        out.insert(shape{pred, code});
    }
  }
  return out;
}

shape_set find_shapes_memory(const std::vector<table_info>& catalog, const sqlite_db& db,
                             size_t chunk_size, shape_scan_stats* stats) {
  shape_set out;
  shape_scan_stats local;
  for (const table_info& t : catalog) {
    pred_id pred = predicates::intern(t.name, t.arity);
    db.scan_table(t.name, t.arity, chunk_size,
                  [&](const std::vector<std::vector<std::string>>& chunk) {
                    for (const auto& row : chunk) {
                      std::vector<term> tuple;
                      tuple.reserve(row.size());
                      for (const std::string& c : row)
                        tuple.push_back(symbols::constant(c));
                      out.insert(shape{pred, pack_digits(unique_and_id(tuple).second)});
                      ++local.tuples;
                    }
                    ++local.chunks;
                  });
  }
  if (stats) *stats = local;
  return out;
}

std::set<pred_id> catalog_preds(const std::vector<table_info>& catalog) {
  std::set<pred_id> out;
  for (const table_info& t : catalog) out.insert(predicates::intern(t.name, t.arity));
  return out;
}

}  // namespace chasetc
