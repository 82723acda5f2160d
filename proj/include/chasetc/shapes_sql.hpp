#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "chasetc/model.hpp"
#include "chasetc/shapes.hpp"

namespace chasetc {

struct sql_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct table_info {
  std::string name;
  int arity = 0;
};

// Thin connection to a SQLite store. The DSN is a filesystem path, optionally
// prefixed with "sqlite://". Tables use columns a1..an; names must be plain
// identifiers. Also usable as a writer so generators and tests can seed
// stores.
class sqlite_db {
 public:
  explicit sqlite_db(const std::string& dsn);
  ~sqlite_db();
  sqlite_db(const sqlite_db&) = delete;
  sqlite_db& operator=(const sqlite_db&) = delete;

  // Non-empty user tables with their column counts, sorted by name. Reads
  // sqlite_master plus a one-row EXISTS probe per table; tuple data is never
  // scanned.
  std::vector<table_info> catalog() const;

  // Runs a query whose single cell is 0 or 1.
  bool exec_bool(const std::string& sql) const;

  // Streams all rows of a table in chunks of at most chunk_size rows.
  void scan_table(const std::string& table, int arity, size_t chunk_size,
                  const std::function<void(const std::vector<std::vector<std::string>>&)>&
                      on_chunk) const;

  void create_table(const std::string& name, int arity);
  void insert_rows(const std::string& name,
                   const std::vector<std::vector<std::string>>& rows);

  size_t queries_issued() const { return queries_; }

 private:
  struct impl;
  std::unique_ptr<impl> impl_;
  mutable size_t queries_ = 0;
};

// The per-shape probe texts, exposed for tests. `relaxed` carries only the
// within-block equalities; the strict form adds one disequality per unordered
// block pair, between the two blocks' first columns.
std::string shape_probe_sql(const std::string& table, const std::vector<uint8_t>& digits,
                            bool relaxed);

// In-database shape discovery. For every cataloged relation the partition
// lattice is walked finest-first (decreasing block count, ties in
// lexicographic digit order); each candidate first runs the relaxed probe,
// and on a miss the candidate and all coarsenings of it are skipped without
// touching the store. Relations absent from the catalog are skipped with
// zero queries.
shape_set find_shapes_sql(const std::vector<table_info>& catalog, const sqlite_db& db);

// Loads all tuples into shapes chunk by chunk (the in-memory strategy run
// against a connected store).
shape_set find_shapes_memory(const std::vector<table_info>& catalog, const sqlite_db& db,
                             size_t chunk_size = kDefaultChunkSize,
                             shape_scan_stats* stats = nullptr);

// Catalog predicates interned as (name, arity) pairs.
std::set<pred_id> catalog_preds(const std::vector<table_info>& catalog);

}  // namespace chasetc
