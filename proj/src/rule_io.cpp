#include "chasetc/rule_io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace chasetc {

namespace {

bool is_ident_start(char c) { return std::isalpha(uint8_t(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(uint8_t(c)) || c == '_'; }
bool is_const_char(char c) {
  return std::isalnum(uint8_t(c)) || c == '_' || c == '.' || c == '-';
}

struct line_parser {
  const std::string& s;
  int line;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, line, int(pos) + 1);
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(uint8_t(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const std::string& what) {
    if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }
  bool at_arrow() {
    skip_ws();
    return pos + 1 < s.size() && s[pos] == '-' && s[pos + 1] == '>';
  }
  std::string ident() {
    skip_ws();
    if (pos >= s.size() || !is_ident_start(s[pos])) fail("expected an identifier");
    size_t start = pos;
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }

  atom parse_atom(std::map<std::string, int>& arities) {
    size_t name_col = pos;
    std::string name = ident();
    expect('(', "after predicate name");
    std::vector<std::string> args;
    while (true) {
      skip_ws();
      size_t arg_col = pos;
      std::string v = ident();
      if (!std::islower(uint8_t(v[0]))) {
        pos = arg_col;
        fail("rule arguments must be variables (lowercase-initial)");
      }
      args.push_back(std::move(v));
      if (eat(')')) break;
      expect(',', "between arguments");
    }
    auto [it, fresh] = arities.emplace(name, int(args.size()));
    if (!fresh && it->second != int(args.size())) {
      pos = name_col;
      fail("predicate " + name + " used with arities " +
           std::to_string(it->second) + " and " + std::to_string(args.size()));
    }
    atom a;
    a.pred = predicates::intern(name, int(args.size()));
    for (const std::string& v : args) a.args.push_back(symbols::variable(v));
    return a;
  }
};

std::string strip_comment(const std::string& line) {
  size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(uint8_t(c)); });
}

}  // namespace

rule_file parse_rules(std::istream& in) {
  auto start = std::chrono::steady_clock::now();
  rule_file out;
  std::map<std::string, int> arities;  // one arity per predicate name per file
  std::string raw;
  int lineno = 0;
  int32_t next_id = 1;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string text = strip_comment(raw);
    if (blank(text)) continue;
    line_parser p{text, lineno};

    std::vector<atom> body;
    body.push_back(p.parse_atom(arities));
    while (!p.at_arrow()) {
      p.expect(',', "between body atoms (or '->')");
      body.push_back(p.parse_atom(arities));
    }
    p.pos += 2;  // consume "->"

    std::vector<atom> head;
    head.push_back(p.parse_atom(arities));
    while (p.eat(',')) head.push_back(p.parse_atom(arities));
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input after rule");

    out.rules.push_back(make_tgd(next_id++, std::move(body), std::move(head)));
  }
  out.t_parse_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

rule_file parse_rules_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule file: " + path);
  return parse_rules(in);
}

std::string render_rule(const tgd& r) {
  std::string out;
  for (size_t i = 0; i < r.body.size(); ++i) {
    if (i) out += ", ";
    out += render_atom(r.body[i]);
  }
  out += " -> ";
  for (size_t i = 0; i < r.head.size(); ++i) {
    if (i) out += ", ";
    out += render_atom(r.head[i]);
  }
  return out;
}

void write_rules(std::ostream& out, const std::vector<tgd>& rules) {
  for (const tgd& r : rules) out << render_rule(r) << "\n";
}

database load_fact_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fact file: " + path);
  database db;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string text = strip_comment(raw);
    if (blank(text)) continue;
    line_parser p{text, lineno};
    std::string name = p.ident();
    p.expect('(', "after predicate name");
    std::vector<term> args;
    while (true) {
      p.skip_ws();
      size_t start = p.pos;
      while (p.pos < text.size() && is_const_char(text[p.pos])) ++p.pos;
      if (p.pos == start) p.fail("expected a constant");
      args.push_back(symbols::constant(text.substr(start, p.pos - start)));
      if (p.eat(')')) break;
      p.expect(',', "between constants");
    }
    p.expect('.', "after fact");
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input after fact");
    db.insert(atom{predicates::intern(name, int(args.size())), std::move(args)});
  }
  return db;
}

void write_fact_file(std::ostream& out, const database& db) {
  // Relation order follows predicate names for stable output.
  std::vector<pred_id> ps;
  for (const auto& [p, tuples] : db.relations()) ps.push_back(p);
  std::sort(ps.begin(), ps.end(), [](pred_id a, pred_id b) {
    return predicates::name(a) < predicates::name(b);
  });
  for (pred_id p : ps) {
    for (const auto& tuple : db.relations().at(p)) {
      out << predicates::name(p) << "(";
      for (size_t i = 0; i < tuple.size(); ++i) {
        if (i) out << ",";
        out << symbols::name(tuple[i]);
      }
      out << ").\n";
    }
  }
}

database load_csv_dir(const std::string& path) {
  namespace fs = std::filesystem;
  database db;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::ifstream in(f);
    if (!in) throw std::runtime_error("cannot open " + f.string());
    std::string name = f.stem().string();
    std::string row;
    int lineno = 0;
    int arity = -1;
    pred_id p = -1;
    while (std::getline(in, row)) {
      ++lineno;
      if (!row.empty() && row.back() == '\r') row.pop_back();
      if (row.empty()) continue;
      std::vector<term> args;
      std::stringstream ss(row);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        size_t a = cell.find_first_not_of(" \t");
        size_t b = cell.find_last_not_of(" \t");
        if (a == std::string::npos) throw parse_error("empty CSV cell in " + name, lineno, 1);
        args.push_back(symbols::constant(cell.substr(a, b - a + 1)));
      }
      if (arity < 0) {
        arity = int(args.size());
        p = predicates::intern(name, arity);
      } else if (int(args.size()) != arity) {
        throw parse_error("row arity " + std::to_string(args.size()) + " != " +
                              std::to_string(arity) + " in " + name + ".csv",
                          lineno, 1);
      }
      db.insert(atom{p, std::move(args)});
    }
  }
  return db;
}

void write_csv_dir(const std::string& dir, const database& db) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [p, tuples] : db.relations()) {
    std::ofstream out(fs::path(dir) / (predicates::name(p) + ".csv"));
    for (const auto& tuple : tuples) {
      for (size_t i = 0; i < tuple.size(); ++i) {
        if (i) out << ",";
        out << symbols::name(tuple[i]);
      }
      out << "\n";
    }
  }
}

database load_database(const std::string& path) {
  if (std::filesystem::is_directory(path)) return load_csv_dir(path);
  return load_fact_file(path);
}

}  // namespace chasetc
