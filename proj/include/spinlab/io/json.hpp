#pragma once

// JSON readers/writers for graphs, edge vectors, ensembles and instances.
// Every reader error names the source and a JSON pointer (or line/column
// for syntax errors).

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/linalg/rational_matrix.hpp>
#include <spinlab/stabledet/ensemble.hpp>
#include <spinlab/stabledet/pgg.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::io {

using json = nlohmann::json;

class InputError : public std::runtime_error {
 public:
  InputError(const std::string& source, const std::string& where, const std::string& what)
      : std::runtime_error(source + ": " + (where.empty() ? "" : where + ": ") + what) {}
};

/// Location inside a JSON document: source name plus JSON pointer.
struct Loc {
  std::string source;
  std::string pointer;

  Loc operator/(const std::string& key) const { return {source, pointer + "/" + key}; }
  Loc operator/(std::size_t index) const { return {source, pointer + "/" + std::to_string(index)}; }
  [[noreturn]] void fail(const std::string& what) const { throw InputError(source, pointer.empty() ? "/" : pointer, what); }
};

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(source, "line " + std::to_string(line) + ", column " + std::to_string(col), msg);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json_file(const std::string& path) { return parse_json_text(read_file(path), path); }

// ---------------------------------------------------------------- scalars

inline const json& member(const json& j, const char* key, const Loc& loc) {
  if (!j.is_object()) loc.fail("expected an object");
  auto it = j.find(key);
  if (it == j.end()) loc.fail(std::string("missing field \"") + key + "\"");
  return *it;
}

inline long get_int(const json& j, const Loc& loc) {
  if (!j.is_number_integer()) loc.fail("expected an integer");
  return j.get<long>();
}

inline long get_nonneg_int(const json& j, const Loc& loc) {
  const long v = get_int(j, loc);
  if (v < 0) loc.fail("expected a nonnegative integer");
  return v;
}

inline Rational get_rational(const json& j, const Loc& loc) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      loc.fail(std::string("bad rational: ") + e.what());
    }
  }
  loc.fail("expected a rational as an integer or a \"p/q\" string");
}

inline std::vector<Rational> get_rational_vector(const json& j, const Loc& loc) {
  if (!j.is_array()) loc.fail("expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_rational(j[k], loc / k));
  return out;
}

inline MultiIndex get_multi_index(const json& j, const Loc& loc) {
  if (!j.is_array()) loc.fail("expected an array of nonnegative integers");
  std::vector<long> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(get_nonneg_int(j[k], loc / k));
  return MultiIndex(std::move(v));
}

inline ExponentMatrix get_exponent_matrix(const json& j, const Loc& loc, std::size_t n) {
  if (!j.is_array()) loc.fail("expected an array of rows");
  ExponentMatrix V;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto row = get_multi_index(j[i], loc / i);
    if (row.size() != n) (loc / i).fail("row has length " + std::to_string(row.size()) + ", expected " + std::to_string(n));
    V.push_back(std::move(row));
  }
  return V;
}

inline std::vector<int> get_signs(const json& j, const Loc& loc) {
  if (!j.is_array()) loc.fail("expected an array of +1/-1");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const long v = get_int(j[k], loc / k);
    if (v != 1 && v != -1) (loc / k).fail("expected +1 or -1");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

inline ParityMap get_parity_rows(const json& j, const Loc& loc, std::size_t n) {
  if (!j.is_array()) loc.fail("expected an array of bit rows");
  if (j.size() > ParityMap::max_targets) loc.fail("at most 64 parity rows are supported");
  std::vector<std::vector<int>> rows;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Loc lk = loc / k;
    if (!j[k].is_array()) lk.fail("expected a bit row");
    if (j[k].size() != n) lk.fail("bit row has length " + std::to_string(j[k].size()) + ", expected " + std::to_string(n));
    std::vector<int> row;
    for (std::size_t t = 0; t < n; ++t) {
      const long b = get_int(j[k][t], lk / t);
      if (b != 0 && b != 1) (lk / t).fail("expected 0 or 1");
      row.push_back(static_cast<int>(b));
    }
    rows.push_back(std::move(row));
  }
  return ParityMap::from_rows(rows, n);
}

// ---------------------------------------------------------------- writers

inline json to_json(const Rational& q) { return q.get_str(); }

inline json to_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(q.get_str());
  return a;
}

inline json to_json(const MultiIndex& a) {
  json out = json::array();
  for (auto v : a) out.push_back(v);
  return out;
}

inline json to_json(const ExponentMatrix& V) {
  json out = json::array();
  for (const auto& row : V) out.push_back(to_json(row));
  return out;
}

inline json parity_to_json(const ParityMap& rho) {
  json out = json::array();
  for (const auto& row : rho.rows()) out.push_back(row);
  return out;
}

// ---------------------------------------------------------------- graphs

/// { "p": int, "edges": [[i, j, w], ...] }, 1-based vertices, i < j.
inline WeightedGraph graph_from_json(const json& j, const std::string& source) {
  const Loc root{source, ""};
  const long p = get_int(member(j, "p", root), root / "p");
  if (p < 2) (root / "p").fail("p must be at least 2");
  if (p > 64) (root / "p").fail("p must be at most 64");
  const json& edges = member(j, "edges", root);
  if (!edges.is_array()) (root / "edges").fail("expected an array of [i, j, weight] triples");
  WeightedGraph g(static_cast<std::size_t>(p));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Loc lk = root / "edges" / k;
    const json& e = edges[k];
    if (!e.is_array() || e.size() != 3) lk.fail("expected [i, j, weight]");
    const long a = get_int(e[0], lk / 0), b = get_int(e[1], lk / 1), w = get_int(e[2], lk / 2);
    if (a < 1 || a > p) (lk / 0).fail("vertex out of range 1.." + std::to_string(p));
    if (b < 1 || b > p) (lk / 1).fail("vertex out of range 1.." + std::to_string(p));
    if (a >= b) lk.fail("edges must satisfy i < j");
    if (w < 0) (lk / 2).fail("weight must be nonnegative");
    if (g.weight(a - 1, b - 1) != 0) lk.fail("duplicate edge");
    g.set_weight(a - 1, b - 1, w);
  }
  return g;
}

inline WeightedGraph load_graph(const std::string& path) { return graph_from_json(load_json_file(path), path); }

inline json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1, e.weight});
  return {{"p", g.vertex_count()}, {"edges", edges}};
}

// ---------------------------------------------------------------- vectors

/// A vector argument: an existing file ({"x": [...]} or a bare array) or an
/// inline comma-separated list such as "1,2,3/4".
inline std::vector<Rational> parse_vector_arg(const std::string& arg, const std::string& what,
                                              const char* key = "x") {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    const json j = load_json_file(arg);
    const Loc root{arg, ""};
    if (j.is_array()) return get_rational_vector(j, root);
    if (j.is_object()) {
      if (j.contains(key)) return get_rational_vector(j[key], root / key);
      if (j.size() == 1) {
        auto it = j.begin();
        return get_rational_vector(it.value(), root / it.key());
      }
    }
    root.fail(std::string("expected {\"") + key + "\": [...]} or an array");
  }
  std::vector<Rational> out;
  std::stringstream ss(arg);
  std::string item;
  std::size_t k = 0;
  while (std::getline(ss, item, ',')) {
    ++k;
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError(what, "entry " + std::to_string(k), "empty entry");
    try {
      out.push_back(parse_rational(item.substr(b, e - b + 1)));
    } catch (const std::exception& ex) {
      throw InputError(what, "entry " + std::to_string(k), ex.what());
    }
  }
  if (out.empty()) throw InputError(what, "", "empty vector");
  return out;
}

inline MultiIndex parse_index_arg(const std::string& arg, const std::string& what) {
  auto v = parse_vector_arg(arg, what, "a");
  std::vector<long> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].get_den() != 1 || v[k] < 0 || !v[k].get_num().fits_slong_p())
      throw InputError(what, "entry " + std::to_string(k + 1), "expected a nonnegative integer");
    out.push_back(v[k].get_num().get_si());
  }
  return MultiIndex(std::move(out));
}

// ---------------------------------------------------------------- ensembles

/// { "q": int, "n": int, "matrices": [ [[...], ...], ... ] }.
inline stabledet::PsdEnsemble ensemble_from_json(const json& j, const std::string& source) {
  const Loc root{source, ""};
  const long q = get_int(member(j, "q", root), root / "q");
  const long n = get_int(member(j, "n", root), root / "n");
  if (q < 1) (root / "q").fail("q must be positive");
  if (n < 1) (root / "n").fail("n must be positive");
  const json& ms = member(j, "matrices", root);
  const Loc lm = root / "matrices";
  if (!ms.is_array()) lm.fail("expected an array of matrices");
  if (static_cast<long>(ms.size()) != n) lm.fail("expected " + std::to_string(n) + " matrices, found " + std::to_string(ms.size()));
  std::vector<RationalMatrix> mats;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const Loc lk = lm / k;
    if (!ms[k].is_array() || static_cast<long>(ms[k].size()) != q) lk.fail("expected " + std::to_string(q) + " rows");
    RationalMatrix A(static_cast<std::size_t>(q), static_cast<std::size_t>(q));
    for (std::size_t i = 0; i < ms[k].size(); ++i) {
      const json& row = ms[k][i];
      if (!row.is_array() || static_cast<long>(row.size()) != q) (lk / i).fail("expected " + std::to_string(q) + " entries");
      for (std::size_t t = 0; t < row.size(); ++t) A(i, t) = get_rational(row[t], lk / i / t);
    }
    mats.push_back(std::move(A));
  }
  try {
    return stabledet::PsdEnsemble(std::move(mats));
  } catch (const std::invalid_argument& e) {
    lm.fail(e.what());
  }
}

inline stabledet::PsdEnsemble load_ensemble(const std::string& path) {
  return ensemble_from_json(load_json_file(path), path);
}

inline json ensemble_to_json(const stabledet::PsdEnsemble& e) {
  json mats = json::array();
  for (const auto& A : e.matrices()) {
    json rows = json::array();
    for (const auto& r : A.to_rows()) rows.push_back(to_json(r));
    mats.push_back(rows);
  }
  return {{"q", e.q()}, {"n", e.n()}, {"matrices", mats}};
}

// ---------------------------------------------------------------- PGG instances

/// { "V": [[...]], "eps": [...], "u": [...], "r": int, "rho": [[bits]] }; rho
/// defaults to the trivial map.
inline stabledet::PggInstance pgg_instance_from_json(const json& j, const std::string& source) {
  const Loc root{source, ""};
  stabledet::PggInstance in;
  in.u = get_multi_index(member(j, "u", root), root / "u");
  const std::size_t n = in.u.size();
  in.V = get_exponent_matrix(member(j, "V", root), root / "V", n);
  in.eps = get_signs(member(j, "eps", root), root / "eps");
  if (in.eps.size() != in.V.size()) (root / "eps").fail("eps length does not match the row count of V");
  in.r = get_int(member(j, "r", root), root / "r");
  if (in.r < 1) (root / "r").fail("r must be a positive integer");
  in.rho = j.contains("rho") ? get_parity_rows(j["rho"], root / "rho", n) : ParityMap(n);
  return in;
}

inline json pgg_instance_to_json(const stabledet::PggInstance& in) {
  return {{"V", to_json(in.V)}, {"eps", in.eps}, {"u", to_json(in.u)}, {"r", in.r}, {"rho", parity_to_json(in.rho)}};
}

}  // namespace spinlab::io
