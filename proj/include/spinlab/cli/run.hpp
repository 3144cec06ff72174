#pragma once

// Command-line front end. run() never calls exit(); it returns the process
// exit code: 0 ok/holds, 1 usage or malformed input, 2 a theorem-backed
// inequality certified negative, 3 inconclusive at the precision cap.

#include <spinlab/asymptotics/asymptotics.hpp>
#include <spinlab/core/hash.hpp>
#include <spinlab/inequalities/hunt.hpp>
#include <spinlab/inequalities/inequalities.hpp>
#include <spinlab/inequalities/oracle.hpp>
#include <spinlab/inequalities/switching.hpp>
#include <spinlab/io/json.hpp>
#include <spinlab/kirchhoff/kirchhoff.hpp>
#include <spinlab/moments/moments.hpp>
#include <spinlab/stabledet/battery.hpp>
#include <spinlab/stabledet/ensemble.hpp>
#include <spinlab/stabledet/hirota.hpp>
#include <spinlab/stabledet/pgg.hpp>
#include <spinlab/stabledet/wick.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace spinlab::cli {

inline constexpr const char* version = "0.1.0";

enum ExitCode : int { Ok = 0, Usage = 1, Falsified = 2, Inconclusive = 3 };

using io::json;

struct Globals {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  long precision_bits = 0;  // 0 = per-command default
};

/// A report: top-level fields plus an optional table; `lines` selects JSON
/// lines (one row per line, summary last).
struct Report {
  json meta = json::object();
  std::vector<json> rows;
  bool lines = false;
  int code = Ok;
};

namespace detail {

inline std::string csv_field(const json& v) {
  std::string s;
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_null()) s = "";
  else s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline void emit(const Report& r, const std::string& format, std::ostream& os) {
  if (format == "csv") {
    if (!r.rows.empty()) {
      std::vector<std::string> cols;
      for (const auto& row : r.rows)
        for (auto it = row.begin(); it != row.end(); ++it)
          if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
      for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << csv_field(cols[k]);
      os << "\n";
      for (const auto& row : r.rows) {
        for (std::size_t k = 0; k < cols.size(); ++k)
          os << (k ? "," : "") << (row.contains(cols[k]) ? csv_field(row[cols[k]]) : "");
        os << "\n";
      }
      os << "\n";
    }
    os << "key,value\n";
    for (auto it = r.meta.begin(); it != r.meta.end(); ++it) os << csv_field(it.key()) << "," << csv_field(it.value()) << "\n";
    return;
  }
  if (r.lines) {
    for (const auto& row : r.rows) os << row.dump() << "\n";
    os << r.meta.dump() << "\n";
    return;
  }
  json doc = r.meta;
  if (!r.rows.empty()) doc["rows"] = r.rows;
  os << doc.dump(2) << "\n";
}

inline void stamp(Report& r, const std::string& command, const json& input) {
  r.meta["command"] = command;
  r.meta["version"] = version;
  r.meta["instance_hash"] = hash_hex(fnv1a64(command + "\n" + input.dump()));
}

inline json rational_or_null(const std::optional<Rational>& q) { return q ? json(q->get_str()) : json(nullptr); }

inline moments::Model parse_model(const std::string& s) {
  if (s == "on") return moments::Model::ON;
  if (s == "cpn") return moments::Model::CPN;
  throw std::invalid_argument("model must be \"on\" or \"cpn\"");
}

inline std::vector<long> parse_long_list(const std::string& s, const std::string& what) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || item.find_first_not_of(" \t", pos) != std::string::npos)
      throw io::InputError(what, "", "expected a comma-separated list of integers, got \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw io::InputError(what, "", "empty list");
  return out;
}

inline stabledet::PrecisionPolicy precision(const Globals& g) {
  stabledet::PrecisionPolicy pol;
  if (g.precision_bits > 0) pol.start_bits = g.precision_bits;
  pol.cap_bits = std::max(stabledet::precision_cap_from_env(), pol.start_bits);
  return pol;
}

inline json theta_json(const stabledet::ThetaResult& t) {
  json j;
  j["verdict"] = stabledet::verdict_name(t.verdict);
  j["theta"] = rational_or_null(t.exact);
  j["theta_enclosure"] = t.enclosure.to_string();
  j["theta_decimal"] = t.enclosure.midpoint_string();
  j["precision_bits"] = t.precision_bits;
  j["even_terms"] = t.terms;
  json cls = json::array();
  for (const auto& c : t.classes) cls.push_back({{"radicand", c.radicand.get_str()}, {"coefficient", c.coefficient.get_str()}});
  j["square_classes"] = cls;
  return j;
}

inline int verdict_code(stabledet::Verdict v) {
  switch (v) {
    case stabledet::Verdict::CertifiedNegative: return Falsified;
    case stabledet::Verdict::Inconclusive: return Inconclusive;
    default: return Ok;
  }
}

// ---------------------------------------------------------------- commands

struct MomentsArgs {
  std::string model, graph;
  long N = 0;
  bool mc = false;
  std::uint64_t samples = 100000;
};

inline Report cmd_moments(const MomentsArgs& a, const Globals& g) {
  const auto model = parse_model(a.model);
  const auto graph = io::load_graph(a.graph);
  if (a.N < 1) throw std::invalid_argument("--N must be a positive integer");
  const auto res = moments::moment(model, graph, a.N);
  Report r;
  r.meta["model"] = a.model;
  r.meta["N"] = a.N;
  r.meta["graph"] = io::graph_to_json(graph);
  r.meta["value"] = res.value.get_str();
  r.meta["float"] = to_decimal(res.value);
  json order = json::array();
  for (auto v : res.elimination_order) order.push_back(v + 1);
  r.meta["elimination_order"] = order;
  json input = {{"model", a.model}, {"N", a.N}, {"graph", r.meta["graph"]}};
  if (a.mc) {
    if (a.samples == 0) throw std::invalid_argument("--samples must be at least 1");
    const auto est = moments::moment_mc(model, graph, a.N, a.samples, g.seed);
    const double exact = res.value.get_d();
    r.meta["mc"] = {{"mean", est.mean},
                    {"stderr", est.stderr_},
                    {"samples", est.samples},
                    {"seed", g.seed},
                    {"z", est.stderr_ > 0 ? (est.mean - exact) / est.stderr_ : 0.0}};
    input["mc"] = {{"samples", a.samples}, {"seed", g.seed}};
  }
  stamp(r, "moments", input);
  return r;
}

struct KirchhoffArgs {
  std::string graph, x, u, a, b;
  std::size_t e = 0, f = 0;
};

inline std::vector<Rational> point_or_weights(const std::string& arg, const WeightedGraph& g, const char* what) {
  auto x = arg.empty() ? kirchhoff::weights_as_point(g) : io::parse_vector_arg(arg, what);
  if (x.size() != g.edge_count())
    throw io::InputError(what, "", "vector has length " + std::to_string(x.size()) + " but the graph has " +
                                       std::to_string(g.edge_count()) + " edges");
  return x;
}

inline Report cmd_kirchhoff_eval(const KirchhoffArgs& a) {
  const auto g = io::load_graph(a.graph);
  const auto x = point_or_weights(a.x, g, "--x");
  Report r;
  const auto mt = kirchhoff::kirchhoff_matrix_tree(g, x);
  r.meta["graph"] = io::graph_to_json(g);
  r.meta["x"] = io::to_json(x);
  r.meta["connected"] = mt.connected;
  r.meta["value"] = mt.value.get_str();
  r.meta["float"] = to_decimal(mt.value);
  const bool positive = std::all_of(x.begin(), x.end(), [](const Rational& v) { return v > 0; });
  if (mt.connected && positive) {
    const auto st = kirchhoff::kirchhoff_spanning(g, x);
    r.meta["spanning_tree_value"] = st.get_str();
    r.meta["routes_agree"] = st == mt.value;
    r.meta["spanning_trees"] = kirchhoff::spanning_tree_count(g);
    if (st != mt.value) r.code = Falsified;
  }
  stamp(r, "kirchhoff eval", {{"graph", r.meta["graph"]}, {"x", r.meta["x"]}});
  return r;
}

inline Report cmd_kirchhoff_symbolic(const KirchhoffArgs& a) {
  const auto g = io::load_graph(a.graph);
  const auto K = kirchhoff::kirchhoff_symbolic(g);
  Report r;
  r.meta["graph"] = io::graph_to_json(g);
  r.meta["polynomial"] = K.to_string();
  r.meta["terms"] = K.term_count();
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1});
  r.meta["variables"] = edges;  // x_k is the k-th edge below
  stamp(r, "kirchhoff symbolic", {{"graph", r.meta["graph"]}});
  return r;
}

inline Report cmd_kirchhoff_rayleigh(const KirchhoffArgs& a) {
  const auto g = io::load_graph(a.graph);
  const auto x = point_or_weights(a.x, g, "--x");
  const std::size_t E = g.edge_count();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (a.e || a.f) {
    if (a.e < 1 || a.e > E || a.f < 1 || a.f > E) throw std::invalid_argument("--e and --f must be edge indices in 1.." + std::to_string(E));
    pairs.emplace_back(a.e - 1, a.f - 1);
  } else {
    for (std::size_t e = 0; e < E; ++e)
      for (std::size_t f = e; f < E; ++f) pairs.emplace_back(e, f);
  }
  Report r;
  std::optional<Rational> min;
  for (auto [e, f] : pairs) {
    const Rational d = kirchhoff::rayleigh_check(g, x, e, f);
    r.rows.push_back({{"e", e + 1}, {"f", f + 1}, {"delta", d.get_str()}, {"holds", d >= 0}});
    if (!min || d < *min) min = d;
    if (d < 0) r.code = Falsified;
  }
  r.meta["graph"] = io::graph_to_json(g);
  r.meta["x"] = io::to_json(x);
  r.meta["pairs"] = pairs.size();
  r.meta["min_delta"] = rational_or_null(min);
  r.meta["holds"] = r.code == Ok;
  stamp(r, "kirchhoff rayleigh", {{"graph", r.meta["graph"]}, {"x", r.meta["x"]}, {"e", a.e}, {"f", a.f}});
  return r;
}

inline Report cmd_kirchhoff_ultramod(const KirchhoffArgs& a) {
  const auto g = io::load_graph(a.graph);
  const auto u = point_or_weights(a.u, g, "--u");
  if (a.a.empty() || a.b.empty()) throw std::invalid_argument("ultramod needs --a and --b");
  const auto va = point_or_weights(a.a, g, "--a");
  const auto vb = point_or_weights(a.b, g, "--b");
  const auto res = kirchhoff::ultramod_check(g, u, va, vb);
  Report r;
  r.meta["graph"] = io::graph_to_json(g);
  r.meta["u"] = io::to_json(u);
  r.meta["a"] = io::to_json(va);
  r.meta["b"] = io::to_json(vb);
  r.meta["margin"] = res.margin.get_str();
  r.meta["holds"] = res.holds;
  if (!res.holds) r.code = Falsified;
  stamp(r, "kirchhoff ultramod", {{"graph", r.meta["graph"]}, {"u", r.meta["u"]}, {"a", r.meta["a"]}, {"b", r.meta["b"]}});
  return r;
}

inline Report cmd_kirchhoff_detrep(const KirchhoffArgs& a) {
  const auto g = io::load_graph(a.graph);
  const auto ens = kirchhoff::determinantal_rep(g);
  const auto x = kirchhoff::weights_as_point(g);
  Report r;
  r.meta["graph"] = io::graph_to_json(g);
  r.meta["ensemble"] = io::ensemble_to_json(ens);
  const Rational P = stabledet::eval_P(ens, x), K = kirchhoff::kirchhoff_matrix_tree(g, x).value;
  r.meta["det_at_weights"] = P.get_str();
  r.meta["kirchhoff_at_weights"] = K.get_str();
  r.meta["agree"] = P == K;
  if (P != K) r.code = Falsified;
  stamp(r, "kirchhoff detrep", {{"graph", r.meta["graph"]}});
  return r;
}

struct AsymptoticsArgs {
  std::string model, graph, lambdas;
  long N = 0;
};

inline Report cmd_asymptotics(const AsymptoticsArgs& a, const Globals& gl) {
  const auto model = parse_model(a.model);
  const auto g = io::load_graph(a.graph);
  const auto lambdas = parse_long_list(a.lambdas, "--lambdas");
  const long bits = gl.precision_bits > 0 ? gl.precision_bits : asymptotics::default_precision_bits;
  const auto rep = model == moments::Model::ON ? asymptotics::on_ratio(g, a.N, lambdas, bits)
                                               : asymptotics::cpn_ratio(g, a.N, lambdas, bits);
  Report r;
  r.meta["model"] = a.model;
  r.meta["N"] = a.N;
  r.meta["graph"] = io::graph_to_json(g);
  r.meta["kirchhoff"] = rep.kirchhoff_value.get_str();
  r.meta["prefactor"] = rep.prefactor;
  r.meta["prefactor_decimal"] = rep.prefactor_enclosure.midpoint_string();
  r.meta["precision_bits"] = bits;
  r.meta["decimal_digits"] = 20;
  const Interval one(Rational(1), bits);
  for (const auto& pt : rep.points) {
    json row;
    row["lambda"] = pt.lambda;
    row["even"] = pt.even;
    row["exact"] = rational_or_null(pt.exact);
    row["exact_decimal"] = pt.exact_enclosure.midpoint_string();
    row["predicted"] = rational_or_null(pt.predicted);
    row["predicted_decimal"] = pt.predicted_enclosure.midpoint_string();
    row["ratio"] = rational_or_null(pt.ratio);
    row["ratio_decimal"] = pt.ratio_enclosure.midpoint_string();
    row["ratio_enclosure"] = pt.ratio_enclosure.to_string();
    row["ratio_minus_one_decimal"] = (pt.ratio_enclosure - one).midpoint_string();
    r.rows.push_back(std::move(row));
  }
  stamp(r, "asymptotics", {{"model", a.model}, {"N", a.N}, {"graph", r.meta["graph"]}, {"lambdas", lambdas}, {"bits", bits}});
  return r;
}

struct PggArgs {
  std::string ensemble, instance;
};

inline Report cmd_pgg_check(const PggArgs& a, const Globals& gl) {
  const auto ens = io::load_ensemble(a.ensemble);
  const auto inst = io::pgg_instance_from_json(io::load_json_file(a.instance), a.instance);
  try {
    stabledet::validate(inst, ens.n());
  } catch (const std::invalid_argument& e) {
    throw io::InputError(a.instance, "", std::string("instance violates the hypotheses: ") + e.what());
  }
  const auto pol = precision(gl);
  const auto t = stabledet::pgg_theta(ens, inst, pol);
  Report r;
  r.meta = theta_json(t);
  r.meta["precision_cap_bits"] = pol.cap_bits;
  r.meta["ensemble"] = io::ensemble_to_json(ens);
  r.meta["instance"] = io::pgg_instance_to_json(inst);
  r.code = verdict_code(t.verdict);
  stamp(r, "pgg check", {{"ensemble", r.meta["ensemble"]}, {"instance", r.meta["instance"]}});
  return r;
}

struct ProbeArgs {
  std::string ensemble, a, x, eta = "1";
  long r = 1;
};

inline Report cmd_hirota(const ProbeArgs& p) {
  const auto ens = io::load_ensemble(p.ensemble);
  const auto a = io::parse_index_arg(p.a, "--a");
  const auto x = io::parse_vector_arg(p.x, "--x");
  const Rational eta = parse_rational(p.eta);
  if (a.size() != ens.n() || x.size() != ens.n())
    throw std::invalid_argument("--a and --x must have one entry per matrix (" + std::to_string(ens.n()) + ")");
  const Rational S = stabledet::hirota_probe(ens, a, x, eta);
  Report r;
  r.meta["ensemble"] = io::ensemble_to_json(ens);
  r.meta["a"] = io::to_json(a);
  r.meta["x"] = io::to_json(x);
  r.meta["eta"] = eta.get_str();
  r.meta["value"] = S.get_str();
  r.meta["float"] = to_decimal(S);
  // |a| = 2 reduces to the Rayleigh-type inequality for determinantal P;
  // higher orders are an open question and only reported.
  const bool asserted = a.length() == 2 && eta > 0;
  r.meta["asserted"] = asserted;
  r.meta["nonnegative"] = S >= 0;
  if (asserted && S < 0) r.code = Falsified;
  stamp(r, "hirota", {{"ensemble", r.meta["ensemble"]}, {"a", r.meta["a"]}, {"x", r.meta["x"]}, {"eta", r.meta["eta"]}});
  return r;
}

inline Report cmd_lemma(const ProbeArgs& p) {
  const auto ens = io::load_ensemble(p.ensemble);
  const auto a = io::parse_index_arg(p.a, "--a");
  const auto v = io::parse_vector_arg(p.x, "--v");
  if (p.r < 1) throw std::invalid_argument("--r must be a positive integer");
  const Rational I = stabledet::lemma_check(ens, v, a, p.r);
  Report r;
  r.meta["ensemble"] = io::ensemble_to_json(ens);
  r.meta["a"] = io::to_json(a);
  r.meta["v"] = io::to_json(v);
  r.meta["r"] = p.r;
  r.meta["value"] = I.get_str();
  r.meta["float"] = to_decimal(I);
  r.meta["nonnegative"] = I >= 0;
  if (I < 0) r.code = Falsified;
  // second route: S(v, r/2) / P(v)^{r+|a|}
  const bool positive = std::all_of(v.begin(), v.end(), [](const Rational& q) { return q > 0; });
  if (a.length() % 2 == 0 && a.length() <= stabledet::hirota_degree_cap && positive) {
    const Rational S = stabledet::hirota_probe(ens, a, v, Rational(p.r, 2));
    const Rational cross = S / pow(stabledet::eval_P(ens, v), p.r + a.length());
    r.meta["hirota_route"] = cross.get_str();
    r.meta["routes_agree"] = cross == I;
    if (cross != I) r.code = Falsified;
  }
  stamp(r, "lemma", {{"ensemble", r.meta["ensemble"]}, {"a", r.meta["a"]}, {"v", r.meta["v"]}, {"r", p.r}});
  return r;
}

struct InequalityArgs {
  std::string instance;
  bool allow_odd_padding = false;
};

struct InequalityInstance {
  std::string model;
  long N = 1;
  std::size_t p = 2;
  ExponentMatrix V;
  std::vector<int> eps;
  MultiIndex u, a, b, gamma;
};

inline InequalityInstance load_inequality_instance(const std::string& path) {
  const json j = io::load_json_file(path);
  const io::Loc root{path, ""};
  InequalityInstance in;
  const json& m = io::member(j, "model", root);
  if (!m.is_string() || (m != "on" && m != "cpn")) (root / "model").fail("model must be \"on\" or \"cpn\"");
  in.model = m.get<std::string>();
  in.N = io::get_int(io::member(j, "N", root), root / "N");
  if (in.N < 1) (root / "N").fail("N must be positive");
  const long p = io::get_int(io::member(j, "p", root), root / "p");
  if (p < 2 || p > 8) (root / "p").fail("p must be in [2, 8]");
  in.p = static_cast<std::size_t>(p);
  const std::size_t n = pair_count(in.p);
  auto vec = [&](const char* key) {
    if (!j.contains(key)) return MultiIndex(n);
    auto v = io::get_multi_index(j[key], root / key);
    if (v.size() != n) (root / key).fail("expected " + std::to_string(n) + " entries (one per pair i<j)");
    return v;
  };
  in.V = j.contains("V") ? io::get_exponent_matrix(j["V"], root / "V", n) : ExponentMatrix{};
  in.u = vec("u");
  in.a = vec("a");
  in.b = vec("b");
  if (j.contains("eps")) in.eps = io::get_signs(j["eps"], root / "eps");
  if (j.contains("eps") && in.eps.size() != in.V.size()) (root / "eps").fail("eps length does not match the row count of V");
  in.gamma = j.contains("gamma") ? io::get_multi_index(j["gamma"], root / "gamma") : MultiIndex(in.V.size());
  if (in.gamma.size() != in.V.size()) (root / "gamma").fail("gamma length does not match the row count of V");
  return in;
}

inline json inequality_instance_json(const InequalityInstance& in) {
  return {{"model", in.model}, {"N", in.N}, {"p", in.p}, {"V", io::to_json(in.V)}, {"eps", in.eps},
          {"u", io::to_json(in.u)}, {"a", io::to_json(in.a)}, {"b", io::to_json(in.b)}, {"gamma", io::to_json(in.gamma)}};
}

/// family in {cgks2, pcgks2, gg, pgg}.
inline Report cmd_inequality(const std::string& family, const InequalityArgs& args) {
  const auto in = load_inequality_instance(args.instance);
  const auto O = in.model == "on" ? inequalities::CorrelationOracle::on(in.p, in.N)
                                  : inequalities::CorrelationOracle::cpn(in.p, in.N);
  const bool on = in.model == "on";
  const bool u_even = O.parity().is_even(in.u);
  const bool padded = family == "pcgks2" || family == "pgg";
  if (padded && !u_even && !args.allow_odd_padding)
    throw io::InputError(args.instance, "/u", "padding u is not even (use --allow-odd-padding to evaluate anyway)");
  if ((family == "gg" || family == "pgg") && in.eps.empty() && !in.V.empty())
    throw io::InputError(args.instance, "", "missing field \"eps\"");
  Rational margin;
  if (family == "cgks2") margin = inequalities::cgks2_margin(O, in.V, in.a, in.b, in.gamma);
  else if (family == "pcgks2") margin = inequalities::pcgks2_margin_unchecked(O, in.V, in.a, in.b, in.gamma, in.u);
  else if (family == "gg") margin = inequalities::gg_value(O, in.V, in.eps);
  else margin = inequalities::pgg_value_unchecked(O, in.V, in.eps, in.u);

  // Theorem-backed cases: Ising and O(2) for the unpadded families, Ising
  // for the padded ones (with u even).
  bool asserted = false;
  if (on && !padded) asserted = in.N <= 2;
  if (on && padded) asserted = in.N == 1 && u_even;
  Report r;
  r.meta["family"] = family;
  r.meta["instance"] = inequality_instance_json(in);
  r.meta["margin"] = margin.get_str();
  r.meta["float"] = to_decimal(margin);
  r.meta["holds"] = margin >= 0;
  r.meta["asserted"] = asserted;
  if (padded) r.meta["padding_even"] = u_even;
  if (on && family == "cgks2" && in.N >= 3 && margin < 0) r.meta["conjecture_violation"] = true;
  if (asserted && margin < 0) r.code = Falsified;
  stamp(r, "inequalities " + family, r.meta["instance"]);
  return r;
}

struct HuntArgs {
  inequalities::HuntConfig config;
};

inline Report cmd_hunt(HuntArgs h, const Globals& gl) {
  h.config.seed = gl.seed;
  const auto rep = inequalities::hunt(h.config);
  Report r;
  r.lines = true;
  for (const auto& v : rep.violations) {
    const auto& in = v.instance;
    const bool proved = in.N == 1 || (in.N == 2 && in.u.is_zero());
    if (proved) r.code = Falsified;
    r.rows.push_back({{"type", "violation"},
                      {"index", in.index},
                      {"N", in.N},
                      {"p", in.p},
                      {"V", io::to_json(in.V)},
                      {"eps", in.eps},
                      {"u", io::to_json(in.u)},
                      {"margin", v.margin.get_str()},
                      {"theorem_backed", proved}});
  }
  const auto& c = h.config;
  r.meta["type"] = "summary";
  r.meta["instances"] = rep.instances;
  r.meta["evaluated"] = rep.evaluated;
  r.meta["skipped"] = rep.skipped;
  r.meta["violations"] = rep.violations.size();
  r.meta["min_margin"] = rep.have_min ? json(rep.min_margin.get_str()) : json(nullptr);
  json cfg = {{"N_min", c.N_min}, {"N_max", c.N_max}, {"p", c.p}, {"max_weight", c.max_weight}, {"m", c.m},
              {"max_padding", c.max_padding}, {"count", c.count}, {"seed", c.seed},
              {"minus_probability", c.minus_probability}};
  r.meta["config"] = cfg;
  stamp(r, "hunt", cfg);
  return r;
}

inline Report cmd_switch(const InequalityArgs& args) {
  const json j = io::load_json_file(args.instance);
  const io::Loc root{args.instance, ""};
  ParityMap rho;
  std::size_t n = 0;
  if (j.contains("rho")) {
    const json& rows = j["rho"];
    if (!rows.is_array() || rows.empty() || !rows[0].is_array()) (root / "rho").fail("expected a nonempty array of bit rows");
    n = rows[0].size();
    rho = io::get_parity_rows(rows, root / "rho", n);
  } else {
    const long p = io::get_int(io::member(j, "p", root), root / "p");
    if (p < 2 || p > 8) (root / "p").fail("p must be in [2, 8]");
    n = pair_count(static_cast<std::size_t>(p));
    rho = on_parity_map(static_cast<std::size_t>(p));
  }
  const auto V = io::get_exponent_matrix(io::member(j, "V", root), root / "V", n);
  const auto gamma = io::get_multi_index(io::member(j, "gamma", root), root / "gamma");
  if (gamma.size() != V.size()) (root / "gamma").fail("gamma length does not match the row count of V");
  auto vec = [&](const char* key) {
    auto v = io::get_multi_index(io::member(j, key, root), root / key);
    if (v.size() != n) (root / key).fail("expected " + std::to_string(n) + " entries");
    return v;
  };
  const auto a = vec("a"), b = vec("b");
  const auto rep = inequalities::ising_switch_verify(gamma, V, a, b, rho);
  Report r;
  json input = {{"gamma", io::to_json(gamma)}, {"V", io::to_json(V)}, {"a", io::to_json(a)}, {"b", io::to_json(b)},
                {"rho", io::parity_to_json(rho)}};
  r.meta["instance"] = input;
  r.meta["verdict"] = inequalities::switch_verdict_name(rep.verdict);
  r.meta["C"] = rep.C ? json(*rep.C) : json(nullptr);
  r.meta["K_size"] = rep.K_size;
  r.meta["subsets_checked"] = rep.subsets_checked;
  r.meta["involution"] = rep.involution;
  r.meta["bijection"] = rep.bijection;
  r.meta["domination"] = rep.domination;
  r.meta["lhs_total"] = rep.lhs_total;
  r.meta["rhs_total"] = rep.rhs_total;
  if (rep.verdict == inequalities::SwitchVerdict::Failed) r.code = Falsified;
  stamp(r, "switch", input);
  return r;
}

struct BatteryArgs {
  std::string kind = "pgg";
  stabledet::BatteryConfig config;
};

inline Report cmd_battery(BatteryArgs b, const Globals& gl) {
  auto& c = b.config;
  if (b.kind == "pgg") c.kind = stabledet::EnsembleKind::Random;
  else if (b.kind == "pgg-kirchhoff") c.kind = stabledet::EnsembleKind::Kirchhoff;
  else throw std::invalid_argument("--kind must be pgg or pgg-kirchhoff");
  c.seed = gl.seed;
  c.jobs = gl.jobs;
  c.precision = precision(gl);
  const auto rep = stabledet::random_pgg_battery(c);
  Report r;
  r.lines = true;
  for (const auto& rec : rep.records)
    r.rows.push_back({{"type", "instance"},
                      {"index", rec.index},
                      {"instance_hash", hash_hex(rec.hash)},
                      {"verdict", stabledet::verdict_name(rec.verdict)},
                      {"theta", rational_or_null(rec.exact)},
                      {"theta_lower", rec.theta_lower},
                      {"theta_mid", rec.theta_mid},
                      {"precision_bits", rec.precision_bits}});
  r.meta["type"] = "summary";
  r.meta["instances"] = rep.instances;
  r.meta["falsifications"] = rep.falsifications;
  r.meta["inconclusive"] = rep.inconclusive;
  r.meta["exact_zero"] = rep.exact_zero;
  r.meta["min_theta"] = rep.min_theta ? json(*rep.min_theta) : json(nullptr);
  r.meta["min_index"] = rep.min_index ? json(*rep.min_index) : json(nullptr);
  json cfg = {{"kind", b.kind}, {"q", c.q}, {"n", c.n}, {"m", c.m}, {"r", c.r}, {"count", c.count}, {"seed", c.seed},
              {"max_entry", c.max_entry}, {"max_L", c.max_L}, {"start_bits", c.precision.start_bits},
              {"cap_bits", c.precision.cap_bits}};
  r.meta["config"] = cfg;  // jobs is deliberately absent: output must not depend on it
  if (rep.falsifications) r.code = Falsified;
  else if (rep.inconclusive) r.code = Inconclusive;
  stamp(r, "battery", cfg);
  return r;
}

}  // namespace detail

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and certified computations for spin-model correlation inequalities", "spinlab"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");
  app.add_option("--seed", g.seed, "Root seed for all randomness");
  app.add_option("--jobs", g.jobs, "Worker threads for batteries")->check(CLI::Range(1U, 256U));
  app.add_option("--precision-bits", g.precision_bits, "Interval precision (starting precision for sign certification)")
      ->check(CLI::Range(2L, 1L << 20));
  app.set_version_flag("--version", version);

  detail::MomentsArgs ma;
  auto* mom = app.add_subcommand("moments", "Exact zero-coupling correlation <O^m>");
  mom->add_option("--model", ma.model, "on | cpn")->required();
  mom->add_option("--N", ma.N, "Spin dimension")->required();
  mom->add_option("--graph", ma.graph, "Graph JSON")->required();
  mom->add_flag("--mc", ma.mc, "Also report a Monte Carlo estimate");
  mom->add_option("--samples", ma.samples, "Monte Carlo samples");

  detail::KirchhoffArgs ka;
  auto* kir = app.add_subcommand("kirchhoff", "Kirchhoff polynomial tools");
  kir->require_subcommand(1);
  auto* k_eval = kir->add_subcommand("eval", "Evaluate K at a point by both routes");
  auto* k_sym = kir->add_subcommand("symbolic", "Expand K symbolically");
  auto* k_ray = kir->add_subcommand("rayleigh", "Rayleigh difference d_eK d_fK - K d_e d_fK");
  auto* k_ult = kir->add_subcommand("ultramod", "K(u+a+b)K(u) - K(u+a)K(u+b)");
  auto* k_det = kir->add_subcommand("detrep", "Determinantal (PSD ensemble) representation");
  for (auto* s : {k_eval, k_sym, k_ray, k_ult, k_det}) {
    s->add_option("--graph", ka.graph, "Graph JSON")->required();
    s->fallthrough();
  }
  k_eval->add_option("--x", ka.x, "Edge vector (file or comma list); default: graph weights");
  k_ray->add_option("--x", ka.x, "Edge vector; default: graph weights");
  k_ray->add_option("--e", ka.e, "First edge (1-based); all pairs if omitted");
  k_ray->add_option("--f", ka.f, "Second edge (1-based)");
  k_ult->add_option("--u", ka.u, "Base point; default: graph weights");
  k_ult->add_option("--a", ka.a, "Increment a")->required();
  k_ult->add_option("--b", ka.b, "Increment b")->required();

  detail::AsymptoticsArgs aa;
  auto* asy = app.add_subcommand("asymptotics", "Large-power ratio <O^{lambda m}> / prediction");
  asy->add_option("--model", aa.model, "on | cpn")->required();
  asy->add_option("--graph", aa.graph, "Graph JSON")->required();
  asy->add_option("--N", aa.N, "Spin dimension")->required();
  asy->add_option("--lambdas", aa.lambdas, "Comma-separated scale factors")->required();

  detail::PggArgs pa;
  auto* pgg = app.add_subcommand("pgg", "Determinantal PGG inequality");
  pgg->require_subcommand(1);
  auto* pgg_check = pgg->add_subcommand("check", "Certify the sign of Theta for one instance");
  pgg_check->add_option("--ensemble", pa.ensemble, "Ensemble JSON")->required();
  pgg_check->add_option("--instance", pa.instance, "Instance JSON")->required();
  pgg_check->fallthrough();

  detail::ProbeArgs ha;
  auto* hir = app.add_subcommand("hirota", "Hirota sign carrier S(x, eta) of P^{-eta}");
  hir->add_option("--ensemble", ha.ensemble, "Ensemble JSON")->required();
  hir->add_option("--a", ha.a, "Derivative multi-index")->required();
  hir->add_option("--x", ha.x, "Point, strictly positive")->required();
  hir->add_option("--eta", ha.eta, "Exponent eta (rational)");

  detail::ProbeArgs la;
  auto* lem = app.add_subcommand("lemma", "Exact double integral of e^{-v(s+t)} (t-s)^a");
  lem->add_option("--ensemble", la.ensemble, "Ensemble JSON")->required();
  lem->add_option("--a", la.a, "Multi-index")->required();
  lem->add_option("--v", la.x, "Point v")->required();
  lem->add_option("--r", la.r, "Half-integer power numerator (P^{-r/2})");

  detail::InequalityArgs ia;
  auto* ineq = app.add_subcommand("inequalities", "Correlation inequality margins");
  ineq->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> families;
  for (const char* fam : {"cgks2", "pcgks2", "gg", "pgg"}) {
    auto* s = ineq->add_subcommand(fam, std::string("Evaluate the ") + fam + " margin");
    s->add_option("--instance", ia.instance, "Instance JSON")->required();
    s->fallthrough();
    if (std::string(fam) == "pcgks2" || std::string(fam) == "pgg")
      s->add_flag("--allow-odd-padding", ia.allow_odd_padding, "Evaluate even if u is not even");
    families.emplace_back(fam, s);
  }

  detail::HuntArgs hu;
  auto* hun = app.add_subcommand("hunt", "Random GG/PGG counterexample search over O(N)");
  hun->add_option("--N-min", hu.config.N_min);
  hun->add_option("--N-max", hu.config.N_max);
  hun->add_option("--p", hu.config.p);
  hun->add_option("--max-weight", hu.config.max_weight);
  hun->add_option("--m", hu.config.m);
  hun->add_option("--max-padding", hu.config.max_padding);
  hun->add_option("--count", hu.config.count);
  hun->add_option("--minus-probability", hu.config.minus_probability)->check(CLI::Range(0.0, 1.0));

  detail::InequalityArgs sa;
  auto* sw = app.add_subcommand("switch", "Verify the Ising switching bijection");
  sw->add_option("--instance", sa.instance, "Instance JSON")->required();

  detail::BatteryArgs ba;
  auto* bat = app.add_subcommand("battery", "Randomized determinantal PGG battery");
  bat->add_option("--kind", ba.kind, "pgg | pgg-kirchhoff");
  bat->add_option("--count", ba.config.count);
  bat->add_option("--q", ba.config.q);
  bat->add_option("--n", ba.config.n);
  bat->add_option("--m", ba.config.m);
  bat->add_option("--r", ba.config.r);
  bat->add_option("--max-entry", ba.config.max_entry);
  bat->add_option("--max-L", ba.config.max_L);

  for (auto* s : {mom, kir, asy, pgg, hir, lem, ineq, hun, sw, bat}) s->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return Usage;
  }

  Report rep;
  try {
    if (*mom) rep = detail::cmd_moments(ma, g);
    else if (*k_eval) rep = detail::cmd_kirchhoff_eval(ka);
    else if (*k_sym) rep = detail::cmd_kirchhoff_symbolic(ka);
    else if (*k_ray) rep = detail::cmd_kirchhoff_rayleigh(ka);
    else if (*k_ult) rep = detail::cmd_kirchhoff_ultramod(ka);
    else if (*k_det) rep = detail::cmd_kirchhoff_detrep(ka);
    else if (*asy) rep = detail::cmd_asymptotics(aa, g);
    else if (*pgg_check) rep = detail::cmd_pgg_check(pa, g);
    else if (*hir) rep = detail::cmd_hirota(ha);
    else if (*lem) rep = detail::cmd_lemma(la);
    else if (*hun) rep = detail::cmd_hunt(hu, g);
    else if (*sw) rep = detail::cmd_switch(sa);
    else if (*bat) rep = detail::cmd_battery(ba, g);
    else {
      bool done = false;
      for (auto& [fam, s] : families)
        if (*s) {
          rep = detail::cmd_inequality(fam, ia);
          done = true;
        }
      if (!done) {
        err << app.help();
        return Usage;
      }
    }
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return Usage;
  } catch (const std::exception& e) {
    // domain/hypothesis violations and capacity limits
    err << "error: " << e.what() << "\n";
    return Usage;
  }

  if (g.out.empty()) {
    detail::emit(rep, g.format, out);
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << g.out << " for writing\n";
      return Usage;
    }
    detail::emit(rep, g.format, f);
  }
  return rep.code;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

}  // namespace spinlab::cli
