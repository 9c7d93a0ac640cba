#include "stabkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "stabkit/morley.hpp"
#include "stabkit/order.hpp"
#include "stabkit/stability.hpp"
#include "stabkit/vc_approx.hpp"

using nlohmann::json;

namespace stabkit {

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw ValidationError("empty rational");
  if (s.find('.') != std::string::npos) {
    // decimal form
    bool neg = s[0] == '-';
    std::string t = neg || s[0] == '+' ? s.substr(1) : s;
    auto dot = t.find('.');
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw ValidationError("bad rational: " + s);
    for (char c : ip + fp)
      if (!isdigit(static_cast<unsigned char>(c)))
        throw ValidationError("bad rational: " + s);
    mpz_class num(ip.empty() ? "0" : ip);
    mpz_class den(1);
    for (size_t k = 0; k < fp.size(); ++k) den *= 10;
    num *= den;
    if (!fp.empty()) num += mpz_class(fp);
    Rat q(num, den);
    q.canonicalize();
    return neg ? Rat(-q) : q;
  }
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0 ||
      mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw ValidationError("bad rational: " + s);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// relation documents
// ---------------------------------------------------------------------------

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  while (!s.empty() && isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  size_t b = 0;
  while (b < s.size() && isspace(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

AmbientRelation load_relation_text(std::istream& in) {
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string s = strip_comment(raw);
    if (!s.empty()) lines.push_back(s);
  }
  if (lines.size() < 4) throw ValidationError("truncated relation document");
  std::istringstream head(lines[0]);
  std::string tag;
  int ux = 0, uy = 0;
  head >> tag >> ux >> uy;
  if (tag != "relation" || head.fail())
    throw ValidationError("expected 'relation <u_x> <u_y>' header");
  auto read_indices = [](const std::string& line, const std::string& want) {
    std::istringstream is(line);
    std::string t;
    is >> t;
    if (t != want) throw ValidationError("expected '" + want + "' line");
    std::vector<int> v;
    int x;
    while (is >> x) v.push_back(x);
    return v;
  };
  std::vector<int> mx = read_indices(lines[1], "mx");
  std::vector<int> my = read_indices(lines[2], "my");
  if (int(lines.size()) != 3 + ux)
    throw ValidationError("expected " + std::to_string(ux) + " matrix rows, got " +
                          std::to_string(lines.size() - 3));
  std::vector<std::string> rows(lines.begin() + 3, lines.end());
  for (auto& r : rows)
    if (int(r.size()) != uy)
      throw ValidationError("matrix row width does not match u_y");
  return make_relation(rows, mx, my);
}

std::vector<std::string> matrix_strings(const AmbientRelation& rel) {
  std::vector<std::string> rows;
  rows.reserve(size_t(rel.u_x));
  for (int a = 0; a < rel.u_x; ++a) {
    std::string s(static_cast<size_t>(rel.u_y), '0');
    rel.row[size_t(a)].for_each([&](int b) { s[size_t(b)] = '1'; });
    rows.push_back(std::move(s));
  }
  return rows;
}

}  // namespace

AmbientRelation relation_from_json(const json& j) {
  try {
    int ux = j.at("u_x").get<int>();
    int uy = j.at("u_y").get<int>();
    std::vector<std::string> rows =
        j.at("matrix").get<std::vector<std::string>>();
    std::vector<int> mx = j.at("m_x").get<std::vector<int>>();
    std::vector<int> my = j.at("m_y").get<std::vector<int>>();
    if (int(rows.size()) != ux)
      throw ValidationError("matrix row count does not match u_x");
    for (auto& r : rows)
      if (int(r.size()) != uy)
        throw ValidationError("matrix row width does not match u_y");
    return make_relation(rows, mx, my);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad relation document: ") + e.what());
  }
}

AmbientRelation load_relation(std::istream& in) {
  // Sniff: JSON documents start with '{'.
  int c = in.peek();
  while (c != EOF && isspace(c)) {
    in.get();
    c = in.peek();
  }
  if (c == '{') {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError(std::string("bad JSON: ") + e.what());
    }
    return relation_from_json(j);
  }
  return load_relation_text(in);
}

AmbientRelation load_relation_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path);
  return load_relation(f);
}

std::string write_relation_text(const AmbientRelation& rel) {
  std::ostringstream os;
  os << "relation " << rel.u_x << " " << rel.u_y << "\n";
  os << "mx";
  rel.m_x.for_each([&](int a) { os << " " << a; });
  os << "\nmy";
  rel.m_y.for_each([&](int b) { os << " " << b; });
  os << "\n";
  for (const auto& r : matrix_strings(rel)) os << r << "\n";
  return os.str();
}

json relation_to_json(const AmbientRelation& rel) {
  json j;
  j["u_x"] = rel.u_x;
  j["u_y"] = rel.u_y;
  j["m_x"] = rel.m_x.to_indices();
  j["m_y"] = rel.m_y.to_indices();
  j["matrix"] = matrix_strings(rel);
  return j;
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

long arg_long(const std::vector<std::string>& args, size_t k,
              const std::string& spec) {
  if (k >= args.size()) throw ValidationError("missing argument in " + spec);
  try {
    return std::stol(args[k]);
  } catch (...) {
    throw ValidationError("bad integer '" + args[k] + "' in " + spec);
  }
}

AmbientRelation gen_half_graph(int n) {
  if (n < 1) throw ValidationError("half_graph needs n >= 1");
  std::vector<std::string> rows(static_cast<size_t>(n), std::string(static_cast<size_t>(n), '0'));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) rows[size_t(i)][size_t(j)] = '1';
  return make_relation(rows);
}

AmbientRelation gen_full_subsets(int n) {
  if (n < 1 || n > 20) throw ValidationError("full_subsets needs 1 <= n <= 20");
  int rows_n = 1 << n;
  std::vector<std::string> rows(static_cast<size_t>(rows_n), std::string(static_cast<size_t>(n), '0'));
  for (int r = 0; r < rows_n; ++r)
    for (int j = 0; j < n; ++j)
      if ((r >> j) & 1) rows[size_t(r)][size_t(j)] = '1';
  return make_relation(rows);
}

AmbientRelation gen_random_bipartite(int n, int m, const Rat& p,
                                     uint64_t seed) {
  if (n < 1 || m < 1) throw ValidationError("random_bipartite needs n,m >= 1");
  if (p < 0 || p > 1)
    throw ValidationError("random_bipartite probability must be in [0,1]");
  // Exact threshold: entry iff draw < floor(p * 2^64).
  mpz_class thr = (p.get_num() << 64) / p.get_den();
  std::mt19937_64 gen(seed);
  std::vector<std::string> rows(static_cast<size_t>(n), std::string(static_cast<size_t>(m), '0'));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < m; ++b)
      if (mpz_class(gen()) < thr) rows[size_t(a)][size_t(b)] = '1';
  return make_relation(rows);
}

// Block-diagonal union of every loop-allowed graph on up to k vertices,
// enumerated by vertex count and then by the row-major code of the upper
// triangle (diagonal included).
AmbientRelation gen_union_finite_graphs(int k) {
  if (k < 1 || k > 4)
    throw ValidationError("union_finite_graphs needs 1 <= k <= 4");
  std::vector<std::vector<std::string>> blocks;
  int total = 0;
  for (int n = 1; n <= k; ++n) {
    int bits = n * (n + 1) / 2;
    for (long code = 0; code < (1L << bits); ++code) {
      std::vector<std::string> g(static_cast<size_t>(n), std::string(static_cast<size_t>(n), '0'));
      int pos = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          if ((code >> pos) & 1) {
            g[size_t(i)][size_t(j)] = '1';
            g[size_t(j)][size_t(i)] = '1';
          }
          ++pos;
        }
      total += n;
      blocks.push_back(std::move(g));
    }
  }
  std::vector<std::string> rows(static_cast<size_t>(total), std::string(static_cast<size_t>(total), '0'));
  int off = 0;
  for (const auto& g : blocks) {
    int n = int(g.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rows[size_t(off + i)][size_t(off + j)] = g[size_t(i)][size_t(j)];
    off += n;
  }
  return make_relation(rows);
}

}  // namespace

AmbientRelation generate(const std::string& spec) {
  auto open = spec.find('(');
  if (open == std::string::npos || spec.back() != ')')
    throw ValidationError("generator spec must look like name(args)");
  std::string name = spec.substr(0, open);
  std::string inner = spec.substr(open + 1, spec.size() - open - 2);

  if (name == "half_graph") {
    auto a = split(inner, ',');
    return gen_half_graph(int(arg_long(a, 0, spec)));
  }
  if (name == "full_subsets") {
    auto a = split(inner, ',');
    return gen_full_subsets(int(arg_long(a, 0, spec)));
  }
  if (name == "random_bipartite") {
    auto a = split(inner, ',');
    if (a.size() != 4)
      throw ValidationError("random_bipartite(n,m,p,seed) takes 4 arguments");
    return gen_random_bipartite(int(arg_long(a, 0, spec)),
                                int(arg_long(a, 1, spec)), rat_parse(a[2]),
                                uint64_t(arg_long(a, 3, spec)));
  }
  if (name == "union_finite_graphs") {
    auto a = split(inner, ',');
    return gen_union_finite_graphs(int(arg_long(a, 0, spec)));
  }
  if (name == "from_matrix") {
    auto rows = split(inner, ';');
    return make_relation(rows);
  }
  throw ValidationError("unknown generator '" + name + "'");
}

// ---------------------------------------------------------------------------
// measure documents
// ---------------------------------------------------------------------------

std::string trace_string(const Bits& trace, const Bits& params) {
  std::string s;
  params.for_each([&](int p) { s.push_back(trace.test(p) ? '1' : '0'); });
  return s;
}

Bits trace_from_string(const std::string& s, const Bits& params) {
  if (int(s.size()) != params.count())
    throw ValidationError("trace string length does not match the sub-model");
  Bits t(params.size());
  int k = 0;
  params.for_each([&](int p) {
    char c = s[size_t(k++)];
    if (c == '1')
      t.set(p);
    else if (c != '0')
      throw ValidationError("non-binary trace character");
  });
  return t;
}

json measure_to_json(const KeislerMeasure& mu) {
  const TypeSpace& ts = *mu.space;
  const Bits& params = ts.side == Side::phi ? ts.rel.m_y : ts.rel.m_x;
  json weights = json::array();
  for (const auto& [id, w] : normal_form(mu)) {
    json e;
    e["trace"] = trace_string(ts.types[size_t(id)].trace, params);
    e["weight"] = rat_str(w);
    weights.push_back(std::move(e));
  }
  json j;
  j["side"] = side_name(ts.side);
  j["weights"] = std::move(weights);
  return j;
}

KeislerMeasure measure_from_json(const json& j, TypeSpacePtr space) {
  const TypeSpace& ts = *space;
  const Bits& params = ts.side == Side::phi ? ts.rel.m_y : ts.rel.m_x;
  try {
    std::string side = j.at("side").get<std::string>();
    if (side != side_name(ts.side))
      throw ValidationError("measure document side '" + side +
                            "' does not match the space");
    std::map<int, Rat> w;
    for (const auto& e : j.at("weights")) {
      Bits trace =
          trace_from_string(e.at("trace").get<std::string>(), params);
      int id = -1;
      for (const PhiType& t : ts.types)
        if (t.trace == trace) {
          id = t.id;
          break;
        }
      if (id < 0)
        throw ValidationError("measure trace '" +
                              e.at("trace").get<std::string>() +
                              "' is not realized in the type space");
      w[id] += rat_parse(e.at("weight").get<std::string>());
    }
    return make_measure(std::move(space), std::move(w));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad measure document: ") + e.what());
  }
}

KeislerMeasure load_measure_file(const std::string& path, TypeSpacePtr space) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad JSON: ") + e.what());
  }
  return measure_from_json(j, std::move(space));
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

namespace {

json witness_json(const LadderWitness& w) {
  json j;
  j["rows"] = w.rows;
  j["cols"] = w.cols;
  j["direction"] = std::string(1, w.direction);
  return j;
}

json types_json(const TypeSpace& ts) {
  const Bits& params = ts.side == Side::phi ? ts.rel.m_y : ts.rel.m_x;
  json list = json::array();
  int realized = 0, definable = 0;
  for (const PhiType& t : ts.types) {
    json e;
    e["id"] = t.id;
    e["trace"] = trace_string(t.trace, params);
    e["realizers"] = t.realizers;
    e["realized_in_m"] = t.realized_in_m;
    e["definable"] = t.definition.has_value();
    if (t.undef_witness)
      e["undefinable_witness"] = {t.undef_witness->first,
                                  t.undef_witness->second};
    realized += t.realized_in_m;
    definable += t.definition.has_value();
    list.push_back(std::move(e));
  }
  json j;
  j["count"] = int(ts.types.size());
  j["realized_in_m"] = realized;
  j["definable"] = definable;
  j["types"] = std::move(list);
  return j;
}

AmbientRelation obtain_relation(const RunConfig& cfg) {
  bool has_input = !cfg.input_path.empty();
  bool has_gen = !cfg.gen_spec.empty();
  if (has_input == has_gen)
    throw ValidationError("exactly one of --input and --gen is required");
  return has_input ? load_relation_file(cfg.input_path)
                   : generate(cfg.gen_spec);
}

KeislerMeasure measure_or_default(const RunConfig& cfg, TypeSpacePtr space) {
  if (!cfg.mu_paths.empty()) return load_measure_file(cfg.mu_paths[0], space);
  const TypeSpace& ts = *space;
  const Bits& members = ts.side == Side::phi ? ts.rel.m_x : ts.rel.m_y;
  return average(space, members.to_indices());
}

std::vector<KeislerMeasure> candidate_measures(
    const std::vector<std::string>& paths, TypeSpacePtr space) {
  std::vector<KeislerMeasure> out;
  if (!paths.empty()) {
    for (const auto& p : paths) out.push_back(load_measure_file(p, space));
    return out;
  }
  for (const PhiType& t : space->types)
    if (t.definition) out.push_back(dirac(space, t.id));
  return out;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  if (!cfg.input_path.empty()) j["input"] = cfg.input_path;
  if (!cfg.gen_spec.empty()) j["gen"] = cfg.gen_spec;
  j["cap"] = cfg.cap;
  j["eps"] = rat_str(cfg.eps);
  j["r"] = rat_str(cfg.r);
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  if (!cfg.mu_paths.empty()) j["mu"] = cfg.mu_paths;
  if (!cfg.nu_paths.empty()) j["nu"] = cfg.nu_paths;
  return j;
}

json run_analyze(const RunConfig& cfg, const AmbientRelation& rel,
                 int& exit_code) {
  json res;
  res["relation"] = {{"u_x", rel.u_x},
                     {"u_y", rel.u_y},
                     {"m_x", rel.m_x.to_indices()},
                     {"m_y", rel.m_y.to_indices()}};
  LadderResult lad = ladder_index(rel, cfg.cap);
  res["ladder"] = {{"index", lad.n}, {"cap", cfg.cap},
                   {"cap_reached", lad.cap_reached}};
  if (lad.witness) res["ladder"]["witness"] = witness_json(*lad.witness);
  if (lad.cap_reached) exit_code = 3;

  VcResult vc = vc_dimension(rel);
  res["vc"] = {{"dim", vc.dim}, {"shattered", vc.shattered}};

  auto phis = make_type_space(rel, Side::phi);
  auto opps = make_type_space(rel, Side::opp);
  res["phi_types"] = types_json(*phis);
  res["opp_types"] = types_json(*opps);

  int pairs = 0, symmetric = 0;
  json asym = json::array();
  for (const PhiType& p : phis->types) {
    if (!p.definition) continue;
    for (const PhiType& q : opps->types) {
      if (!q.definition) continue;
      ChiResult c = chi_eval(*phis, *opps, p.id, q.id);
      ++pairs;
      if (c.symmetric)
        ++symmetric;
      else
        asym.push_back({p.id, q.id});
    }
  }
  res["chi"] = {{"definable_pairs", pairs},
                {"symmetric", symmetric},
                {"asymmetric_pairs", std::move(asym)}};
  return res;
}

json run_decompose(const RunConfig& cfg, const AmbientRelation& rel) {
  auto space = make_type_space(rel, Side::phi);
  KeislerMeasure mu = measure_or_default(cfg, space);
  std::vector<Rat> raw(static_cast<size_t>(space->count()), Rat(0));
  for (const auto& [id, w] : mu.weights) raw[size_t(id)] = w;
  Decomposition dec = sobczyk_hammer_decompose(space, raw);

  const Bits& params = rel.m_y;
  json parts = json::array();
  for (const auto& [id, w] : dec.ordered) {
    parts.push_back({{"type", id},
                     {"trace", trace_string(space->types[size_t(id)].trace, params)},
                     {"weight", rat_str(w)}});
  }
  json res;
  res["measure"] = measure_to_json(mu);
  res["atomic_parts"] = std::move(parts);
  res["residual_mass"] = rat_str(dec.residual_mass);
  res["strong_continuity_deficit"] = rat_str(strong_continuity_deficit(mu));
  return res;
}

json run_morley(const RunConfig& cfg, const AmbientRelation& rel) {
  auto phis = make_type_space(rel, Side::phi);
  auto opps = make_type_space(rel, Side::opp);
  auto mus = candidate_measures(cfg.mu_paths, phis);
  auto nus = candidate_measures(cfg.nu_paths, opps);
  if (mus.empty() || nus.empty())
    throw ValidationError("no definable candidate measures on some side");

  bool all_commute = true;
  json pairs = json::array();
  for (size_t i = 0; i < mus.size(); ++i)
    for (size_t j = 0; j < nus.size(); ++j) {
      MorleyReport rep = evaluation_map(mus[i], nus[j]);
      json e;
      e["mu"] = int(i);
      e["nu"] = int(j);
      if (rep.value_forward) {
        e["forward"] = rat_str(*rep.value_forward);
        e["backward"] = rat_str(*rep.value_backward);
        e["commutes"] = rep.commutes;
        all_commute = all_commute && rep.commutes;
      } else {
        json und = json::array();
        for (const SideRef& s : rep.undefinable_types)
          und.push_back({{"side", side_name(s.side)}, {"type", s.type_id}});
        e["undefinable"] = std::move(und);
        all_commute = false;
      }
      pairs.push_back(std::move(e));
    }
  json res;
  json mj = json::array(), nj = json::array();
  for (const auto& m : mus) mj.push_back(measure_to_json(m));
  for (const auto& m : nus) nj.push_back(measure_to_json(m));
  res["mus"] = std::move(mj);
  res["nus"] = std::move(nj);
  res["pairs"] = std::move(pairs);
  res["all_commute"] = all_commute;
  return res;
}

json run_approx(const RunConfig& cfg, const AmbientRelation& rel,
                int& exit_code) {
  auto phis = make_type_space(rel, Side::phi);
  auto opps = make_type_space(rel, Side::opp);
  KeislerMeasure mu = measure_or_default(cfg, phis);
  ApproxResult a = epsilon_approximate(mu, *opps, cfg.eps, cfg.seed);
  json res;
  res["ok"] = a.ok;
  res["samples"] = a.samples;
  res["attempts"] = a.attempts;
  res["deviation"] = rat_str(a.deviation);
  res["eps"] = rat_str(cfg.eps);
  std::map<int, int> counts;
  for (int e : a.elements) counts[e]++;
  json elems = json::array();
  for (auto& [e, c] : counts) elems.push_back({{"element", e}, {"count", c}});
  res["element_counts"] = std::move(elems);
  if (!a.ok) exit_code = 4;
  return res;
}

json run_search_order(const RunConfig& cfg, const AmbientRelation& rel,
                      int& exit_code) {
  auto phis = make_type_space(rel, Side::phi);
  auto opps = make_type_space(rel, Side::opp);
  auto mus = candidate_measures(cfg.mu_paths, phis);
  auto nus = candidate_measures(cfg.nu_paths, opps);
  if (mus.empty() || nus.empty())
    throw ValidationError("no definable candidate measures on some side");

  auto found = order_array_search(mus, nus, cfg.r, cfg.eps, cfg.cap);
  json res;
  res["r"] = rat_str(cfg.r);
  res["eps"] = rat_str(cfg.eps);
  res["n_max"] = cfg.cap;
  res["found"] = found.has_value();
  if (found) {
    int n = int(found->mus.size());
    res["size"] = n;
    json grid = json::array();
    for (int i = 0; i < n; ++i) {
      json row = json::array();
      for (int j = 0; j < n; ++j)
        row.push_back(rat_str(found->grid[size_t(i)][size_t(j)]));
      grid.push_back(std::move(row));
    }
    res["grid"] = std::move(grid);
    json mj = json::array(), nj = json::array();
    for (const auto& m : found->mus) mj.push_back(measure_to_json(m));
    for (const auto& m : found->nus) nj.push_back(measure_to_json(m));
    res["mus"] = std::move(mj);
    res["nus"] = std::move(nj);
    if (n == cfg.cap) exit_code = 3;
  }
  return res;
}

json run_double_limit(const RunConfig& cfg, const AmbientRelation& rel) {
  std::vector<int> mx = rel.m_x.to_indices();
  std::vector<int> my = rel.m_y.to_indices();
  int n = int(std::min(mx.size(), my.size()));
  if (n < 4)
    throw ValidationError("double-limit needs a sub-model of at least 4x4");
  std::vector<std::vector<Rat>> grid(static_cast<size_t>(n));
  for (auto& row : grid) row.resize(size_t(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      grid[size_t(i)][size_t(j)] =
          Rat(rel.entry(mx[size_t(i)], my[size_t(j)]) ? 1 : 0);
  DoubleLimitReport rep = double_limit_estimate(grid, cfg.eps);
  json res;
  res["n"] = n;
  res["tolerance"] = rat_str(cfg.eps);
  res["inner_outer_converged"] = rep.inner_outer_converged;
  res["outer_inner_converged"] = rep.outer_inner_converged;
  if (rep.inner_outer) res["inner_outer"] = rat_str(*rep.inner_outer);
  if (rep.outer_inner) res["outer_inner"] = rat_str(*rep.outer_inner);
  if (rep.gap) res["gap"] = rat_str(*rep.gap);
  return res;
}

json run_two_tree(const RunConfig& cfg, const AmbientRelation& rel) {
  auto space = make_type_space(rel, Side::phi);
  KeislerMeasure mu = measure_or_default(cfg, space);
  TwoTree tree = build_two_tree(mu, cfg.cap);
  json nodes = json::array();
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const TwoTreeNode& n = tree.nodes[i];
    json e;
    e["id"] = int(i);
    e["depth"] = n.depth;
    e["measure"] = rat_str(n.measure);
    e["atoms"] = n.atom_ids;
    if (n.left >= 0) {
      e["left"] = n.left;
      e["right"] = n.right;
    }
    e["stop"] = n.stop == TwoTreeNode::split        ? "split"
                : n.stop == TwoTreeNode::single_atom ? "single_atom"
                                                     : "depth_cap";
    nodes.push_back(std::move(e));
  }
  json res;
  res["measure"] = measure_to_json(mu);
  res["max_depth"] = cfg.cap;
  res["depth"] = tree.depth;
  res["nodes"] = std::move(nodes);
  res["check"] = check_two_tree(tree, mu);
  return res;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  if (cfg.format != "json" && cfg.format != "csv")
    throw ValidationError("format must be json or csv");

  if (cfg.command == "generate") {
    if (cfg.gen_spec.empty())
      throw ValidationError("generate requires --gen");
    AmbientRelation rel = generate(cfg.gen_spec);
    if (cfg.format == "json") {
      out.report = relation_to_json(rel);
      out.rendered = out.report.dump(2) + "\n";
    } else {
      out.rendered = write_relation_text(rel);
    }
    return out;
  }

  AmbientRelation rel = obtain_relation(cfg);
  json res;
  if (cfg.command == "analyze")
    res = run_analyze(cfg, rel, out.exit_code);
  else if (cfg.command == "decompose")
    res = run_decompose(cfg, rel);
  else if (cfg.command == "morley")
    res = run_morley(cfg, rel);
  else if (cfg.command == "approx")
    res = run_approx(cfg, rel, out.exit_code);
  else if (cfg.command == "search-order")
    res = run_search_order(cfg, rel, out.exit_code);
  else if (cfg.command == "double-limit")
    res = run_double_limit(cfg, rel);
  else if (cfg.command == "two-tree")
    res = run_two_tree(cfg, rel);
  else
    throw ValidationError("unknown command '" + cfg.command + "'");

  out.report["tool"] = "stabkit";
  out.report["version"] = kVersion;
  out.report["config"] = config_json(cfg);
  out.report["result"] = std::move(res);
  out.rendered = cfg.format == "json" ? out.report.dump(2) + "\n"
                                      : report_to_csv(out.report);
  return out;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string t = "\"";
  for (char c : s) {
    if (c == '"') t += "\"\"";
    else t.push_back(c);
  }
  return t + "\"";
}

void flatten(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    out += csv_escape(prefix) + "," + csv_escape(v) + "\n";
  }
}

}  // namespace

std::string report_to_csv(const json& j) {
  std::string out = "key,value\n";
  flatten(j, "", out);
  return out;
}

}  // namespace stabkit
