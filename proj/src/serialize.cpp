#include "dcx/serialize.hpp"

#include <fstream>
#include <sstream>

#include "dcx/error.hpp"

namespace dcx {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

long integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      long v = std::stol(j.get<std::string>(), &used);
      if (used == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  fail(where, "expected an integer");
}

int degree_key(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    int v = std::stoi(key, &used);
    if (used == key.size()) return v;
  } catch (const std::exception&) {
  }
  fail(where, "degree key \"" + key + "\" is not an integer");
}

Ring ring_of(const Json& j, std::optional<Ring> ring, const std::string& where) {
  if (ring) return *ring;
  if (!j.contains("ring")) return Ring::integers();
  const Json& r = j["ring"];
  if (!r.is_string()) fail(where + ".ring", "expected a string");
  try {
    return Ring::parse(r.get<std::string>());
  } catch (const Error& e) {
    fail(where + ".ring", e.what());
  }
}

std::string key(int n) { return std::to_string(n); }

}  // namespace

Json scalar_to_json(const Scalar& x) { return x.get_str(); }

Scalar scalar_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) fail(where, "expected an exact number as a string");
  Scalar x;
  if (x.set_str(j.get<std::string>(), 10) != 0 || x.get_den() == 0) fail(where, "not an exact number: " + j.dump());
  x.canonicalize();
  return x;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const Ring& ring, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  if (j.size() != rows && !(rows == 0 && j.empty()))
    fail(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != cols)
      fail(w, "expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      Scalar x = scalar_from_json(row[k], w + "[" + std::to_string(k) + "]");
      try {
        m.set(i, k, ring.element(x));
      } catch (const Error& e) {
        fail(w + "[" + std::to_string(k) + "]", e.what());
      }
    }
  }
  return m;
}

Json complex_to_json(const ChainComplex& c) {
  Json j;
  j["ring"] = c.ring().name();
  Json ranks = Json::object(), diffs = Json::object();
  if (!c.empty()) {
    for (int n = c.lo(); n <= c.hi(); ++n) ranks[key(n)] = c.rank(n);
    for (int n = c.lo() + 1; n <= c.hi(); ++n)
      if (!c.d(n).is_zero()) diffs[key(n)] = matrix_to_json(c.d(n));
  }
  j["ranks"] = ranks;
  j["differentials"] = diffs;
  return j;
}

ChainComplex complex_from_json(const Json& j, std::optional<Ring> ring, const std::string& where) {
  const Ring r = ring_of(j, ring, where);
  const Json& ranks = member(j, "ranks", where);
  if (!ranks.is_object()) fail(where + ".ranks", "expected an object degree → rank");
  std::map<int, std::size_t> rk;
  for (const auto& [k, v] : ranks.items()) {
    const long x = integer(v, where + ".ranks." + k);
    if (x < 0) fail(where + ".ranks." + k, "negative rank");
    rk[degree_key(k, where + ".ranks")] = static_cast<std::size_t>(x);
  }
  if (rk.empty()) return ChainComplex(r);
  const int lo = rk.begin()->first, hi = rk.rbegin()->first;
  std::vector<std::size_t> v;
  for (int n = lo; n <= hi; ++n) v.push_back(rk.count(n) ? rk[n] : 0);
  ChainComplex c(r, lo, v);
  if (j.contains("differentials")) {
    const Json& d = j["differentials"];
    if (!d.is_object()) fail(where + ".differentials", "expected an object degree → matrix");
    for (const auto& [k, m] : d.items()) {
      const std::string w = where + ".differentials." + k;
      const int n = degree_key(k, w);
      if (n <= lo || n > hi) {
        if (m.is_array() && (m.empty() || (m.size() > 0 && m[0].empty()))) continue;
        fail(w, "differential outside the support");
      }
      c.set_d(n, matrix_from_json(m, r, c.rank(n - 1), c.rank(n), w));
    }
  }
  return c;
}

Json graded_map_to_json(const GradedMap& f) {
  Json j;
  j["degree"] = f.degree();
  Json blocks = Json::object();
  const ChainComplex& s = *f.source();
  if (!s.empty())
    for (int n = s.lo(); n <= s.hi(); ++n) {
      Matrix m = f.at(n);
      if (!m.is_zero()) blocks[key(n)] = matrix_to_json(m);
    }
  j["blocks"] = blocks;
  return j;
}

GradedMap graded_map_from_json(const Json& j, const ComplexPtr& source, const ComplexPtr& target,
                               const std::string& where, std::optional<int> degree) {
  int deg = degree.value_or(0);
  if (j.is_object() && j.contains("degree")) {
    deg = static_cast<int>(integer(j["degree"], where + ".degree"));
    if (degree && deg != *degree) fail(where + ".degree", "expected degree " + std::to_string(*degree));
  }
  GradedMap f(source, target, deg);
  const Json* blocks = &j;
  if (j.is_object() && j.contains("blocks")) blocks = &j["blocks"];
  else if (j.is_object() && j.contains("degree")) return f;
  if (!blocks->is_object()) fail(where, "expected an object degree → matrix");
  for (const auto& [k, m] : blocks->items()) {
    const std::string w = where + ".blocks." + k;
    const int n = degree_key(k, w);
    const std::size_t rows = target->rank(n + deg), cols = source->rank(n);
    if (rows == 0 || cols == 0) {
      if (m.is_array() && (m.empty() || m[0].empty())) continue;
      fail(w, "block outside the support");
    }
    f.set(n, matrix_from_json(m, source->ring(), rows, cols, w));
  }
  return f;
}

Json bimodule_to_json(const Bimodule& s) {
  Json j;
  j["rank"] = s.rank;
  if (!s.is_identity_twist()) {
    Json t = Json::array();
    for (std::size_t g = 0; g < s.rank; ++g) t.push_back(scalar_to_json(s.twist_of(g)));
    j["twist"] = t;
  }
  return j;
}

Bimodule bimodule_from_json(const Json& j, const Ring& ring, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a bimodule object");
  Bimodule s;
  try {
    if (j.contains("twist")) {
      const Json& t = j["twist"];
      if (!t.is_array()) fail(where + ".twist", "expected an array");
      std::vector<Scalar> tw;
      for (std::size_t g = 0; g < t.size(); ++g)
        tw.push_back(scalar_from_json(t[g], where + ".twist[" + std::to_string(g) + "]"));
      s = Bimodule::twisted(ring, tw);
      if (j.contains("rank") && static_cast<std::size_t>(integer(j["rank"], where + ".rank")) != s.rank)
        fail(where + ".rank", "rank disagrees with the twist list");
    } else {
      const long r = j.contains("rank") ? integer(j["rank"], where + ".rank") : 1;
      if (r < 0) fail(where + ".rank", "negative rank");
      s = Bimodule::free(ring, static_cast<std::size_t>(r));
    }
    s.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return s;
}

Json dcomplex_to_json(const DComplex& x) {
  Json j;
  j["kind"] = "dcomplex";
  j["ring"] = x.diagram.vertices.empty() ? "Z" : x.diagram.vertices[0].name();
  Json d;
  d["preset"] = x.diagram.name;
  const bool d0 = x.diagram.name == "D0";
  if (d0) d["levels"] = x.vertex.size() - 1;
  Json bms = Json::array();
  for (const auto& e : x.diagram.edges) {
    if (d0 && e.name.rfind("alpha_", 0) != 0) continue;
    bms.push_back(bimodule_to_json(e.bimodule));
    if (d0) break;
  }
  d["bimodules"] = bms;
  j["diagram"] = d;
  Json vs = Json::array();
  for (const auto& v : x.vertex) vs.push_back(complex_to_json(*v));
  j["vertices"] = vs;
  Json es = Json::object();
  for (std::size_t e = 0; e < x.edge_map.size(); ++e) es[x.diagram.edges[e].name] = graded_map_to_json(x.edge_map[e]);
  j["edges"] = es;
  return j;
}

DComplex dcomplex_from_json(const Json& j, std::optional<Ring> ring, const std::string& where) {
  const Ring r = ring_of(j, ring, where);
  const Json& d = member(j, "diagram", where);
  const Json& preset = member(d, "preset", where + ".diagram");
  if (!preset.is_string()) fail(where + ".diagram.preset", "expected a preset name");
  auto kind = parse_preset(preset.get<std::string>());
  if (!kind) fail(where + ".diagram.preset", "unknown preset \"" + preset.get<std::string>() + "\"");
  std::vector<Bimodule> bms;
  if (d.contains("bimodules")) {
    const Json& b = d["bimodules"];
    if (!b.is_array()) fail(where + ".diagram.bimodules", "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i)
      bms.push_back(bimodule_from_json(b[i], r, where + ".diagram.bimodules[" + std::to_string(i) + "]"));
  }
  const std::size_t levels =
      d.contains("levels") ? static_cast<std::size_t>(integer(d["levels"], where + ".diagram.levels")) : 0;
  DiagramOfBimodules diagram;
  try {
    diagram = preset_diagram(*kind, r, bms, levels);
  } catch (const Error& e) {
    fail(where + ".diagram", e.what());
  }
  const Json& vs = member(j, "vertices", where);
  if (!vs.is_array() || vs.size() != diagram.vertices.size())
    fail(where + ".vertices", "expected " + std::to_string(diagram.vertices.size()) + " vertex complexes");
  std::vector<ComplexPtr> vertex;
  for (std::size_t i = 0; i < vs.size(); ++i)
    vertex.push_back(share(complex_from_json(vs[i], r, where + ".vertices[" + std::to_string(i) + "]")));
  DComplex x = DComplex::zero(diagram, vertex);
  if (j.contains("edges")) {
    const Json& es = j["edges"];
    if (!es.is_object()) fail(where + ".edges", "expected an object edge name → map");
    for (const auto& [name, m] : es.items()) {
      auto e = x.diagram.edge_index(name);
      if (!e) fail(where + ".edges." + name, "no such edge in the diagram");
      x.edge_map[*e] = graded_map_from_json(m, x.vertex[x.diagram.edges[*e].from], x.edge_target(*e),
                                            where + ".edges." + name, 0);
    }
  }
  return x;
}

Json d0_to_json(const D0Complex& x) {
  Json j;
  j["kind"] = "d0";
  j["ring"] = x.ring.name();
  j["bimodule"] = bimodule_to_json(x.s);
  j["stabilization"] = x.stabilization;
  Json lv = Json::array();
  for (std::size_t i = 1; i <= x.top(); ++i) lv.push_back(complex_to_json(*x.level[i]));
  j["levels"] = lv;
  Json lam = Json::object(), al = Json::object();
  for (std::size_t i = 1; i < x.top(); ++i) lam[key(static_cast<int>(i))] = graded_map_to_json(x.lambda[i])["blocks"];
  for (std::size_t i = 1; i <= x.top(); ++i) al[key(static_cast<int>(i))] = graded_map_to_json(x.alpha[i])["blocks"];
  j["lambda"] = lam;
  j["alpha"] = al;
  return j;
}

D0Complex d0_from_json(const Json& j, std::optional<Ring> ring, const std::string& where) {
  const Ring r = ring_of(j, ring, where);
  Bimodule s = j.contains("bimodule") ? bimodule_from_json(j["bimodule"], r, where + ".bimodule")
                                      : Bimodule::free(r, 1);
  const Json& lv = member(j, "levels", where);
  if (!lv.is_array() || lv.empty()) fail(where + ".levels", "expected a nonempty array of level complexes");
  std::vector<ComplexPtr> levels{share(ChainComplex(r))};
  for (std::size_t i = 0; i < lv.size(); ++i)
    levels.push_back(share(complex_from_json(lv[i], r, where + ".levels[" + std::to_string(i) + "]")));
  const std::size_t top = lv.size();
  const std::size_t stab =
      j.contains("stabilization") ? static_cast<std::size_t>(integer(j["stabilization"], where + ".stabilization"))
                                  : top;
  D0Complex x;
  try {
    x = D0Complex::zero(r, s, levels, stab);
  } catch (const Error& e) {
    fail(where, e.what());
  }
  auto read_family = [&](const char* name, std::size_t first, std::size_t last, auto assign) {
    if (!j.contains(name)) return;
    const Json& fam = j[name];
    const std::string w = where + "." + name;
    if (!fam.is_object()) fail(w, "expected an object index → blocks");
    for (const auto& [k, m] : fam.items()) {
      const int i = degree_key(k, w);
      if (i < static_cast<int>(first) || i > static_cast<int>(last)) fail(w + "." + k, "index out of range");
      assign(static_cast<std::size_t>(i), m, w + "." + k);
    }
  };
  read_family("lambda", 1, top - 1, [&](std::size_t i, const Json& m, const std::string& w) {
    x.lambda[i] = graded_map_from_json(m, x.level[i], x.level[i + 1], w, 0);
  });
  read_family("alpha", 1, top, [&](std::size_t i, const Json& m, const std::string& w) {
    x.alpha[i] = graded_map_from_json(m, x.level[i], x.shifted[i - 1], w, 0);
  });
  return x;
}

Json d0_morphism_to_json(const D0Morphism& f) {
  Json j;
  j["degree"] = f.degree;
  Json lv = Json::object();
  for (std::size_t i = 1; i < f.level.size(); ++i) lv[key(static_cast<int>(i))] = graded_map_to_json(f.level[i])["blocks"];
  j["levels"] = lv;
  return j;
}

D0Morphism d0_morphism_from_json(const Json& j, const D0Complex& x, const D0Complex& y, const std::string& where) {
  D0Morphism f;
  f.degree = j.contains("degree") ? static_cast<int>(integer(j["degree"], where + ".degree")) : 0;
  const std::size_t levels = std::max(x.top(), y.top()) + 1;
  for (std::size_t k = 0; k < levels; ++k) f.level.emplace_back(x.at(k), y.at(k), f.degree);
  if (j.contains("levels")) {
    const Json& lv = j["levels"];
    if (!lv.is_object()) fail(where + ".levels", "expected an object index → blocks");
    for (const auto& [k, m] : lv.items()) {
      const int i = degree_key(k, where + ".levels");
      if (i < 1 || static_cast<std::size_t>(i) >= levels) fail(where + ".levels." + k, "level out of range");
      f.level[static_cast<std::size_t>(i)] =
          graded_map_from_json(m, x.at(static_cast<std::size_t>(i)), y.at(static_cast<std::size_t>(i)),
                               where + ".levels." + k, f.degree);
    }
  }
  return f;
}

Json homology_to_json(const std::map<int, HomologyGroup>& h, const Ring& ring) {
  Json j = Json::object();
  for (const auto& [n, g] : h) {
    Json e;
    e["betti"] = g.betti;
    Json t = Json::array();
    for (const auto& x : g.torsion) t.push_back(x.get_str());
    e["torsion"] = t;
    e["text"] = format_group(g, ring);
    j[key(n)] = e;
  }
  return j;
}

Json splitting_to_json(const SplittingData& s) {
  Json j;
  j["levels"] = s.levels;
  auto family = [](const std::vector<GradedMap>& v) {
    Json a = Json::array();
    for (const auto& f : v) a.push_back(graded_map_to_json(f));
    return a;
  };
  j["kernel"] = complex_to_json(*s.kernel);
  j["lambda"] = family(s.lambda);
  j["u"] = family(s.u);
  j["v"] = family(s.v);
  j["pi"] = family(s.pi);
  j["phi"] = family(s.phi);
  j["mu"] = family(s.mu);
  j["j"] = family(s.j);
  j["theta"] = family(s.theta);
  j["sigma"] = family(s.sigma);
  j["delta"] = family(s.delta);
  j["T"] = family(s.t_ops);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace dcx
