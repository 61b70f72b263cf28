#include "dcx/diagram.hpp"

#include "dcx/error.hpp"

namespace dcx {

void DiagramOfBimodules::validate() const {
  for (const auto& e : edges) {
    if (e.from >= vertices.size() || e.to >= vertices.size())
      throw PreconditionError("edge " + e.name + " has an endpoint outside the diagram");
    if (e.bimodule.base != vertices[e.from] || e.bimodule.base != vertices[e.to])
      throw PreconditionError("edge " + e.name + ": bimodule ring differs from its vertex rings");
    e.bimodule.validate();
  }
  for (const auto& r : relations) {
    if (r.lhs.empty() || r.rhs.empty()) throw PreconditionError("relation with an empty side");
    const std::size_t start = edges.at(r.lhs.front()).from;
    if (edges.at(r.rhs.front()).from != start) throw PreconditionError("relation sides start at different vertices");
    if (endpoints(r.lhs, start).second != endpoints(r.rhs, start).second)
      throw PreconditionError("relation sides end at different vertices");
  }
}

std::pair<std::size_t, std::size_t> DiagramOfBimodules::endpoints(const std::vector<std::size_t>& path,
                                                                 std::size_t start) const {
  std::size_t at = start;
  for (auto e : path) {
    if (e >= edges.size()) throw PreconditionError("path uses an unknown edge");
    if (edges[e].from != at) throw PreconditionError("path is not composable at edge " + edges[e].name);
    at = edges[e].to;
  }
  return {start, at};
}

std::optional<std::size_t> DiagramOfBimodules::edge_index(const std::string& name) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].name == name) return i;
  return std::nullopt;
}

DiagramOfBimodules preset_diagram(PresetKind kind, Ring ring, const std::vector<Bimodule>& bimodules,
                                  std::size_t levels) {
  auto pick = [&](std::size_t i) {
    if (i < bimodules.size()) return bimodules[i];
    return Bimodule::free(ring, 1);
  };
  DiagramOfBimodules d;
  switch (kind) {
    case PresetKind::D1:
      d.name = "D1";
      d.vertices = {ring};
      d.edges = {{"S", 0, 0, pick(0)}};
      break;
    case PresetKind::D2:
      d.name = "D2";
      d.vertices = {ring, ring};
      d.edges = {{"S", 0, 1, pick(0)}, {"T", 1, 0, pick(1)}};
      break;
    case PresetKind::D3:
      d.name = "D3";
      d.vertices = {ring, ring};
      d.edges = {{"S", 0, 0, pick(0)}, {"T", 1, 1, pick(1)}, {"U", 0, 1, pick(2)}, {"V", 1, 0, pick(3)}};
      break;
    case PresetKind::D0Truncated: {
      if (levels == 0) throw PreconditionError("D0 truncation needs at least one level above 0");
      d.name = "D0";
      d.vertices.assign(levels + 1, ring);
      const Bimodule unit = Bimodule::free(ring, 1);
      for (std::size_t i = 0; i < levels; ++i) d.edges.push_back({"lambda_" + std::to_string(i), i, i + 1, unit});
      for (std::size_t i = 1; i <= levels; ++i) d.edges.push_back({"alpha_" + std::to_string(i), i, i - 1, pick(0)});
      auto lam = [&](std::size_t i) { return i; };
      auto alp = [&](std::size_t i) { return levels + i - 1; };
      for (std::size_t i = 1; i < levels; ++i) d.relations.push_back({{lam(i), alp(i + 1)}, {alp(i), lam(i - 1)}});
      break;
    }
  }
  for (const auto& e : d.edges)
    if (e.bimodule.base != ring) throw PreconditionError("preset bimodules must live over " + ring.name());
  d.validate();
  return d;
}

std::optional<PresetKind> parse_preset(const std::string& name) {
  if (name == "D1") return PresetKind::D1;
  if (name == "D2") return PresetKind::D2;
  if (name == "D3") return PresetKind::D3;
  if (name == "D0") return PresetKind::D0Truncated;
  return std::nullopt;
}

ComplexPtr tensored(const ComplexPtr& c, const Bimodule& s) {
  if (s.rank == 1 && s.is_identity_twist()) return c;
  return share(tensor_with_bimodule(*c, s));
}

DComplex DComplex::zero(DiagramOfBimodules diagram, std::vector<ComplexPtr> vertex) {
  diagram.validate();
  if (vertex.size() != diagram.vertices.size()) throw ShapeError("one complex per vertex required");
  for (std::size_t v = 0; v < vertex.size(); ++v)
    if (vertex[v]->ring() != diagram.vertices[v]) throw ShapeError("vertex complex over the wrong ring");
  DComplex x{std::move(diagram), std::move(vertex), {}};
  for (std::size_t e = 0; e < x.diagram.edges.size(); ++e)
    x.edge_map.emplace_back(x.vertex[x.diagram.edges[e].from], x.edge_target(e), 0);
  return x;
}

ComplexPtr DComplex::edge_target(std::size_t e) const {
  const Edge& edge = diagram.edges.at(e);
  return tensored(vertex.at(edge.to), edge.bimodule);
}

std::vector<std::string> DComplex::problems() const {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < vertex.size(); ++v)
    for (int n : vertex[v]->invalid_degrees())
      out.push_back("vertex " + std::to_string(v) + ": d∘d ≠ 0 at degree " + std::to_string(n));
  for (std::size_t e = 0; e < edge_map.size(); ++e) {
    const GradedMap& f = edge_map[e];
    const std::string& name = diagram.edges[e].name;
    if (f.degree() != 0 || !f.source()->same_shape(*vertex[diagram.edges[e].from]) ||
        !f.target()->same_shape(*edge_target(e))) {
      out.push_back("edge " + name + ": wrong shape");
      continue;
    }
    if (!is_chain_map(f)) out.push_back("edge " + name + ": not a chain map");
  }
  if (!out.empty()) return out;
  for (std::size_t r = 0; r < diagram.relations.size(); ++r) {
    const Relation& rel = diagram.relations[r];
    const std::size_t start = diagram.edges[rel.lhs.front()].from;
    auto a = path_composite(*this, rel.lhs, start);
    auto b = path_composite(*this, rel.rhs, start);
    if (!(a.bimodule == b.bimodule) || !(a.map == b.map)) out.push_back("relation " + std::to_string(r) + " fails");
  }
  return out;
}

PathComposite path_composite(const DComplex& x, const std::vector<std::size_t>& path, std::size_t start) {
  const auto ends = x.diagram.endpoints(path, start);
  const Ring& ring = x.diagram.vertices.at(start);
  PathComposite out{GradedMap::identity(x.vertex.at(start)), Bimodule::free(ring, 1), start, ends.second};
  for (auto e : path) {
    const GradedMap& f = x.edge_map.at(e);
    const Bimodule& s = x.diagram.edges[e].bimodule;
    ComplexPtr src = tensored(f.source(), out.bimodule);
    Bimodule next = tensor_bimodules(out.bimodule, s);
    ComplexPtr tgt = tensored(x.vertex[x.diagram.edges[e].to], next);
    GradedMap step = tensor_map(f, out.bimodule, src, tgt);
    out.map = step * out.map.retarget(out.map.source(), src);
    out.bimodule = std::move(next);
  }
  return out;
}

std::vector<std::vector<std::size_t>> paths_of_length(const DiagramOfBimodules& d, std::size_t length) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> walk = [&](std::size_t at) {
    if (cur.size() == length) {
      out.push_back(cur);
      return;
    }
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
      if (d.edges[e].from != at) continue;
      cur.push_back(e);
      walk(d.edges[e].to);
      cur.pop_back();
    }
  };
  if (length == 0) return out;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) walk(v);
  return out;
}

NilpotencyReport nilpotency_degree(const DComplex& x, std::size_t max_n) {
  NilpotencyReport report;
  for (std::size_t len = 1; len <= max_n + 1; ++len) {
    bool all_null = true;
    for (const auto& path : paths_of_length(x.diagram, len)) {
      ++report.paths_checked;
      auto c = path_composite(x, path, x.diagram.edges[path.front()].from);
      if (c.map.is_zero()) continue;
      if (!find_null_homotopy(c.map)) {
        all_null = false;
        report.witness_path = path;
        break;
      }
    }
    if (all_null) {
      report.degree = len - 1;
      report.witness_path.clear();
      return report;
    }
  }
  return report;
}

DComplex collapse_d2_to_d1(const DComplex& x, std::size_t at) {
  if (x.diagram.vertices.size() != 2 || at > 1) throw PreconditionError("collapse expects a two-vertex diagram");
  std::optional<std::size_t> out_edge, back_edge;
  for (std::size_t e = 0; e < x.diagram.edges.size(); ++e) {
    const Edge& edge = x.diagram.edges[e];
    if (edge.from == at && edge.to != at) out_edge = e;
    if (edge.from != at && edge.to == at) back_edge = e;
  }
  if (!out_edge || !back_edge) throw PreconditionError("collapse needs edges in both directions");
  auto c = path_composite(x, {*out_edge, *back_edge}, at);
  DiagramOfBimodules d = preset_diagram(PresetKind::D1, x.diagram.vertices[at], {c.bimodule});
  DComplex out = DComplex::zero(std::move(d), {x.vertex[at]});
  out.edge_map[0] = c.map.retarget(out.vertex[0], out.edge_target(0));
  return out;
}

DComplex direct_sum(const DComplex& x, const DComplex& y) {
  if (x.diagram.vertices.size() != y.diagram.vertices.size() || x.diagram.edges.size() != y.diagram.edges.size())
    throw ShapeError("direct_sum: diagrams differ");
  std::vector<ComplexPtr> vertex;
  for (std::size_t v = 0; v < x.vertex.size(); ++v) {
    ChainComplex a = *x.vertex[v];
    ChainComplex b = *y.vertex[v];
    ChainComplex s(a.ring());
    if (a.empty()) s = b;
    else if (b.empty()) s = a;
    else {
      const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
      std::vector<std::size_t> ranks;
      for (int n = lo; n <= hi; ++n) ranks.push_back(a.rank(n) + b.rank(n));
      s = ChainComplex(a.ring(), lo, ranks);
      for (int n = lo + 1; n <= hi; ++n) s.set_d(n, block_diag(a.d(n), b.d(n)));
    }
    vertex.push_back(share(std::move(s)));
  }
  DComplex out = DComplex::zero(x.diagram, std::move(vertex));
  for (std::size_t e = 0; e < out.edge_map.size(); ++e) {
    const Edge& edge = x.diagram.edges[e];
    const std::size_t r = edge.bimodule.rank;
    const ChainComplex& src = *out.vertex[edge.from];
    const ComplexPtr& xa = x.vertex[edge.from];
    const ComplexPtr& xb = x.vertex[edge.to];
    const ComplexPtr& yb = y.vertex[edge.to];
    if (src.empty()) continue;
    for (int n = src.lo(); n <= src.hi(); ++n) {
      const Matrix fx = x.edge_map[e].at(n), fy = y.edge_map[e].at(n);
      const std::size_t cx = xb->rank(n), cy = yb->rank(n), ax = xa->rank(n);
      Matrix m(src.ring(), r * (cx + cy), src.rank(n));
      for (std::size_t g = 0; g < r; ++g) {
        m.set_block(g * (cx + cy), 0, fx.block(g * cx, 0, cx, fx.cols()));
        m.set_block(g * (cx + cy) + cx, ax, fy.block(g * cy, 0, cy, fy.cols()));
      }
      out.edge_map[e].set(n, std::move(m));
    }
  }
  return out;
}

}  // namespace dcx
