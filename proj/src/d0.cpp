#include "dcx/d0.hpp"

#include "dcx/constructions.hpp"
#include "dcx/error.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

D0Complex D0Complex::zero(Ring ring, Bimodule s, std::vector<ComplexPtr> levels, std::size_t stabilization) {
  if (levels.empty()) throw PreconditionError("a D0 complex needs level 0");
  if (!levels.front()->is_zero()) throw PreconditionError("level 0 of a D0 complex must be zero");
  if (stabilization > levels.size() - 1) throw PreconditionError("stabilization index above the top level");
  s.validate();
  if (s.base != ring) throw ShapeError("bimodule over the wrong ring");
  D0Complex x{ring, std::move(s), stabilization, std::move(levels), {}, {}, {}};
  for (const auto& c : x.level) {
    if (c->ring() != ring) throw ShapeError("level complex over the wrong ring");
    x.shifted.push_back(tensored(c, x.s));
  }
  for (std::size_t i = 0; i + 1 < x.level.size(); ++i) x.lambda.emplace_back(x.level[i], x.level[i + 1], 0);
  x.alpha.emplace_back(x.level[0], x.shifted[0], 0);
  for (std::size_t i = 1; i < x.level.size(); ++i) x.alpha.emplace_back(x.level[i], x.shifted[i - 1], 0);
  return x;
}

GradedMap D0Complex::lambda_at(std::size_t i) const {
  if (i < lambda.size()) return lambda[i];
  return GradedMap::identity(level.back());
}

GradedMap D0Complex::alpha_at(std::size_t i) const {
  if (i == 0) throw PreconditionError("alpha_0 does not exist");
  if (i <= top()) return alpha[i];
  if (top() == 0) return GradedMap(level[0], shifted[0], 0);
  // Above the top: (lambda_{N−1} ⊗ S)·alpha_N, for every i > N.
  GradedMap lam = tensor_map(lambda[top() - 1], s, shifted[top() - 1], shifted[top()]);
  return lam * alpha[top()];
}

std::vector<std::string> D0Complex::problems() const {
  std::vector<std::string> out;
  if (!level[0]->is_zero()) out.push_back("level 0 is not zero");
  for (std::size_t i = 0; i < level.size(); ++i)
    for (int n : level[i]->invalid_degrees())
      out.push_back("level " + std::to_string(i) + ": d∘d ≠ 0 at degree " + std::to_string(n));
  if (!out.empty()) return out;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const GradedMap& l = lambda[i];
    if (!l.source()->same_shape(*level[i]) || !l.target()->same_shape(*level[i + 1]) || l.degree() != 0) {
      out.push_back("lambda_" + std::to_string(i) + ": wrong shape");
      continue;
    }
    if (!is_chain_map(l)) out.push_back("lambda_" + std::to_string(i) + ": not a chain map");
    if (!split_cofibration(l)) out.push_back("lambda_" + std::to_string(i) + ": not a cofibration");
    if (i >= stabilization && !(level[i]->same_shape(*level[i + 1]) && l == GradedMap::identity(level[i])))
      out.push_back("lambda_" + std::to_string(i) + ": not the identity above the stabilization index");
  }
  for (std::size_t i = 1; i < alpha.size(); ++i) {
    const GradedMap& a = alpha[i];
    if (!a.source()->same_shape(*level[i]) || !a.target()->same_shape(*shifted[i - 1]) || a.degree() != 0) {
      out.push_back("alpha_" + std::to_string(i) + ": wrong shape");
      continue;
    }
    if (!is_chain_map(a)) out.push_back("alpha_" + std::to_string(i) + ": not a chain map");
  }
  if (!out.empty()) return out;
  for (std::size_t i = 1; i < top(); ++i) {
    GradedMap left = alpha[i + 1] * lambda[i];
    GradedMap right = tensor_map(lambda[i - 1], s, shifted[i - 1], shifted[i]) * alpha[i];
    if (!(left == right)) out.push_back("alpha∘lambda ≠ lambda∘alpha at level " + std::to_string(i));
  }
  return out;
}

DComplex D0Complex::to_dcomplex() const {
  if (top() == 0) throw PreconditionError("a single-level D0 complex has no diagram edges");
  DiagramOfBimodules d = preset_diagram(PresetKind::D0Truncated, ring, {s}, top());
  DComplex x = DComplex::zero(std::move(d), level);
  for (std::size_t i = 0; i < top(); ++i) x.edge_map[i] = lambda[i].retarget(x.vertex[i], x.edge_target(i));
  for (std::size_t i = 1; i <= top(); ++i)
    x.edge_map[top() + i - 1] = alpha[i].retarget(x.vertex[i], x.edge_target(top() + i - 1));
  return x;
}

GradedMap lambda_composite(const D0Complex& x, std::size_t a, std::size_t b) {
  if (a > b) throw PreconditionError("lambda_composite: a > b");
  GradedMap out = GradedMap::identity(x.at(a));
  for (std::size_t i = a; i < b && i < x.top(); ++i) out = x.lambda[i] * out;
  return out;
}

namespace {

bool degreewise_surjective(const GradedMap& f) {
  const ChainComplex& t = *f.target();
  if (t.empty()) return true;
  for (int n = t.lo(); n <= t.hi(); ++n)
    if (t.rank(n) > 0 && !is_split_surjection(f.at(n))) return false;
  return true;
}

}  // namespace

bool is_reduced(const D0Complex& x) {
  for (std::size_t i = 1; i <= x.top(); ++i)
    if (!degreewise_surjective(x.alpha[i])) return false;
  return true;
}

ClassMembership classify(const D0Complex& x, std::size_t n) {
  ClassMembership m;
  m.in_bn = true;
  for (std::size_t i = n; i < x.top(); ++i) {
    if (i >= x.stabilization) break;
    if (!is_acyclic(*cone(x.lambda[i]).complex)) {
      m.in_bn = false;
      m.failing_lambda = i;
      break;
    }
  }
  if (m.in_bn) {
    auto k = find_contraction(x.at(n));
    if (k || x.at(n)->is_zero()) {
      m.in_an = true;
      m.contraction = k;
    }
  }
  m.reduced = true;
  for (std::size_t i = 1; i <= x.top(); ++i)
    if (!degreewise_surjective(x.alpha[i])) {
      m.reduced = false;
      m.failing_alpha = i;
      break;
    }
  return m;
}

D0Complex test_object(TestObjectKind kind, std::size_t m, std::size_t levels, Ring ring, const Bimodule& s) {
  if (m < 1 || m > levels) throw PreconditionError("test object index must satisfy 1 ≤ m ≤ N");
  if (kind == TestObjectKind::ConePoint && m + 1 > levels)
    throw PreconditionError("cone test object needs N ≥ m + 1");
  ComplexPtr zero = share(ChainComplex(ring));
  ComplexPtr point = share(ChainComplex(ring, 0, {1}));
  ComplexPtr disk;
  if (kind == TestObjectKind::ConePoint) disk = cone(GradedMap::identity(point)).complex;
  std::vector<ComplexPtr> lv;
  for (std::size_t i = 0; i <= levels; ++i) {
    if (i < m) lv.push_back(zero);
    else if (i == m || kind == TestObjectKind::Point) lv.push_back(point);
    else lv.push_back(disk);
  }
  const std::size_t stab = kind == TestObjectKind::Point ? m : m + 1;
  D0Complex x = D0Complex::zero(ring, s, lv, stab);
  for (std::size_t i = m; i < levels; ++i) {
    if (kind == TestObjectKind::ConePoint && i == m) {
      GradedMap inc(x.level[i], x.level[i + 1], 0);
      inc.set(0, Matrix::identity(ring, 1));  // degree 0 of cone(id) is the target copy
      x.lambda[i] = inc;
    } else {
      x.lambda[i] = GradedMap::identity(x.level[i]);
    }
  }
  return x;
}

KernelComplex kernel_complex(const D0Complex& x, std::size_t m) {
  const ComplexPtr& c = x.at(m);
  const Ring& ring = c->ring();
  if (c->empty()) {
    ComplexPtr z = share(ChainComplex(ring));
    return KernelComplex{z, GradedMap(z, c, 0)};
  }
  GradedMap a = m == 0 ? GradedMap(c, x.shifted[0], 0) : x.alpha_at(m);
  std::vector<Matrix> basis;
  std::vector<std::size_t> ranks;
  for (int n = c->lo(); n <= c->hi(); ++n) {
    Matrix k;
    try {
      k = kernel_basis(a.at(n));
    } catch (const NonFreeKernel& e) {
      throw PreconditionError(std::string("kernel of alpha is not free: ") + e.what());
    }
    ranks.push_back(k.cols());
    basis.push_back(std::move(k));
  }
  ChainComplex kc(ring, c->lo(), ranks);
  for (int n = c->lo() + 1; n <= c->hi(); ++n) {
    const Matrix& kn = basis[static_cast<std::size_t>(n - c->lo())];
    const Matrix& km = basis[static_cast<std::size_t>(n - 1 - c->lo())];
    auto d = solve_linear(km, c->d(n) * kn);
    if (!d) throw Error("kernel complex: differential leaves the kernel");
    kc.set_d(n, *d);
  }
  ComplexPtr kp = share(std::move(kc));
  GradedMap inc(kp, c, 0);
  for (int n = c->lo(); n <= c->hi(); ++n) inc.set(n, basis[static_cast<std::size_t>(n - c->lo())]);
  return KernelComplex{kp, inc};
}

}  // namespace dcx
