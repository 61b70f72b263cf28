#include <algorithm>

#include "dcx/constructions.hpp"
#include "dcx/d0.hpp"
#include "dcx/error.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

namespace {

std::vector<int> degrees(const ChainComplex& c) {
  std::vector<int> out;
  if (c.empty()) return out;
  for (int n = c.lo(); n <= c.hi(); ++n) out.push_back(n);
  return out;
}

// M[row0.., col0..] += coeff · kron(a, bᵀ), the coefficient block of X ↦ a·X·b
// on row-major vectorizations.
void add_sandwich(Matrix& m, std::size_t row0, std::size_t col0, const Matrix& a, const Matrix& b,
                  const Scalar& coeff) {
  const std::size_t q = b.cols(), c = b.rows();
  for (std::size_t ai = 0; ai < a.rows(); ++ai)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      if (a(ai, i) == 0) continue;
      const Scalar ca = coeff * a(ai, i);
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t bi = 0; bi < q; ++bi) {
          if (b(j, bi) == 0) continue;
          m.add_to(row0 + ai * q + bi, col0 + i * c + j, ca * b(j, bi));
        }
    }
}

GradedMap shifted_lambda(const D0Complex& x, std::size_t i) {
  return tensor_map(x.lambda_at(i), x.s, x.at_shifted(i), x.at_shifted(i + 1));
}

struct Layout {
  std::size_t levels = 0;
  std::vector<std::map<int, std::size_t>> offset;
  std::size_t size = 0;
};

Layout layout(const D0Complex& x, const D0Complex& y, std::size_t levels, int p) {
  Layout l;
  l.levels = levels;
  l.offset.resize(levels);
  for (std::size_t k = 0; k < levels; ++k)
    for (int n : degrees(*x.at(k))) {
      l.offset[k][n] = l.size;
      l.size += y.at(k)->rank(n + p) * x.at(k)->rank(n);
    }
  return l;
}

// Rows: the lambda and alpha commutation constraints; columns: the layout.
Matrix constraint_matrix(const D0Complex& x, const D0Complex& y, const Layout& l, int p) {
  const std::size_t top = l.levels - 1;
  const Ring& ring = x.ring;
  std::size_t rows = 0;
  for (std::size_t k = 0; k < top; ++k)
    for (int n : degrees(*x.at(k))) rows += y.at(k + 1)->rank(n + p) * x.at(k)->rank(n);
  for (std::size_t k = 1; k <= top; ++k)
    for (int n : degrees(*x.at(k))) rows += y.at_shifted(k - 1)->rank(n + p) * x.at(k)->rank(n);
  Matrix m(ring, rows, l.size);
  std::size_t row = 0;
  auto id = [&](std::size_t r) { return Matrix::identity(ring, r); };
  // f_{k+1}·lambdaX_k − lambdaY_k·f_k = 0
  for (std::size_t k = 0; k < top; ++k) {
    const GradedMap lx = x.lambda_at(k), ly = y.lambda_at(k);
    for (int n : degrees(*x.at(k))) {
      const std::size_t yr = y.at(k + 1)->rank(n + p), xc = x.at(k)->rank(n);
      if (yr * xc == 0) continue;
      if (x.at(k + 1)->rank(n) > 0) add_sandwich(m, row, l.offset[k + 1].at(n), id(yr), lx.at(n), 1);
      if (y.at(k)->rank(n + p) > 0) add_sandwich(m, row, l.offset[k].at(n), ly.at(n + p), id(xc), -1);
      row += yr * xc;
    }
  }
  // (f_{k−1} ⊗ S)·alphaX_k − alphaY_k·f_k = 0
  const std::size_t rs = x.s.rank;
  for (std::size_t k = 1; k <= top; ++k) {
    const GradedMap ax = x.alpha_at(k), ay = y.alpha_at(k);
    for (int n : degrees(*x.at(k))) {
      const std::size_t yr = y.at(k - 1)->rank(n + p), xr = x.at(k - 1)->rank(n);
      const std::size_t rows_here = rs * yr, xc = x.at(k)->rank(n);
      if (rows_here * xc == 0) continue;
      if (yr > 0 && xr > 0) {
        const Matrix a = ax.at(n);
        for (std::size_t g = 0; g < rs; ++g) {
          Matrix embed(ring, rs * yr, yr);
          embed.set_block(g * yr, 0, id(yr));
          add_sandwich(m, row, l.offset[k - 1].at(n), embed, a.block(g * xr, 0, xr, xc), x.s.twist_of(g));
        }
      }
      if (y.at(k)->rank(n + p) > 0) add_sandwich(m, row, l.offset[k].at(n), ay.at(n + p), id(xc), -1);
      row += rows_here * xc;
    }
  }
  return m;
}

}  // namespace

std::vector<Scalar> HomComplex::vectorize(const D0Morphism& f) const {
  const int p = f.degree;
  std::vector<Scalar> v;
  for (std::size_t k = 0; k < levels; ++k) {
    const GradedMap& g = f.level.at(std::min(k, f.level.size() - 1));
    for (int n : degrees(*x->at(k))) {
      const Matrix b = g.at(n);
      if (b.rows() != y->at(k)->rank(n + p) || b.cols() != x->at(k)->rank(n))
        throw ShapeError("morphism block has the wrong shape at level " + std::to_string(k));
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) v.push_back(b(i, j));
    }
  }
  return v;
}

D0Morphism HomComplex::unvectorize(int p, const std::vector<Scalar>& v) const {
  D0Morphism f{p, {}};
  std::size_t at = 0;
  for (std::size_t k = 0; k < levels; ++k) {
    GradedMap g(x->at(k), y->at(k), p);
    for (int n : degrees(*x->at(k))) {
      Matrix b(x->ring, y->at(k)->rank(n + p), x->at(k)->rank(n));
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) b.set(i, j, v.at(at++));
      g.set(n, std::move(b));
    }
    f.level.push_back(std::move(g));
  }
  if (at != v.size()) throw ShapeError("coordinate vector has the wrong length");
  return f;
}

D0Morphism HomComplex::element(int p, const Matrix& c) const {
  auto it = basis.find(p);
  const std::size_t len = layout(*x, *y, levels, p).size;
  std::vector<Scalar> v(len, Scalar(0));
  if (it != basis.end() && it->second.cols() > 0) {
    Matrix col = it->second * c;
    for (std::size_t i = 0; i < len; ++i) v[i] = col(i, 0);
  }
  return unvectorize(p, v);
}

std::optional<Matrix> HomComplex::coordinates(const D0Morphism& f) const {
  const auto v = vectorize(f);
  Matrix col(x->ring, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) col.set(i, 0, v[i]);
  auto it = basis.find(f.degree);
  if (it == basis.end()) {
    if (col.is_zero()) return Matrix(x->ring, 0, 1);
    return std::nullopt;
  }
  return solve_linear(it->second, col);
}

std::size_t HomComplex::dimension(int p) const { return complex->rank(p); }

std::size_t HomComplex::total_dimension() const { return complex->total_rank(); }

namespace {

std::optional<std::pair<int, int>> hom_degree_range(const D0Complex& x, const D0Complex& y, std::size_t levels) {
  std::optional<int> xmin, xmax, ymin, ymax;
  for (std::size_t k = 0; k < levels; ++k) {
    const ChainComplex& a = *x.at(k);
    const ChainComplex& b = *y.at(k);
    if (!a.is_zero()) {
      xmin = std::min(xmin.value_or(a.lo()), a.lo());
      xmax = std::max(xmax.value_or(a.hi()), a.hi());
    }
    if (!b.is_zero()) {
      ymin = std::min(ymin.value_or(b.lo()), b.lo());
      ymax = std::max(ymax.value_or(b.hi()), b.hi());
    }
  }
  if (!xmin || !ymin) return std::nullopt;
  return std::make_pair(*ymin - *xmax, *ymax - *xmin);
}

}  // namespace

HomComplex hom_complex(const D0Complex& x, const D0Complex& y) {
  if (x.ring != y.ring) throw ShapeError("hom complex between different rings");
  if (!(x.s == y.s)) throw ShapeError("hom complex between D0 complexes over different bimodules");
  HomComplex h;
  h.x = std::make_shared<const D0Complex>(x);
  h.y = std::make_shared<const D0Complex>(y);
  h.levels = std::max(x.top(), y.top()) + 1;
  auto range = hom_degree_range(x, y, h.levels);
  if (!range) {
    h.complex = share(ChainComplex(x.ring));
    return h;
  }
  const int lo = range->first, hi = range->second;
  std::vector<std::size_t> ranks;
  for (int p = lo; p <= hi; ++p) {
    Layout l = layout(x, y, h.levels, p);
    Matrix k = l.size == 0 ? Matrix(x.ring, 0, 0) : kernel_basis(constraint_matrix(x, y, l, p));
    ranks.push_back(k.cols());
    h.basis[p] = std::move(k);
  }
  ChainComplex c(x.ring, lo, ranks);
  for (int p = lo + 1; p <= hi; ++p) {
    if (c.rank(p) == 0 || c.rank(p - 1) == 0) continue;
    Matrix images(x.ring, h.basis[p - 1].rows(), c.rank(p));
    for (std::size_t j = 0; j < c.rank(p); ++j) {
      Matrix e(x.ring, c.rank(p), 1);
      e.set(j, 0, 1);
      const auto v = h.vectorize(differential(h.element(p, e)));
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) images.set(i, j, v[i]);
    }
    auto d = solve_linear(h.basis[p - 1], images);
    if (!d) throw Error("hom complex: differential leaves the morphism space");
    c.set_d(p, std::move(*d));
  }
  h.complex = share(std::move(c));
  return h;
}

std::vector<ConstraintRank> hom_constraint_ranks(const D0Complex& x, const D0Complex& y) {
  if (x.ring != y.ring || !(x.s == y.s)) throw ShapeError("hom constraints between incompatible D0 complexes");
  const std::size_t levels = std::max(x.top(), y.top()) + 1;
  std::vector<ConstraintRank> out;
  auto range = hom_degree_range(x, y, levels);
  if (!range) return out;
  for (int p = range->first; p <= range->second; ++p) {
    Layout l = layout(x, y, levels, p);
    std::size_t r = l.size == 0 ? 0 : rank(constraint_matrix(x, y, l, p));
    out.push_back(ConstraintRank{p, l.size, r});
  }
  return out;
}

D0Morphism differential(const D0Morphism& f) {
  D0Morphism out{f.degree - 1, {}};
  for (const auto& g : f.level) out.level.push_back(differential(g));
  return out;
}

bool is_d0_morphism(const D0Complex& x, const D0Complex& y, const D0Morphism& f) {
  if (f.level.empty()) return false;
  const std::size_t top = std::max({x.top(), y.top(), f.level.size() - 1});
  auto lv = [&](std::size_t k) -> const GradedMap& { return f.level[std::min(k, f.level.size() - 1)]; };
  for (std::size_t k = 0; k <= top; ++k) {
    const GradedMap& g = lv(k);
    if (g.degree() != f.degree || !g.source()->same_shape(*x.at(k)) || !g.target()->same_shape(*y.at(k)))
      return false;
  }
  for (std::size_t k = 0; k < top; ++k) {
    GradedMap left = lv(k + 1).retarget(x.at(k + 1), y.at(k + 1)) * x.lambda_at(k);
    GradedMap right = y.lambda_at(k) * lv(k).retarget(x.at(k), y.at(k));
    if (!(left == right)) return false;
  }
  for (std::size_t k = 1; k <= top; ++k) {
    GradedMap fs = tensor_map(lv(k - 1), x.s, x.at_shifted(k - 1), y.at_shifted(k - 1));
    GradedMap left = fs * x.alpha_at(k);
    GradedMap right = y.alpha_at(k) * lv(k).retarget(x.at(k), y.at(k));
    if (!(left == right)) return false;
  }
  return true;
}

D0Morphism compose(const D0Morphism& g, const D0Morphism& f) {
  if (f.level.empty() || g.level.empty()) throw PreconditionError("compose: empty morphism");
  D0Morphism out{g.degree + f.degree, {}};
  const std::size_t levels = std::max(f.level.size(), g.level.size());
  for (std::size_t k = 0; k < levels; ++k)
    out.level.push_back(g.level[std::min(k, g.level.size() - 1)] * f.level[std::min(k, f.level.size() - 1)]);
  return out;
}

PointHom point_hom(const D0Complex& c, std::size_t m) {
  if (m < 1) throw PreconditionError("point test objects start at level 1");
  if (!is_reduced(c)) throw PreconditionError("point_hom requires a reduced D0 complex");
  const D0Complex g = test_object(TestObjectKind::Point, m, std::max(m, c.top()), c.ring, c.s);
  PointHom out{hom_complex(g, c), kernel_complex(c, m), {}, false};
  const ChainComplex& h = *out.hom.complex;
  out.iso = GradedMap(out.hom.complex, out.kernel.complex, 0);
  bool bijective = true;
  for (int p : degrees(h)) {
    const std::size_t dim = h.rank(p);
    Matrix iso(c.ring, out.kernel.complex->rank(p), dim);
    for (std::size_t j = 0; j < dim; ++j) {
      Matrix e(c.ring, dim, 1);
      e.set(j, 0, 1);
      const Matrix value = out.hom.element(p, e).level[m].at(0);
      auto coords = solve_linear(out.kernel.inclusion.at(p), value);
      if (!coords) throw Error("point hom: f_m(1) is not in the kernel of alpha_m");
      iso.set_block(0, j, *coords);
    }
    if (!inverse(iso)) bijective = false;
    out.iso.set(p, std::move(iso));
  }
  const ChainComplex& k = *out.kernel.complex;
  for (int p : degrees(k))
    if (k.rank(p) != h.rank(p)) bijective = false;
  out.iso_is_chain_isomorphism = bijective && is_chain_map(out.iso);
  return out;
}

namespace {

// The morphism g_m^cone → C with f_m(1) = y, f_{m+1}(b) = b_value, f_{m+1}(e) = e_value,
// propagated upward along lambda.
D0Morphism cone_morphism(const HomComplex& h, std::size_t m, int p, const Matrix& y, const Matrix& b_value,
                         const Matrix& e_value) {
  const D0Complex& x = *h.x;
  const D0Complex& c = *h.y;
  D0Morphism f{p, {}};
  for (std::size_t k = 0; k < h.levels; ++k) {
    GradedMap g(x.at(k), c.at(k), p);
    if (k == m) g.set(0, y);
    if (k == m + 1) {
      g.set(0, b_value);
      g.set(1, e_value);
    }
    if (k > m + 1) g = c.lambda_at(k - 1) * f.level[k - 1].retarget(x.at(k), c.at(k - 1));
    f.level.push_back(std::move(g));
  }
  return f;
}

}  // namespace

ConeHomSes cone_point_hom(const D0Complex& c, std::size_t m) {
  if (m < 1) throw PreconditionError("cone test objects start at level 1");
  if (!is_reduced(c)) throw PreconditionError("cone_point_hom requires a reduced D0 complex");
  const D0Complex g = test_object(TestObjectKind::ConePoint, m, std::max(m + 1, c.top()), c.ring, c.s);
  ConeHomSes out;
  out.hom = hom_complex(g, c);
  out.kernel_m = kernel_complex(c, m);
  out.kernel_next = kernel_complex(c, m + 1);
  const Ring& ring = c.ring;
  const ChainComplex& kn = *out.kernel_next.complex;
  const ChainComplex& km = *out.kernel_m.complex;
  const ChainComplex& h = *out.hom.complex;

  // K'_p = Ker(alpha_{m+1})_{p+1} with the same (unsigned) differential.
  ChainComplex shifted(ring);
  if (!kn.empty()) {
    std::vector<std::size_t> ranks;
    for (int p = kn.lo(); p <= kn.hi(); ++p) ranks.push_back(kn.rank(p));
    shifted = ChainComplex(ring, kn.lo() - 1, ranks);
    for (int p = kn.lo() + 1; p <= kn.hi(); ++p) shifted.set_d(p - 1, kn.d(p));
  }
  out.shifted_kernel = share(std::move(shifted));
  const ChainComplex& ks = *out.shifted_kernel;

  auto coords = [&](const D0Morphism& f) {
    auto v = out.hom.coordinates(f);
    if (!v) throw Error("cone hom: constructed family is not a morphism");
    return *v;
  };
  auto lam = c.lambda_at(m);
  const ComplexPtr& cm = c.at(m);
  const ComplexPtr& cn = c.at(m + 1);

  out.i = GradedMap(out.shifted_kernel, out.hom.complex, 0);
  for (int p : degrees(ks)) {
    Matrix blk(ring, h.rank(p), ks.rank(p));
    const Matrix inc = out.kernel_next.inclusion.at(p + 1);
    for (std::size_t j = 0; j < ks.rank(p); ++j) {
      D0Morphism f = cone_morphism(out.hom, m, p, Matrix(ring, cm->rank(p), 1), Matrix(ring, cn->rank(p), 1),
                                   inc.block(0, j, inc.rows(), 1));
      blk.set_block(0, j, coords(f));
    }
    out.i.set(p, std::move(blk));
  }

  out.pi = GradedMap(out.hom.complex, out.kernel_m.complex, 0);
  for (int p : degrees(h)) {
    Matrix blk(ring, km.rank(p), h.rank(p));
    for (std::size_t j = 0; j < h.rank(p); ++j) {
      Matrix e(ring, h.rank(p), 1);
      e.set(j, 0, 1);
      auto v = solve_linear(out.kernel_m.inclusion.at(p), out.hom.element(p, e).level[m].at(0));
      if (!v) throw Error("cone hom: f_m(1) is not in the kernel of alpha_m");
      blk.set_block(0, j, *v);
    }
    out.pi.set(p, std::move(blk));
  }

  out.lambda_on_kernels = GradedMap(out.kernel_m.complex, out.kernel_next.complex, 0);
  for (int p : degrees(km)) {
    auto v = solve_linear(out.kernel_next.inclusion.at(p), lam.at(p) * out.kernel_m.inclusion.at(p));
    if (!v) throw Error("lambda does not map Ker(alpha_m) into Ker(alpha_{m+1})");
    out.lambda_on_kernels.set(p, std::move(*v));
  }

  // Section s(y): f_m = y, f_{m+1}(b) = lambda·y, f_{m+1}(e) = 0.
  auto section = [&](int p, const Matrix& y) {
    return coords(cone_morphism(out.hom, m, p, y, lam.at(p) * y, Matrix(ring, cn->rank(p + 1), 1)));
  };
  out.connecting = GradedMap(out.kernel_m.complex, out.shifted_kernel, -1);
  for (int p : degrees(km)) {
    Matrix blk(ring, ks.rank(p - 1), km.rank(p));
    const Matrix inc = out.kernel_m.inclusion.at(p);
    for (std::size_t j = 0; j < km.rank(p); ++j) {
      const Matrix y = inc.block(0, j, inc.rows(), 1);
      Matrix lifted_d = h.d(p) * section(p, y);
      Matrix dy = cm->d(p) * y;
      Matrix diff = lifted_d - section(p - 1, dy);
      auto v = solve_linear(out.i.at(p - 1), diff);
      if (!v) throw Error("cone hom: boundary of the section is not in the image of i");
      blk.set_block(0, j, *v);
    }
    out.connecting.set(p, std::move(blk));
  }

  out.i_chain = is_chain_map(out.i);
  out.pi_chain = is_chain_map(out.pi);
  bool exact = (out.pi * out.i).is_zero();
  std::vector<int> all = degrees(h);
  for (int p : degrees(ks)) all.push_back(p);
  for (int p : degrees(km)) all.push_back(p);
  for (int p : all) {
    if (ks.rank(p) + km.rank(p) != h.rank(p)) exact = false;
    if (ks.rank(p) > 0 && !is_split_injection(out.i.at(p))) exact = false;
    if (km.rank(p) > 0 && !is_split_surjection(out.pi.at(p))) exact = false;
  }
  out.exact = exact;
  bool matches = true;
  for (int p : degrees(km)) {
    const Matrix expect = out.lambda_on_kernels.at(p).scaled(p % 2 == 0 ? 1 : -1);
    if (!(out.connecting.at(p) == expect)) matches = false;
  }
  out.connecting_matches_lambda = matches;
  return out;
}

LocalityVerdict check_bn_local(const D0Complex& c, std::size_t n) {
  if (!is_reduced(c)) throw PreconditionError("bn-local check requires a reduced D0 complex");
  LocalityVerdict v;
  v.local = true;
  for (std::size_t i = 0; i <= n; ++i) {
    auto k = find_contraction(c.at(i));
    if (!k) {
      v.local = false;
      v.failing_index = i;
      v.failing_homology = homology(*c.at(i));
      v.contractions.clear();
      return v;
    }
    v.contractions.push_back(std::move(*k));
  }
  return v;
}

namespace {

// Cone of blockdiag(alpha_m, alpha_{m+1}): cone(lambda_m) → cone(lambda_{m−1} ⊗ S).
ComplexPtr square_total_complex(const D0Complex& c, std::size_t m) {
  Cone top = cone(c.lambda_at(m));
  Cone bottom = cone(shifted_lambda(c, m - 1));
  const GradedMap am = c.alpha_at(m), an = c.alpha_at(m + 1);
  GradedMap between(top.complex, bottom.complex, 0);
  for (int n : degrees(*top.complex)) between.set(n, block_diag(am.at(n - 1), an.at(n)));
  if (!is_chain_map(between)) throw Error("alpha does not commute with lambda at level " + std::to_string(m));
  return cone(between).complex;
}

}  // namespace

LocalityVerdict check_an_local(const D0Complex& c, std::size_t n, RangeBound bound, LocalityRoute route) {
  if (!is_reduced(c)) throw PreconditionError("an-local check requires a reduced D0 complex");
  LocalityVerdict v;
  v.local = true;
  const std::size_t last = bound == RangeBound::Strict ? n : n + 1;
  if (last > c.top()) throw PreconditionError("an-local range needs Ker alpha above the top level");
  for (std::size_t m = 1; m < last; ++m) {
    ComplexPtr total;
    if (route == LocalityRoute::Kernels) {
      KernelComplex a = kernel_complex(c, m), b = kernel_complex(c, m + 1);
      GradedMap lam(a.complex, b.complex, 0);
      const GradedMap l = c.lambda_at(m);
      for (int p : degrees(*a.complex)) {
        auto s = solve_linear(b.inclusion.at(p), l.at(p) * a.inclusion.at(p));
        if (!s) throw Error("lambda does not preserve kernels of alpha");
        lam.set(p, std::move(*s));
      }
      total = cone(lam).complex;
    } else {
      total = square_total_complex(c, m);
    }
    if (!is_acyclic(*total)) {
      v.local = false;
      v.failing_index = m;
      v.failing_homology = homology(*total);
      return v;
    }
  }
  return v;
}

Factorization factor_through_acyclic(const D0Complex& d, const D0Complex& c, const D0Morphism& f, std::size_t n) {
  if (d.ring != c.ring || !(d.s == c.s)) throw ShapeError("factorization across different rings or bimodules");
  if (f.degree != 0) throw PreconditionError("factorization needs a degree-0 morphism");
  bool chain = is_d0_morphism(d, c, f);
  for (const auto& g : f.level) chain = chain && is_chain_map(g);
  if (!chain) throw PreconditionError("f is not a morphism of D0 complexes");
  if (!classify(d, n).in_bn) throw PreconditionError("source is not in the class B_n");
  for (std::size_t i = 0; i <= n; ++i)
    if (!is_contractible(c.at(i)))
      throw PreconditionError("target level " + std::to_string(i) + " is not contractible");

  const std::size_t top = std::max({d.top(), c.top(), n});
  auto fl = [&](std::size_t k) { return f.level[std::min(k, f.level.size() - 1)].retarget(d.at(k), c.at(k)); };
  std::vector<ComplexPtr> level;
  std::vector<GradedMap> lambda, alpha, into, onto;
  for (std::size_t i = 0; i <= n; ++i) {
    level.push_back(c.at(i));
    into.push_back(fl(i));
    onto.push_back(GradedMap::identity(c.at(i)));
    if (i < n) lambda.push_back(c.lambda_at(i));
  }
  alpha.push_back(GradedMap(level[0], c.at_shifted(0), 0));
  for (std::size_t i = 1; i <= n; ++i) alpha.push_back(c.alpha_at(i));

  const Bimodule& s = c.s;
  std::vector<ComplexPtr> shifted;
  for (auto& l : level) shifted.push_back(tensored(l, s));
  for (std::size_t i = n; i < top; ++i) {
    Pushout w = pushout_along_cofibration(d.lambda_at(i), into[i]);
    level.push_back(w.complex);
    shifted.push_back(tensored(w.complex, s));
    lambda.push_back(w.from_z);
    into.push_back(w.from_y);
    // alpha_{i+1} on E_{i+1} from the pushout legs.
    GradedMap hy = tensor_map(into[i], s, d.at_shifted(i), shifted[i]) * d.alpha_at(i + 1);
    GradedMap hz = i == 0 ? GradedMap(level[0], shifted[0], 0)
                          : tensor_map(lambda[i - 1], s, shifted[i - 1], shifted[i]) * alpha[i];
    alpha.push_back(pushout_factor(w, hy, hz));
    onto.push_back(pushout_factor(w, fl(i + 1), c.lambda_at(i) * onto[i]));
  }

  std::size_t stab = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (!(level[i]->same_shape(*level[i + 1]) && lambda[i] == GradedMap::identity(level[i]))) stab = i + 1;
  Factorization out{D0Complex::zero(c.ring, s, level, stab), {0, {}}, {0, {}}, {}};
  for (std::size_t i = 0; i < lambda.size(); ++i) out.e.lambda[i] = lambda[i].retarget(out.e.level[i], out.e.level[i + 1]);
  for (std::size_t i = 1; i <= top; ++i) out.e.alpha[i] = alpha[i].retarget(out.e.level[i], out.e.shifted[i - 1]);
  for (std::size_t i = 0; i <= top; ++i) {
    out.into_e.level.push_back(into[i].retarget(d.at(i), out.e.level[i]));
    out.onto_c.level.push_back(onto[i].retarget(out.e.level[i], c.at(i)));
  }
  for (std::size_t i = 0; i <= top; ++i) {
    auto k = find_contraction(out.e.level[i]);
    if (!k) throw Error("factorization: level " + std::to_string(i) + " of E is not contractible");
    out.contractions.push_back(std::move(*k));
  }
  return out;
}

}  // namespace dcx
