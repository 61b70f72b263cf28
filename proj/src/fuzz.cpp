#include "dcx/fuzz.hpp"

#include <algorithm>

#include "dcx/constructions.hpp"
#include "dcx/error.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Matrix random_matrix(Ring ring, std::size_t rows, std::size_t cols, Rng& rng, long lo, long hi) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, Scalar(uniform(rng, lo, hi)));
  return m;
}

Unimodular random_unimodular(Ring ring, std::size_t n, Rng& rng) {
  Unimodular u{Matrix::identity(ring, n), Matrix::identity(ring, n)};
  if (n == 0) return u;
  const std::size_t steps = 3 * n;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    if (i == j) {
      if (uniform(rng, 0, 3) != 0) continue;
      for (std::size_t c = 0; c < n; ++c) u.g.set(i, c, -u.g(i, c));
      for (std::size_t r = 0; r < n; ++r) u.inverse.set(r, i, -u.inverse(r, i));
      continue;
    }
    const Scalar c(uniform(rng, -2, 2));
    if (c == 0) continue;
    // row_i += c·row_j on g; col_j −= c·col_i on the inverse
    for (std::size_t k = 0; k < n; ++k) u.g.add_to(i, k, c * u.g(j, k));
    for (std::size_t r = 0; r < n; ++r) u.inverse.add_to(r, j, -c * u.inverse(r, i));
  }
  return u;
}

const Unimodular& BasisChange::at(int n) const { return per_degree.at(static_cast<std::size_t>(n - before->lo())); }

GradedMap BasisChange::push_target(const GradedMap& f) const {
  GradedMap out(f.source(), after, f.degree());
  const ChainComplex& s = *f.source();
  if (s.empty()) return out;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    const int t = n + f.degree();
    if (before->rank(t) == 0) continue;
    out.set(n, at(t).g * f.at(n));
  }
  return out;
}

GradedMap BasisChange::push_source(const GradedMap& f) const {
  GradedMap out(after, f.target(), f.degree());
  if (before->empty()) return out;
  for (int n = before->lo(); n <= before->hi(); ++n) out.set(n, f.at(n) * at(n).inverse);
  return out;
}

BasisChange random_basis_change(const ComplexPtr& c, Rng& rng) {
  BasisChange b{c, c, {}};
  if (c->empty()) return b;
  for (int n = c->lo(); n <= c->hi(); ++n) b.per_degree.push_back(random_unimodular(c->ring(), c->rank(n), rng));
  std::vector<std::size_t> ranks;
  for (int n = c->lo(); n <= c->hi(); ++n) ranks.push_back(c->rank(n));
  ChainComplex out(c->ring(), c->lo(), ranks);
  for (int n = c->lo() + 1; n <= c->hi(); ++n) out.set_d(n, b.at(n - 1).g * c->d(n) * b.at(n).inverse);
  b.after = share(std::move(out));
  return b;
}

namespace {

Scalar random_unit(const Ring& ring, Rng& rng) {
  if (ring.is_integers()) return uniform(rng, 0, 1) ? 1 : -1;
  for (;;) {
    Scalar a(uniform(rng, -5, 5));
    ring.normalize(a);
    if (a != 0 && ring.is_unit(a)) return a;
  }
}

}  // namespace

ChainComplex random_complex(Ring ring, Rng& rng, const ComplexShape& shape) {
  struct Piece {
    int degree;  // the lower degree
    bool pair;
    Scalar mult;
  };
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < shape.pieces; ++k) {
    const int n = static_cast<int>(uniform(rng, shape.lo, shape.hi));
    const bool can_pair = n < shape.hi;
    const bool pair = shape.acyclic ? true : (can_pair && uniform(rng, 0, 2) != 0);
    if (shape.acyclic && !can_pair) {
      if (shape.hi > shape.lo) pieces.push_back({shape.lo, true, random_unit(ring, rng)});
      continue;
    }
    Scalar m = 0;
    if (pair) {
      if (shape.acyclic) {
        m = random_unit(ring, rng);
      } else {
        m = uniform(rng, -shape.max_multiplier, shape.max_multiplier);
        ring.normalize(m);
      }
    }
    pieces.push_back({n, pair, m});
  }
  std::vector<std::size_t> ranks(static_cast<std::size_t>(shape.hi - shape.lo + 1), 0);
  struct Slot {
    std::size_t low, high;
  };
  std::vector<Slot> slots;
  for (const auto& p : pieces) {
    const auto lo = static_cast<std::size_t>(p.degree - shape.lo);
    Slot s{ranks[lo]++, 0};
    if (p.pair) s.high = ranks[lo + 1]++;
    slots.push_back(s);
  }
  ChainComplex c(ring, shape.lo, ranks);
  for (int n = shape.lo + 1; n <= shape.hi; ++n) {
    Matrix d(ring, c.rank(n - 1), c.rank(n));
    for (std::size_t k = 0; k < pieces.size(); ++k)
      if (pieces[k].pair && pieces[k].degree == n - 1) d.set(slots[k].low, slots[k].high, pieces[k].mult);
    c.set_d(n, std::move(d));
  }
  if (!shape.scramble) return c;
  return *random_basis_change(share(std::move(c)), rng).after;
}

std::vector<Scalar> flatten(const GradedMap& f) {
  std::vector<Scalar> v;
  const ChainComplex& s = *f.source();
  if (s.empty()) return v;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    const Matrix b = f.at(n);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) v.push_back(b(i, j));
  }
  return v;
}

GradedMap unflatten(const GradedMap& shape, const std::vector<Scalar>& v) {
  GradedMap out(shape.source(), shape.target(), shape.degree());
  const ChainComplex& s = *shape.source();
  std::size_t at = 0;
  if (!s.empty())
    for (int n = s.lo(); n <= s.hi(); ++n) {
      Matrix b(s.ring(), shape.target()->rank(n + shape.degree()), s.rank(n));
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) b.set(i, j, v.at(at++));
      out.set(n, std::move(b));
    }
  if (at != v.size()) throw ShapeError("unflatten: wrong number of entries");
  return out;
}

std::optional<GradedMap> random_solution(const GradedMap& shape, const Residual& residual, Rng& rng, long spread) {
  const Ring& ring = shape.ring();
  const std::size_t unknowns = flatten(shape).size();
  const GradedMap zero(shape.source(), shape.target(), shape.degree());
  const std::vector<Scalar> r0 = residual(zero);
  Matrix a(ring, r0.size(), unknowns);
  Matrix b(ring, r0.size(), 1);
  for (std::size_t i = 0; i < r0.size(); ++i) b.set(i, 0, -r0[i]);
  std::vector<Scalar> e(unknowns, Scalar(0));
  for (std::size_t j = 0; j < unknowns; ++j) {
    e[j] = 1;
    const auto r = residual(unflatten(shape, e));
    e[j] = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] != r0[i]) a.set(i, j, r[i] - r0[i]);
  }
  auto x = solve_linear(a, b);
  if (!x) return std::nullopt;
  Matrix sol = *x;
  try {
    Matrix k = kernel_basis(a);
    if (k.cols() > 0) sol += k * random_matrix(ring, k.cols(), 1, rng, -spread, spread);
  } catch (const NonFreeKernel&) {
  }
  std::vector<Scalar> v(unknowns);
  for (std::size_t i = 0; i < unknowns; ++i) v[i] = sol(i, 0);
  return unflatten(shape, v);
}

GradedMap random_graded_map(const ComplexPtr& a, const ComplexPtr& b, int degree, Rng& rng, long spread) {
  GradedMap f(a, b, degree);
  if (a->empty()) return f;
  for (int n = a->lo(); n <= a->hi(); ++n)
    f.set(n, random_matrix(a->ring(), b->rank(n + degree), a->rank(n), rng, -spread, spread));
  return f;
}

GradedMap random_chain_map(const ComplexPtr& a, const ComplexPtr& b, int degree, Rng& rng) {
  GradedMap shape(a, b, degree);
  auto f = random_solution(shape, [](const GradedMap& g) { return flatten(differential(g)); }, rng);
  return f ? *f : shape;
}

EquivalencePair random_equivalence(Ring ring, Rng& rng, const ComplexShape& shape) {
  ComplexPtr a = share(random_complex(ring, rng, shape));
  ComplexShape qs = shape;
  qs.pieces = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(shape.pieces)));
  qs.acyclic = false;
  ComplexPtr q = share(random_complex(ring, rng, qs));
  Cone cq = cone(GradedMap::identity(q));
  DirectSum sum = direct_sum(a, cq.complex);
  BasisChange bc = random_basis_change(sum.complex, rng);
  return {a, bc.after, bc.push_target(sum.in1)};
}

DComplex random_nilpotent_loop(Ring ring, std::size_t k, std::size_t index, Rng& rng) {
  if (index < 1 || index > k) throw PreconditionError("nilpotency index must lie in 1..k");
  Matrix n(ring, k, k);
  for (std::size_t i = 0; i + 1 < index; ++i) {
    n.set(i, i + 1, uniform(rng, 0, 1) ? 1 : -1);
    for (std::size_t j = i + 2; j < index; ++j) n.set(i, j, uniform(rng, -2, 2));
  }
  // the remaining coordinates form a second block of size ≤ index
  const std::size_t rest = std::min(k - index, index);
  for (std::size_t i = index; i < index + rest; ++i)
    for (std::size_t j = i + 1; j < index + rest; ++j) n.set(i, j, uniform(rng, -2, 2));
  Unimodular u = random_unimodular(ring, k, rng);
  ComplexPtr c = share(ChainComplex(ring, 0, {k}));
  DComplex x = DComplex::zero(preset_diagram(PresetKind::D1, ring, {Bimodule::free(ring, 1)}), {c});
  x.edge_map[0].set(0, u.g * n * u.inverse);
  return x;
}

namespace {

ComplexPtr empty_complex(const Ring& ring) { return share(ChainComplex(ring)); }

// [[dk, y], [0, dt]] on K ⊕ T.
ComplexPtr extension(const ComplexPtr& k, const ComplexPtr& t, const GradedMap& y) {
  const Ring& ring = k->ring();
  const bool ke = k->empty(), te = t->empty();
  if (ke && te) return empty_complex(ring);
  const int lo = ke ? t->lo() : te ? k->lo() : std::min(k->lo(), t->lo());
  const int hi = ke ? t->hi() : te ? k->hi() : std::max(k->hi(), t->hi());
  std::vector<std::size_t> ranks;
  for (int n = lo; n <= hi; ++n) ranks.push_back(k->rank(n) + t->rank(n));
  ChainComplex c(ring, lo, ranks);
  for (int n = lo + 1; n <= hi; ++n)
    c.set_d(n, block2x2(k->d(n), y.at(n), Matrix(ring, t->rank(n - 1), k->rank(n)), t->d(n)));
  return share(std::move(c));
}

GradedMap block_map(const ComplexPtr& src, const ComplexPtr& tgt, const GradedMap& a, const GradedMap& b) {
  GradedMap out(src, tgt, 0);
  if (src->empty()) return out;
  for (int n = src->lo(); n <= src->hi(); ++n) out.set(n, block_diag(a.at(n), b.at(n)));
  return out;
}

struct RawD0 {
  std::vector<ComplexPtr> level;
  std::vector<GradedMap> lambda;
  std::vector<GradedMap> alpha;  // alpha[0] unused
};

D0Complex assemble(const Ring& ring, const Bimodule& s, RawD0 raw, bool scramble, Rng& rng) {
  const std::size_t top = raw.level.size() - 1;
  if (scramble && s.is_identity_twist()) {
    std::vector<BasisChange> bc;
    for (const auto& l : raw.level) bc.push_back(random_basis_change(l, rng));
    for (std::size_t i = 0; i < top; ++i)
      raw.lambda[i] = bc[i + 1].push_target(bc[i].push_source(raw.lambda[i]));
    for (std::size_t i = 1; i <= top; ++i) {
      // (g ⊗ S) on the target, one copy per generator
      ComplexPtr before = tensored(raw.level[i - 1], s), after = tensored(bc[i - 1].after, s);
      GradedMap a = bc[i].push_source(raw.alpha[i]);
      GradedMap moved(a.source(), after, 0);
      const ChainComplex& src = *a.source();
      if (!src.empty())
        for (int n = src.lo(); n <= src.hi(); ++n) {
          const std::size_t r = raw.level[i - 1]->rank(n);
          if (r == 0) continue;
          Matrix g(ring, s.rank * r, s.rank * r);
          for (std::size_t k = 0; k < s.rank; ++k) g.set_block(k * r, k * r, bc[i - 1].at(n).g);
          moved.set(n, g * a.at(n));
        }
      raw.alpha[i] = moved;
    }
    for (std::size_t i = 0; i <= top; ++i) raw.level[i] = bc[i].after;
  }
  D0Complex x = D0Complex::zero(ring, s, raw.level, top);
  for (std::size_t i = 0; i < top; ++i) x.lambda[i] = raw.lambda[i].retarget(x.level[i], x.level[i + 1]);
  for (std::size_t i = 1; i <= top; ++i) x.alpha[i] = raw.alpha[i].retarget(x.level[i], x.shifted[i - 1]);
  return x;
}

RawD0 reduced_raw(const Ring& ring, const Bimodule& s, Rng& rng, const D0Shape& shape, std::size_t levels) {
  RawD0 raw;
  raw.level.push_back(empty_complex(ring));
  raw.alpha.emplace_back(raw.level[0], raw.level[0], 0);
  ComplexPtr kernel = empty_complex(ring);
  GradedMap iota(kernel, kernel, 0);  // K_{i−1} → K_i
  GradedMap prev_y(kernel, kernel, -1);
  for (std::size_t i = 1; i <= levels; ++i) {
    const bool acyclic =
        i <= shape.contractible_upto || (i >= 2 && std::bernoulli_distribution(shape.acyclic_growth)(rng));
    ComplexShape ks{shape.lo, shape.hi, shape.pieces, acyclic, 3, true};
    ComplexPtr prev_kernel = kernel;
    if (shape.constant_kernel && i >= 2) {
      iota = GradedMap::identity(kernel);
    } else if (kernel->empty()) {
      ComplexPtr fresh = share(random_complex(ring, rng, ks));
      BasisChange bc = random_basis_change(fresh, rng);
      kernel = bc.after;
      iota = GradedMap(prev_kernel, kernel, 0);
    } else {
      ComplexPtr fresh = share(random_complex(ring, rng, ks));
      DirectSum sum = direct_sum(kernel, fresh);
      BasisChange bc = random_basis_change(sum.complex, rng);
      kernel = bc.after;
      iota = bc.push_target(sum.in1);
    }
    const ComplexPtr& below = raw.level[i - 1];
    ComplexPtr t = tensored(below, s);
    GradedMap y(t, kernel, -1);
    if (shape.twist_kernels && !t->empty()) {
      GradedMap prev_lambda_s =
          i >= 2 ? tensor_map(raw.lambda[i - 2], s, tensored(raw.level[i - 2], s), t) : GradedMap(t, t, 0);
      const GradedMap target_term = i >= 2 ? iota * prev_y : GradedMap(t, kernel, -1);
      auto res = [&](const GradedMap& cand) {
        std::vector<Scalar> out = flatten(differential(cand));
        if (i >= 2) {
          GradedMap lhs = cand * prev_lambda_s;
          for (const auto& v : flatten(lhs - target_term)) out.push_back(v);
        }
        return out;
      };
      if (auto sol = random_solution(y, res, rng, 1)) y = *sol;
      else if (i >= 2 && !prev_y.is_zero()) throw Error("reduced generator: no compatible extension");
    }
    ComplexPtr level = extension(kernel, t, y);
    if (i >= 2) {
      GradedMap lam_s = tensor_map(raw.lambda[i - 2], s, tensored(raw.level[i - 2], s), t);
      raw.lambda.push_back(block_map(below, level, iota, lam_s));
    } else {
      raw.lambda.emplace_back(below, level, 0);
    }
    GradedMap a(level, t, 0);
    if (!level->empty())
      for (int n = level->lo(); n <= level->hi(); ++n)
        a.set(n, hstack(Matrix(ring, t->rank(n), kernel->rank(n)), Matrix::identity(ring, t->rank(n))));
    raw.alpha.push_back(a);
    raw.level.push_back(level);
    prev_y = y;
  }
  return raw;
}

}  // namespace

D0Complex random_reduced_d0(Ring ring, const Bimodule& s, Rng& rng, const D0Shape& shape) {
  for (int attempt = 0;; ++attempt) {
    try {
      RawD0 raw = reduced_raw(ring, s, rng, shape, shape.levels);
      return assemble(ring, s, std::move(raw), shape.scramble, rng);
    } catch (const Error&) {
      if (attempt > 20) throw;
    }
  }
}

D0Complex random_bn_d0(Ring ring, const Bimodule& s, std::size_t n, Rng& rng, const D0Shape& shape) {
  if (n > shape.levels) throw PreconditionError("B_n generator needs n ≤ levels");
  RawD0 raw;
  for (int attempt = 0;; ++attempt) {
    try {
      raw = reduced_raw(ring, s, rng, shape, n);
      break;
    } catch (const Error&) {
      if (attempt > 20) throw;
    }
  }
  for (std::size_t i = n + 1; i <= shape.levels; ++i) {
    ComplexShape qs{shape.lo, shape.hi, static_cast<std::size_t>(uniform(rng, 0, 2)), false, 3, true};
    ComplexPtr q = share(random_complex(ring, rng, qs));
    ComplexPtr p = cone(GradedMap::identity(q)).complex;
    const ComplexPtr& below = raw.level[i - 1];
    DirectSum sum = direct_sum(below, p);
    ComplexPtr t = tensored(below, s);
    GradedMap first(below, t, 0);
    if (i >= 2) first = tensor_map(raw.lambda[i - 2], s, tensored(raw.level[i - 2], s), t) * raw.alpha[i - 1];
    GradedMap w1 = random_graded_map(q, t, 1, rng);
    GradedMap w2 = -differential(w1);
    GradedMap a(sum.complex, t, 0);
    if (!sum.complex->empty())
      for (int m = sum.complex->lo(); m <= sum.complex->hi(); ++m)
        a.set(m, hstack(first.at(m), hstack(w1.at(m - 1), w2.at(m))));
    raw.lambda.push_back(sum.in1);
    raw.alpha.push_back(a);
    raw.level.push_back(sum.complex);
  }
  return assemble(ring, s, std::move(raw), shape.scramble, rng);
}

CalculusPair random_calculus_pair(Ring ring, const Bimodule& s, std::size_t levels, Rng& rng, int lo, int hi) {
  if (levels < 1) throw PreconditionError("calculus pair needs at least one level");
  RawD0 raw;
  raw.level.push_back(empty_complex(ring));
  raw.alpha.emplace_back(raw.level[0], raw.level[0], 0);
  for (std::size_t i = 1; i <= levels; ++i) {
    const long pieces = i == 1 ? uniform(rng, 1, 2) : uniform(rng, 0, 2);
    ComplexShape qs{lo, hi, static_cast<std::size_t>(pieces), true, 3, true};
    ComplexPtr c = share(random_complex(ring, rng, qs));
    const ComplexPtr& below = raw.level[i - 1];
    GradedMap glue = differential(random_graded_map(c, below, 0, rng, 1));
    ComplexPtr level = extension(below, c, glue);
    GradedMap inc(below, level, 0);
    if (!below->empty())
      for (int n = below->lo(); n <= below->hi(); ++n)
        inc.set(n, vstack(Matrix::identity(ring, below->rank(n)), Matrix(ring, c->rank(n), below->rank(n))));
    ComplexPtr t = tensored(below, s);
    GradedMap first(below, t, 0);
    if (i >= 2) first = tensor_map(raw.lambda[i - 2], s, tensored(raw.level[i - 2], s), t) * raw.alpha[i - 1];
    GradedMap w(c, t, 0);
    if (i >= 2 && !c->is_zero() && !t->is_zero()) {
      const GradedMap rhs = first * glue;
      auto res = [&](const GradedMap& cand) { return flatten(differential(cand) - rhs); };
      auto sol = random_solution(w, res, rng, 1);
      if (!sol) throw Error("calculus pair: no chain extension of alpha");
      w = *sol;
    }
    GradedMap a(level, t, 0);
    if (!level->empty())
      for (int n = level->lo(); n <= level->hi(); ++n) a.set(n, hstack(first.at(n), w.at(n)));
    if (i >= 2) raw.lambda.push_back(inc);
    else raw.lambda.emplace_back(below, level, 0);
    raw.alpha.push_back(a);
    raw.level.push_back(level);
  }
  D0Complex a = assemble(ring, s, std::move(raw), true, rng);
  D0Shape bs;
  bs.levels = levels;
  bs.lo = lo;
  bs.hi = hi;
  bs.pieces = 2;
  bs.constant_kernel = true;
  return CalculusPair{std::move(a), random_reduced_d0(ring, s, rng, bs)};
}

FactorizationInstance random_factorization_instance(Ring ring, Rng& rng, std::size_t n, const D0Shape& shape) {
  const Bimodule s = Bimodule::free(ring, 1);
  D0Shape cs = shape;
  cs.contractible_upto = n;
  FactorizationInstance out{random_bn_d0(ring, s, n, rng, shape), random_reduced_d0(ring, s, rng, cs), {}, n};
  HomComplex h = hom_complex(out.d, out.c);
  out.f.degree = 0;
  const std::size_t dim = h.dimension(0);
  if (dim == 0) {
    for (std::size_t k = 0; k < h.levels; ++k) out.f.level.emplace_back(out.d.at(k), out.c.at(k), 0);
    return out;
  }
  Matrix cycles = kernel_basis(h.complex->d(0));
  Matrix coeff = cycles.cols() == 0 ? Matrix(ring, dim, 1) : cycles * random_matrix(ring, cycles.cols(), 1, rng, -2, 2);
  out.f = h.element(0, coeff);
  return out;
}

}  // namespace dcx
