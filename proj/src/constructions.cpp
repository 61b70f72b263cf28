#include "dcx/constructions.hpp"

#include <algorithm>
#include <functional>

#include "dcx/error.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

namespace {

ChainComplex ranked(const Ring& ring, int lo, int hi, const std::function<std::size_t(int)>& rank_of) {
  if (hi < lo) return ChainComplex(ring);
  std::vector<std::size_t> ranks;
  for (int n = lo; n <= hi; ++n) ranks.push_back(rank_of(n));
  return ChainComplex(ring, lo, std::move(ranks));
}

int lo_of(const ChainComplex& c, int fallback) { return c.empty() ? fallback : c.lo(); }
int hi_of(const ChainComplex& c, int fallback) { return c.empty() ? fallback : c.hi(); }

void require_degree_zero(const GradedMap& f, const char* what) {
  if (f.degree() != 0) throw ShapeError(std::string(what) + ": expected a degree-0 map");
}

}  // namespace

Cone cone(const GradedMap& f) {
  require_degree_zero(f, "cone");
  if (!is_chain_map(f)) throw PreconditionError("cone: input is not a chain map");
  const ChainComplex& a = *f.source();
  const ChainComplex& b = *f.target();
  const Ring& ring = a.ring();
  const int big = 1 << 28;
  int lo = std::min(a.empty() ? big : a.lo() + 1, b.empty() ? big : b.lo());
  int hi = std::max(a.empty() ? -big : a.hi() + 1, b.empty() ? -big : b.hi());
  ChainComplex c = ranked(ring, lo, hi, [&](int n) { return a.rank(n - 1) + b.rank(n); });
  if (!c.empty())
    for (int n = lo + 1; n <= hi; ++n)
      c.set_d(n, block2x2(-a.d(n - 1), Matrix(ring, a.rank(n - 2), b.rank(n)), -f.at(n - 1), b.d(n)));
  ComplexPtr cp = share(std::move(c));
  Cone out{cp, GradedMap(f.target(), cp, 0), GradedMap(cp, f.source(), -1)};
  if (!b.empty())
    for (int n = b.lo(); n <= b.hi(); ++n)
      out.inclusion.set(n, vstack(Matrix(ring, a.rank(n - 1), b.rank(n)), Matrix::identity(ring, b.rank(n))));
  if (!cp->empty())
    for (int n = cp->lo(); n <= cp->hi(); ++n)
      out.projection.set(n, hstack(Matrix::identity(ring, a.rank(n - 1)), Matrix(ring, a.rank(n - 1), b.rank(n))));
  return out;
}

Cylinder cylinder(const GradedMap& f) {
  require_degree_zero(f, "cylinder");
  if (!is_chain_map(f)) throw PreconditionError("cylinder: input is not a chain map");
  const ChainComplex& a = *f.source();
  const ChainComplex& b = *f.target();
  const Ring& ring = a.ring();
  const int big = 1 << 28;
  int lo = std::min(a.empty() ? big : a.lo(), b.empty() ? big : b.lo());
  int hi = std::max(a.empty() ? -big : a.hi() + 1, b.empty() ? -big : b.hi());
  ChainComplex t = ranked(ring, lo, hi, [&](int n) { return a.rank(n) + a.rank(n - 1) + b.rank(n); });
  if (!t.empty())
    for (int n = lo + 1; n <= hi; ++n) {
      const std::size_t r0 = a.rank(n - 1), r1 = a.rank(n - 2), r2 = b.rank(n - 1);
      const std::size_t c0 = a.rank(n), c1 = a.rank(n - 1), c2 = b.rank(n);
      Matrix m(ring, r0 + r1 + r2, c0 + c1 + c2);
      m.set_block(0, 0, a.d(n));
      m.set_block(0, c0, Matrix::identity(ring, c1));
      m.set_block(r0, c0, -a.d(n - 1));
      m.set_block(r0 + r1, c0, -f.at(n - 1));
      m.set_block(r0 + r1, c0 + c1, b.d(n));
      t.set_d(n, std::move(m));
    }
  ComplexPtr tp = share(std::move(t));
  Cone c = cone(f);
  Cylinder out{tp, GradedMap(f.source(), tp, 0), GradedMap(f.target(), tp, 0), GradedMap(tp, f.target(), 0),
               GradedMap(tp, c.complex, 0), c.complex};
  if (!a.empty())
    for (int n = a.lo(); n <= a.hi(); ++n) {
      Matrix m(ring, tp->rank(n), a.rank(n));
      m.set_block(0, 0, Matrix::identity(ring, a.rank(n)));
      out.j1.set(n, std::move(m));
    }
  if (!b.empty())
    for (int n = b.lo(); n <= b.hi(); ++n) {
      Matrix m(ring, tp->rank(n), b.rank(n));
      m.set_block(a.rank(n) + a.rank(n - 1), 0, Matrix::identity(ring, b.rank(n)));
      out.j2.set(n, std::move(m));
    }
  if (!tp->empty())
    for (int n = tp->lo(); n <= tp->hi(); ++n) {
      const std::size_t c0 = a.rank(n), c1 = a.rank(n - 1), c2 = b.rank(n);
      Matrix p(ring, c2, c0 + c1 + c2);
      p.set_block(0, 0, f.at(n));
      p.set_block(0, c0 + c1, Matrix::identity(ring, c2));
      out.p.set(n, std::move(p));
      Matrix q(ring, c1 + c2, c0 + c1 + c2);
      q.set_block(0, c0, Matrix::identity(ring, c1 + c2));
      out.quotient.set(n, std::move(q));
    }
  return out;
}

ChainComplex shift(const ChainComplex& c, int k) {
  if (c.empty()) return c;
  std::vector<std::size_t> ranks;
  for (int n = c.lo(); n <= c.hi(); ++n) ranks.push_back(c.rank(n));
  ChainComplex out(c.ring(), c.lo() + k, std::move(ranks));
  const bool negate = (k % 2) != 0;
  for (int n = c.lo() + 1; n <= c.hi(); ++n) out.set_d(n + k, negate ? -c.d(n) : c.d(n));
  return out;
}

ChainComplex suspension(const ChainComplex& c) { return shift(c, 1); }
ChainComplex desuspension(const ChainComplex& c) { return shift(c, -1); }

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  if (a.ring() != b.ring()) throw ShapeError("direct_sum: ring mismatch");
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  ChainComplex out = ranked(a.ring(), lo, hi, [&](int n) { return a.rank(n) + b.rank(n); });
  for (int n = lo + 1; n <= hi; ++n) out.set_d(n, block_diag(a.d(n), b.d(n)));
  return out;
}

DirectSum direct_sum(const ComplexPtr& a, const ComplexPtr& b) {
  ComplexPtr s = share(direct_sum(*a, *b));
  DirectSum out{s, GradedMap(a, s, 0), GradedMap(b, s, 0), GradedMap(s, a, 0), GradedMap(s, b, 0)};
  const Ring& ring = a->ring();
  if (s->empty()) return out;
  for (int n = s->lo(); n <= s->hi(); ++n) {
    const std::size_t ra = a->rank(n), rb = b->rank(n);
    Matrix ia(ring, ra + rb, ra), ib(ring, ra + rb, rb);
    ia.set_block(0, 0, Matrix::identity(ring, ra));
    ib.set_block(ra, 0, Matrix::identity(ring, rb));
    out.in1.set(n, ia);
    out.in2.set(n, ib);
    out.pr1.set(n, ia.transpose());
    out.pr2.set(n, ib.transpose());
  }
  return out;
}

GradedMap direct_sum_map(const GradedMap& f, const GradedMap& g, ComplexPtr source, ComplexPtr target) {
  if (f.degree() != g.degree()) throw ShapeError("direct_sum_map: degree mismatch");
  GradedMap out(std::move(source), std::move(target), f.degree());
  const ChainComplex& s = *out.source();
  if (s.empty()) return out;
  for (int n = s.lo(); n <= s.hi(); ++n) out.set(n, block_diag(f.at(n), g.at(n)));
  return out;
}

std::optional<CofibrationSplit> split_cofibration(const GradedMap& f) {
  require_degree_zero(f, "split_cofibration");
  const ChainComplex& a = *f.source();
  const ChainComplex& y = *f.target();
  const Ring& ring = a.ring();
  CofibrationSplit out;
  out.lo = lo_of(y, 0);
  if (y.empty()) return out;
  for (int n = y.lo(); n <= y.hi(); ++n) {
    auto s = split_injection(f.at(n));
    if (!s) return std::nullopt;
    out.retraction.push_back(s->retraction);
    out.complement.push_back(s->complement);
    out.projection.push_back(s->projection);
  }
  if (!a.empty())
    for (int n = a.lo(); n <= a.hi(); ++n)
      if ((n < y.lo() || n > y.hi()) && a.rank(n) > 0) return std::nullopt;
  (void)ring;
  return out;
}

Pushout pushout_along_cofibration(const GradedMap& f, const GradedMap& g) {
  require_degree_zero(f, "pushout");
  require_degree_zero(g, "pushout");
  if (!f.source()->same_shape(*g.source())) throw ShapeError("pushout: legs have different sources");
  if (!is_chain_map(f) || !is_chain_map(g)) throw PreconditionError("pushout: legs must be chain maps");
  auto split = split_cofibration(f);
  if (!split) throw PreconditionError("pushout: first leg is not a cofibration");
  const ChainComplex& y = *f.target();
  const ChainComplex& z = *g.target();
  const Ring& ring = y.ring();
  auto idx = [&](int n) { return static_cast<std::size_t>(n - split->lo); };
  auto qrank = [&](int n) -> std::size_t {
    if (y.empty() || n < y.lo() || n > y.hi()) return 0;
    return split->complement[idx(n)].cols();
  };
  auto comp = [&](int n) -> Matrix {
    if (y.empty() || n < y.lo() || n > y.hi()) return Matrix(ring, y.rank(n), 0);
    return split->complement[idx(n)];
  };
  auto proj = [&](int n) -> Matrix {
    if (y.empty() || n < y.lo() || n > y.hi()) return Matrix(ring, 0, y.rank(n));
    return split->projection[idx(n)];
  };
  auto retr = [&](int n) -> Matrix {
    if (y.empty() || n < y.lo() || n > y.hi()) return Matrix(ring, f.source()->rank(n), y.rank(n));
    return split->retraction[idx(n)];
  };
  const int big = 1 << 28;
  int lo = std::min(z.empty() ? big : z.lo(), y.empty() ? big : y.lo());
  int hi = std::max(z.empty() ? -big : z.hi(), y.empty() ? -big : y.hi());
  ChainComplex w = ranked(ring, lo, hi, [&](int n) { return z.rank(n) + qrank(n); });
  if (!w.empty())
    for (int n = lo + 1; n <= hi; ++n) {
      Matrix dc = y.d(n) * comp(n);
      w.set_d(n, block2x2(z.d(n), g.at(n - 1) * retr(n - 1) * dc, Matrix(ring, qrank(n - 1), z.rank(n)),
                          proj(n - 1) * dc));
    }
  ComplexPtr wp = share(std::move(w));
  Pushout out{wp, GradedMap(f.target(), wp, 0), GradedMap(g.target(), wp, 0), f, g, *split};
  if (!y.empty())
    for (int n = y.lo(); n <= y.hi(); ++n) out.from_y.set(n, vstack(g.at(n) * retr(n), proj(n)));
  if (!z.empty())
    for (int n = z.lo(); n <= z.hi(); ++n)
      out.from_z.set(n, vstack(Matrix::identity(ring, z.rank(n)), Matrix(ring, qrank(n), z.rank(n))));
  return out;
}

GradedMap pushout_factor(const Pushout& w, const GradedMap& hy, const GradedMap& hz) {
  if (!(hy * w.f == hz * w.g)) throw PreconditionError("pushout_factor: cocone square does not commute");
  if (!hy.target()->same_shape(*hz.target())) throw ShapeError("pushout_factor: cocone legs disagree on target");
  GradedMap u(w.complex, hz.target(), 0);
  const ChainComplex& wc = *w.complex;
  const ChainComplex& y = *w.f.target();
  if (wc.empty()) return u;
  for (int n = wc.lo(); n <= wc.hi(); ++n) {
    Matrix comp = (y.empty() || n < y.lo() || n > y.hi())
                      ? Matrix(wc.ring(), y.rank(n), 0)
                      : w.split.complement[static_cast<std::size_t>(n - w.split.lo)];
    u.set(n, hstack(hz.at(n), hy.at(n) * comp));
  }
  return u;
}

bool is_short_exact(const ShortExactSequence& ses) {
  const GradedMap& i = ses.i;
  const GradedMap& p = ses.p;
  if (i.degree() != 0 || p.degree() != 0) return false;
  if (!i.target()->same_shape(*p.source())) return false;
  if (!is_chain_map(i) || !is_chain_map(p)) return false;
  if (!(p * i).is_zero()) return false;
  const ChainComplex& y = *i.target();
  const ChainComplex& x = *i.source();
  const int lo = std::min(lo_of(x, 0), lo_of(y, 0)), hi = std::max(hi_of(x, -1), hi_of(y, -1));
  for (int n = lo; n <= hi; ++n) {
    const Matrix in = i.at(n), pn = p.at(n);
    if (kernel_basis(in).cols() != 0) return false;
    if (!is_split_surjection(pn)) return false;
    Matrix k = kernel_basis(pn);
    if (k.cols() > 0 && !solve_linear(in, k)) return false;
  }
  return true;
}

RotatedSes rotate_ses(const ShortExactSequence& ses) {
  if (!is_short_exact(ses)) throw PreconditionError("rotate_ses: input is not a short exact sequence");
  const ComplexPtr& x = ses.i.source();
  const ComplexPtr& y = ses.i.target();
  const ComplexPtr& z = ses.p.target();
  const Ring& ring = y->ring();

  // Degreewise splitting: ρ i = 1, p t = 1, ρ t = 0.
  GradedMap t(z, y, 0), rho(y, x, 0);
  if (!y->empty())
    for (int n = y->lo(); n <= y->hi(); ++n) {
      auto tn = is_split_surjection(ses.p.at(n));
      if (!tn) throw PreconditionError("rotate_ses: sequence is not degreewise split");
      auto inv = inverse(hstack(ses.i.at(n), *tn));
      if (!inv) throw PreconditionError("rotate_ses: sequence is not degreewise split");
      t.set(n, *tn);
      rho.set(n, inv->block(0, 0, x->rank(n), y->rank(n)));
    }
  GradedMap connecting_z = rho * differential(t);  // Z → X, degree −1

  ComplexPtr sz = share(desuspension(*z));
  GradedMap connecting(sz, x, 0);
  if (!sz->empty())
    for (int n = sz->lo(); n <= sz->hi(); ++n) connecting.set(n, connecting_z.at(n + 1));

  Cone e = cone(GradedMap::identity(sz));
  DirectSum mid = direct_sum(x, e.complex);
  GradedMap iota(sz, mid.complex, 0), q(mid.complex, y, 0);
  if (!sz->empty())
    for (int n = sz->lo(); n <= sz->hi(); ++n) {
      // E_n = Z_n ⊕ Z_{n+1}; z' lands in the second summand.
      Matrix m(ring, mid.complex->rank(n), sz->rank(n));
      m.set_block(0, 0, connecting.at(n));
      m.set_block(x->rank(n) + z->rank(n), 0, Matrix::identity(ring, sz->rank(n)));
      iota.set(n, std::move(m));
    }
  if (!mid.complex->empty())
    for (int n = mid.complex->lo(); n <= mid.complex->hi(); ++n) {
      Matrix in = ses.i.at(n);
      q.set(n, hstack(hstack(in, t.at(n)), -(in * connecting.at(n))));
    }
  return RotatedSes{{iota, q}, e.complex, connecting, t};
}

AcyclicCover acyclic_cover(const ComplexPtr& y) {
  const Ring& ring = y->ring();
  if (y->empty()) return AcyclicCover{y, GradedMap(y, y, 0)};
  // E_n = top_n ⊕ bottom_n, top_n = Y_n-rank, bottom_n = Y_{n+1}-rank, ∂(top) = bottom.
  ChainComplex e = ranked(ring, y->lo() - 1, y->hi(), [&](int n) { return y->rank(n) + y->rank(n + 1); });
  for (int n = y->lo(); n <= y->hi(); ++n) {
    Matrix d(ring, e.rank(n - 1), e.rank(n));
    d.set_block(y->rank(n - 1), 0, Matrix::identity(ring, y->rank(n)));
    e.set_d(n, std::move(d));
  }
  ComplexPtr ep = share(std::move(e));
  GradedMap epi(ep, y, 0);
  for (int n = ep->lo(); n <= ep->hi(); ++n) epi.set(n, hstack(Matrix::identity(ring, y->rank(n)), y->d(n + 1)));
  return AcyclicCover{ep, epi};
}

}  // namespace dcx
