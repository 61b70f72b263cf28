#include "dcx/nil.hpp"

#include <functional>

#include "dcx/constructions.hpp"
#include "dcx/error.hpp"
#include "dcx/homology.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

namespace {

GradedMap boundary(const ComplexPtr& c) {
  GradedMap d(c, c, -1);
  if (c->empty()) return d;
  for (int n = c->lo() + 1; n <= c->hi(); ++n) d.set(n, c->d(n));
  return d;
}

std::size_t idx(int n, int lo) { return static_cast<std::size_t>(n - lo); }

}  // namespace

Bimodule SplittingData::power(std::size_t m) const { return bimodule_power(s, m); }

ComplexPtr SplittingData::tensored_power(const ComplexPtr& c, std::size_t m) const {
  if (m == 0) return c;
  return tensored(c, power(m));
}

GradedMap SplittingData::tensored_power(const GradedMap& f, std::size_t m) const {
  if (m == 0) return f;
  Bimodule p = power(m);
  return tensor_map(f, p, tensored(f.source(), p), tensored(f.target(), p));
}

SplittingData derive_splittings(const D0Complex& a, const D0Complex& b) {
  if (a.ring != b.ring || !(a.s == b.s)) throw ShapeError("splittings: objects over different rings or bimodules");
  if (a.top() < 1) throw PreconditionError("splittings: the test object has no levels");
  if (b.top() != a.top()) throw PreconditionError("splittings: objects must have the same number of levels");
  for (const auto& p : a.problems()) throw PreconditionError("splittings: test object: " + p);
  for (const auto& p : b.problems()) throw PreconditionError("splittings: target: " + p);

  SplittingData s;
  s.ring = a.ring;
  s.s = a.s;
  const std::size_t L = a.top();
  s.levels = L;
  const Ring& ring = s.ring;

  for (std::size_t t = 0; t < L; ++t) {
    s.a.push_back(a.level[t + 1]);
    s.alpha.push_back(a.alpha[t + 1]);
    s.b.push_back(b.level[t + 1]);
    s.beta.push_back(b.alpha[t + 1]);
  }
  for (std::size_t t = 0; t + 1 < L; ++t) {
    s.lambda.push_back(a.lambda[t + 1]);
    s.mu.push_back(b.lambda[t + 1]);
  }

  // A side.
  s.quotient.push_back(s.a[0]);
  s.v.push_back(GradedMap::identity(s.a[0]));
  s.pi.push_back(GradedMap::identity(s.a[0]));
  s.phi.emplace_back(s.a[0], s.a[0], -1);
  for (std::size_t t = 0; t + 1 < L; ++t) {
    auto split = split_cofibration(s.lambda[t]);
    if (!split) throw PreconditionError("splittings: lambda_" + std::to_string(t) + " is not a cofibration");
    const ComplexPtr& big = s.a[t + 1];
    GradedMap ut(big, s.a[t], 0);
    if (big->empty()) {
      ComplexPtr c = share(ChainComplex(ring));
      s.u.push_back(ut);
      s.quotient.push_back(c);
      s.v.emplace_back(c, big, 0);
      s.pi.emplace_back(big, c, 0);
      s.phi.emplace_back(c, s.a[t], -1);
      continue;
    }
    std::vector<std::size_t> ranks;
    for (int n = big->lo(); n <= big->hi(); ++n) ranks.push_back(split->complement[idx(n, split->lo)].cols());
    ChainComplex c(ring, big->lo(), ranks);
    for (int n = big->lo() + 1; n <= big->hi(); ++n)
      c.set_d(n, split->projection[idx(n - 1, split->lo)] * big->d(n) * split->complement[idx(n, split->lo)]);
    ComplexPtr cp = share(std::move(c));
    GradedMap vt(cp, big, 0), pt(big, cp, 0);
    for (int n = big->lo(); n <= big->hi(); ++n) {
      ut.set(n, split->retraction[idx(n, split->lo)]);
      vt.set(n, split->complement[idx(n, split->lo)]);
      pt.set(n, split->projection[idx(n, split->lo)]);
    }
    s.u.push_back(ut);
    s.quotient.push_back(cp);
    s.v.push_back(vt);
    s.pi.push_back(pt);
    s.phi.push_back(-(ut * boundary(big) * vt));
  }

  // B side.
  s.kernel = s.b[0];
  s.j.push_back(GradedMap::identity(s.kernel));
  s.theta.push_back(GradedMap::identity(s.kernel));
  s.sigma.emplace_back(s.b[0], s.b[0], 0);
  for (std::size_t t = 0; t + 1 < L; ++t) {
    const ComplexPtr& nb = s.b[t + 1];
    GradedMap jn = s.mu[t] * s.j[t];
    if (!(s.beta[t + 1] * jn).is_zero())
      throw PreconditionError("splittings: kernel tower not constant at level " + std::to_string(t + 1));
    auto split = split_cofibration(s.mu[t]);
    if (!split) throw PreconditionError("splittings: mu_" + std::to_string(t) + " is not a cofibration");
    GradedMap r(nb, s.b[t], 0);
    if (!nb->empty())
      for (int n = nb->lo(); n <= nb->hi(); ++n) r.set(n, split->retraction[idx(n, split->lo)]);
    GradedMap th = s.theta[t] * r;
    const ComplexPtr& src = s.beta[t + 1].target();
    GradedMap sg(src, nb, 0);
    if (!nb->empty())
      for (int n = nb->lo(); n <= nb->hi(); ++n) {
        const std::size_t k = s.kernel->rank(n);
        if (k + src->rank(n) != nb->rank(n))
          throw PreconditionError("splittings: kernel tower not constant at level " + std::to_string(t + 1));
        auto inv = inverse(vstack(th.at(n), s.beta[t + 1].at(n)));
        if (!inv)
          throw PreconditionError("splittings: kernel tower not constant or beta not split surjective at level " +
                                  std::to_string(t + 1));
        sg.set(n, inv->block(0, k, inv->rows(), src->rank(n)));
      }
    s.j.push_back(jn);
    s.theta.push_back(th);
    s.sigma.push_back(sg);
  }
  for (std::size_t t = 0; t + 1 < L; ++t)
    s.delta.push_back(-(s.theta[t + 1] * boundary(s.b[t + 1]) * s.sigma[t + 1]));

  // T_p = δ_p (σ_p ⊗ S)(σ_{p−1} ⊗ S²)…(σ_1 ⊗ S^p).
  for (std::size_t p = 0; p + 1 < L; ++p) {
    GradedMap x = GradedMap::identity(s.tensored_power(s.kernel, p + 1));
    for (std::size_t t = 1; t <= p; ++t) x = s.tensored_power(s.sigma[t], p + 1 - t) * x;
    s.t_ops.push_back(s.delta[p] * x);
  }
  return s;
}

std::vector<IdentityCheck> check_identities(const SplittingData& s) {
  std::vector<IdentityCheck> out;
  auto check = [&](std::string name, std::size_t from, std::size_t to, const std::function<bool(std::size_t)>& ok) {
    IdentityCheck c{std::move(name), true, std::nullopt};
    for (std::size_t t = from; t < to; ++t)
      if (!ok(t)) {
        c.holds = false;
        c.failing_level = t;
        break;
      }
    out.push_back(std::move(c));
  };
  const std::size_t L = s.levels;
  auto id = [](const ComplexPtr& c) { return GradedMap::identity(c); };

  check("u∘lambda = 1", 0, L - 1, [&](std::size_t t) { return s.u[t] * s.lambda[t] == id(s.a[t]); });
  check("pi∘v = 1", 0, L, [&](std::size_t t) { return s.pi[t] * s.v[t] == id(s.quotient[t]); });
  check("lambda∘u + v∘pi = 1", 0, L - 1,
        [&](std::size_t t) { return s.lambda[t] * s.u[t] + s.v[t + 1] * s.pi[t + 1] == id(s.a[t + 1]); });
  check("theta∘j = 1", 0, L, [&](std::size_t t) { return s.theta[t] * s.j[t] == id(s.kernel); });
  check("beta∘sigma = 1", 1, L,
        [&](std::size_t t) { return s.beta[t] * s.sigma[t] == id(s.beta[t].target()); });
  check("theta∘sigma = 0", 1, L, [&](std::size_t t) { return (s.theta[t] * s.sigma[t]).is_zero(); });
  check("j∘theta + sigma∘beta = 1", 1, L,
        [&](std::size_t t) { return s.j[t] * s.theta[t] + s.sigma[t] * s.beta[t] == id(s.b[t]); });
  check("beta∘j = 0", 0, L, [&](std::size_t t) { return (s.beta[t] * s.j[t]).is_zero(); });
  check("theta_{n+1}∘mu_n = theta_n", 0, L - 1,
        [&](std::size_t t) { return s.theta[t + 1] * s.mu[t] == s.theta[t]; });
  check("d theta_n = delta_{n−1}∘beta_n", 1, L,
        [&](std::size_t t) { return differential(s.theta[t]) == s.delta[t - 1] * s.beta[t]; });
  check("d sigma_n = −j_n∘delta_{n−1}", 1, L,
        [&](std::size_t t) { return differential(s.sigma[t]) == -(s.j[t] * s.delta[t - 1]); });
  check("d u_n = phi_{n+1}∘pi_{n+1}", 0, L - 1,
        [&](std::size_t t) { return differential(s.u[t]) == s.phi[t + 1] * s.pi[t + 1]; });
  check("d v_{n+1} = −lambda_n∘phi_{n+1}", 0, L - 1,
        [&](std::size_t t) { return differential(s.v[t + 1]) == -(s.lambda[t] * s.phi[t + 1]); });
  check("lambda, alpha, pi chain maps", 0, L, [&](std::size_t t) {
    return is_chain_map(s.alpha[t]) && is_chain_map(s.pi[t]) && (t + 1 == L || is_chain_map(s.lambda[t]));
  });
  check("mu, beta, j chain maps", 0, L, [&](std::size_t t) {
    return is_chain_map(s.beta[t]) && is_chain_map(s.j[t]) && (t + 1 == L || is_chain_map(s.mu[t]));
  });
  check("phi, delta chain maps", 0, L - 1,
        [&](std::size_t t) { return is_chain_map(s.phi[t + 1]) && is_chain_map(s.delta[t]); });
  return out;
}

GradedMap t_operator(const SplittingData& s, std::size_t p) {
  if (p < s.t_ops.size()) return s.t_ops[p];
  return GradedMap(s.tensored_power(s.kernel, p + 1), s.kernel, -1);
}

GradedMap t_products(const SplittingData& s, std::size_t p) {
  GradedMap out(s.tensored_power(s.kernel, p + 1), s.kernel, -2);
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t jj = p - 1 - i;
    out += t_operator(s, i) * s.tensored_power(t_operator(s, jj), i + 1);
  }
  return out;
}

bool check_t_relation(const SplittingData& s, std::size_t p) {
  return differential(t_operator(s, p)) == t_products(s, p);
}

GradedMap find_total_contraction(const ComplexPtr& a) {
  auto k = find_contraction(a);
  if (!k) throw PreconditionError("the total space is not contractible");
  return *k;
}

TotalSpace total_space(const SplittingData& s) {
  const std::size_t L = s.levels;
  const Ring& ring = s.ring;
  TotalSpace ts;
  ts.complex = s.a[L - 1];
  const ComplexPtr& a = ts.complex;
  ts.inclusion.resize(L);
  ts.inclusion[L - 1] = GradedMap::identity(a);
  for (std::size_t t = L - 1; t-- > 0;) ts.inclusion[t] = ts.inclusion[t + 1] * s.lambda[t];

  // P = [λ^∞_t v_t] and its inverse, degree by degree.
  std::vector<GradedMap> cols;
  for (std::size_t t = 0; t < L; ++t) cols.push_back(ts.inclusion[t] * s.v[t]);
  std::vector<Matrix> p, pinv;
  for (std::size_t t = 0; t < L; ++t) ts.coordinate.emplace_back(a, s.quotient[t], 0);
  if (!a->empty())
    for (int n = a->lo(); n <= a->hi(); ++n) {
      Matrix m(ring, a->rank(n), 0);
      for (const auto& c : cols) m = hstack(m, c.at(n));
      auto inv = inverse(m);
      if (!inv) throw Error("total space: split coordinates are not a basis");
      std::size_t row = 0;
      for (std::size_t t = 0; t < L; ++t) {
        const std::size_t r = s.quotient[t]->rank(n);
        ts.coordinate[t].set(n, inv->block(row, 0, r, inv->cols()));
        row += r;
      }
      p.push_back(std::move(m));
      pinv.push_back(std::move(*inv));
    }

  if (L >= 2)
    ts.alpha = s.tensored_power(s.lambda[L - 2], 1).retarget(s.alpha[L - 1].target(), s.tensored_power(a, 1)) *
               s.alpha[L - 1];
  else
    ts.alpha = GradedMap(a, s.tensored_power(a, 1), 0);
  ts.alpha_power.emplace_back(GradedMap::identity(a));
  ts.alpha_power.push_back(ts.alpha);
  for (std::size_t m = 2; m <= L; ++m)
    ts.alpha_power.push_back(s.tensored_power(ts.alpha, m - 1) * ts.alpha_power[m - 1]);

  if (a->empty() || a->is_zero()) {
    ts.contraction = GradedMap(a, a, 1);
    ts.filtered = true;
    return ts;
  }
  // A contraction preserving every A_t is block upper triangular in split coordinates.
  ChainComplex tilde(ring, a->lo(), [&] {
    std::vector<std::size_t> r;
    for (int n = a->lo(); n <= a->hi(); ++n) r.push_back(a->rank(n));
    return r;
  }());
  for (int n = a->lo() + 1; n <= a->hi(); ++n)
    tilde.set_d(n, pinv[idx(n - 1, a->lo())] * a->d(n) * p[idx(n, a->lo())]);
  ComplexPtr tp = share(std::move(tilde));
  auto block_of = [&](int n, std::size_t i) {
    std::size_t acc = 0;
    for (std::size_t t = 0; t < L; ++t) {
      acc += s.quotient[t]->rank(n);
      if (i < acc) return t;
    }
    return L;
  };
  EntryMask mask = [&](int n, std::size_t row, std::size_t col) { return block_of(n + 1, row) <= block_of(n, col); };
  auto kt = find_null_homotopy(GradedMap::identity(tp), mask);
  if (kt) {
    GradedMap k(a, a, 1);
    for (int n = a->lo(); n + 1 <= a->hi(); ++n)
      k.set(n, p[idx(n + 1, a->lo())] * kt->at(n) * pinv[idx(n, a->lo())]);
    ts.contraction = k;
    ts.filtered = true;
  } else {
    ts.contraction = find_contraction(a);
    ts.filtered = false;
  }
  return ts;
}

std::vector<GradedMap> fhat_from_F(const SplittingData& s, const TotalSpace& t, const GradedMap& f) {
  if (!f.source()->same_shape(*t.complex) || !f.target()->same_shape(*s.kernel))
    throw ShapeError("fhat: F must map the total space to the kernel complex");
  const std::size_t L = s.levels;
  std::vector<GradedMap> out;
  for (std::size_t n = 0; n < L; ++n) {
    GradedMap acc(s.a[n], s.b[n], f.degree());
    // alphas: A_n → A_k ⊗ S^{n−k}, sigmas: B_k ⊗ S^{n−k} → B_n, for k from n down to 0.
    GradedMap alphas = GradedMap::identity(s.a[n]);
    GradedMap sigmas = GradedMap::identity(s.b[n]);
    for (std::size_t k = n + 1; k-- > 0;) {
      const std::size_t e = n - k;
      if (k < n) {
        alphas = s.tensored_power(s.alpha[k + 1], e - 1) * alphas;
        sigmas = sigmas * s.tensored_power(s.sigma[k + 1], e - 1);
      }
      GradedMap inner = s.j[k] * f * t.inclusion[k];
      acc += sigmas * s.tensored_power(inner, e) * alphas;
    }
    out.push_back(acc);
  }
  return out;
}

bool check_fhat_recursion(const SplittingData& s, const TotalSpace& t, const GradedMap& f,
                          const std::vector<GradedMap>& fhat) {
  if (fhat.size() != s.levels) return false;
  if (!(fhat[0] == s.j[0] * f * t.inclusion[0])) return false;
  for (std::size_t n = 0; n + 1 < s.levels; ++n) {
    GradedMap fn1 = f * t.inclusion[n + 1] * s.v[n + 1];
    GradedMap rhs = s.j[n + 1] * s.theta[n] * fhat[n] * s.u[n] +
                    s.sigma[n + 1] * s.tensored_power(fhat[n], 1) * s.alpha[n + 1] +
                    s.j[n + 1] * fn1 * s.pi[n + 1];
    if (!(rhs == fhat[n + 1])) return false;
  }
  return true;
}

GradedMap F_from_fhat(const SplittingData& s, const TotalSpace& t, const std::vector<GradedMap>& fhat) {
  if (fhat.size() != s.levels) throw ShapeError("F_from_fhat: wrong number of levels");
  GradedMap out(t.complex, s.kernel, fhat[0].degree());
  for (std::size_t n = 0; n < s.levels; ++n) out += s.theta[n] * fhat[n] * s.v[n] * t.coordinate[n];
  return out;
}

D0Morphism to_d0_morphism(const SplittingData& s, const D0Complex& a, const D0Complex& b,
                          const std::vector<GradedMap>& fhat) {
  if (fhat.size() != s.levels) throw ShapeError("to_d0_morphism: wrong number of levels");
  D0Morphism m{fhat.empty() ? 0 : fhat[0].degree(), {}};
  m.level.emplace_back(a.level[0], b.level[0], m.degree);
  for (std::size_t t = 0; t < fhat.size(); ++t) m.level.push_back(fhat[t].retarget(a.level[t + 1], b.level[t + 1]));
  return m;
}

std::vector<GradedMap> from_d0_morphism(const SplittingData& s, const D0Morphism& f) {
  if (f.level.size() < s.levels + 1) throw ShapeError("from_d0_morphism: too few levels");
  std::vector<GradedMap> out;
  for (std::size_t t = 0; t < s.levels; ++t) out.push_back(f.level[t + 1].retarget(s.a[t], s.b[t]));
  return out;
}

GradedMap delta_differential(const SplittingData& s, const TotalSpace& t, const GradedMap& f) {
  GradedMap out = differential(f);
  for (std::size_t i = 0; i + 1 < s.levels; ++i)
    out -= t_operator(s, i) * s.tensored_power(f, i + 1) * t.alpha_power[i + 1];
  return out;
}

int inversion_sign(std::size_t p, int q) {
  const long e = static_cast<long>(p + 1) * q;
  return e % 2 == 0 ? 1 : -1;
}

Inversion invert_homotopy(const SplittingData& s, const TotalSpace& t, const GradedMap& f) {
  if (!delta_differential(s, t, f).is_zero()) throw PreconditionError("invert: F is not a delta-cycle");
  if (!t.contraction) throw PreconditionError("invert: the total space is not contractible");
  const GradedMap& k = *t.contraction;
  const int q = f.degree();
  Inversion inv{GradedMap(t.complex, s.kernel, q + 1), {}, t.filtered};
  GradedMap x = f * k;
  for (std::size_t p = 0;; ++p) {
    if (x.is_zero()) break;
    if (p > s.levels) throw Error("invert: the series does not terminate for this contraction");
    inv.terms.push_back(x);
    inv.g += x.scaled(inversion_sign(p, q));
    GradedMap next(t.complex, s.kernel, q + 1);
    for (std::size_t i = 0; i + 1 < s.levels; ++i)
      next += t_operator(s, i) * s.tensored_power(x, i + 1) * t.alpha_power[i + 1] * k;
    x = next;
  }
  if (!(delta_differential(s, t, inv.g) == f)) throw Error("invert: delta(G) differs from F");
  return inv;
}

GradedMap invert_by_tuples(const SplittingData& s, const TotalSpace& t, const GradedMap& f) {
  if (!t.contraction || !t.filtered) throw PreconditionError("tuple expansion needs a filtered contraction");
  const GradedMap& k = *t.contraction;
  const int q = f.degree();
  const std::size_t budget = s.levels - 1;
  GradedMap g(t.complex, s.kernel, q + 1);
  std::vector<std::size_t> tuple;
  std::function<void(std::size_t)> walk = [&](std::size_t used) {
    GradedMap y = f * k;
    for (std::size_t i : tuple) y = t_operator(s, i) * s.tensored_power(y, i + 1) * t.alpha_power[i + 1] * k;
    g += y.scaled(inversion_sign(tuple.size(), q));
    for (std::size_t i = 0; used + i + 1 <= budget; ++i) {
      tuple.push_back(i);
      walk(used + i + 1);
      tuple.pop_back();
    }
  };
  walk(0);
  return g;
}

}  // namespace dcx
