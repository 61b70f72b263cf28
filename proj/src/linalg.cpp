#include "dcx/linalg.hpp"

#include <algorithm>
#include <utility>

#include "dcx/error.hpp"

namespace dcx {

namespace {

int cmpabs(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

/// Working integer matrix for the Smith reduction.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<mpz_class> v;

  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c) {}
  mpz_class& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  const mpz_class& at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap(at(a, j), at(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, a), at(i, b));
  }
  // row[dst] += f * row[src]
  void add_row(std::size_t dst, std::size_t src, const mpz_class& f) {
    for (std::size_t j = 0; j < cols; ++j)
      if (at(src, j) != 0) at(dst, j) += f * at(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const mpz_class& f) {
    for (std::size_t i = 0; i < rows; ++i)
      if (at(i, src) != 0) at(i, dst) += f * at(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) at(i, j) = -at(i, j);
  }
};

IntMatrix to_int(const Matrix& a) {
  IntMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Scalar& x = a(i, j);
      if (x.get_den() != 1) throw ShapeError("expected an integer matrix");
      m.at(i, j) = x.get_num();
    }
  return m;
}

Matrix from_int(const IntMatrix& m, Ring ring) {
  Matrix a(ring, m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (m.at(i, j) != 0) a.set(i, j, Scalar(m.at(i, j)));
  return a;
}

struct SmithWork {
  IntMatrix a;
  IntMatrix p;
  IntMatrix q;
  std::size_t rank = 0;
};

/// In-place Smith reduction. p and q are only updated when requested.
void smith_reduce(SmithWork& w, bool track_p, bool track_q) {
  IntMatrix& a = w.a;
  const std::size_t r = a.rows, c = a.cols;
  std::size_t t = 0;
  auto row_swap = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    if (track_p) w.p.swap_rows(x, y);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    if (track_q) w.q.swap_cols(x, y);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const mpz_class& f) {
    a.add_row(dst, src, f);
    if (track_p) w.p.add_row(dst, src, f);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const mpz_class& f) {
    a.add_col(dst, src, f);
    if (track_q) w.q.add_col(dst, src, f);
  };

  while (t < r && t < c) {
    // Smallest |entry| in the trailing block, first in (row, col) order.
    std::size_t pi = r, pj = c;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        const mpz_class& x = a.at(i, j);
        if (x == 0) continue;
        if (pi == r || cmpabs(x, a.at(pi, pj)) < 0) pi = i, pj = j;
      }
    if (pi == r) break;
    row_swap(t, pi);
    col_swap(t, pj);

    mpz_class quo;
    for (;;) {
      for (std::size_t i = t + 1; i < r; ++i) {
        if (a.at(i, t) == 0) continue;
        mpz_tdiv_q(quo.get_mpz_t(), a.at(i, t).get_mpz_t(), a.at(t, t).get_mpz_t());
        if (quo != 0) row_add(i, t, -quo);
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (a.at(t, j) == 0) continue;
        mpz_tdiv_q(quo.get_mpz_t(), a.at(t, j).get_mpz_t(), a.at(t, t).get_mpz_t());
        if (quo != 0) col_add(j, t, -quo);
      }
      // Any remainder left in the pivot row/column becomes the new pivot.
      std::size_t bi = r, bj = c;
      const mpz_class* best = nullptr;
      for (std::size_t i = t + 1; i < r; ++i)
        if (a.at(i, t) != 0 && (!best || cmpabs(a.at(i, t), *best) < 0)) bi = i, best = &a.at(i, t);
      for (std::size_t j = t + 1; j < c; ++j)
        if (a.at(t, j) != 0 && (!best || cmpabs(a.at(t, j), *best) < 0)) bi = r, bj = j, best = &a.at(t, j);
      if (bi != r) {
        row_swap(t, bi);
        continue;
      }
      if (bj != c) {
        col_swap(t, bj);
        continue;
      }
      // Divisibility: every trailing entry must be a multiple of the pivot.
      bool fixed = false;
      for (std::size_t i = t + 1; i < r && !fixed; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (!mpz_divisible_p(a.at(i, j).get_mpz_t(), a.at(t, t).get_mpz_t())) {
            row_add(t, i, 1);
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (a.at(t, t) < 0) {
      a.negate_row(t);
      if (track_p) w.p.negate_row(t);
    }
    ++t;
  }
  w.rank = t;
}

SmithWork run_smith(const Matrix& a, bool track_p, bool track_q) {
  SmithWork w{to_int(a), IntMatrix(0, 0), IntMatrix(0, 0), 0};
  if (track_p) w.p = IntMatrix::identity(a.rows());
  if (track_q) w.q = IntMatrix::identity(a.cols());
  smith_reduce(w, track_p, track_q);
  return w;
}

/// Reduced row echelon form over a field; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m) {
  const Ring& ring = m.ring();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = m.rows();
    for (std::size_t i = row; i < m.rows(); ++i)
      if (m(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Scalar tmp = m(row, j);
        m.set(row, j, m(sel, j));
        m.set(sel, j, tmp);
      }
    Scalar inv = ring.inverse(m(row, col));
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(row, j) != 0) m.set(row, j, m(row, j) * inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Scalar f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(row, j) != 0) m.set(i, j, m(i, j) - f * m(row, j));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

bool is_field_ring(const Ring& r) { return r.is_rationals() || (r.is_mod() && r.is_field()); }

/// Reduced echelon data of [a | b] over Q with pivots taken in the a part only.
struct RationalEchelon {
  std::size_t n = 0;
  bool consistent = true;  // no reduced row is zero on a and nonzero on b
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free;
  std::vector<std::vector<mpq_class>> rows;  // dense pivot rows, ordered by pivot column
};

using SparseRow = std::vector<std::pair<std::size_t, mpq_class>>;

const mpq_class* entry(const SparseRow& r, std::size_t col) {
  auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
  return it != r.end() && it->first == col ? &it->second : nullptr;
}

// r − f·p
SparseRow axpy(const SparseRow& r, const mpq_class& f, const SparseRow& p) {
  SparseRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || p[j].first < r[i].first) {
      out.emplace_back(p[j].first, -f * p[j].second);
      ++j;
    } else {
      mpq_class x = r[i].second - f * p[j].second;
      if (x != 0) out.emplace_back(r[i].first, std::move(x));
      ++i, ++j;
    }
  }
  return out;
}

RationalEchelon rational_echelon(const Matrix& a, const Matrix& b) {
  RationalEchelon e;
  e.n = a.cols();
  const std::size_t m = a.rows(), w = a.cols() + b.cols();
  std::vector<SparseRow> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) rows[i].emplace_back(j, a(i, j));
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (b(i, j) != 0) rows[i].emplace_back(a.cols() + j, b(i, j));
  }
  std::vector<bool> used(m, false);
  std::vector<std::size_t> pivot_row;
  for (std::size_t col = 0; col < e.n; ++col) {
    // a unit entry if there is one, then the sparsest row
    std::size_t sel = m;
    bool sel_unit = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const mpq_class* x = entry(rows[i], col);
      if (!x) continue;
      const bool unit = x->get_den() == 1 && abs(x->get_num()) == 1;
      if (sel == m || (unit && !sel_unit) || (unit == sel_unit && rows[i].size() < rows[sel].size())) {
        sel = i;
        sel_unit = unit;
      }
    }
    if (sel == m) {
      e.free.push_back(col);
      continue;
    }
    SparseRow& pr = rows[sel];
    const mpq_class inv = 1 / *entry(pr, col);
    for (auto& [c, x] : pr) x *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == sel) continue;
      if (const mpq_class* x = entry(rows[i], col)) {
        const mpq_class f = *x;
        rows[i] = axpy(rows[i], f, pr);
      }
    }
    used[sel] = true;
    e.pivots.push_back(col);
    pivot_row.push_back(sel);
  }
  for (std::size_t i = 0; i < m; ++i)
    if (!used[i] && !rows[i].empty()) e.consistent = false;
  for (std::size_t k : pivot_row) {
    std::vector<mpq_class> dense(w);
    for (const auto& [c, x] : rows[k]) dense[c] = x;
    e.rows.push_back(std::move(dense));
  }
  return e;
}

mpz_class mod_floor(const mpz_class& x, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Lower triangular basis of span(columns of y) + modulus·Z^k, off-diagonal entries
/// reduced modulo the diagonal.
IntMatrix modular_hnf(const std::vector<std::vector<mpz_class>>& cols, std::size_t k, const mpz_class& modulus) {
  std::vector<std::vector<mpz_class>> work;
  for (const auto& c : cols) {
    std::vector<mpz_class> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = mod_floor(c[i], modulus);
    work.push_back(std::move(v));
  }
  IntMatrix h(k, k);
  mpz_class g, s, t;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<mpz_class> piv(k);
    piv[i] = modulus;
    for (auto& v : work) {
      if (v[i] == 0) continue;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), piv[i].get_mpz_t(), v[i].get_mpz_t());
      const mpz_class pa = piv[i] / g, vb = v[i] / g;
      for (std::size_t r = i; r < k; ++r) {
        const mpz_class np = s * piv[r] + t * v[r];
        const mpz_class nv = vb * piv[r] - pa * v[r];
        piv[r] = r == i ? np : mod_floor(np, modulus);
        v[r] = r == i ? mpz_class(0) : mod_floor(nv, modulus);
      }
    }
    for (std::size_t r = i; r < k; ++r) h.at(r, i) = piv[r];
  }
  mpz_class q;
  for (std::size_t r = 1; r < k; ++r)
    for (std::size_t j = 0; j < r; ++j) {
      mpz_fdiv_q(q.get_mpz_t(), h.at(r, j).get_mpz_t(), h.at(r, r).get_mpz_t());
      if (q != 0)
        for (std::size_t x = r; x < k; ++x) h.at(x, j) -= q * h.at(x, r);
    }
  return h;
}

/// Integer points of the affine solution space of a·x = b (one per column of b) and
/// a basis of the integer kernel. The free coordinates y parametrize rational
/// solutions; integrality of the pivot coordinates is a system of congruences on y.
struct IntegerSolution {
  bool consistent = true;
  IntMatrix particular{0, 0};  // n × cols(b)
  IntMatrix kernel{0, 0};      // n × (n − rank)
};

IntegerSolution integer_solve(const Matrix& a, const Matrix& b) {
  RationalEchelon e = rational_echelon(a, b);
  const std::size_t n = e.n, r = e.pivots.size(), k = e.free.size(), nb = b.cols();
  IntegerSolution out;
  if (!e.consistent) {
    out.consistent = false;
    return out;
  }

  mpz_class modulus = 1;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t f : e.free) modulus = lcm(modulus, mpz_class(e.rows[i][f].get_den()));
    for (std::size_t c = 0; c < nb; ++c) modulus = lcm(modulus, mpz_class(e.rows[i][n + c].get_den()));
  }

  // y ∈ y0 + span(ys) + modulus·Z^k; ys column-major, reduced modulo the modulus.
  std::vector<std::vector<mpz_class>> ys(k, std::vector<mpz_class>(k));
  for (std::size_t j = 0; j < k; ++j) ys[j][j] = 1;
  std::vector<std::vector<mpz_class>> y0(nb, std::vector<mpz_class>(k));

  mpz_class g, s, t;
  for (std::size_t i = 0; i < r && modulus != 1; ++i) {
    const std::vector<mpq_class>& row = e.rows[i];
    mpz_class d = 1;
    for (std::size_t f : e.free) d = lcm(d, mpz_class(row[f].get_den()));
    for (std::size_t c = 0; c < nb; ++c) d = lcm(d, mpz_class(row[n + c].get_den()));
    if (d == 1) continue;
    // x_pivot = rhs − coeff·y must be integral: coeff·y ≡ rhs (mod d) after scaling by d.
    std::vector<mpz_class> coeff(k);
    for (std::size_t j = 0; j < k; ++j) coeff[j] = mpz_class(row[e.free[j]] * d);
    auto value = [&](const std::vector<mpz_class>& y) {
      mpz_class acc = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (coeff[j] != 0 && y[j] != 0) acc += coeff[j] * y[j];
      return acc;
    };
    std::vector<mpz_class> rhs(nb);
    for (std::size_t c = 0; c < nb; ++c) rhs[c] = mod_floor(mpz_class(row[n + c] * d) - value(y0[c]), d);

    // Column operations on (ys | 0) with values (coeff·ys | d) until one column carries the gcd.
    std::vector<mpz_class> gv(k + 1);
    for (std::size_t j = 0; j < k; ++j) gv[j] = mod_floor(value(ys[j]), d);
    gv[k] = d;
    std::vector<mpz_class> piv(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
      if (gv[j] == 0) continue;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), gv[k].get_mpz_t(), gv[j].get_mpz_t());
      const mpz_class pa = gv[k] / g, vb = gv[j] / g;
      for (std::size_t x = 0; x < k; ++x) {
        const mpz_class np = s * piv[x] + t * ys[j][x];
        const mpz_class nv = vb * piv[x] - pa * ys[j][x];
        piv[x] = mod_floor(np, modulus);
        ys[j][x] = mod_floor(nv, modulus);
      }
      gv[k] = g;
      gv[j] = 0;
    }
    for (std::size_t c = 0; c < nb; ++c) {
      if (!mpz_divisible_p(rhs[c].get_mpz_t(), gv[k].get_mpz_t())) {
        out.consistent = false;
        return out;
      }
      const mpz_class f = rhs[c] / gv[k];
      for (std::size_t x = 0; x < k; ++x) y0[c][x] = mod_floor(y0[c][x] + f * piv[x], modulus);
    }
  }

  IntMatrix h = modular_hnf(ys, k, modulus);
  mpz_class q;
  for (auto& y : y0)
    for (std::size_t i = 0; i < k; ++i) {
      mpz_fdiv_q(q.get_mpz_t(), y[i].get_mpz_t(), h.at(i, i).get_mpz_t());
      if (q != 0)
        for (std::size_t x = i; x < k; ++x) y[x] -= q * h.at(x, i);
    }

  auto lift = [&](const std::vector<mpz_class>& y, bool with_rhs, std::size_t c, IntMatrix& dst, std::size_t col) {
    for (std::size_t j = 0; j < k; ++j) dst.at(e.free[j], col) = y[j];
    for (std::size_t i = 0; i < r; ++i) {
      mpq_class x = with_rhs ? e.rows[i][n + c] : mpq_class(0);
      for (std::size_t j = 0; j < k; ++j)
        if (y[j] != 0 && e.rows[i][e.free[j]] != 0) x -= e.rows[i][e.free[j]] * y[j];
      if (x.get_den() != 1) throw Error("integer solve: non-integral lift");
      dst.at(e.pivots[i], col) = x.get_num();
    }
  };
  out.particular = IntMatrix(n, nb);
  for (std::size_t c = 0; c < nb; ++c) lift(y0[c], true, c, out.particular, c);
  out.kernel = IntMatrix(n, k);
  std::vector<mpz_class> col(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t x = 0; x < k; ++x) col[x] = h.at(x, j);
    lift(col, false, 0, out.kernel, j);
  }
  return out;
}

std::optional<Matrix> solve_integers(const Matrix& a, const Matrix& b) {
  IntegerSolution sol = integer_solve(a, b);
  if (!sol.consistent) return std::nullopt;
  return from_int(sol.particular, a.ring());
}

std::optional<Matrix> solve_field(const Matrix& a, const Matrix& b) {
  Matrix aug = hstack(a, b);
  std::vector<std::size_t> pivots = rref(aug);
  const std::size_t n = a.cols();
  Matrix x(a.ring(), n, b.cols());
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    if (pivots[k] >= n) return std::nullopt;
    for (std::size_t col = 0; col < b.cols(); ++col) x.set(pivots[k], col, aug(k, n + col));
  }
  return x;
}

std::optional<Matrix> solve_mod(const Matrix& a, const Matrix& b) {
  const Ring zz = Ring::integers();
  const std::size_t m = a.rows();
  Matrix lifted = hstack(a.over(zz), Matrix::identity(zz, m).scaled(a.ring().modulus()));
  auto sol = solve_integers(lifted, b.over(zz));
  if (!sol) return std::nullopt;
  return sol->block(0, 0, a.cols(), b.cols()).over(a.ring());
}

}  // namespace

SmithForm smith_normal_form(const Matrix& a) {
  if (!a.ring().is_integers()) throw ShapeError("smith_normal_form requires an integer matrix");
  SmithWork w = run_smith(a, true, true);
  SmithForm out{from_int(w.a, a.ring()), from_int(w.p, a.ring()), from_int(w.q, a.ring()), w.rank, {}};
  for (std::size_t i = 0; i < w.rank; ++i) out.factors.push_back(w.a.at(i, i));
  return out;
}

std::vector<mpz_class> invariant_factors(const Matrix& a) {
  if (!a.ring().is_integers()) throw ShapeError("invariant_factors requires an integer matrix");
  SmithWork w = run_smith(a, false, false);
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < w.rank; ++i) out.push_back(w.a.at(i, i));
  return out;
}

std::size_t rank(const Matrix& a) {
  if (a.ring().is_integers()) return rational_echelon(a, Matrix(a.ring(), a.rows(), 0)).pivots.size();
  if (is_field_ring(a.ring())) {
    Matrix m = a;
    return rref(m).size();
  }
  throw PreconditionError("rank is not defined over " + a.ring().name());
}

std::optional<Matrix> solve_linear(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw ShapeError("solve_linear: ring mismatch");
  if (a.rows() != b.rows()) throw ShapeError("solve_linear: a has " + std::to_string(a.rows()) +
                                             " rows but b has " + std::to_string(b.rows()));
  if (a.ring().is_integers()) return solve_integers(a, b);
  if (a.ring().is_rationals()) return solve_field(a, b);
  return solve_mod(a, b);
}

Matrix kernel_basis(const Matrix& a) {
  const Ring& ring = a.ring();
  const std::size_t n = a.cols();
  if (ring.is_integers()) return from_int(integer_solve(a, Matrix(ring, a.rows(), 0)).kernel, ring);
  if (ring.is_rationals()) {
    Matrix m = a;
    std::vector<std::size_t> pivots = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    Matrix k(ring, n, n - pivots.size());
    std::size_t col = 0;
    for (std::size_t free = 0; free < n; ++free) {
      if (is_pivot[free]) continue;
      k.set(free, col, 1);
      for (std::size_t r = 0; r < pivots.size(); ++r) k.set(pivots[r], col, -m(r, free));
      ++col;
    }
    return k;
  }
  // Z/m: reduce the integer lift; ker ≅ ⊕ Z/gcd(dᵢ, m) ⊕ (Z/m)^(n-rank).
  const mpz_class modulus(ring.modulus());
  SmithWork w = run_smith(a.over(Ring::integers()), false, true);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= w.rank) {
      keep.push_back(i);
      continue;
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), w.a.at(i, i).get_mpz_t(), modulus.get_mpz_t());
    if (g == modulus)
      keep.push_back(i);
    else if (g != 1)
      throw NonFreeKernel("kernel over " + ring.name() + " has a Z/" + g.get_str() + " summand");
  }
  Matrix k(ring, n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) k.set(i, c, Scalar(w.q.at(i, keep[c])));
  return k;
}

std::optional<Matrix> is_split_injection(const Matrix& a) {
  auto rt = solve_linear(a.transpose(), Matrix::identity(a.ring(), a.cols()));
  if (!rt) return std::nullopt;
  return rt->transpose();
}

std::optional<Matrix> is_split_surjection(const Matrix& a) {
  return solve_linear(a, Matrix::identity(a.ring(), a.rows()));
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  auto x = solve_linear(a, Matrix::identity(a.ring(), a.rows()));
  if (!x) return std::nullopt;
  if (!(*x * a).is_identity()) return std::nullopt;
  return x;
}

std::optional<Splitting> split_injection(const Matrix& a) {
  auto r = is_split_injection(a);
  if (!r) return std::nullopt;
  Matrix complement;
  try {
    complement = kernel_basis(*r);
  } catch (const NonFreeKernel&) {
    return std::nullopt;
  }
  if (complement.cols() + a.cols() != a.rows()) return std::nullopt;
  auto inv = inverse(hstack(a, complement));
  if (!inv) return std::nullopt;
  const std::size_t k = a.cols();
  return Splitting{inv->block(0, 0, k, a.rows()), complement, inv->block(k, 0, a.rows() - k, a.rows())};
}

Matrix lattice_basis(const Matrix& g) {
  if (!g.ring().is_integers()) throw ShapeError("lattice_basis requires an integer matrix");
  SmithWork w = run_smith(g, false, true);
  Matrix gq = g * from_int(w.q, g.ring());
  return gq.block(0, 0, g.rows(), w.rank);
}

}  // namespace dcx
