#include "dcx/chain.hpp"

#include <sstream>

#include "dcx/error.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

ChainComplex::ChainComplex(Ring ring, int lo, std::vector<std::size_t> ranks)
    : ring_(ring), lo_(lo), ranks_(std::move(ranks)) {
  d_.reserve(ranks_.size() + 1);
  for (std::size_t k = 0; k <= ranks_.size(); ++k) {
    const int n = lo_ + static_cast<int>(k);
    d_.emplace_back(ring_, rank(n - 1), rank(n));
  }
  if (ranks_.empty()) d_.clear();
  empty_ = Matrix(ring_, 0, 0);
}

std::size_t ChainComplex::rank(int n) const {
  if (n < lo_ || n > hi()) return 0;
  return ranks_[static_cast<std::size_t>(n - lo_)];
}

std::size_t ChainComplex::total_rank() const {
  std::size_t t = 0;
  for (auto r : ranks_) t += r;
  return t;
}

const Matrix& ChainComplex::d(int n) const {
  if (ranks_.empty() || n < lo_ || n > hi() + 1) return empty_;
  return d_[static_cast<std::size_t>(n - lo_)];
}

void ChainComplex::set_d(int n, Matrix m) {
  if (m.rows() != rank(n - 1) || m.cols() != rank(n))
    throw ShapeError("differential in degree " + std::to_string(n) + " must be " + std::to_string(rank(n - 1)) +
                     "x" + std::to_string(rank(n)) + ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  if (m.ring() != ring_) throw ShapeError("differential ring mismatch");
  if (m.empty()) return;
  d_[static_cast<std::size_t>(n - lo_)] = std::move(m);
}

std::vector<int> ChainComplex::invalid_degrees() const {
  std::vector<int> bad;
  for (int n = lo_ + 1; n <= hi(); ++n) {
    const Matrix& a = d(n - 1);
    const Matrix& b = d(n);
    if (a.empty() || b.empty()) continue;
    if (!(a * b).is_zero()) bad.push_back(n);
  }
  return bad;
}

bool ChainComplex::same_shape(const ChainComplex& other) const {
  if (ring_ != other.ring_) return false;
  const int a = std::min(lo_, other.lo_);
  const int b = std::max(hi(), other.hi());
  for (int n = a; n <= b; ++n)
    if (rank(n) != other.rank(n)) return false;
  return true;
}

bool operator==(const ChainComplex& a, const ChainComplex& b) {
  if (!a.same_shape(b)) return false;
  const int lo = std::min(a.lo(), b.lo());
  const int hi = std::max(a.hi(), b.hi());
  for (int n = lo; n <= hi + 1; ++n) {
    if (a.rank(n) == 0 && a.rank(n - 1) == 0) continue;
    if (!(a.d(n) == b.d(n))) return false;
  }
  return true;
}

GradedMap::GradedMap(ComplexPtr source, ComplexPtr target, int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {
  if (source_->ring() != target_->ring()) throw ShapeError("graded map between complexes over different rings");
  if (!source_->empty())
    for (int n = source_->lo(); n <= source_->hi(); ++n)
      blocks_.emplace_back(source_->ring(), target_->rank(n + degree_), source_->rank(n));
}

GradedMap GradedMap::identity(const ComplexPtr& c) {
  GradedMap f(c, c, 0);
  if (!c->empty())
    for (int n = c->lo(); n <= c->hi(); ++n) f.set(n, Matrix::identity(c->ring(), c->rank(n)));
  return f;
}

Matrix GradedMap::at(int n) const {
  if (source_->empty() || n < source_->lo() || n > source_->hi())
    return Matrix(source_->ring(), target_->rank(n + degree_), 0);
  return blocks_[static_cast<std::size_t>(n - source_->lo())];
}

void GradedMap::set(int n, Matrix m) {
  if (m.rows() != target_->rank(n + degree_) || m.cols() != source_->rank(n))
    throw ShapeError("graded map block at degree " + std::to_string(n) + " must be " +
                     std::to_string(target_->rank(n + degree_)) + "x" + std::to_string(source_->rank(n)) +
                     ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (source_->empty() || n < source_->lo() || n > source_->hi()) return;
  blocks_[static_cast<std::size_t>(n - source_->lo())] = std::move(m);
}

void GradedMap::add_at(int n, const Matrix& m) {
  if (source_->empty() || n < source_->lo() || n > source_->hi()) {
    set(n, m);
    return;
  }
  blocks_[static_cast<std::size_t>(n - source_->lo())] += m;
}

bool GradedMap::is_zero() const {
  for (const auto& b : blocks_)
    if (!b.is_zero()) return false;
  return true;
}

GradedMap GradedMap::scaled(const Scalar& factor) const {
  GradedMap out = *this;
  for (auto& b : out.blocks_) b = b.scaled(factor);
  return out;
}

namespace {

void require_parallel(const GradedMap& a, const GradedMap& b) {
  if (a.degree() != b.degree() || !a.source()->same_shape(*b.source()) || !a.target()->same_shape(*b.target()))
    throw ShapeError("graded maps are not parallel");
}

}  // namespace

GradedMap& GradedMap::operator+=(const GradedMap& other) {
  require_parallel(*this, other);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

GradedMap& GradedMap::operator-=(const GradedMap& other) {
  require_parallel(*this, other);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

GradedMap operator*(const GradedMap& g, const GradedMap& f) {
  if (!f.target()->same_shape(*g.source())) throw ShapeError("composition: target/source shape mismatch");
  GradedMap out(f.source(), g.target(), f.degree() + g.degree());
  const ChainComplex& s = *f.source();
  if (s.empty()) return out;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    if (s.rank(n) == 0) continue;
    const int mid = n + f.degree();
    if (f.target()->rank(mid) == 0 || g.target()->rank(mid + g.degree()) == 0) continue;
    out.set(n, g.at(mid) * f.at(n));
  }
  return out;
}

bool operator==(const GradedMap& a, const GradedMap& b) {
  if (a.degree() != b.degree() || !a.source()->same_shape(*b.source()) || !a.target()->same_shape(*b.target()))
    return false;
  for (std::size_t k = 0; k < a.blocks_.size(); ++k)
    if (!(a.blocks_[k] == b.blocks_[k])) return false;
  return true;
}

GradedMap GradedMap::retarget(ComplexPtr source, ComplexPtr target) const {
  if (!source->same_shape(*source_) || !target->same_shape(*target_)) throw ShapeError("retarget: shape mismatch");
  GradedMap out = *this;
  out.source_ = std::move(source);
  out.target_ = std::move(target);
  return out;
}

std::string GradedMap::str() const {
  std::ostringstream os;
  os << "degree " << degree_ << "\n";
  if (source_->empty()) return os.str();
  for (int n = source_->lo(); n <= source_->hi(); ++n) os << "  [" << n << "] " << at(n).str() << "\n";
  return os.str();
}

GradedMap differential(const GradedMap& f) {
  const ChainComplex& s = *f.source();
  const ChainComplex& t = *f.target();
  const int deg = f.degree();
  GradedMap out(f.source(), f.target(), deg - 1);
  if (s.empty()) return out;
  const Scalar sign = (deg % 2 == 0) ? Scalar(-1) : Scalar(1);
  for (int n = s.lo(); n <= s.hi(); ++n) {
    if (s.rank(n) == 0 || t.rank(n + deg - 1) == 0) continue;
    Matrix m(s.ring(), t.rank(n + deg - 1), s.rank(n));
    if (t.rank(n + deg) > 0) m += t.d(n + deg) * f.at(n);
    if (s.rank(n - 1) > 0) m += (f.at(n - 1) * s.d(n)).scaled(sign);
    out.set(n, std::move(m));
  }
  return out;
}

bool is_chain_map(const GradedMap& f) { return differential(f).is_zero(); }

bool is_homotopy(const GradedMap& h, const GradedMap& f, const GradedMap& g) {
  if (h.degree() != f.degree() + 1) return false;
  return differential(h) == f - g;
}

std::optional<GradedMap> find_null_homotopy(const GradedMap& f) { return find_null_homotopy(f, EntryMask()); }

std::optional<GradedMap> find_null_homotopy(const GradedMap& f, const EntryMask& mask) {
  if (!is_chain_map(f)) throw PreconditionError("find_null_homotopy: input is not a chain map");
  const ChainComplex& s = *f.source();
  const ChainComplex& t = *f.target();
  const Ring& ring = s.ring();
  const int hd = f.degree() + 1;
  GradedMap h(f.source(), f.target(), hd);
  if (s.empty() || f.is_zero()) return h;

  // Unknown numbering: entries (n, r, c) of h_n that the mask permits.
  struct Slot {
    std::size_t offset;
    std::vector<long> index;  // r * cols + c → column, or -1 when masked out
  };
  std::vector<Slot> slots;
  std::size_t unknowns = 0;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    const std::size_t rows = t.rank(n + hd), cols = s.rank(n);
    Slot slot{unknowns, std::vector<long>(rows * cols, -1)};
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (!mask || mask(n, r, c)) slot.index[r * cols + c] = static_cast<long>(unknowns++);
    slots.push_back(std::move(slot));
  }
  auto var = [&](int n, std::size_t r, std::size_t c) -> long {
    if (n < s.lo() || n > s.hi()) return -1;
    const Slot& slot = slots[static_cast<std::size_t>(n - s.lo())];
    return slot.index[r * s.rank(n) + c];
  };

  // Equations: for each n, t.d(n+hd)·h_n − (−1)^hd·h_{n−1}·s.d(n) = f_n.
  std::size_t equations = 0;
  for (int n = s.lo(); n <= s.hi(); ++n) equations += t.rank(n + hd - 1) * s.rank(n);
  Matrix a(ring, equations, unknowns);
  Matrix b(ring, equations, 1);
  const Scalar sign = (hd % 2 == 0) ? Scalar(-1) : Scalar(1);
  std::size_t row = 0;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    const std::size_t out_rows = t.rank(n + hd - 1), cols = s.rank(n);
    if (out_rows == 0 || cols == 0) continue;
    const Matrix fn = f.at(n);
    const Matrix& dt = t.d(n + hd);
    const Matrix& ds = s.d(n);
    const std::size_t mid_t = t.rank(n + hd);
    const std::size_t mid_s = s.rank(n - 1);
    for (std::size_t i = 0; i < out_rows; ++i)
      for (std::size_t j = 0; j < cols; ++j, ++row) {
        b.set(row, 0, fn(i, j));
        for (std::size_t k = 0; k < mid_t; ++k) {
          if (dt(i, k) == 0) continue;
          const long v = var(n, k, j);
          if (v >= 0) a.add_to(row, static_cast<std::size_t>(v), dt(i, k));
        }
        for (std::size_t k = 0; k < mid_s; ++k) {
          if (ds(k, j) == 0) continue;
          const long v = var(n - 1, i, k);
          if (v >= 0) a.add_to(row, static_cast<std::size_t>(v), sign * ds(k, j));
        }
      }
  }
  auto x = solve_linear(a, b);
  if (!x) return std::nullopt;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    const std::size_t rows = t.rank(n + hd), cols = s.rank(n);
    if (rows == 0 || cols == 0) continue;
    Matrix m(ring, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        const long v = var(n, r, c);
        if (v >= 0) m.set(r, c, (*x)(static_cast<std::size_t>(v), 0));
      }
    h.set(n, std::move(m));
  }
  return h;
}

// Degree by degree from the bottom: d·k_n = 1 − k_{n−1}·d, whose right side
// consists of cycles, so each step is solvable exactly when c is acyclic.
std::optional<GradedMap> find_contraction(const ComplexPtr& c) {
  GradedMap k(c, c, 1);
  if (c->empty()) return k;
  const Ring& ring = c->ring();
  for (int n = c->lo(); n <= c->hi(); ++n) {
    const std::size_t r = c->rank(n);
    if (r == 0) continue;
    Matrix rhs = Matrix::identity(ring, r);
    if (c->rank(n - 1) > 0) rhs -= k.at(n - 1) * c->d(n);
    if (rhs.is_zero()) continue;
    if (c->rank(n + 1) == 0) return std::nullopt;
    auto x = solve_linear(c->d(n + 1), rhs);
    if (!x) return std::nullopt;
    k.set(n, std::move(*x));
  }
  return k;
}

bool is_contractible(const ComplexPtr& c) { return c->is_zero() || find_contraction(c).has_value(); }

Bimodule Bimodule::free(Ring base, std::size_t rank) {
  if (rank == 0) throw PreconditionError("bimodule rank must be positive");
  return Bimodule{base, rank, std::vector<Scalar>(rank, Scalar(1))};
}

Bimodule Bimodule::twisted(Ring base, std::vector<Scalar> twist) {
  Bimodule s{base, twist.size(), std::move(twist)};
  for (auto& c : s.twist) base.normalize(c);
  s.validate();
  return s;
}

bool Bimodule::is_identity_twist() const {
  for (std::size_t g = 0; g < rank; ++g)
    if (twist_of(g) != 1) return false;
  return true;
}

void Bimodule::validate() const {
  if (rank == 0) throw PreconditionError("bimodule rank must be positive");
  if (!twist.empty() && twist.size() != rank) throw PreconditionError("one twist per bimodule generator");
  for (std::size_t g = 0; g < rank; ++g) {
    const Scalar c = twist_of(g);
    if (!base.is_mod()) {
      if (c != 1) throw PreconditionError("only the identity twist exists over " + base.name());
      continue;
    }
    if (base.element(c * c) != base.element(c))
      throw PreconditionError("twist multiplier " + c.get_str() + " is not idempotent in " + base.name());
  }
}

std::string Bimodule::str() const {
  std::ostringstream os;
  os << base.name() << "^" << rank;
  if (!is_identity_twist()) {
    os << " twist(";
    for (std::size_t g = 0; g < rank; ++g) os << (g ? "," : "") << twist_of(g).get_str();
    os << ")";
  }
  return os.str();
}

bool operator==(const Bimodule& a, const Bimodule& b) {
  if (a.base != b.base || a.rank != b.rank) return false;
  for (std::size_t g = 0; g < a.rank; ++g)
    if (a.twist_of(g) != b.twist_of(g)) return false;
  return true;
}

Bimodule tensor_bimodules(const Bimodule& outer, const Bimodule& inner) {
  if (outer.base != inner.base) throw ShapeError("bimodules over different rings");
  Bimodule out{inner.base, outer.rank * inner.rank, {}};
  out.twist.reserve(out.rank);
  for (std::size_t go = 0; go < outer.rank; ++go)
    for (std::size_t gi = 0; gi < inner.rank; ++gi) out.twist.push_back(out.base.element(outer.twist_of(go) * inner.twist_of(gi)));
  return out;
}

Bimodule bimodule_power(const Bimodule& s, std::size_t k) {
  Bimodule out{s.base, 1, {Scalar(1)}};
  for (std::size_t i = 0; i < k; ++i) out = tensor_bimodules(s, out);
  return out;
}

namespace {

Matrix twisted_blocks(const Matrix& m, const Bimodule& s) {
  Matrix out(m.ring(), m.rows() * s.rank, m.cols() * s.rank);
  for (std::size_t g = 0; g < s.rank; ++g) {
    const Scalar c = s.twist_of(g);
    out.set_block(g * m.rows(), g * m.cols(), c == 1 ? m : m.scaled(c));
  }
  return out;
}

}  // namespace

ChainComplex tensor_with_bimodule(const ChainComplex& c, const Bimodule& s) {
  if (c.ring() != s.base) throw ShapeError("tensor_with_bimodule: ring mismatch");
  if (c.empty()) return ChainComplex(c.ring());
  std::vector<std::size_t> ranks;
  for (int n = c.lo(); n <= c.hi(); ++n) ranks.push_back(c.rank(n) * s.rank);
  ChainComplex out(c.ring(), c.lo(), std::move(ranks));
  for (int n = c.lo() + 1; n <= c.hi(); ++n) out.set_d(n, twisted_blocks(c.d(n), s));
  return out;
}

GradedMap tensor_map(const GradedMap& f, const Bimodule& s, ComplexPtr source, ComplexPtr target) {
  GradedMap out(std::move(source), std::move(target), f.degree());
  const ChainComplex& src = *f.source();
  if (src.empty()) return out;
  for (int n = src.lo(); n <= src.hi(); ++n) out.set(n, twisted_blocks(f.at(n), s));
  return out;
}

}  // namespace dcx
