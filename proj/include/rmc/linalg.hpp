#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rmc/exec.hpp"
#include "rmc/fields.hpp"

namespace rmc {

/// Which level of the tower the entries of a matrix/subspace live in.
enum class Level : std::uint8_t { Fq, Fqm };

inline std::uint64_t level_size(const FieldCtx& ctx, Level lv) {
  return lv == Level::Fq ? ctx.q() : ctx.order();
}

/// Dense matrix over one level of the tower. Entries are full-field indices;
/// at level Fq they must lie in the subfield.
struct Mat {
  const FieldCtx* ctx = nullptr;
  Level level = Level::Fqm;
  int rows = 0, cols = 0;
  std::vector<Fe> e;

  Mat() = default;
  Mat(const FieldCtx& c, Level lv, int r, int cc)
      : ctx(&c), level(lv), rows(r), cols(cc), e(static_cast<std::size_t>(r) * cc, 0) {
    if (r < 0 || cc < 0) throw std::invalid_argument("negative matrix shape");
  }

  Fe at(int r, int c) const { return e[static_cast<std::size_t>(r) * cols + c]; }
  Fe& at(int r, int c) { return e[static_cast<std::size_t>(r) * cols + c]; }
  std::span<const Fe> row(int r) const { return {e.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }

  static Mat identity(const FieldCtx& c, Level lv, int n) {
    Mat m(c, lv, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static Mat from_rows(const FieldCtx& c, Level lv, const std::vector<std::vector<Fe>>& rows) {
    int rc = static_cast<int>(rows.size());
    int cc = rc ? static_cast<int>(rows[0].size()) : 0;
    Mat m(c, lv, rc, cc);
    for (int r = 0; r < rc; ++r) {
      if (static_cast<int>(rows[r].size()) != cc) throw std::invalid_argument("ragged rows");
      for (int col = 0; col < cc; ++col) {
        Fe v = rows[r][col];
        if (v >= c.order()) throw std::invalid_argument("entry out of field");
        if (lv == Level::Fq && !c.is_in_subfield(v)) throw std::invalid_argument("entry not in subfield");
        m.at(r, col) = v;
      }
    }
    return m;
  }

  /// Reinterpret a subfield matrix at the full-field level (entries unchanged),
  /// or check a full-field matrix down into the subfield.
  Mat at_level(Level lv) const {
    Mat m = *this;
    if (lv == Level::Fq && level == Level::Fqm)
      for (Fe v : e)
        if (!ctx->is_in_subfield(v)) throw std::invalid_argument("entry not in subfield");
    m.level = lv;
    return m;
  }

  bool operator==(const Mat& o) const {
    return level == o.level && rows == o.rows && cols == o.cols && e == o.e &&
           (ctx == o.ctx || (ctx && o.ctx && ctx->params() == o.ctx->params()));
  }
};

inline Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("shape mismatch");
  const FieldCtx& F = *a.ctx;
  Level lv = (a.level == Level::Fqm || b.level == Level::Fqm) ? Level::Fqm : Level::Fq;
  Mat c(F, lv, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      Fe aik = a.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < b.cols; ++j) {
        Fe bkj = b.at(k, j);
        if (bkj) c.at(i, j) = F.add(c.at(i, j), F.mul(aik, bkj));
      }
    }
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t(*a.ctx, a.level, a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

namespace detail {

/// GF(2) rows packed into 64-bit words, LSB = leftmost column.
struct PackedRows {
  int rows = 0, cols = 0, words = 0;
  std::vector<std::uint64_t> w;
  std::uint64_t* rp(int r) { return w.data() + static_cast<std::size_t>(r) * words; }
  const std::uint64_t* rp(int r) const { return w.data() + static_cast<std::size_t>(r) * words; }
  bool get(int r, int c) const { return (rp(r)[c >> 6] >> (c & 63)) & 1; }
  void set(int r, int c) { rp(r)[c >> 6] |= std::uint64_t(1) << (c & 63); }
};

inline bool gf2_packable(const FieldCtx& ctx, Level lv) {
  return ctx.p() == 2 && (lv == Level::Fq ? ctx.h() == 1 : ctx.ext_degree() == 1);
}

inline PackedRows pack(const Mat& m) {
  PackedRows p;
  p.rows = m.rows;
  p.cols = m.cols;
  p.words = (m.cols + 63) / 64;
  p.w.assign(static_cast<std::size_t>(p.rows) * p.words, 0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (m.at(r, c)) p.set(r, c);
  return p;
}

inline Mat unpack(const FieldCtx& ctx, Level lv, const PackedRows& p) {
  Mat m(ctx, lv, p.rows, p.cols);
  for (int r = 0; r < p.rows; ++r)
    for (int c = 0; c < p.cols; ++c)
      if (p.get(r, c)) m.at(r, c) = 1;
  return m;
}

/// Reduced row echelon form in place; returns pivot columns. Pivot rule:
/// leftmost column, then topmost row.
inline std::vector<int> gf2_rref(PackedRows& p) {
  std::vector<int> pivots;
  int rank = 0;
  for (int c = 0; c < p.cols && rank < p.rows; ++c) {
    int piv = -1;
    for (int r = rank; r < p.rows; ++r)
      if (p.get(r, c)) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int wdx = 0; wdx < p.words; ++wdx) std::swap(p.rp(piv)[wdx], p.rp(rank)[wdx]);
    for (int r = 0; r < p.rows; ++r) {
      if (r == rank || !p.get(r, c)) continue;
      for (int wdx = 0; wdx < p.words; ++wdx) p.rp(r)[wdx] ^= p.rp(rank)[wdx];
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

inline int gf2_rank(PackedRows& p) {
  int rank = 0;
  for (int c = 0; c < p.cols && rank < p.rows; ++c) {
    int piv = -1;
    for (int r = rank; r < p.rows; ++r)
      if (p.get(r, c)) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int wdx = 0; wdx < p.words; ++wdx) std::swap(p.rp(piv)[wdx], p.rp(rank)[wdx]);
    for (int r = rank + 1; r < p.rows; ++r) {
      if (!p.get(r, c)) continue;
      for (int wdx = 0; wdx < p.words; ++wdx) p.rp(r)[wdx] ^= p.rp(rank)[wdx];
    }
    ++rank;
  }
  return rank;
}

/// Generic elimination. full = reduced form with unit pivots, otherwise only
/// forward elimination (enough for rank).
inline std::vector<int> generic_elim(Mat& m, bool full) {
  const FieldCtx& F = *m.ctx;
  std::vector<int> pivots;
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int piv = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m.at(r, c)) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int cc = 0; cc < m.cols; ++cc) std::swap(m.at(piv, cc), m.at(rank, cc));
    if (full) {
      Fe s = F.inv(m.at(rank, c));
      if (s != 1)
        for (int cc = c; cc < m.cols; ++cc) m.at(rank, cc) = F.mul(m.at(rank, cc), s);
    }
    int rbegin = full ? 0 : rank + 1;
    for (int r = rbegin; r < m.rows; ++r) {
      if (r == rank) continue;
      Fe f = m.at(r, c);
      if (!f) continue;
      Fe scale = full ? f : F.div(f, m.at(rank, c));
      for (int cc = c; cc < m.cols; ++cc)
        m.at(r, cc) = F.sub(m.at(r, cc), F.mul(scale, m.at(rank, cc)));
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

}  // namespace detail

inline int rank(const Mat& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  if (detail::gf2_packable(*m.ctx, m.level)) {
    detail::PackedRows p = detail::pack(m);
    return detail::gf2_rank(p);
  }
  Mat c = m;
  return static_cast<int>(detail::generic_elim(c, false).size());
}

/// Canonical reduced row echelon form (unit pivots, zeros above and below,
/// zero rows at the bottom). Two matrices have equal rowspace iff their RREFs
/// are identical.
inline Mat rref(const Mat& m) {
  if (detail::gf2_packable(*m.ctx, m.level)) {
    detail::PackedRows p = detail::pack(m);
    detail::gf2_rref(p);
    return detail::unpack(*m.ctx, m.level, p);
  }
  Mat c = m;
  detail::generic_elim(c, true);
  return c;
}

/// A subspace of (level)^ambient held by its canonical RREF basis.
class Subspace {
 public:
  Subspace() = default;

  static Subspace from_span(const Mat& m) {
    Mat r = rref(m);
    int d = 0;
    while (d < r.rows) {
      bool nonzero = false;
      for (int c = 0; c < r.cols; ++c)
        if (r.at(d, c)) {
          nonzero = true;
          break;
        }
      if (!nonzero) break;
      ++d;
    }
    Subspace s;
    s.basis_ = Mat(*m.ctx, m.level, d, m.cols);
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < m.cols; ++c) s.basis_.at(i, c) = r.at(i, c);
    return s;
  }

  static Subspace zero(const FieldCtx& ctx, Level lv, int ambient) {
    Subspace s;
    s.basis_ = Mat(ctx, lv, 0, ambient);
    return s;
  }

  static Subspace full(const FieldCtx& ctx, Level lv, int ambient) {
    Subspace s;
    s.basis_ = Mat::identity(ctx, lv, ambient);
    s.basis_.level = lv;
    return s;
  }

  int dim() const { return basis_.rows; }
  int ambient() const { return basis_.cols; }
  Level level() const { return basis_.level; }
  const FieldCtx& ctx() const { return *basis_.ctx; }
  const Mat& basis() const { return basis_; }

  bool contains(std::span<const Fe> v) const {
    if (static_cast<int>(v.size()) != ambient()) throw std::invalid_argument("ambient mismatch");
    const FieldCtx& F = ctx();
    std::vector<Fe> w(v.begin(), v.end());
    for (int r = 0; r < basis_.rows; ++r) {
      int p = pivot_col(r);
      Fe f = w[p];
      if (!f) continue;
      for (int c = p; c < basis_.cols; ++c) w[c] = F.sub(w[c], F.mul(f, basis_.at(r, c)));
    }
    for (Fe x : w)
      if (x) return false;
    return true;
  }

  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }

 private:
  int pivot_col(int r) const {
    for (int c = 0; c < basis_.cols; ++c)
      if (basis_.at(r, c)) return c;
    return basis_.cols;
  }

  Mat basis_;
};

inline Subspace rowspace(const Mat& m) { return Subspace::from_span(m); }

inline void check_compatible(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient() || a.level() != b.level() || a.ctx().params() != b.ctx().params())
    throw std::invalid_argument("ambient mismatch");
}

inline Subspace sum_spaces(const Subspace& a, const Subspace& b) {
  check_compatible(a, b);
  Mat stack(a.ctx(), a.level(), a.dim() + b.dim(), a.ambient());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.ambient(); ++c) stack.at(r, c) = a.basis().at(r, c);
  for (int r = 0; r < b.dim(); ++r)
    for (int c = 0; c < b.ambient(); ++c) stack.at(a.dim() + r, c) = b.basis().at(r, c);
  return Subspace::from_span(stack);
}

/// Zassenhaus: RREF of [A|A; B|0]; rows with zero left half carry an
/// intersection basis in their right half.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  check_compatible(a, b);
  const int N = a.ambient();
  Mat z(a.ctx(), a.level(), a.dim() + b.dim(), 2 * N);
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < N; ++c) {
      z.at(r, c) = a.basis().at(r, c);
      z.at(r, N + c) = a.basis().at(r, c);
    }
  for (int r = 0; r < b.dim(); ++r)
    for (int c = 0; c < N; ++c) z.at(a.dim() + r, c) = b.basis().at(r, c);
  Mat rz = rref(z);
  std::vector<std::vector<Fe>> inter;
  for (int r = 0; r < rz.rows; ++r) {
    bool left_zero = true;
    bool right_zero = true;
    for (int c = 0; c < N && left_zero; ++c)
      if (rz.at(r, c)) left_zero = false;
    if (!left_zero) continue;
    std::vector<Fe> v(N);
    for (int c = 0; c < N; ++c) {
      v[c] = rz.at(r, N + c);
      if (v[c]) right_zero = false;
    }
    if (!right_zero) inter.push_back(std::move(v));
  }
  if (inter.empty()) return Subspace::zero(a.ctx(), a.level(), N);
  return Subspace::from_span(Mat::from_rows(a.ctx(), a.level(), inter));
}

inline bool subspace_leq(const Subspace& a, const Subspace& b) {
  check_compatible(a, b);
  for (int r = 0; r < a.dim(); ++r)
    if (!b.contains(a.basis().row(r))) return false;
  return true;
}

/// Right kernel {x : M x^T = 0}, canonical RREF basis.
inline Subspace kernel(const Mat& m) {
  Mat r = rref(m);
  std::vector<int> pivots;
  std::vector<bool> is_pivot(m.cols, false);
  for (int i = 0; i < r.rows; ++i)
    for (int c = 0; c < r.cols; ++c)
      if (r.at(i, c)) {
        pivots.push_back(c);
        is_pivot[c] = true;
        break;
      }
  const FieldCtx& F = *m.ctx;
  std::vector<std::vector<Fe>> rows;
  for (int f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Fe> v(m.cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(r.at(static_cast<int>(i), f));
    rows.push_back(std::move(v));
  }
  if (rows.empty()) return Subspace::zero(*m.ctx, m.level, m.cols);
  return Subspace::from_span(Mat::from_rows(*m.ctx, m.level, rows));
}

/// Any solution of M x = b, if one exists.
inline std::optional<std::vector<Fe>> solve(const Mat& m, std::span<const Fe> b) {
  if (static_cast<int>(b.size()) != m.rows) throw std::invalid_argument("shape mismatch");
  Mat aug(*m.ctx, m.level, m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols) = b[r];
  }
  Mat r = rref(aug);
  std::vector<Fe> x(m.cols, 0);
  for (int i = 0; i < r.rows; ++i) {
    int p = -1;
    for (int c = 0; c <= m.cols; ++c)
      if (r.at(i, c)) {
        p = c;
        break;
      }
    if (p < 0) break;
    if (p == m.cols) return std::nullopt;  // inconsistent row
    x[p] = r.at(i, m.cols);
  }
  return x;
}

/// Number of r-dimensional subspaces of an N-dimensional space over a field
/// with `size` elements.
inline std::uint64_t gaussian_binomial(int N, int r, std::uint64_t size) {
  if (r < 0 || r > N) return 0;
  if (r == 0 || r == N) return 1;
  using u128 = unsigned __int128;
  auto powu = [&](std::uint64_t s, int e) {
    u128 v = 1;
    for (int i = 0; i < e; ++i) {
      v *= s;
      if (v >> 62) throw std::overflow_error("gaussian binomial overflow");
    }
    return v;
  };
  u128 g = 1;
  for (int i = 0; i < r; ++i) {
    g = g * (powu(size, N - i) - 1) / (powu(size, i + 1) - 1);
    if (g >> 64) throw std::overflow_error("gaussian binomial overflow");
  }
  return static_cast<std::uint64_t>(g);
}

/// Deterministic stream of all r-dimensional subspaces of (level)^N in
/// canonical order: RREF profiles ordered by their pivot-column tuple
/// lexicographically, then free entries counting in row-major order (last
/// free position varies fastest). Supports random access, so scans can be
/// partitioned into index ranges.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(const FieldCtx& ctx, Level lv, int ambient, int dim)
      : ctx_(&ctx), lv_(lv), N_(ambient), r_(dim) {
    if (dim < 0 || dim > ambient) throw std::invalid_argument("dimension out of range");
    size_ = level_size(ctx, lv);
    count_ = gaussian_binomial(N_, r_, size_);
  }

  std::uint64_t count() const { return count_; }

  class Cursor {
   public:
    const Subspace& value() const { return current_; }
    std::uint64_t index() const { return index_; }

    void advance() {
      ++index_;
      if (index_ >= owner_->count_) return;
      // odometer on free digits, last position fastest
      int i = static_cast<int>(digits_.size()) - 1;
      while (i >= 0) {
        if (++digits_[i] < owner_->size_) break;
        digits_[i] = 0;
        --i;
      }
      if (i < 0) {
        next_combination(pivots_, owner_->N_);
        reset_free();
      }
      materialize();
    }

   private:
    friend class SubspaceEnumerator;
    const SubspaceEnumerator* owner_ = nullptr;
    std::vector<int> pivots_;
    std::vector<std::pair<int, int>> free_pos_;  // (row, col), row-major
    std::vector<std::uint64_t> digits_;
    std::uint64_t index_ = 0;
    Subspace current_;

    void reset_free() {
      free_pos_.clear();
      std::vector<bool> is_pivot(owner_->N_, false);
      for (int p : pivots_) is_pivot[p] = true;
      for (std::size_t i = 0; i < pivots_.size(); ++i)
        for (int c = pivots_[i] + 1; c < owner_->N_; ++c)
          if (!is_pivot[c]) free_pos_.push_back({static_cast<int>(i), c});
      digits_.assign(free_pos_.size(), 0);
    }

    void materialize() {
      const FieldCtx& F = *owner_->ctx_;
      Mat m(F, owner_->lv_, r_count(), owner_->N_);
      for (std::size_t i = 0; i < pivots_.size(); ++i) m.at(static_cast<int>(i), pivots_[i]) = 1;
      for (std::size_t f = 0; f < free_pos_.size(); ++f) {
        auto [r, c] = free_pos_[f];
        m.at(r, c) = owner_->digit_element(digits_[f]);
      }
      Subspace s;
      s = Subspace::from_span(m);  // already RREF; canonicalization is a no-op
      current_ = std::move(s);
    }

    int r_count() const { return static_cast<int>(pivots_.size()); }
  };

  Cursor begin_at(std::uint64_t idx) const {
    if (idx >= count_) throw std::out_of_range("subspace index");
    Cursor c;
    c.owner_ = this;
    c.index_ = idx;
    c.pivots_.resize(r_);
    for (int i = 0; i < r_; ++i) c.pivots_[i] = i;
    // locate the pivot combination containing idx
    std::uint64_t acc = 0;
    for (;;) {
      c.reset_free();
      using u128 = unsigned __int128;
      u128 block = 1;
      for (std::size_t f = 0; f < c.free_pos_.size(); ++f) block *= size_;
      if (idx < acc + block) {
        std::uint64_t off = idx - acc;
        for (int f = static_cast<int>(c.free_pos_.size()) - 1; f >= 0; --f) {
          c.digits_[f] = off % size_;
          off /= size_;
        }
        c.materialize();
        return c;
      }
      acc += static_cast<std::uint64_t>(block);
      if (!next_combination(c.pivots_, N_)) throw std::logic_error("subspace unrank out of range");
    }
  }

  Subspace at(std::uint64_t idx) const { return begin_at(idx).value(); }

 private:
  static bool next_combination(std::vector<int>& comb, int N) {
    int r = static_cast<int>(comb.size());
    for (int i = r - 1; i >= 0; --i) {
      if (comb[i] < N - (r - i)) {
        ++comb[i];
        for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  Fe digit_element(std::uint64_t v) const {
    if (lv_ == Level::Fq) return ctx_->subfield_elements()[v];
    return static_cast<Fe>(v);
  }

  const FieldCtx* ctx_;
  Level lv_;
  int N_, r_;
  std::uint64_t size_ = 0, count_ = 0;
};

/// Convenience wrapper with a budget check.
inline SubspaceEnumerator enumerate_subspaces(const FieldCtx& ctx, Level lv, int ambient, int dim,
                                              const Exec& ex = {}) {
  SubspaceEnumerator e(ctx, lv, ambient, dim);
  check_budget(e.count(), ex);
  return e;
}

}  // namespace rmc
