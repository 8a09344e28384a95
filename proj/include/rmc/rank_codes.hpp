#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rmc/exec.hpp"
#include "rmc/fields.hpp"
#include "rmc/linalg.hpp"

namespace rmc {

/// The tuple (d_1, ..., d_k) of generalized rank weights.
struct WeightProfile {
  std::vector<int> d;
  bool operator==(const WeightProfile&) const = default;
};

/// True iff the profile satisfies the structural constraints every
/// [n,k]_{q^m/q} code obeys: strict monotonicity, 1 <= d_1, d_k <= n, the
/// Singleton-type bound on d_1 and the per-index upper bounds
/// d_s <= min{n-k+s, sm, m(n-k)/n + m(s-1) + 1}.
inline bool profile_within_bounds(const WeightProfile& w, int n, int k, int m) {
  if (static_cast<int>(w.d.size()) != k || k < 1) return false;
  if (w.d.front() < 1 || w.d.back() > n) return false;
  for (int i = 1; i < k; ++i)
    if (w.d[i] <= w.d[i - 1]) return false;
  const std::int64_t d1 = w.d[0];
  std::int64_t singleton = std::min<std::int64_t>(std::int64_t(m) * (n - d1 + 1), std::int64_t(n) * (m - d1 + 1));
  if (std::int64_t(m) * k > singleton) return false;
  for (int s = 1; s <= k; ++s) {
    std::int64_t ds = w.d[s - 1];
    if (ds > n - k + s) return false;
    if (ds > std::int64_t(s) * m) return false;
    // ds <= m(n-k)/n + m(s-1) + 1, kept exact by clearing the denominator
    if (ds * n > std::int64_t(m) * (n - k) + (std::int64_t(m) * (s - 1) + 1) * n) return false;
  }
  return true;
}

inline void validate_profile(const WeightProfile& w, int n, int k, int m) {
  if (!profile_within_bounds(w, n, k, m)) throw std::logic_error("weight profile violates structural bounds");
}

/// An [n,k] rank-metric code over F_{q^m}/F_q, held by a generator matrix
/// with F_{q^m}-independent rows.
class RankCode {
 public:
  RankCode(const FieldCtx& ctx, Mat generator) : ctx_(&ctx), gen_(std::move(generator)) {
    if (gen_.level != Level::Fqm) throw std::invalid_argument("generator must be at the extension level");
    if (gen_.rows < 1 || gen_.rows > gen_.cols) throw std::invalid_argument("need 1 <= k <= n");
    if (rank(gen_) != gen_.rows) throw std::invalid_argument("generator rows are dependent");
  }

  int n() const { return gen_.cols; }
  int k() const { return gen_.rows; }
  const FieldCtx& ctx() const { return *ctx_; }
  const Mat& generator() const { return gen_; }

  std::vector<Fe> codeword(std::span<const Fe> message) const {
    if (static_cast<int>(message.size()) != k()) throw std::invalid_argument("message length");
    std::vector<Fe> c(n(), 0);
    for (int i = 0; i < k(); ++i) {
      Fe u = message[i];
      if (!u) continue;
      for (int j = 0; j < n(); ++j) c[j] = ctx_->add(c[j], ctx_->mul(u, gen_.at(i, j)));
    }
    return c;
  }

 private:
  const FieldCtx* ctx_;
  Mat gen_;
};

namespace detail {

/// Number of projective points of F_{q^m}^k, i.e. scan representatives
/// (one codeword per 1-dimensional subspace of the message space).
inline std::uint64_t projective_count(std::uint64_t fsz, int k) {
  using u128 = unsigned __int128;
  u128 total = 0, pw = 1;
  for (int t = 0; t < k; ++t) {
    total += pw;
    pw *= fsz;
    if (total >> 64 || pw >> 64) throw std::overflow_error("projective count overflow");
  }
  return static_cast<std::uint64_t>(total);
}

/// idx-th canonical projective message: first nonzero coordinate equals 1.
/// Representatives are ordered by the position of the leading 1, then by the
/// remaining coordinates read as a base-(q^m) number (most significant
/// first).
inline void projective_message(std::uint64_t idx, std::uint64_t fsz, int k, std::span<Fe> out) {
  std::fill(out.begin(), out.end(), 0);
  std::uint64_t seg = 1;
  for (int i = 0; i < k - 1; ++i) seg *= fsz;  // fsz^{k-1}
  int t = 0;
  while (idx >= seg) {
    idx -= seg;
    seg /= fsz;
    ++t;
  }
  out[t] = 1;
  for (int j = k - 1; j > t; --j) {
    out[j] = static_cast<Fe>(idx % fsz);
    idx /= fsz;
  }
}

}  // namespace detail

/// dim_Fq of the span of the entries of v, computed as the rank of the
/// m x n expansion matrix over F_q.
inline int rank_weight(const FieldCtx& ctx, std::span<const Fe> v) {
  const int n = static_cast<int>(v.size());
  const int m = static_cast<int>(ctx.m());
  Mat e(ctx, Level::Fq, m, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Fe> col = ctx.expand(v[j]);
    for (int i = 0; i < m; ++i) e.at(i, j) = col[i];
  }
  return rank(e);
}

/// Rank support: the rowspace in F_q^n of the expansion matrix of v. Its
/// dimension equals rank_weight(v).
inline Subspace rank_support(const FieldCtx& ctx, std::span<const Fe> v) {
  const int n = static_cast<int>(v.size());
  const int m = static_cast<int>(ctx.m());
  Mat e(ctx, Level::Fq, m, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Fe> col = ctx.expand(v[j]);
    for (int i = 0; i < m; ++i) e.at(i, j) = col[i];
  }
  return rowspace(e);
}

/// Minimum rank distance, by scanning one codeword per projective point.
inline int min_distance(const RankCode& c, const Exec& ex = {}) {
  const FieldCtx& F = c.ctx();
  const std::uint64_t reps = detail::projective_count(F.order(), c.k());
  check_budget(reps, ex);
  struct R {
    int best = 1 << 30;
  };
  R res = scan_reduce<R>(
      reps, ex, R{},
      [&](std::uint64_t b, std::uint64_t e) {
        R local;
        std::vector<Fe> msg(c.k());
        for (std::uint64_t i = b; i < e; ++i) {
          detail::projective_message(i, F.order(), c.k(), msg);
          std::vector<Fe> w = c.codeword(msg);
          local.best = std::min(local.best, rank_weight(F, w));
        }
        return local;
      },
      [](R a, R b) {
        a.best = std::min(a.best, b.best);
        return a;
      });
  return res.best;
}

/// Generalized rank weights through the lattice of Galois closed subspaces.
/// Galois closed subspaces of F_{q^m}^n are exactly the F_{q^m}-spans of
/// F_q-rational subspaces of F_q^n, so the oracle enumerates the rational
/// lattice. Intended as the independent reference algorithm at small sizes.
inline WeightProfile galois_weight_profile(const RankCode& c, const Exec& ex = {}) {
  const FieldCtx& F = c.ctx();
  const int n = c.n(), k = c.k();
  std::uint64_t total = 0;
  for (int a = 1; a <= n; ++a) total += gaussian_binomial(n, a, F.q());
  check_budget(total, ex);

  std::vector<int> best(n + 1, 0);  // best[a] = max dim(A cap C) over rational A of dim a
  for (int a = 1; a <= n; ++a) {
    SubspaceEnumerator en(F, Level::Fq, n, a);
    struct R {
      int best = 0;
    };
    R res = scan_reduce<R>(
        en.count(), ex, R{},
        [&](std::uint64_t b, std::uint64_t e) {
          R local;
          auto cur = en.begin_at(b);
          Mat stack(F, Level::Fqm, a + k, n);
          for (std::uint64_t i = b; i < e; ++i, cur.advance()) {
            const Mat& ab = cur.value().basis();
            for (int r = 0; r < a; ++r)
              for (int col = 0; col < n; ++col) stack.at(r, col) = ab.at(r, col);
            for (int r = 0; r < k; ++r)
              for (int col = 0; col < n; ++col) stack.at(a + r, col) = c.generator().at(r, col);
            int inter = a + k - rank(stack);
            local.best = std::max(local.best, inter);
          }
          return local;
        },
        [](R x, R y) {
          x.best = std::max(x.best, y.best);
          return x;
        });
    best[a] = res.best;
  }

  WeightProfile w;
  w.d.resize(k);
  for (int j = 1; j <= k; ++j) {
    int dj = n;
    for (int a = 1; a <= n; ++a)
      if (best[a] >= j) {
        dj = a;
        break;
      }
    w.d[j - 1] = dj;
  }
  validate_profile(w, n, k, static_cast<int>(F.m()));
  return w;
}

inline int generalized_weights_galois(const RankCode& c, int j, const Exec& ex = {}) {
  if (j < 1 || j > c.k()) throw std::invalid_argument("weight index out of range");
  return galois_weight_profile(c, ex).d[j - 1];
}

/// Dual code: the kernel of x -> G x^T, so u v^T = 0 for every pair.
inline RankCode dual_code(const RankCode& c) {
  Subspace ker = kernel(c.generator());
  return RankCode(c.ctx(), ker.basis());
}

/// Singleton-type equality test: mk = min{m(n-d+1), n(m-d+1)}.
inline bool is_MRD(const RankCode& c, const Exec& ex = {}) {
  const std::int64_t m = c.ctx().m(), n = c.n(), k = c.k();
  const std::int64_t d = min_distance(c, ex);
  return m * k == std::min(m * (n - d + 1), n * (m - d + 1));
}

/// Nondegeneracy: the n columns of G are F_q-independent once expanded into
/// F_q^{km}. Cross-validated against d_k = n by the oracle in the test suite.
inline bool is_nondegenerate(const RankCode& c) {
  const FieldCtx& F = c.ctx();
  const int n = c.n(), k = c.k(), m = static_cast<int>(F.m());
  Mat flat(F, Level::Fq, n, k * m);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i) {
      std::vector<Fe> coords = F.expand(c.generator().at(i, j));
      for (int t = 0; t < m; ++t) flat.at(j, i * m + t) = coords[t];
    }
  return rank(flat) == n;
}

struct MinimalityReport {
  bool minimal = true;
  /// A violating pair (u, v): non-proportional codewords with
  /// supp(u) contained in supp(v). Present iff minimal is false.
  std::optional<std::pair<std::vector<Fe>, std::vector<Fe>>> witness;
  std::uint64_t scanned = 0;
};

/// Definition-level minimality scan over projective codeword representatives.
inline MinimalityReport is_minimal_direct(const RankCode& c, const Exec& ex = {}) {
  const FieldCtx& F = c.ctx();
  const std::uint64_t reps = detail::projective_count(F.order(), c.k());
  check_budget(reps, ex);
  if (reps > (std::uint64_t(1) << 32)) throw BudgetExceeded(reps, ex.budget);
  check_budget(reps * reps, ex);

  std::vector<std::vector<Fe>> words(reps);
  std::vector<Subspace> supports(reps);
  std::vector<int> weights(reps);
  {
    std::vector<Fe> msg(c.k());
    for (std::uint64_t i = 0; i < reps; ++i) {
      detail::projective_message(i, F.order(), c.k(), msg);
      words[i] = c.codeword(msg);
      supports[i] = rank_support(F, words[i]);
      weights[i] = supports[i].dim();
    }
  }

  struct R {
    std::uint64_t hit_i = ~std::uint64_t(0), hit_j = 0;
  };
  R res = scan_reduce<R>(
      reps, ex, R{},
      [&](std::uint64_t b, std::uint64_t e) {
        R local;
        for (std::uint64_t i = b; i < e && local.hit_i == ~std::uint64_t(0); ++i) {
          for (std::uint64_t j = 0; j < reps; ++j) {
            if (i == j) continue;
            if (weights[i] > weights[j]) continue;
            if (subspace_leq(supports[i], supports[j])) {
              local.hit_i = i;
              local.hit_j = j;
              break;
            }
          }
        }
        return local;
      },
      [](R a, R b) { return a.hit_i <= b.hit_i ? a : b; });

  MinimalityReport rep;
  rep.scanned = reps;
  if (res.hit_i != ~std::uint64_t(0)) {
    rep.minimal = false;
    rep.witness = {words[res.hit_i], words[res.hit_j]};
  }
  return rep;
}

/// Image of the code under the rank isometry x -> xA, A in GL(n, q).
inline RankCode apply_isometry(const RankCode& c, const Mat& a) {
  if (a.rows != c.n() || a.cols != c.n()) throw std::invalid_argument("isometry shape mismatch");
  Mat aq = a.level == Level::Fq ? a : a.at_level(Level::Fq);  // entries must lie in F_q
  if (rank(aq) != a.rows) throw std::invalid_argument("singular isometry matrix");
  return RankCode(c.ctx(), mat_mul(c.generator(), aq));
}

}  // namespace rmc
