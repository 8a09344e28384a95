#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/exec.hpp"

namespace rmc {

/// A field element of F_{p^{hm}}: the base-p digit packing of its coordinate
/// vector over the polynomial basis of the full field. 0 is the zero element,
/// 1 the multiplicative identity.
using Fe = std::uint32_t;

/// Parameters of the tower F_p < F_q < F_{q^m} with q = p^h.
struct FieldParams {
  std::uint32_t p = 2;
  std::uint32_t h = 1;
  std::uint32_t m = 1;
  bool operator==(const FieldParams&) const = default;
  auto operator<=>(const FieldParams&) const = default;
};

/// Arithmetic context for the tower F_p < F_q < F_{q^m}.
///
/// One flat field F_{p^{hm}} with log/antilog tables serves both tower
/// levels; the subfield F_q is identified as the fixed set of x -> x^q.
/// Construction is deterministic:
///   - modulus: the lexicographically smallest irreducible monic polynomial
///     of degree hm over F_p (coefficient tuple read as a base-p integer),
///   - g: the smallest primitive element in index order,
///   - F_q-basis of F_{q^m}: B = (1, g, ..., g^{m-1}).
/// Immutable after construction and safe to share across threads; all
/// operations are pure.
class FieldCtx {
 public:
  explicit FieldCtx(FieldParams params, std::uint64_t table_budget = std::uint64_t(1) << 22)
      : par_(params) {
    if (par_.p < 2 || !is_prime_u32(par_.p)) throw std::invalid_argument("p must be prime");
    if (par_.h < 1 || par_.m < 1) throw std::invalid_argument("h and m must be positive");
    d_ = par_.h * par_.m;
    order_ = checked_pow(par_.p, d_, table_budget);
    q_ = 1;
    for (std::uint32_t i = 0; i < par_.h; ++i) q_ *= par_.p;

    find_modulus();
    find_generator();
    fill_tables();
    find_subfield();
    build_expansion();
  }

  // --- parameters -----------------------------------------------------------

  const FieldParams& params() const { return par_; }
  std::uint32_t p() const { return par_.p; }
  std::uint32_t h() const { return par_.h; }
  std::uint32_t m() const { return par_.m; }
  std::uint64_t q() const { return q_; }            // subfield size
  std::uint64_t order() const { return order_; }    // full field size p^{hm}
  std::uint32_t ext_degree() const { return d_; }   // hm
  Fe generator() const { return gen_; }
  /// Modulus coefficients, low to high, length hm+1, leading coefficient 1.
  const std::vector<int>& modulus() const { return modulus_; }

  // --- arithmetic -----------------------------------------------------------

  Fe add(Fe a, Fe b) const {
    if (par_.p == 2) return a ^ b;
    Fe r = 0;
    std::uint64_t pw = 1;
    while (a || b) {
      std::uint32_t da = a % par_.p, db = b % par_.p;
      r += static_cast<Fe>(((da + db) % par_.p) * pw);
      a /= par_.p;
      b /= par_.p;
      pw *= par_.p;
    }
    return r;
  }

  Fe neg(Fe a) const {
    if (par_.p == 2) return a;
    Fe r = 0;
    std::uint64_t pw = 1;
    while (a) {
      std::uint32_t da = a % par_.p;
      r += static_cast<Fe>(((par_.p - da) % par_.p) * pw);
      a /= par_.p;
      pw *= par_.p;
    }
    return r;
  }

  Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }

  Fe mul(Fe a, Fe b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t e = log_[a] + log_[b];
    if (e >= order_ - 1) e -= order_ - 1;
    return exp_[e];
  }

  Fe inv(Fe a) const {
    if (a == 0) throw std::invalid_argument("inversion of zero");
    std::uint64_t e = (order_ - 1 - log_[a]) % (order_ - 1);
    return exp_[e];
  }

  Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

  Fe pow(Fe a, std::int64_t e) const {
    if (a == 0) {
      if (e == 0) return 1;
      if (e < 0) throw std::invalid_argument("negative power of zero");
      return 0;
    }
    std::int64_t r = e % static_cast<std::int64_t>(order_ - 1);
    if (r < 0) r += order_ - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * static_cast<std::uint64_t>(r)) % (order_ - 1)];
  }

  /// a^{q^i}; frobenius(a, m) is the identity on F_{q^m}.
  Fe frobenius(Fe a, std::uint32_t i) const {
    if (a == 0) return 0;
    if (i == 1 && !frob_q_.empty()) return frob_q_[a];
    std::uint64_t e = 1;
    for (std::uint32_t t = 0; t < i; ++t) e = (e * (q_ % (order_ - 1))) % (order_ - 1);
    return exp_[(log_[a] * e) % (order_ - 1)];
  }

  /// Tr_{q^m/q}(a) = sum of a^{q^i}, i = 0..m-1; the result lies in F_q.
  Fe rel_trace(Fe a) const {
    if (!trace_.empty()) return trace_[a];
    Fe s = 0;
    for (std::uint32_t i = 0; i < par_.m; ++i) s = add(s, frobenius(a, i));
    return s;
  }

  bool is_in_subfield(Fe a) const {
    if (!in_subfield_.empty()) return in_subfield_[a];
    return frobenius(a, 1) == a;
  }

  /// Subfield elements in increasing index order; size q.
  const std::vector<Fe>& subfield_elements() const { return subfield_; }

  /// Position of a subfield element in subfield_elements().
  std::uint32_t subfield_index(Fe a) const {
    auto it = std::lower_bound(subfield_.begin(), subfield_.end(), a);
    if (it == subfield_.end() || *it != a) throw std::invalid_argument("element not in subfield");
    return static_cast<std::uint32_t>(it - subfield_.begin());
  }

  /// The fixed F_q-basis B = (1, g, ..., g^{m-1}) of F_{q^m}.
  const std::vector<Fe>& ext_basis() const { return ext_basis_; }

  // --- expansion over the subfield ------------------------------------------

  /// Coordinates of a over B, a vector of m subfield elements.
  std::vector<Fe> expand(Fe a) const {
    std::vector<Fe> out(par_.m);
    if (!expand_.empty()) {
      const Fe* row = expand_.data() + static_cast<std::size_t>(a) * par_.m;
      std::copy(row, row + par_.m, out.begin());
      return out;
    }
    expand_into(a, out.data());
    return out;
  }

  /// For q = 2 only: the m expansion coordinates of a packed into the low m
  /// bits (bit j = coordinate of B[j]).
  std::uint32_t expand_bits(Fe a) const {
    if (expand_bits_.empty()) throw std::logic_error("packed expansion requires q = 2");
    return expand_bits_[a];
  }

  bool has_packed_expansion() const { return !expand_bits_.empty(); }

  /// Inverse of expand: contract(expand(a)) = a. Entries must lie in F_q.
  Fe contract(std::span<const Fe> coords) const {
    if (coords.size() != par_.m) throw std::invalid_argument("contract expects m coordinates");
    std::vector<int> y(d_, 0);
    for (std::uint32_t j = 0; j < par_.m; ++j) {
      Fe c = coords[j];
      if (!is_in_subfield(c)) throw std::invalid_argument("contract coordinate not in subfield");
      const int* sc = scoords_.data() + static_cast<std::size_t>(subfield_index(c)) * par_.h;
      for (std::uint32_t i = 0; i < par_.h; ++i) y[j * par_.h + i] = sc[i];
    }
    // digits = E * y (mod p)
    Fe a = 0;
    std::uint64_t pw = 1;
    for (std::uint32_t r = 0; r < d_; ++r) {
      int acc = 0;
      for (std::uint32_t c = 0; c < d_; ++c) acc += emat_[r * d_ + c] * y[c];
      a += static_cast<Fe>((acc % static_cast<int>(par_.p)) * pw);
      pw *= par_.p;
    }
    return a;
  }

  // --- normal and dual bases -------------------------------------------------

  /// The smallest alpha (in index order) such that alpha, alpha^q, ...,
  /// alpha^{q^{m-1}} is an F_q-basis of F_{q^m}.
  Fe normal_basis_element() const {
    for (std::uint64_t a = 1; a < order_; ++a) {
      std::vector<std::vector<Fe>> rows(par_.m);
      for (std::uint32_t i = 0; i < par_.m; ++i) rows[i] = expand(frobenius(static_cast<Fe>(a), i));
      if (subfield_rank(rows) == par_.m) return static_cast<Fe>(a);
    }
    throw std::logic_error("no normal element found");  // cannot happen for a valid field
  }

  /// Dual basis with respect to the relative trace: Tr(basis[i]*out[j]) is 1
  /// if i = j and 0 otherwise. Input must be F_q-linearly independent.
  std::vector<Fe> dual_basis(std::span<const Fe> basis) const {
    const std::uint32_t n = par_.m;
    if (basis.size() != n) throw std::invalid_argument("dual_basis expects m elements");
    // Gram matrix of the trace form; entries lie in F_q.
    std::vector<Fe> g(static_cast<std::size_t>(n) * n), id(static_cast<std::size_t>(n) * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      id[i * n + i] = 1;
      for (std::uint32_t j = 0; j < n; ++j) g[i * n + j] = rel_trace(mul(basis[i], basis[j]));
    }
    // Gauss-Jordan inversion of g.
    for (std::uint32_t col = 0; col < n; ++col) {
      std::uint32_t piv = col;
      while (piv < n && g[piv * n + col] == 0) ++piv;
      if (piv == n) throw std::invalid_argument("dual_basis input is F_q-dependent");
      if (piv != col)
        for (std::uint32_t c = 0; c < n; ++c) {
          std::swap(g[piv * n + c], g[col * n + c]);
          std::swap(id[piv * n + c], id[col * n + c]);
        }
      Fe s = inv(g[col * n + col]);
      for (std::uint32_t c = 0; c < n; ++c) {
        g[col * n + c] = mul(g[col * n + c], s);
        id[col * n + c] = mul(id[col * n + c], s);
      }
      for (std::uint32_t r = 0; r < n; ++r) {
        if (r == col || g[r * n + col] == 0) continue;
        Fe f = g[r * n + col];
        for (std::uint32_t c = 0; c < n; ++c) {
          g[r * n + c] = sub(g[r * n + c], mul(f, g[col * n + c]));
          id[r * n + c] = sub(id[r * n + c], mul(f, id[col * n + c]));
        }
      }
    }
    std::vector<Fe> out(n, 0);
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint32_t l = 0; l < n; ++l) out[j] = add(out[j], mul(id[l * n + j], basis[l]));
    return out;
  }

  // --- text encoding ----------------------------------------------------------

  /// "0" for zero, "g^k" otherwise.
  std::string to_string(Fe a) const {
    if (a == 0) return "0";
    return "g^" + std::to_string(log_[a]);
  }

  Fe parse(std::string_view s) const {
    if (s == "0") return 0;
    if (s.size() < 3 || s[0] != 'g' || s[1] != '^')
      throw std::invalid_argument("bad element literal: " + std::string(s));
    std::uint64_t k = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad element literal: " + std::string(s));
      k = k * 10 + static_cast<std::uint64_t>(s[i] - '0');
      if (k > (std::uint64_t(1) << 60)) throw std::invalid_argument("element exponent out of range");
    }
    return exp_[k % (order_ - 1)];
  }

  /// Process-lifetime cache of contexts so JSON loaders and the CLI can hold
  /// stable references.
  static const FieldCtx& shared(const FieldParams& params) {
    static std::mutex mu;
    static std::map<FieldParams, std::unique_ptr<FieldCtx>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(params);
    if (it == cache.end()) it = cache.emplace(params, std::make_unique<FieldCtx>(params)).first;
    return *it->second;
  }

 private:
  using Poly = std::vector<int>;  // coefficients, low to high, no leading zeros

  static bool is_prime_u32(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint32_t d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  }

  static std::uint64_t checked_pow(std::uint32_t base, std::uint32_t e, std::uint64_t budget) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      if (r > budget / base) throw BudgetExceeded(~std::uint64_t(0), budget);
      r *= base;
    }
    if (r > budget) throw BudgetExceeded(r, budget);
    return r;
  }

  // polynomial helpers over F_p -------------------------------------------------

  static void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }

  Poly poly_mod(Poly a, const Poly& f) const {
    const int p = static_cast<int>(par_.p);
    while (a.size() >= f.size()) {
      int lead = a.back();
      if (lead != 0) {
        std::size_t shift = a.size() - f.size();
        // f is monic
        for (std::size_t i = 0; i < f.size(); ++i) {
          a[shift + i] = ((a[shift + i] - lead * f[i]) % p + p * p) % p;
        }
      }
      a.pop_back();
      trim(a);
      if (a.size() < f.size()) break;
    }
    trim(a);
    return a;
  }

  Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f) const {
    const int p = static_cast<int>(par_.p);
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    trim(c);
    return poly_mod(std::move(c), f);
  }

  Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f) const {
    Poly r = {1};
    while (e) {
      if (e & 1) r = poly_mulmod(r, base, f);
      base = poly_mulmod(base, base, f);
      e >>= 1;
    }
    return r;
  }

  Poly poly_gcd(Poly a, Poly b) const {
    const int p = static_cast<int>(par_.p);
    while (!b.empty()) {
      // normalize b to monic for poly_mod
      int lead = b.back();
      if (lead != 1) {
        int il = 1;
        while ((il * lead) % p != 1) ++il;
        for (auto& c : b) c = (c * il) % p;
      }
      Poly r = poly_mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  bool poly_irreducible(const Poly& f) const {
    // Rabin's test: x^{p^d} = x mod f, and gcd(x^{p^{d/l}} - x, f) = 1 for
    // every prime l dividing d.
    const std::uint32_t deg = d_;
    std::vector<std::uint32_t> prime_divs;
    std::uint32_t t = deg;
    for (std::uint32_t l = 2; l * l <= t; ++l)
      if (t % l == 0) {
        prime_divs.push_back(l);
        while (t % l == 0) t /= l;
      }
    if (t > 1) prime_divs.push_back(t);

    Poly x = {0, 1};
    Poly r = poly_mod(x, f);
    std::vector<Poly> frob_steps(deg + 1);
    frob_steps[0] = r;
    for (std::uint32_t j = 1; j <= deg; ++j) {
      r = poly_powmod(r, par_.p, f);
      frob_steps[j] = r;
    }
    Poly xm = poly_mod(x, f);
    if (frob_steps[deg] != xm) return false;
    for (std::uint32_t l : prime_divs) {
      Poly diff = frob_steps[deg / l];
      const int p = static_cast<int>(par_.p);
      if (diff.size() < 2) diff.resize(2, 0);
      diff[1] = ((diff[1] - 1) % p + p) % p;
      trim(diff);
      Poly g = poly_gcd(f, diff);
      if (!(g.size() == 1)) return false;
    }
    return true;
  }

  void find_modulus() {
    if (d_ == 1) {
      modulus_ = {0, 1};  // x itself; quotient is F_p
      return;
    }
    for (std::uint64_t t = 0;; ++t) {
      Poly f(d_ + 1, 0);
      f[d_] = 1;
      std::uint64_t v = t;
      for (std::uint32_t i = 0; i < d_ && v; ++i) {
        f[i] = static_cast<int>(v % par_.p);
        v /= par_.p;
      }
      if (v) throw std::logic_error("no irreducible polynomial found");
      if (poly_irreducible(f)) {
        modulus_ = std::move(f);
        return;
      }
    }
  }

  std::vector<int> digits(Fe a) const {
    std::vector<int> d(d_, 0);
    for (std::uint32_t i = 0; i < d_ && a; ++i) {
      d[i] = static_cast<int>(a % par_.p);
      a /= par_.p;
    }
    return d;
  }

  Fe pack_digits(std::span<const int> dg) const {
    Fe a = 0;
    std::uint64_t pw = 1;
    for (std::uint32_t i = 0; i < d_; ++i) {
      a += static_cast<Fe>((dg[i] % static_cast<int>(par_.p)) * pw);
      pw *= par_.p;
    }
    return a;
  }

  // index-domain multiplication before the log tables exist
  Fe mul_slow(Fe a, Fe b) const {
    std::vector<int> da = digits(a), db = digits(b);
    Poly pa(da.begin(), da.end()), pb(db.begin(), db.end());
    trim(pa);
    trim(pb);
    Poly c = poly_mulmod(pa, pb, modulus_);
    c.resize(d_, 0);
    return pack_digits(c);
  }

  Fe pow_slow(Fe a, std::uint64_t e) const {
    Fe r = 1;
    while (e) {
      if (e & 1) r = mul_slow(r, a);
      a = mul_slow(a, a);
      e >>= 1;
    }
    return r;
  }

  void find_generator() {
    std::uint64_t group = order_ - 1;
    std::vector<std::uint64_t> prime_divs;
    std::uint64_t t = group;
    for (std::uint64_t l = 2; l * l <= t; ++l)
      if (t % l == 0) {
        prime_divs.push_back(l);
        while (t % l == 0) t /= l;
      }
    if (t > 1) prime_divs.push_back(t);
    for (std::uint64_t a = 1; a < order_; ++a) {
      bool primitive = true;
      for (std::uint64_t l : prime_divs)
        if (pow_slow(static_cast<Fe>(a), group / l) == 1) {
          primitive = false;
          break;
        }
      if (primitive) {
        gen_ = static_cast<Fe>(a);
        return;
      }
    }
    throw std::logic_error("no primitive element found");
  }

  void fill_tables() {
    exp_.resize(order_ - 1);
    log_.assign(order_, 0);
    Fe cur = 1;
    for (std::uint64_t i = 0; i < order_ - 1; ++i) {
      exp_[i] = cur;
      log_[cur] = static_cast<std::uint32_t>(i);
      cur = mul_slow(cur, gen_);
    }
    if (cur != 1) throw std::logic_error("generator order mismatch");
  }

  void find_subfield() {
    const bool small = order_ <= (std::uint64_t(1) << 16);
    if (small) {
      frob_q_.resize(order_);
      trace_.resize(order_);
      in_subfield_.resize(order_);
    }
    std::uint64_t qe = q_ % (order_ - 1);
    for (std::uint64_t a = 0; a < order_; ++a) {
      Fe fa;
      if (a == 0)
        fa = 0;
      else
        fa = exp_[(log_[a] * qe) % (order_ - 1)];
      bool fixed = (fa == static_cast<Fe>(a));
      if (small) {
        frob_q_[a] = fa;
        in_subfield_[a] = fixed;
      }
      if (fixed) subfield_.push_back(static_cast<Fe>(a));
      if (small) {
        Fe s = 0, cur = static_cast<Fe>(a);
        for (std::uint32_t i = 0; i < par_.m; ++i) {
          s = add(s, cur);
          if (cur) cur = exp_[(log_[cur] * qe) % (order_ - 1)];
        }
        trace_[a] = s;
      }
    }
    if (subfield_.size() != q_) throw std::logic_error("subfield size mismatch");
  }

  void expand_into(Fe a, Fe* out) const {
    std::vector<int> dg = digits(a);
    for (std::uint32_t j = 0; j < par_.m; ++j) {
      Fe coord = 0;
      for (std::uint32_t i = 0; i < par_.h; ++i) {
        int y = 0;
        for (std::uint32_t c = 0; c < d_; ++c) y += einv_[(j * par_.h + i) * d_ + c] * dg[c];
        y %= static_cast<int>(par_.p);
        if (y) coord = add(coord, mul(static_cast<Fe>(y), s_pows_[i]));
      }
      out[j] = coord;
    }
  }

  void build_expansion() {
    // s generates F_q^*; (1, s, ..., s^{h-1}) is an F_p-basis of F_q and
    // (1, g, ..., g^{m-1}) an F_q-basis of F_{q^m}, so the products form an
    // F_p-basis of the full field.
    Fe s = (q_ == order_) ? gen_ : exp_[(order_ - 1) / (q_ - 1) % (order_ - 1)];
    if (q_ == 2) s = 1;
    s_pows_.resize(par_.h);
    s_pows_[0] = 1;
    for (std::uint32_t i = 1; i < par_.h; ++i) s_pows_[i] = mul(s_pows_[i - 1], s);
    ext_basis_.resize(par_.m);
    ext_basis_[0] = 1;
    for (std::uint32_t j = 1; j < par_.m; ++j) ext_basis_[j] = mul(ext_basis_[j - 1], gen_);

    emat_.assign(static_cast<std::size_t>(d_) * d_, 0);
    for (std::uint32_t j = 0; j < par_.m; ++j)
      for (std::uint32_t i = 0; i < par_.h; ++i) {
        std::vector<int> dg = digits(mul(ext_basis_[j], s_pows_[i]));
        for (std::uint32_t r = 0; r < d_; ++r) emat_[r * d_ + (j * par_.h + i)] = dg[r];
      }
    einv_ = invert_mod_p(emat_);

    // coordinates of each subfield element over (1, s, ..., s^{h-1})
    scoords_.assign(static_cast<std::size_t>(q_) * par_.h, 0);
    for (std::uint32_t idx = 0; idx < q_; ++idx) {
      std::vector<int> dg = digits(subfield_[idx]);
      for (std::uint32_t i = 0; i < par_.h; ++i) {
        int y = 0;
        for (std::uint32_t c = 0; c < d_; ++c) y += einv_[(0 * par_.h + i) * d_ + c] * dg[c];
        scoords_[static_cast<std::size_t>(idx) * par_.h + i] = ((y % static_cast<int>(par_.p)) + par_.p) % par_.p;
      }
    }

    if (order_ <= (std::uint64_t(1) << 16)) {
      expand_.resize(static_cast<std::size_t>(order_) * par_.m);
      for (std::uint64_t a = 0; a < order_; ++a) expand_into(static_cast<Fe>(a), expand_.data() + a * par_.m);
      if (q_ == 2 && par_.m <= 32) {
        expand_bits_.resize(order_);
        for (std::uint64_t a = 0; a < order_; ++a) {
          std::uint32_t w = 0;
          for (std::uint32_t j = 0; j < par_.m; ++j)
            if (expand_[a * par_.m + j]) w |= (1u << j);
          expand_bits_[a] = w;
        }
      }
    }
  }

  std::vector<int> invert_mod_p(const std::vector<int>& a) const {
    const int p = static_cast<int>(par_.p);
    const std::uint32_t n = d_;
    std::vector<int> m(a), id(static_cast<std::size_t>(n) * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) id[i * n + i] = 1;
    for (std::uint32_t col = 0; col < n; ++col) {
      std::uint32_t piv = col;
      while (piv < n && m[piv * n + col] % p == 0) ++piv;
      if (piv == n) throw std::logic_error("expansion basis is degenerate");
      if (piv != col)
        for (std::uint32_t c = 0; c < n; ++c) {
          std::swap(m[piv * n + c], m[col * n + c]);
          std::swap(id[piv * n + c], id[col * n + c]);
        }
      int il = 1;
      while ((il * m[col * n + col]) % p != 1) ++il;
      for (std::uint32_t c = 0; c < n; ++c) {
        m[col * n + c] = (m[col * n + c] * il) % p;
        id[col * n + c] = (id[col * n + c] * il) % p;
      }
      for (std::uint32_t r = 0; r < n; ++r) {
        if (r == col) continue;
        int f = m[r * n + col] % p;
        if (!f) continue;
        for (std::uint32_t c = 0; c < n; ++c) {
          m[r * n + c] = ((m[r * n + c] - f * m[col * n + c]) % p + p * p) % p;
          id[r * n + c] = ((id[r * n + c] - f * id[col * n + c]) % p + p * p) % p;
        }
      }
    }
    return id;
  }

  /// rank over F_q of rows of expansion coordinates (vectors of subfield
  /// elements); local helper so fields stays below linalg.
  std::uint32_t subfield_rank(std::vector<std::vector<Fe>> rows) const {
    std::uint32_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
      std::size_t piv = rank;
      while (piv < rows.size() && rows[piv][col] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[rank], rows[piv]);
      Fe s = inv(rows[rank][col]);
      for (std::size_t c = col; c < cols; ++c) rows[rank][c] = mul(rows[rank][c], s);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == rank || rows[r][col] == 0) continue;
        Fe f = rows[r][col];
        for (std::size_t c = col; c < cols; ++c) rows[r][c] = sub(rows[r][c], mul(f, rows[rank][c]));
      }
      ++rank;
    }
    return rank;
  }

  FieldParams par_;
  std::uint32_t d_ = 1;
  std::uint64_t order_ = 2, q_ = 2;
  std::vector<int> modulus_;
  Fe gen_ = 1;
  std::vector<Fe> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Fe> subfield_;
  std::vector<bool> in_subfield_;
  std::vector<Fe> frob_q_, trace_;
  std::vector<Fe> ext_basis_, s_pows_;
  std::vector<int> emat_, einv_;
  std::vector<int> scoords_;
  std::vector<Fe> expand_;
  std::vector<std::uint32_t> expand_bits_;
};

/// Convenience constructor mirroring the tower parameters.
inline const FieldCtx& make_field(FieldParams params) { return FieldCtx::shared(params); }

}  // namespace rmc
