#pragma once

// Arithmetic in the tower F_p ⊂ F_q = F_{p^m} ⊂ F_{q^n}.
//
// Elements are encoded as integers: the coefficient vector over F_q (constant
// term first), each coefficient itself a base-p digit vector over F_p, read as
// one little-endian mixed-radix number. Index 0 is zero and index 1 is one.
// F_q sits inside F_{q^n} as the indices below q.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "paleyvec/error.hpp"

namespace paleyvec {

struct Element {
  std::uint32_t idx = 0;

  constexpr Element() = default;
  constexpr explicit Element(std::uint32_t i) noexcept : idx(i) {}

  friend constexpr bool operator==(Element, Element) = default;
  friend constexpr auto operator<=>(Element, Element) = default;
};

namespace detail {

inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

/// Distinct prime factors in ascending order.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

inline std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// b^e, saturating at `cap + 1` when the true value exceeds `cap`.
inline std::uint64_t saturating_pow(std::uint64_t b, unsigned e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && r > cap / b) return cap + 1;
    r *= b;
  }
  return r;
}

using Poly = std::vector<std::uint32_t>;

// F_p coefficients.
struct PrimeCoeffs {
  std::uint32_t p;

  std::uint32_t order() const { return p; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p - b) % p; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
  }
  std::uint32_t inv(std::uint32_t a) const {
    std::uint64_t r = 1, b = a;
    for (std::uint32_t e = p - 2; e; e >>= 1, b = b * b % p)
      if (e & 1u) r = r * b % p;
    return static_cast<std::uint32_t>(r);
  }
};

// F_q coefficients: digit-wise addition, log-table multiplication.
struct SmallField {
  std::uint32_t p = 2, m = 1, q = 2;
  std::vector<std::uint32_t> exp;  // size q-1
  std::vector<std::uint32_t> log;  // size q, log[0] unused

  std::uint32_t order() const { return q; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (p == 2) return a ^ b;
    std::uint32_t r = 0, w = 1;
    for (std::uint32_t i = 0; i < m; ++i, w *= p) {
      r += ((a % p + b % p) % p) * w;
      a /= p;
      b /= p;
    }
    return r;
  }
  std::uint32_t neg(std::uint32_t a) const {
    if (p == 2) return a;
    std::uint32_t r = 0, w = 1;
    for (std::uint32_t i = 0; i < m; ++i, w *= p) {
      r += ((p - a % p) % p) * w;
      a /= p;
    }
    return r;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp[(log[a] + log[b]) % (q - 1)];
  }
  std::uint32_t inv(std::uint32_t a) const { return exp[(q - 1 - log[a]) % (q - 1)]; }
};

template <class F>
void poly_trim(const F&, Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Remainder of `a` modulo the monic polynomial `mod`.
template <class F>
Poly poly_rem(const F& f, Poly a, const Poly& mod) {
  const std::size_t dm = mod.size() - 1;
  poly_trim(f, a);
  while (a.size() > dm) {
    const std::uint32_t c = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t j = 0; j < dm; ++j) a[shift + j] = f.sub(a[shift + j], f.mul(c, mod[j]));
    a.pop_back();
    poly_trim(f, a);
  }
  return a;
}

template <class F>
Poly poly_mulmod(const F& f, const Poly& a, const Poly& b, const Poly& mod) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  return poly_rem(f, std::move(r), mod);
}

/// Odometer over coefficient tuples of length `len` where position
/// `len - 1` moves fastest. Returns false after the last tuple.
inline bool next_tuple(std::vector<std::uint32_t>& t, std::uint32_t radix) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < radix) return true;
    t[i] = 0;
  }
  return false;
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most deg/2.
template <class F>
bool is_irreducible(const F& f, const Poly& poly) {
  const std::size_t deg = poly.size() - 1;
  if (deg <= 1) return deg == 1;
  for (std::size_t k = 1; k <= deg / 2; ++k) {
    std::vector<std::uint32_t> low(k, 0);
    do {
      Poly g(low.begin(), low.end());
      g.push_back(1);
      if (poly_rem(f, poly, g).empty()) return false;
    } while (next_tuple(low, f.order()));
  }
  return true;
}

/// The least monic irreducible of degree `deg`, comparing coefficients from the
/// constant term upward.
template <class F>
Poly least_irreducible(const F& f, std::uint32_t deg) {
  std::vector<std::uint32_t> low(deg, 0);
  do {
    Poly cand(low.begin(), low.end());
    cand.push_back(1);
    if (is_irreducible(f, cand)) return cand;
  } while (next_tuple(low, f.order()));
  throw Error(Errc::ConstructionFailed, "no irreducible polynomial of degree " + std::to_string(deg));
}

}  // namespace detail

/// The field tower F_p ⊂ F_q ⊂ F_{q^n}. Immutable after construction; copies
/// share the lookup tables.
class FieldCtx {
 public:
  /// Largest field order accepted by `build` unless a budget is passed.
  static constexpr std::uint64_t kDefaultOrderBudget = std::uint64_t{1} << 30;
  /// Fields up to this order get log/antilog/Zech tables.
  static constexpr std::uint64_t kTableBudget = std::uint64_t{1} << 20;

  FieldCtx() = delete;

  static FieldCtx build(std::uint32_t p, std::uint32_t m, std::uint32_t n,
                        std::uint64_t order_budget = kDefaultOrderBudget) {
    if (!detail::is_prime(p)) throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
    if (m < 1) throw Error(Errc::DegreeOutOfRange, "base degree m must be >= 1");
    if (n < 2) throw Error(Errc::DegreeOutOfRange, "extension degree n must be >= 2");
    const std::uint64_t cap = std::min<std::uint64_t>(order_budget, std::uint64_t{1} << 31);
    const std::uint64_t order = detail::saturating_pow(p, m * n, cap);
    if (order > cap)
      throw Error(Errc::BudgetExceeded, "field of order " + std::to_string(p) + "^" +
                                            std::to_string(m * n) + " exceeds budget");
    return FieldCtx(std::make_shared<const Data>(p, m, n));
  }

  std::uint32_t p() const noexcept { return d_->p; }
  std::uint32_t m() const noexcept { return d_->m; }
  std::uint32_t n() const noexcept { return d_->n; }
  std::uint32_t q() const noexcept { return d_->q; }
  /// q^n, the number of vertices of every G_U over this field.
  std::uint32_t order() const noexcept { return d_->order; }
  bool odd() const noexcept { return d_->p != 2; }
  bool has_tables() const noexcept { return !d_->exp.empty(); }

  /// Coefficients over F_p, constant term first.
  const detail::Poly& base_modulus() const noexcept { return d_->base_mod; }
  /// Coefficients over F_q (as element indices), constant term first.
  const detail::Poly& ext_modulus() const noexcept { return d_->ext_mod; }
  /// A generator of the multiplicative group (least index with full order).
  Element generator() const noexcept { return Element(d_->gen); }

  Element zero() const noexcept { return Element(0); }
  Element one() const noexcept { return Element(1); }

  Element add(Element a, Element b) const {
    const Data& d = *d_;
    if (d.p == 2) return Element(a.idx ^ b.idx);
    if (a.idx == 0) return b;
    if (b.idx == 0) return a;
    if (!d.exp.empty()) {
      const std::uint32_t N = d.order - 1;
      const std::uint32_t la = d.log[a.idx], lb = d.log[b.idx];
      const std::int32_t z = d.zech[(lb + N - la) % N];
      if (z < 0) return Element(0);
      return Element(d.exp[(la + static_cast<std::uint32_t>(z)) % N]);
    }
    return Element(digit_add(a.idx, b.idx));
  }

  Element neg(Element a) const {
    const Data& d = *d_;
    if (d.p == 2 || a.idx == 0) return a;
    if (!d.exp.empty()) {
      const std::uint32_t N = d.order - 1;
      return Element(d.exp[(d.log[a.idx] + N / 2) % N]);
    }
    std::uint32_t r = 0, w = 1, v = a.idx;
    for (std::uint32_t i = 0; i < d.m * d.n; ++i, w *= d.p) {
      r += ((d.p - v % d.p) % d.p) * w;
      v /= d.p;
    }
    return Element(r);
  }

  Element sub(Element a, Element b) const { return add(a, neg(b)); }

  Element mul(Element a, Element b) const {
    const Data& d = *d_;
    if (a.idx == 0 || b.idx == 0) return Element(0);
    if (!d.exp.empty()) return Element(d.exp[(d.log[a.idx] + d.log[b.idx]) % (d.order - 1)]);
    return Element(d.slow_mul(a.idx, b.idx));
  }

  Element inv(Element a) const {
    if (a.idx == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    const Data& d = *d_;
    const std::uint32_t N = d.order - 1;
    if (!d.exp.empty()) return Element(d.exp[(N - d.log[a.idx]) % N]);
    return pow(a, N - 1);
  }

  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  Element pow(Element a, std::uint64_t e) const {
    const Data& d = *d_;
    if (e == 0) return one();
    if (a.idx == 0) return zero();
    const std::uint64_t N = d.order - 1;
    if (!d.exp.empty()) return Element(d.exp[(d.log[a.idx] * (e % N)) % N]);
    return Element(d.slow_pow(a.idx, e));
  }

  /// a^{q^i}.
  Element frobenius(Element a, std::uint32_t i) const { return pow(a, qpow_mod(i % d_->n)); }

  /// a^{p^k}: the prime-field Frobenius, used for subfields not containing F_q.
  Element frobenius_prime(Element a, std::uint32_t k) const {
    std::uint64_t e = 1;
    for (std::uint32_t i = 0; i < k % (d_->m * d_->n); ++i) e *= d_->p;
    return pow(a, e);
  }

  /// Tr_n(a) = a + a^q + ... + a^{q^{n-1}}, an element of the embedded F_q.
  Element trace(Element a) const {
    Element s = zero();
    for (std::uint32_t i = 0; i < d_->n; ++i) s = add(s, frobenius(a, i));
    return s;
  }

  /// Membership in F_{q^d}, as a fixed point of the d-th Frobenius power.
  bool in_subfield(Element a, std::uint32_t d) const { return frobenius(a, d) == a; }
  bool in_base(Element a) const { return in_subfield(a, 1); }

  /// Whether a = b^2 for some b in F_{q^n}.
  bool is_square(Element a) const {
    if (a.idx == 0 || !odd()) return true;
    return pow(a, (std::uint64_t{d_->order} - 1) / 2) == one();
  }

  /// Whether a = b^2 for some b in F_{q^d}; a must lie in F_{q^d}.
  bool is_square_in(Element a, std::uint32_t d) const {
    require_divisor(d);
    if (!in_subfield(a, d)) throw Error(Errc::NotInSubfield, "element not in F_{q^" + std::to_string(d) + "}");
    if (a.idx == 0 || !odd()) return true;
    std::uint64_t qd = 1;
    for (std::uint32_t i = 0; i < d; ++i) qd *= q();
    return pow(a, (qd - 1) / 2) == one();
  }

  /// Quadratic character of F_q: +1, -1, or 0.
  int quadratic_character(Element a) const {
    if (!odd()) throw Error(Errc::EvenCharacteristic, "quadratic character needs odd q");
    if (!in_base(a)) throw Error(Errc::NotInSubfield, "element not in F_q");
    if (a.idx == 0) return 0;
    return pow(a, (q() - 1) / 2) == one() ? 1 : -1;
  }

  /// The q^d elements of F_{q^d}, sorted by index.
  std::vector<Element> subfield_elements(std::uint32_t d) const {
    require_divisor(d);
    const std::uint64_t N = d_->order - 1;
    const std::uint64_t sub = detail::saturating_pow(q(), d, N + 1) - 1;
    const std::uint64_t step = N / sub;
    std::vector<Element> out{zero()};
    const Element h = pow(generator(), step);
    Element x = one();
    for (std::uint64_t k = 0; k < sub; ++k) {
      out.push_back(x);
      x = mul(x, h);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Coordinates over F_q in the basis 1, y, ..., y^{n-1}.
  std::vector<std::uint32_t> coords(Element a) const {
    std::vector<std::uint32_t> c(d_->n);
    std::uint32_t v = a.idx;
    for (auto& x : c) {
      x = v % d_->q;
      v /= d_->q;
    }
    return c;
  }

  Element from_coords(const std::vector<std::uint32_t>& c) const {
    std::uint32_t v = 0;
    for (std::size_t j = c.size(); j-- > 0;) v = v * d_->q + c[j];
    return Element(v);
  }

  /// y^j, the j-th polynomial basis vector.
  Element basis_vector(std::uint32_t j) const { return Element(d_->qpow[j]); }

  /// Human-readable polynomial in y; F_q coefficients are written in x when m > 1.
  std::string to_string(Element a) const {
    const auto c = coords(a);
    std::string out;
    for (std::size_t j = c.size(); j-- > 0;) {
      if (c[j] == 0) continue;
      if (!out.empty()) out += " + ";
      const std::string coef = base_to_string(c[j]);
      const bool compound = coef.find('+') != std::string::npos;
      if (j == 0) {
        out += coef;
      } else {
        if (c[j] != 1) out += compound ? "(" + coef + ")" : coef;
        out += j == 1 ? "y" : "y^" + std::to_string(j);
      }
    }
    return out.empty() ? "0" : out;
  }

  std::string spec_string() const {
    return std::to_string(p()) + "^" + std::to_string(m()) + "^" + std::to_string(n());
  }

 private:
  struct Data {
    std::uint32_t p, m, n, q, order;
    detail::Poly base_mod, ext_mod;
    detail::SmallField fq;
    std::vector<std::uint32_t> ppow;  // p^k for k < m*n
    std::vector<std::uint32_t> qpow;  // q^j for j <= n (q^n fits in 32 bits + 1)
    std::uint32_t gen = 1;
    std::vector<std::uint32_t> exp, log;
    std::vector<std::int32_t> zech;  // log(1 + g^k), or -1 when 1 + g^k = 0

    Data(std::uint32_t p_, std::uint32_t m_, std::uint32_t n_) : p(p_), m(m_), n(n_) {
      q = 1;
      for (std::uint32_t i = 0; i < m; ++i) q *= p;
      std::uint64_t o = 1;
      for (std::uint32_t i = 0; i < n; ++i) o *= q;
      order = static_cast<std::uint32_t>(o);
      std::uint64_t w = 1;
      for (std::uint32_t k = 0; k < m * n; ++k, w *= p) ppow.push_back(static_cast<std::uint32_t>(w));
      w = 1;
      for (std::uint32_t j = 0; j < n; ++j, w *= q) qpow.push_back(static_cast<std::uint32_t>(w));

      const detail::PrimeCoeffs fp{p};
      base_mod = detail::least_irreducible(fp, m);
      build_base_field(fp);
      ext_mod = detail::least_irreducible(fq, n);
      find_generator();
      if (order <= kTableBudget) build_tables();
    }

    void build_base_field(const detail::PrimeCoeffs& fp) {
      fq.p = p;
      fq.m = m;
      fq.q = q;
      auto as_poly = [&](std::uint32_t v) {
        detail::Poly r(m);
        for (auto& c : r) {
          c = v % p;
          v /= p;
        }
        return r;
      };
      auto from_poly = [&](const detail::Poly& r) {
        std::uint32_t v = 0;
        for (std::size_t i = r.size(); i-- > 0;) v = v * p + r[i];
        return v;
      };
      auto slow = [&](std::uint32_t a, std::uint32_t b) {
        return from_poly(detail::poly_mulmod(fp, as_poly(a), as_poly(b), base_mod));
      };
      const std::uint32_t N = q - 1;
      for (std::uint32_t g = 1; g < q; ++g) {
        fq.exp.assign(N, 0);
        fq.log.assign(q, 0);
        std::uint32_t x = 1;
        bool full = true;
        for (std::uint32_t k = 0; k < N; ++k) {
          if (k > 0 && x == 1) {
            full = false;
            break;
          }
          fq.exp[k] = x;
          fq.log[x] = k;
          x = slow(x, g);
        }
        if (full && x == 1) return;
      }
      throw Error(Errc::ConstructionFailed, "no primitive element in F_q");
    }

    detail::Poly as_ext_poly(std::uint32_t v) const {
      detail::Poly r(n);
      for (auto& c : r) {
        c = v % q;
        v /= q;
      }
      return r;
    }

    std::uint32_t from_ext_poly(const detail::Poly& r) const {
      std::uint32_t v = 0;
      for (std::size_t i = r.size(); i-- > 0;) v = v * q + r[i];
      return v;
    }

    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
      return from_ext_poly(detail::poly_mulmod(fq, as_ext_poly(a), as_ext_poly(b), ext_mod));
    }

    std::uint32_t slow_pow(std::uint32_t a, std::uint64_t e) const {
      std::uint32_t r = 1;
      for (; e; e >>= 1, a = slow_mul(a, a))
        if (e & 1u) r = slow_mul(r, a);
      return r;
    }

    void find_generator() {
      const std::uint64_t N = order - 1;
      const auto primes = detail::prime_factors(N);
      for (std::uint32_t g = 1; g < order; ++g) {
        bool ok = true;
        for (auto r : primes) {
          if (slow_pow(g, N / r) == 1) {
            ok = false;
            break;
          }
        }
        if (ok) {
          gen = g;
          return;
        }
      }
      throw Error(Errc::ConstructionFailed, "no generator found");
    }

    void build_tables() {
      const std::uint32_t N = order - 1;
      exp.assign(N, 0);
      log.assign(order, 0);
      std::uint32_t x = 1;
      for (std::uint32_t k = 0; k < N; ++k) {
        exp[k] = x;
        log[x] = k;
        x = slow_mul(x, gen);
      }
      zech.assign(N, -1);
      for (std::uint32_t k = 0; k < N; ++k) {
        const std::uint32_t s = digit_add_raw(1, exp[k]);
        zech[k] = s == 0 ? -1 : static_cast<std::int32_t>(log[s]);
      }
    }

    std::uint32_t digit_add_raw(std::uint32_t a, std::uint32_t b) const {
      if (p == 2) return a ^ b;
      std::uint32_t r = 0;
      for (std::uint32_t k = 0; k < m * n; ++k) {
        r += ((a % p + b % p) % p) * ppow[k];
        a /= p;
        b /= p;
      }
      return r;
    }
  };

  explicit FieldCtx(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  std::uint32_t digit_add(std::uint32_t a, std::uint32_t b) const { return d_->digit_add_raw(a, b); }

  std::uint64_t qpow_mod(std::uint32_t i) const {
    std::uint64_t e = 1;
    for (std::uint32_t k = 0; k < i; ++k) e *= d_->q;
    return e;
  }

  void require_divisor(std::uint32_t d) const {
    if (d == 0 || d_->n % d != 0)
      throw Error(Errc::NotADivisor, std::to_string(d) + " does not divide n = " + std::to_string(d_->n));
  }

  std::string base_to_string(std::uint32_t c) const {
    if (d_->m == 1) return std::to_string(c);
    std::string out;
    std::vector<std::uint32_t> digits(d_->m);
    for (auto& x : digits) {
      x = c % d_->p;
      c /= d_->p;
    }
    for (std::size_t k = digits.size(); k-- > 0;) {
      if (digits[k] == 0) continue;
      if (!out.empty()) out += "+";
      if (k == 0) {
        out += std::to_string(digits[k]);
      } else {
        if (digits[k] != 1) out += std::to_string(digits[k]);
        out += k == 1 ? "x" : "x^" + std::to_string(k);
      }
    }
    return out;
  }

  std::shared_ptr<const Data> d_;
};

}  // namespace paleyvec
