#pragma once

// Closed-form predictions of omega(G_U) and checkers for the accompanying
// bounds. Every comparison that involves an irrational exponent is decided by
// exact integer arithmetic on suitable powers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "paleyvec/error.hpp"
#include "paleyvec/gf.hpp"
#include "paleyvec/graph.hpp"
#include "paleyvec/linalg.hpp"

namespace paleyvec {

using BigInt = boost::multiprecision::cpp_int;

inline std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  return detail::saturating_pow(b, e, ~std::uint64_t{0} >> 1);
}

inline BigInt big_pow(std::uint64_t b, std::uint32_t e) {
  BigInt r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= b;
  return r;
}

/// Largest omega(G_U) over all proper subspaces U of F_{q^n}.
inline std::uint64_t omega_qn(std::uint64_t q, std::uint32_t n) {
  if (q == 2 && n >= 2 && n <= 5) return n + 1;
  if (n % 2 == 1) return ipow(q, (n - 1) / 2) + 1;
  return ipow(q, n / 2);
}

/// omega(G_U) for a hyperplane U. `s` is s(U) and is only read when q is odd
/// and n is even.
inline std::uint64_t hyperplane_omega(std::uint64_t q, std::uint32_t n, int s) {
  if (q == 2 && n <= 5) return n + 1;
  if (q % 2 == 0 || n % 2 == 1) return ipow(q, n / 2) + n % 2;
  const bool large = (n % 4 == 0 && s == -1) || (q % 4 == 3 && n % 4 == 2 && s == 1) ||
                     (q % 4 == 1 && n % 4 == 2 && s == -1);
  return large ? ipow(q, n / 2) : ipow(q, n / 2 - 1) + 2;
}

/// kappa_U = max{D_U, 7 d_U / 8 + 7 / (32 log2 q)}, held symbolically.
struct Kappa {
  std::uint32_t D = 1;
  std::uint32_t d = 1;
  std::uint64_t q = 2;

  /// Whether D_U attains the max. With e = 8D - 7d > 0 this is
  /// 4 e log2 q >= 7, i.e. q^{4e} >= 2^7.
  bool subfield_term_dominates() const {
    const long e = 8L * D - 7L * d;
    if (e <= 0) return false;
    return big_pow(q, static_cast<std::uint32_t>(4 * e)) >= 128;
  }

  double approx() const {
    return std::max<double>(D, 7.0 * d / 8.0 + 7.0 / (32.0 * std::log2(static_cast<double>(q))));
  }

  /// floor(kappa).
  std::uint32_t floor() const {
    if (subfield_term_dominates()) return D;
    std::uint32_t k = 7 * d / 8;
    // the fractional part 7/(32 log2 q) is below 1, so floor is k or k + 1
    const long e = 8L * (k + 1) - 7L * d;
    if (e <= 0 || big_pow(q, static_cast<std::uint32_t>(4 * e)) <= 128) ++k;
    return std::max(k, D);
  }

  /// x <= q^kappa. In the sum-product branch this reads
  /// x^32 <= 2^7 q^{28 d}.
  bool at_least(std::uint64_t x) const {
    if (subfield_term_dominates()) return BigInt(x) <= big_pow(q, D);
    if (BigInt(x) <= big_pow(q, D)) return true;
    return big_pow(x, 32) <= BigInt(128) * big_pow(q, 28 * d);
  }
};

inline Kappa kappa_U(const FieldCtx& f, const Subspace& U) {
  Kappa k;
  k.D = D_invariant(f, U);  // throws NoNonzeroSquare
  k.d = U.dim();
  k.q = f.q();
  return k;
}

enum class PredictionKind { ExactValue, CandidateSet, Interval };

inline const char* kind_name(PredictionKind k) {
  switch (k) {
    case PredictionKind::ExactValue: return "exact-value";
    case PredictionKind::CandidateSet: return "finite-candidate-set";
    case PredictionKind::Interval: return "interval";
  }
  return "?";
}

struct OmegaPrediction {
  PredictionKind kind = PredictionKind::Interval;
  std::uint64_t lo = 0, hi = 0;
  std::vector<std::uint64_t> candidates;
  std::string provenance;

  static OmegaPrediction exact(std::uint64_t v, std::string why) {
    return {PredictionKind::ExactValue, v, v, {v}, std::move(why)};
  }

  std::optional<std::uint64_t> value() const {
    if (kind == PredictionKind::ExactValue) return lo;
    return std::nullopt;
  }

  bool admits(std::uint64_t w) const {
    switch (kind) {
      case PredictionKind::ExactValue: return w == lo;
      case PredictionKind::CandidateSet:
        return std::find(candidates.begin(), candidates.end(), w) != candidates.end();
      case PredictionKind::Interval: return lo <= w && w <= hi;
    }
    return false;
  }

  std::string to_string() const {
    if (kind == PredictionKind::ExactValue) return std::to_string(lo);
    if (kind == PredictionKind::Interval) return std::to_string(lo) + ".." + std::to_string(hi);
    std::string s = "{";
    for (std::size_t i = 0; i < candidates.size(); ++i) s += (i ? "," : "") + std::to_string(candidates[i]);
    return s + "}";
  }
};

/// Whether U = a^2 F_{q^{d_U}} for some a != 0 (forces d_U | n).
inline bool is_scaled_subfield(const FieldCtx& f, const Subspace& U) {
  if (U.dim() == 0 || f.n() % U.dim() != 0 || !contains_nonzero_square(f, U)) return false;
  return D_invariant(f, U) == U.dim();
}

/// Values of the form q^t + r admissible for a maximum clique: t = 0 with
/// r <= d + 1, or 1 <= t <= t_max with r + t <= d.
inline std::vector<std::uint64_t> shape_values(std::uint64_t q, std::uint32_t d, std::uint32_t t_max,
                                               std::uint64_t lo, std::uint64_t hi) {
  std::set<std::uint64_t> vals;
  for (std::uint64_t r = 0; r <= d + 1; ++r) vals.insert(1 + r);
  for (std::uint32_t t = 1; t <= std::min(t_max, d); ++t)
    for (std::uint32_t r = 0; r + t <= d; ++r) vals.insert(ipow(q, t) + r);
  std::vector<std::uint64_t> out;
  for (auto v : vals)
    if (v >= lo && v <= hi) out.push_back(v);
  return out;
}

/// Predicted clique number for 1 <= d_U <= n - 1. Exact values come from
/// the square-free case, the hyperplane classification, the dimension one
/// and two descriptions and the scaled-subfield case; otherwise all bounds are
/// intersected into a candidate set.
inline OmegaPrediction predict_omega(const FieldCtx& f, const Subspace& U) {
  const std::uint32_t d = U.dim(), n = f.n();
  const std::uint64_t q = f.q();
  if (d < 1 || d + 1 > n) throw Error(Errc::DimensionOutOfRange, "predictions need 1 <= d_U <= n-1");
  if (!contains_nonzero_square(f, U)) return OmegaPrediction::exact(3, "square-free");
  if (d == n - 1) {
    const int s = (f.odd() && n % 2 == 0) ? s_invariant(f, U) : 0;
    return OmegaPrediction::exact(hyperplane_omega(q, n, s), "hyperplane");
  }
  if (d == 1) return OmegaPrediction::exact(q <= 3 ? 3 : q, "dimension-one");
  if (d == 2) {
    if (q == 2 || is_scaled_subfield(f, U)) return OmegaPrediction::exact(q * q, "dimension-two");
    return OmegaPrediction::exact(q + 1, "dimension-two");
  }
  const Kappa k = kappa_U(f, U);
  if (k.D == d) return OmegaPrediction::exact(ipow(q, d), "scaled-subfield");

  OmegaPrediction p;
  p.kind = PredictionKind::CandidateSet;
  p.provenance = "bounds";
  p.lo = std::max<std::uint64_t>({3, ipow(q, k.D), q + 1});
  p.hi = std::min<std::uint64_t>(omega_qn(q, n), ipow(q, d - 1) + 1);
  while (p.hi > d && !k.at_least(p.hi - d)) --p.hi;
  p.candidates = shape_values(q, d, k.floor(), p.lo, p.hi);
  return p;
}

struct Report {
  std::string suite;
  std::uint64_t instances = 0;
  std::uint64_t passes = 0;
  std::vector<std::string> failures;

  void record(bool ok, const std::string& what) {
    ++instances;
    if (ok) ++passes;
    else failures.push_back(what);
  }
  void merge(const Report& o) {
    instances += o.instances;
    passes += o.passes;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
  }
  bool ok() const { return failures.empty(); }
};

inline std::string field_tag(const FieldCtx& f) {
  return "q=" + std::to_string(f.q()) + ",n=" + std::to_string(f.n());
}

inline std::string instance_tag(const FieldCtx& f, const Subspace& U) {
  return field_tag(f) + " " + U.to_string();
}

/// The upper bound omega <= q^{d_U} with its equality characterization, and
/// the gap statement omega = q^{d_U} or omega <= q^{d_U - 1} + 1. For
/// q = d_U = 2 every maximum clique must look like {0, a, u/a, v/a} with
/// a^2 = uv/(u + v) for the nonzero u, v of U.
inline Report check_corollary_q_power(const GraphGU& G, std::uint64_t omega) {
  const FieldCtx& f = G.field();
  const Subspace& U = G.subspace();
  Report rep;
  rep.suite = "q-power";
  const std::uint32_t d = U.dim();
  const std::uint64_t q = f.q();
  const std::string tag = instance_tag(f, U);
  if (d < 2) return rep;
  const std::uint64_t qd = ipow(q, d);
  rep.record(omega <= qd, tag + ": omega > q^d");
  const bool equality_expected = (q == 2 && d == 2) || (d < f.n() && is_scaled_subfield(f, U));
  rep.record((omega == qd) == equality_expected, tag + ": equality case mismatch");
  rep.record(omega == qd || omega <= ipow(q, d - 1) + 1, tag + ": omega in the forbidden gap");
  if (q == 2 && d == 2) {
    for (const auto& C : enumerate_maximal_cliques(G)) {
      if (C.size() != omega) continue;
      bool shaped = false;
      for (auto av : C) {
        if (av == 0) continue;
        const Element a(av);
        std::vector<Element> others;
        for (auto x : C)
          if (x != 0 && x != av) others.push_back(Element(x));
        if (others.size() != 2) break;
        const Element u = f.mul(a, others[0]), v = f.mul(a, others[1]);
        if (!G.in_subspace(u) || !G.in_subspace(v) || u.idx == 0 || v.idx == 0 || u == v) continue;
        const Element rhs = f.div(f.mul(u, v), f.add(u, v));
        if (f.mul(a, a) == rhs) {
          shaped = true;
          break;
        }
      }
      rep.record(shaped, tag + ": maximum clique without the {0, a, u/a, v/a} shape");
    }
  }
  return rep;
}

/// Lower bounds (3, and q + min{1, d_U - 1} with a nonzero square), the
/// square-free value 3, q^{D_U} <= omega <= q^{kappa_U} + d_U, and
/// omega <= omega_{q,n}.
inline Report check_bounds(const FieldCtx& f, const Subspace& U, std::uint64_t omega) {
  Report rep;
  rep.suite = "bounds";
  const std::string tag = instance_tag(f, U) + " omega=" + std::to_string(omega);
  const std::uint32_t d = U.dim();
  rep.record(omega >= 3, tag + ": below 3");
  rep.record(omega <= omega_qn(f.q(), f.n()), tag + ": above omega_{q,n}");
  if (!contains_nonzero_square(f, U)) {
    rep.record(omega <= d + 2, tag + ": square-free but omega > d_U + 2");
    rep.record(omega == 3, tag + ": square-free but omega != 3");
    return rep;
  }
  rep.record(omega >= f.q() + std::min<std::uint64_t>(1, d - 1), tag + ": below q + min(1, d_U - 1)");
  const Kappa k = kappa_U(f, U);
  rep.record(omega >= ipow(f.q(), k.D), tag + ": below q^{D_U}");
  rep.record(omega <= d || k.at_least(omega - d), tag + ": above q^{kappa_U} + d_U");
  if (omega > d + 2) {
    bool shaped = false;
    for (std::uint32_t t = 1; t <= std::min(k.floor(), d) && !shaped; ++t)
      for (std::uint32_t r = 0; r + t <= d; ++r)
        if (ipow(f.q(), t) + r == omega) shaped = true;
    rep.record(shaped, tag + ": omega > d_U + 2 but not q^t + r with t <= kappa_U, r + t <= d_U");
  }
  return rep;
}

/// Decomposes every maximal clique of G and checks it contains 0.
inline Report check_structure(const GraphGU& G, std::uint64_t cap = kDefaultCliqueCap) {
  Report rep;
  rep.suite = "structure";
  const std::string tag = instance_tag(G.field(), G.subspace());
  for_each_maximal_clique(
      G.graph(),
      [&](const std::vector<std::uint32_t>& C) {
        const bool has_zero = !C.empty() && C.front() == 0;
        bool ok = has_zero;
        std::string why = has_zero ? "" : "maximal clique without 0";
        if (ok) {
          try {
            decompose_clique(G, C);
          } catch (const Error& e) {
            ok = false;
            why = e.what();
          }
        }
        rep.record(ok, tag + ": " + why);
      },
      cap);
  return rep;
}

struct SumProductResult {
  std::uint64_t size_a = 0, size_b = 0;
  std::uint64_t plus = 0, minus = 0, lhs = 0;
  double rhs = 0;
  bool pass = false;
};

/// Whether every element of B lies in one proper subfield of F_{q^n}.
inline bool inside_proper_subfield(const FieldCtx& f, const std::vector<Element>& B) {
  const std::uint32_t total = f.m() * f.n();
  for (auto r : detail::prime_factors(total)) {
    const std::uint32_t k = total / static_cast<std::uint32_t>(r);
    bool all = true;
    for (auto b : B)
      if (f.frobenius_prime(b, k) != b) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

/// max{|A + A.B|, |A - A.B|} against 2^{-1/4} min{|A||B|^{1/7}, |A|^{6/7} Q^{1/7}}
/// with Q = q^n, compared as 2^7 lhs^28 >= min{|A|^28 |B|^4, |A|^24 Q^4}.
inline SumProductResult sum_product_check(const FieldCtx& f, const std::vector<Element>& A,
                                          const std::vector<Element>& B) {
  std::vector<Element> a = A, b = B;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (a.size() <= 1) throw Error(Errc::PreconditionViolated, "|A| must exceed 1");
  if (b.empty() || inside_proper_subfield(f, b))
    throw Error(Errc::PreconditionViolated, "B lies in a proper subfield");
  std::vector<std::uint8_t> plus(f.order(), 0), minus(f.order(), 0);
  for (auto x : a)
    for (auto y : a)
      for (auto z : b) {
        const Element yz = f.mul(y, z);
        plus[f.add(x, yz).idx] = 1;
        minus[f.sub(x, yz).idx] = 1;
      }
  SumProductResult r;
  r.size_a = a.size();
  r.size_b = b.size();
  r.plus = static_cast<std::uint64_t>(std::count(plus.begin(), plus.end(), 1));
  r.minus = static_cast<std::uint64_t>(std::count(minus.begin(), minus.end(), 1));
  r.lhs = std::max(r.plus, r.minus);
  const double A1 = static_cast<double>(r.size_a), B1 = static_cast<double>(r.size_b);
  const double Q = static_cast<double>(f.order());
  r.rhs = std::pow(2.0, -0.25) * std::min(A1 * std::pow(B1, 1.0 / 7), std::pow(A1, 6.0 / 7) * std::pow(Q, 1.0 / 7));
  const BigInt left = BigInt(128) * big_pow(r.lhs, 28);
  const BigInt x = big_pow(r.size_a, 28) * big_pow(r.size_b, 4);
  const BigInt y = big_pow(r.size_a, 24) * big_pow(f.order(), 4);
  r.pass = left >= std::min(x, y);
  return r;
}

/// Random audit of the sum-product inequality: pairs (A, B) with 2 <= |A|
/// and B outside every proper subfield.
inline Report sum_product_audit(const FieldCtx& f, std::size_t pairs, std::uint64_t seed) {
  Report rep;
  rep.suite = "sumproduct";
  std::mt19937_64 rng(seed);
  const std::uint32_t N = f.order();
  const std::uint32_t max_size = std::max<std::uint32_t>(2, std::min<std::uint32_t>(N, 24));
  std::uniform_int_distribution<std::uint32_t> pick(0, N - 1), size_a(2, max_size), size_b(1, max_size);
  auto sample = [&](std::uint32_t k) {
    std::vector<Element> s;
    std::vector<std::uint8_t> used(N, 0);
    while (s.size() < k) {
      const std::uint32_t v = pick(rng);
      if (!used[v]) {
        used[v] = 1;
        s.push_back(Element(v));
      }
    }
    return s;
  };
  std::size_t done = 0;
  while (done < pairs) {
    const auto A = sample(size_a(rng));
    const auto B = sample(size_b(rng));
    if (inside_proper_subfield(f, B)) continue;
    const auto r = sum_product_check(f, A, B);
    rep.record(r.pass, field_tag(f) + ": |A|=" + std::to_string(r.size_a) + " |B|=" + std::to_string(r.size_b) +
                           " lhs=" + std::to_string(r.lhs));
    ++done;
  }
  return rep;
}

struct CensusReport {
  std::uint64_t expected = 0;
  std::uint64_t plus = 0, minus = 0;
  std::set<std::uint64_t> omega_plus, omega_minus;
  bool pass = false;
};

/// Splits the hyperplanes of F_{q^n} (q odd, n even) by s(U) and computes
/// omega for each.
inline CensusReport isomorphism_class_census(const FieldCtx& f, const OmegaOptions& opt = {}) {
  if (!f.odd() || f.n() % 2 != 0) throw Error(Errc::WrongParity, "census needs q odd and n even");
  CensusReport c;
  c.expected = (std::uint64_t{f.order()} - 1) / (2 * (f.q() - 1));
  for (const auto& h : all_hyperplanes(f)) {
    const int s = s_invariant(f, h.space);
    const auto w = clique_number_exact(GraphGU::build(f, h.space), opt).size;
    if (s == 1) {
      ++c.plus;
      c.omega_plus.insert(w);
    } else {
      ++c.minus;
      c.omega_minus.insert(w);
    }
  }
  c.pass = c.plus == c.expected && c.minus == c.expected && c.omega_plus.size() == 1 && c.omega_minus.size() == 1;
  return c;
}

}  // namespace paleyvec
