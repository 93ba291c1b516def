#pragma once

// Exhaustive sweeps over families of subspaces and the named verification
// suites built on them.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "paleyvec/forms.hpp"
#include "paleyvec/graph.hpp"
#include "paleyvec/theorems.hpp"

namespace paleyvec {

/// A subspace standing for its orbit under U -> a^2 U and U -> U^{p}.
/// Both maps induce graph isomorphisms and preserve d_U, D_U and square
/// content, so every quantity checked by the suites is constant on orbits.
struct OrbitRep {
  Subspace rep;
  std::uint64_t size = 0;
};

namespace detail {

inline std::string subspace_key(const Subspace& U) {
  std::string k(U.basis().size() * sizeof(std::uint32_t), '\0');
  for (std::size_t i = 0; i < U.basis().size(); ++i)
    std::memcpy(k.data() + i * sizeof(std::uint32_t), &U.basis()[i].idx, sizeof(std::uint32_t));
  return k;
}

}  // namespace detail

/// Orbit representatives of the d-dimensional subspaces, each the first
/// member met in enumeration order. Orbit sizes sum to the Gaussian binomial.
inline std::vector<OrbitRep> subspace_orbits(const FieldCtx& f, std::uint32_t d) {
  std::vector<OrbitRep> out;
  std::unordered_set<std::string> seen;
  const Element g2 = f.mul(f.generator(), f.generator());
  for_each_subspace(f, d, [&](const Subspace& U) {
    if (seen.count(detail::subspace_key(U))) return;
    OrbitRep o{U, 0};
    std::deque<Subspace> todo{U};
    seen.insert(detail::subspace_key(U));
    while (!todo.empty()) {
      const Subspace V = std::move(todo.front());
      todo.pop_front();
      ++o.size;
      for (const Subspace& W : {scale(f, V, g2), frobenius_image(f, V, 1)})
        if (seen.insert(detail::subspace_key(W)).second) todo.push_back(W);
    }
    out.push_back(std::move(o));
  });
  return out;
}

/// Every d-dimensional subspace, each as its own orbit of size 1.
inline std::vector<OrbitRep> all_subspaces(const FieldCtx& f, std::uint32_t d) {
  std::vector<OrbitRep> out;
  for_each_subspace(f, d, [&](const Subspace& U) { out.push_back({U, 1}); });
  return out;
}

/// Computes omega with a primary solver configuration and, optionally,
/// repeats each computation under further configurations, recording any
/// disagreement in `consistency`.
class OmegaEngine {
 public:
  explicit OmegaEngine(OmegaOptions primary = {}) : primary_(primary) { consistency.suite = "solver-consistency"; }

  void add_cross_check(OmegaOptions o) { cross_.push_back(o); }

  CliqueResult solve(const GraphGU& G) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto r = clique_number_exact(G, primary_);
    const auto t1 = clock::now();
    primary_seconds += std::chrono::duration<double>(t1 - t0).count();
    for (const auto& o : cross_) {
      const auto c0 = clock::now();
      const auto s = clique_number_exact(G, o).size;
      cross_seconds += std::chrono::duration<double>(clock::now() - c0).count();
      consistency.record(s == r.size, instance_tag(G.field(), G.subspace()) + ": " + std::to_string(s) +
                                          " != " + std::to_string(r.size) + " under workers=" +
                                          std::to_string(o.workers) + " rule=" + (o.use_structure_rule ? "on" : "off"));
    }
    return r;
  }

  std::uint64_t omega(const FieldCtx& f, const Subspace& U) { return solve(GraphGU::build(f, U)).size; }

  Report consistency;
  double primary_seconds = 0, cross_seconds = 0;

 private:
  OmegaOptions primary_;
  std::vector<OmegaOptions> cross_;
};

/// Every prime power q and n >= 2 with q <= qmax, n <= nmax, q^n <= max_order.
inline std::vector<FieldCtx> field_grid(std::uint32_t qmax, std::uint32_t nmax, std::uint64_t max_order) {
  std::vector<FieldCtx> out;
  for (std::uint32_t q = 2; q <= qmax; ++q) {
    const auto pf = detail::prime_factors(q);
    if (pf.size() != 1) continue;
    const auto p = static_cast<std::uint32_t>(pf.front());
    std::uint32_t m = 0;
    for (std::uint32_t v = q; v > 1; v /= p) ++m;
    for (std::uint32_t n = 2; n <= nmax; ++n) {
      if (detail::saturating_pow(q, n, max_order) > max_order) break;
      out.push_back(FieldCtx::build(p, m, n));
    }
  }
  return out;
}

/// Exact omega of each hyperplane against the hyperplane classification, and
/// the largest of them against omega_{q,n}.
inline Report suite_hyperplanes(const std::vector<FieldCtx>& fields, OmegaEngine& eng, Report* max_report = nullptr) {
  Report rep;
  rep.suite = "n-1";
  for (const auto& f : fields) {
    std::uint64_t best = 0;
    for (const auto& h : all_hyperplanes(f)) {
      const auto w = eng.omega(f, h.space);
      best = std::max(best, w);
      const int s = (f.odd() && f.n() % 2 == 0) ? s_invariant(f, h.space) : 0;
      const auto want = hyperplane_omega(f.q(), f.n(), s);
      rep.record(w == want, instance_tag(f, h.space) + ": omega=" + std::to_string(w) + " expected " +
                                std::to_string(want));
      const auto pred = predict_omega(f, h.space);
      rep.record(pred.admits(w), instance_tag(f, h.space) + ": prediction " + pred.to_string() + " rejects " +
                                     std::to_string(w));
    }
    if (max_report) {
      const auto want = omega_qn(f.q(), f.n());
      max_report->record(best == want, field_tag(f) + ": max over hyperplanes " + std::to_string(best) +
                                           " != omega_{q,n} " + std::to_string(want));
    }
  }
  return rep;
}

inline Report suite_max_over_hyperplanes(const std::vector<FieldCtx>& fields, OmegaEngine& eng) {
  Report rep;
  rep.suite = "main";
  suite_hyperplanes(fields, eng, &rep);
  return rep;
}

/// Dimension one and two: exact omega equals the prediction, which is an
/// exact value in both dimensions.
inline Report suite_low_dimension(const std::vector<FieldCtx>& fields, OmegaEngine& eng) {
  Report rep;
  rep.suite = "prop-basic";
  for (const auto& f : fields)
    for (std::uint32_t d = 1; d <= std::min(2u, f.n() - 1); ++d)
      for_each_subspace(f, d, [&](const Subspace& U) {
        const auto pred = predict_omega(f, U);
        const auto w = eng.omega(f, U);
        rep.record(pred.kind == PredictionKind::ExactValue && pred.admits(w),
                   instance_tag(f, U) + ": omega=" + std::to_string(w) + " predicted " + pred.to_string());
      });
  return rep;
}

/// Structure of every maximal clique, over orbit representatives of every
/// dimension 1..n-1.
inline Report suite_structure(const std::vector<FieldCtx>& fields, std::uint64_t cap = kDefaultCliqueCap) {
  Report rep;
  rep.suite = "main1";
  for (const auto& f : fields)
    for (std::uint32_t d = 1; d < f.n(); ++d)
      for (const auto& o : subspace_orbits(f, d)) rep.merge(check_structure(GraphGU::build(f, o.rep), cap));
  return rep;
}

/// Bounds, the q-power corollaries and the prediction envelope, over every
/// subspace of dimension 1..n-1, or over orbit representatives only.
inline Report suite_bounds(const std::vector<FieldCtx>& fields, OmegaEngine& eng, bool orbits_only = true) {
  Report rep;
  rep.suite = "main3";
  for (const auto& f : fields)
    for (std::uint32_t d = 1; d < f.n(); ++d)
      for (const auto& o : orbits_only ? subspace_orbits(f, d) : all_subspaces(f, d)) {
        const auto G = GraphGU::build(f, o.rep);
        const auto w = eng.solve(G).size;
        rep.merge(check_bounds(f, o.rep, w));
        rep.merge(check_corollary_q_power(G, w));
        const auto pred = predict_omega(f, o.rep);
        rep.record(pred.admits(w), instance_tag(f, o.rep) + ": prediction " + pred.to_string() + " rejects " +
                                       std::to_string(w));
      }
  return rep;
}

/// t(B_lambda) and M_{B_lambda} by search against the closed forms. All
/// lambda up to `all_lambda_limit` field elements, otherwise a fixed-seed
/// sample of `sample` values.
inline Report suite_forms(const std::vector<FieldCtx>& fields, std::uint32_t all_lambda_limit = 100,
                          std::size_t sample = 50, unsigned workers = 1) {
  Report rep;
  rep.suite = "crucial";
  for (const auto& f : fields) {
    if (!f.odd()) continue;
    std::vector<Element> lambdas;
    if (f.order() <= all_lambda_limit) {
      for (std::uint32_t l = 1; l < f.order(); ++l) lambdas.push_back(Element(l));
    } else {
      std::mt19937_64 rng(f.order());
      std::uniform_int_distribution<std::uint32_t> pick(1, f.order() - 1);
      while (lambdas.size() < sample) lambdas.push_back(Element(pick(rng)));
    }
    for (auto l : lambdas) {
      const auto B = FormSpec::trace_form(f, l);
      const std::string tag = field_tag(f) + " lambda=" + std::to_string(l.idx);
      try {
        const auto t = t_of_form(f, B);
        rep.record(is_totally_isotropic(f, B, t.witness), tag + ": isotropic witness fails");
        const auto M = M_of_form(f, B, workers);
        rep.record(M.closed_form && M.M == *M.closed_form,
                   tag + ": M=" + std::to_string(M.M) + " closed form " + std::to_string(M.closed_form.value_or(0)));
        rep.record(is_pairwise_orthogonal(f, B, M.witness) && M.witness.size() == M.M, tag + ": M witness fails");
      } catch (const Error& e) {
        rep.record(false, tag + ": " + e.what());
      }
    }
  }
  return rep;
}

/// chi(B_lambda) = chi(B_1) exactly when lambda is a square, for all lambda.
inline Report suite_trace_equivalence(const std::vector<FieldCtx>& fields) {
  Report rep;
  rep.suite = "trace-equiv";
  for (const auto& f : fields) {
    if (!f.odd()) continue;
    const int chi1 = chi_of_form(f, FormSpec::trace_form(f, f.one()));
    for (std::uint32_t l = 1; l < f.order(); ++l) {
      const Element lambda(l);
      const int chi = chi_of_form(f, FormSpec::trace_form(f, lambda));
      rep.record((chi == chi1) == f.is_square(lambda), field_tag(f) + " lambda=" + std::to_string(l));
    }
  }
  return rep;
}

/// The special basis: Gram matrix diag(mu, 1, ..., 1), mu a non-square of
/// F_q for q odd and n even, mu = 1 otherwise.
inline Report suite_special_basis(const std::vector<FieldCtx>& fields) {
  Report rep;
  rep.suite = "basis";
  for (const auto& f : fields) {
    const std::string tag = field_tag(f);
    try {
      const auto sb = special_basis(f);
      bool gram = span(f, sb.basis).dim() == f.n();
      for (std::uint32_t i = 0; i < f.n(); ++i)
        for (std::uint32_t j = 0; j < f.n(); ++j) {
          const Element want = i != j ? f.zero() : (i == 0 ? sb.mu : f.one());
          gram = gram && f.trace(f.mul(sb.basis[i], sb.basis[j])) == want;
        }
      rep.record(gram, tag + ": Gram matrix is not diag(mu, 1, ..., 1)");
      const bool mu_ok = (f.odd() && f.n() % 2 == 0) ? !f.is_square_in(sb.mu, 1) : sb.mu == f.one();
      rep.record(mu_ok, tag + ": mu=" + std::to_string(sb.mu.idx) + " has the wrong squareness");
    } catch (const Error& e) {
      rep.record(false, tag + ": " + e.what());
    }
  }
  return rep;
}

inline Report suite_sum_product(const std::vector<FieldCtx>& fields, std::size_t pairs = 1000, std::uint64_t seed = 1) {
  Report rep;
  rep.suite = "sumproduct";
  for (const auto& f : fields) rep.merge(sum_product_audit(f, pairs, seed + f.order()));
  return rep;
}

inline Report suite_census(const std::vector<FieldCtx>& fields, const OmegaOptions& opt = {}) {
  Report rep;
  rep.suite = "census";
  for (const auto& f : fields) {
    if (!f.odd() || f.n() % 2 != 0) continue;
    const auto c = isomorphism_class_census(f, opt);
    auto show = [](const std::set<std::uint64_t>& s) {
      std::string o;
      for (auto v : s) o += (o.empty() ? "" : "/") + std::to_string(v);
      return o;
    };
    rep.record(c.pass, field_tag(f) + ": classes " + std::to_string(c.plus) + "+" + std::to_string(c.minus) +
                           " (expected " + std::to_string(c.expected) + " each), omega " + show(c.omega_plus) +
                           " | " + show(c.omega_minus));
  }
  return rep;
}

}  // namespace paleyvec
