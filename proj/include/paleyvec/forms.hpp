#pragma once

// Symmetric F_q-bilinear forms on F_{q^n}: the trace forms
// B_lambda(x, y) = Tr(lambda x y) and arbitrary non-degenerate Gram matrices.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "paleyvec/clique.hpp"
#include "paleyvec/error.hpp"
#include "paleyvec/gf.hpp"
#include "paleyvec/linalg.hpp"

namespace paleyvec {

class FormSpec {
 public:
  /// B_lambda(x, y) = Tr(lambda x y).
  static FormSpec trace_form(const FieldCtx& f, Element lambda) {
    if (lambda.idx == 0) throw Error(Errc::DegenerateForm, "lambda must be nonzero");
    FqMatrix g(f.n(), f.n());
    for (std::uint32_t i = 0; i < f.n(); ++i)
      for (std::uint32_t j = 0; j < f.n(); ++j)
        g(i, j) = f.trace(f.mul(lambda, f.mul(f.basis_vector(i), f.basis_vector(j)))).idx;
    FormSpec s(std::move(g));
    s.lambda_ = lambda;
    return s;
  }

  static FormSpec from_gram(const FieldCtx& f, FqMatrix gram) {
    if (gram.rows() != f.n() || gram.cols() != f.n())
      throw Error(Errc::DegenerateForm, "gram matrix must be n x n");
    for (std::size_t i = 0; i < gram.rows(); ++i)
      for (std::size_t j = 0; j < gram.cols(); ++j) {
        if (gram(i, j) >= f.q()) throw Error(Errc::DegenerateForm, "gram entries must lie in F_q");
        if (gram(i, j) != gram(j, i)) throw Error(Errc::DegenerateForm, "gram matrix must be symmetric");
      }
    if (linalg::determinant(f, gram) == 0) throw Error(Errc::DegenerateForm, "singular gram matrix");
    return FormSpec(std::move(gram));
  }

  const FqMatrix& gram() const noexcept { return gram_; }
  std::optional<Element> lambda() const noexcept { return lambda_; }

 private:
  explicit FormSpec(FqMatrix g) : gram_(std::move(g)) {}

  FqMatrix gram_;
  std::optional<Element> lambda_;
};

inline FqMatrix gram_matrix(const FormSpec& B) { return B.gram(); }

/// Pairing evaluated through precomputed partial products; cheap enough for
/// exhaustive sweeps over all pairs of a desk-scale field.
class FormEvaluator {
 public:
  FormEvaluator(const FieldCtx& f, const FormSpec& B) : f_(&f), n_(f.n()) {
    const auto& g = B.gram();
    coords_.resize(std::size_t{f.order()} * n_);
    image_.resize(std::size_t{f.order()} * n_);
    for (std::uint32_t v = 0; v < f.order(); ++v) {
      const auto c = f.coords(Element(v));
      for (std::uint32_t j = 0; j < n_; ++j) {
        coords_[std::size_t{v} * n_ + j] = c[j];
        std::uint32_t s = 0;
        for (std::uint32_t i = 0; i < n_; ++i) s = linalg::fq_add(f, s, linalg::fq_mul(f, c[i], g(i, j)));
        image_[std::size_t{v} * n_ + j] = s;
      }
    }
  }

  std::uint32_t operator()(Element x, Element y) const {
    std::uint32_t s = 0;
    for (std::uint32_t j = 0; j < n_; ++j)
      s = linalg::fq_add(*f_, s, linalg::fq_mul(*f_, image_[std::size_t{x.idx} * n_ + j], coords_[std::size_t{y.idx} * n_ + j]));
    return s;
  }

 private:
  const FieldCtx* f_;
  std::uint32_t n_;
  std::vector<std::uint32_t> coords_, image_;
};

inline std::uint32_t evaluate(const FieldCtx& f, const FormSpec& B, Element x, Element y) {
  const auto cx = f.coords(x), cy = f.coords(y);
  std::uint32_t s = 0;
  for (std::uint32_t i = 0; i < f.n(); ++i)
    for (std::uint32_t j = 0; j < f.n(); ++j)
      s = linalg::fq_add(f, s, linalg::fq_mul(f, cx[i], linalg::fq_mul(f, B.gram()(i, j), cy[j])));
  return s;
}

/// Congruence diagonalization by symmetric row/column elimination (q odd).
/// A zero pivot is repaired by adding the first row/column with a nonzero
/// off-diagonal entry, which yields 2 B(k, j) != 0.
inline std::vector<std::uint32_t> diagonalize(const FieldCtx& f, const FormSpec& B) {
  if (!f.odd()) throw Error(Errc::EvenCharacteristic, "diagonalization needs odd q");
  FqMatrix g = B.gram();
  const std::size_t n = g.rows();
  auto add_row_col = [&](std::size_t dst, std::size_t src, std::uint32_t k) {
    for (std::size_t j = 0; j < n; ++j) g(dst, j) = linalg::fq_add(f, g(dst, j), linalg::fq_mul(f, k, g(src, j)));
    for (std::size_t i = 0; i < n; ++i) g(i, dst) = linalg::fq_add(f, g(i, dst), linalg::fq_mul(f, k, g(i, src)));
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (g(k, k) == 0) {
      std::size_t j = k + 1;
      while (j < n && g(j, j) == 0) ++j;
      if (j < n) {
        for (std::size_t c = 0; c < n; ++c) std::swap(g(k, c), g(j, c));
        for (std::size_t r = 0; r < n; ++r) std::swap(g(r, k), g(r, j));
      } else {
        j = k + 1;
        while (j < n && g(k, j) == 0) ++j;
        if (j == n) throw Error(Errc::DegenerateForm, "form is degenerate");
        add_row_col(k, j, 1);
      }
    }
    const std::uint32_t inv = linalg::fq_inv(f, g(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (g(i, k) == 0) continue;
      const std::uint32_t c = f.neg(Element(linalg::fq_mul(f, g(i, k), inv))).idx;
      add_row_col(i, k, c);
    }
  }
  std::vector<std::uint32_t> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = g(i, i);
  return d;
}

/// chi_q(B): product of quadratic characters over a diagonalization.
inline int chi_of_form(const FieldCtx& f, const FormSpec& B) {
  int s = 1;
  for (auto a : diagonalize(f, B)) s *= f.quadratic_character(Element(a));
  return s;
}

/// {w : B(u, w) = 0 for all u in U}.
inline Subspace orthogonal_complement(const FieldCtx& f, const Subspace& U, const FormSpec& B) {
  if (U.dim() == 0) return full_space(f);
  FqMatrix a(U.dim(), f.n());
  for (std::uint32_t r = 0; r < U.dim(); ++r) {
    const auto c = f.coords(U.basis()[r]);
    for (std::uint32_t j = 0; j < f.n(); ++j) {
      std::uint32_t s = 0;
      for (std::uint32_t i = 0; i < f.n(); ++i) s = linalg::fq_add(f, s, linalg::fq_mul(f, c[i], B.gram()(i, j)));
      a(r, j) = s;
    }
  }
  std::vector<Element> gens;
  for (const auto& v : linalg::nullspace(f, a)) gens.push_back(f.from_coords(v));
  return span(f, gens);
}

/// chi_q(-1)^{n/2} style sign: chi_q(-1) = +1 iff q = 1 mod 4.
inline int chi_minus_one(std::uint32_t q) { return q % 4 == 1 ? 1 : -1; }

/// Closed-form t(B) for odd q.
inline std::uint32_t t_closed_form(std::uint32_t q, std::uint32_t n, int chi_B) {
  if (n % 2 == 1) return (n - 1) / 2;
  int s = chi_B;
  if ((n / 2) % 2 == 1) s *= chi_minus_one(q);
  return static_cast<std::uint32_t>((static_cast<int>(n) + s - 1) / 2);
}

/// Closed-form M_B = q^t + n - 2t.
inline std::uint64_t M_closed_form(std::uint32_t q, std::uint32_t n, std::uint32_t t) {
  return detail::saturating_pow(q, t, ~std::uint64_t{0} >> 4) + n - 2 * t;
}

/// Exhaustive largest totally isotropic subspace. Candidates are the
/// normalized isotropic vectors in index order; the first subspace found at
/// the largest dimension is kept. Dimension never exceeds n/2.
inline Subspace max_isotropic_subspace(const FieldCtx& f, const FormSpec& B, std::uint64_t node_budget = 50'000'000) {
  const FormEvaluator ev(f, B);
  std::vector<Element> cand;
  for (std::uint32_t v = 1; v < f.order(); ++v) {
    const Element e(v);
    if (normalize_line(f, e) == e && ev(e, e) == 0) cand.push_back(e);
  }
  const std::uint32_t cap = f.n() / 2;
  std::vector<Element> chosen, best;
  std::uint64_t nodes = 0;
  std::function<bool(std::size_t, const SubspaceBuilder&)> dfs = [&](std::size_t start, const SubspaceBuilder& sb) {
    if (++nodes > node_budget) throw Error(Errc::BudgetExceeded, "isotropic search exceeded node budget");
    if (chosen.size() > best.size()) best = chosen;
    if (best.size() == cap) return true;
    for (std::size_t i = start; i < cand.size(); ++i) {
      const Element v = cand[i];
      bool ok = true;
      for (auto w : chosen)
        if (ev(v, w) != 0) {
          ok = false;
          break;
        }
      if (!ok || sb.contains(v)) continue;
      SubspaceBuilder next = sb;
      next.insert(v);
      chosen.push_back(v);
      if (dfs(i + 1, next)) return true;
      chosen.pop_back();
    }
    return false;
  };
  dfs(0, SubspaceBuilder(f));
  return span(f, best);
}

struct TResult {
  std::uint32_t t;
  Subspace witness;
  std::optional<std::uint32_t> closed_form;  // odd q
};

/// t(B) with a verified witness. For odd q the closed form is compared with
/// the search; a mismatch is a StructureViolation.
inline TResult t_of_form(const FieldCtx& f, const FormSpec& B) {
  TResult r;
  r.witness = max_isotropic_subspace(f, B);
  r.t = r.witness.dim();
  if (f.odd()) {
    r.closed_form = t_closed_form(f.q(), f.n(), chi_of_form(f, B));
    if (*r.closed_form != r.t)
      throw Error(Errc::StructureViolation, "isotropic search disagrees with closed-form t(B)");
  }
  return r;
}

inline bool is_totally_isotropic(const FieldCtx& f, const FormSpec& B, const Subspace& W) {
  for (auto u : W.basis())
    for (auto w : W.basis())
      if (evaluate(f, B, u, w) != 0) return false;
  return true;
}

inline bool is_pairwise_orthogonal(const FieldCtx& f, const FormSpec& B, const std::vector<Element>& E) {
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = i + 1; j < E.size(); ++j)
      if (evaluate(f, B, E[i], E[j]) != 0) return false;
  return true;
}

/// Orthogonality graph of B: vertices are all field elements, u ~ w when
/// u != w and B(u, w) = 0.
inline BitGraph orthogonality_graph(const FieldCtx& f, const FormSpec& B) {
  const FormEvaluator ev(f, B);
  BitGraph g(f.order());
  for (std::uint32_t u = 0; u < f.order(); ++u)
    for (std::uint32_t w = u + 1; w < f.order(); ++w)
      if (ev(Element(u), Element(w)) == 0) g.add_edge(u, w);
  return g;
}

struct MResult {
  std::uint64_t M = 0;                        // exact, from clique search
  std::vector<Element> witness;               // pairwise orthogonal, |witness| = M
  std::uint32_t t = 0;                        // t(B) used for the formula/bound
  std::optional<std::uint64_t> closed_form;   // odd q
  std::optional<std::uint64_t> upper_bound;   // even q
};

/// M_B by exact clique search on the orthogonality graph, alongside the
/// closed form (odd q) or the applicable upper bound (even q).
inline MResult M_of_form(const FieldCtx& f, const FormSpec& B, unsigned workers = 1) {
  MResult r;
  r.t = t_of_form(f, B).t;
  if (f.odd()) {
    r.closed_form = M_closed_form(f.q(), f.n(), r.t);
  } else if (f.q() > 2 || r.t >= 3) {
    r.upper_bound = M_closed_form(f.q(), f.n(), r.t);
  } else {
    r.upper_bound = f.n() + 1;
  }
  CliqueOptions opt;
  opt.workers = workers;
  const auto res = max_clique(orthogonality_graph(f, B), opt);
  r.M = res.size;
  for (auto v : res.witness) r.witness.push_back(Element(v));
  return r;
}

struct SpecialBasis {
  std::vector<Element> basis;  // beta_1 first
  Element mu;                  // Tr(beta_1^2)
};

/// A basis with Tr(b_i b_j) = 0 for i != j, Tr(b_i^2) = 1 for i > 1 and
/// Tr(b_1^2) = mu. Vectors b_2.. are chosen by index scan among elements
/// orthogonal to the previous choices whose self-pairing is a nonzero
/// square (then rescaled to 1); b_1 spans what is left. When a scan stalls
/// the previous choice is revised.
inline SpecialBasis special_basis(const FieldCtx& f, std::uint64_t node_budget = 10'000'000) {
  const std::uint32_t n = f.n();
  const std::uint32_t q = f.q();
  // sqrt table over F_q: root[a] = some b with b^2 = a, or 0 when none
  std::vector<std::uint32_t> root(q, 0);
  std::vector<bool> has_root(q, false);
  for (std::uint32_t b = 0; b < q; ++b) {
    const std::uint32_t a = f.mul(Element(b), Element(b)).idx;
    if (!has_root[a]) {
      has_root[a] = true;
      root[a] = b;
    }
  }
  auto tr2 = [&](Element x, Element y) { return f.trace(f.mul(x, y)).idx; };
  auto normalized = [&](Element x) {
    const std::uint32_t s = tr2(x, x);
    return f.mul(f.inv(Element(root[s])), x);
  };

  std::vector<Element> chosen;
  std::uint64_t nodes = 0;
  std::optional<SpecialBasis> out;
  std::function<bool()> dfs = [&]() -> bool {
    if (++nodes > node_budget) return false;
    if (chosen.size() + 1 == n) {
      std::vector<Element> gens = chosen;
      const Subspace rest = [&] {
        FqMatrix a(chosen.size(), n);
        for (std::size_t i = 0; i < chosen.size(); ++i)
          for (std::uint32_t j = 0; j < n; ++j) a(i, j) = tr2(chosen[i], f.basis_vector(j));
        std::vector<Element> g;
        for (const auto& v : linalg::nullspace(f, a)) g.push_back(f.from_coords(v));
        return span(f, g);
      }();
      if (rest.dim() != 1) return false;
      Element b1 = rest.basis().front();
      std::uint32_t mu = tr2(b1, b1);
      if (mu == 0) return false;
      if (has_root[mu]) {
        b1 = normalized(b1);
        mu = 1;
      }
      SpecialBasis sb;
      sb.basis.push_back(b1);
      sb.basis.insert(sb.basis.end(), chosen.begin(), chosen.end());
      sb.mu = Element(mu);
      out = sb;
      return true;
    }
    for (std::uint32_t v = 1; v < f.order(); ++v) {
      const Element x(v);
      if (normalize_line(f, x) != x) continue;
      const std::uint32_t s = tr2(x, x);
      if (s == 0 || !has_root[s]) continue;
      bool ok = true;
      for (auto c : chosen)
        if (tr2(c, x) != 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(normalized(x));
      if (dfs()) return true;
      chosen.pop_back();
      if (nodes > node_budget) return false;
    }
    return false;
  };
  if (!dfs() || !out) throw Error(Errc::ConstructionFailed, "no special basis found within the search budget");
  return *out;
}

}  // namespace paleyvec
