#pragma once

// F_q-linear algebra inside F_{q^n}. All coordinates are taken in the
// polynomial basis 1, y, ..., y^{n-1}; matrix entries are indices of F_q.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "paleyvec/error.hpp"
#include "paleyvec/gf.hpp"

namespace paleyvec {

/// Dense matrix over the embedded F_q.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::uint32_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend bool operator==(const FqMatrix&, const FqMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> a_;
};

namespace linalg {

inline std::uint32_t fq_add(const FieldCtx& f, std::uint32_t a, std::uint32_t b) {
  return f.add(Element(a), Element(b)).idx;
}
inline std::uint32_t fq_sub(const FieldCtx& f, std::uint32_t a, std::uint32_t b) {
  return f.sub(Element(a), Element(b)).idx;
}
inline std::uint32_t fq_mul(const FieldCtx& f, std::uint32_t a, std::uint32_t b) {
  return f.mul(Element(a), Element(b)).idx;
}
inline std::uint32_t fq_inv(const FieldCtx& f, std::uint32_t a) { return f.inv(Element(a)).idx; }

/// In-place reduced row echelon form (pivots scanned left to right).
/// Returns the pivot column of each nonzero row.
inline std::vector<std::size_t> rref(const FieldCtx& f, FqMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
    const std::uint32_t s = fq_inv(f, a(row, col));
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) = fq_mul(f, a(row, j), s);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      const std::uint32_t c = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = fq_sub(f, a(i, j), fq_mul(f, c, a(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(const FieldCtx& f, FqMatrix a) { return rref(f, a).size(); }

/// Basis of {x : A x = 0}.
inline std::vector<std::vector<std::uint32_t>> nullspace(const FieldCtx& f, FqMatrix a) {
  const auto pivots = rref(f, a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint32_t> v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(Element(a(r, free))).idx;
    out.push_back(std::move(v));
  }
  return out;
}

inline std::uint32_t determinant(const FieldCtx& f, FqMatrix a) {
  const std::size_t n = a.rows();
  std::uint32_t det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a(sel, col) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(sel, j), a(col, j));
      det = f.neg(Element(det)).idx;
    }
    det = fq_mul(f, det, a(col, col));
    const std::uint32_t s = fq_inv(f, a(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      const std::uint32_t c = fq_mul(f, a(i, col), s);
      for (std::size_t j = col; j < n; ++j) a(i, j) = fq_sub(f, a(i, j), fq_mul(f, c, a(col, j)));
    }
  }
  return det;
}

}  // namespace linalg

/// An F_q-subspace of F_{q^n} held by its canonical basis: reduced echelon
/// form where each row's pivot is its highest nonzero coordinate (scaled to
/// 1), other rows vanish at that coordinate, and rows ascend by pivot. Two
/// subspaces are equal iff their canonical bases are.
class Subspace {
 public:
  Subspace() = default;

  const std::vector<Element>& basis() const noexcept { return basis_; }
  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(basis_.size()); }

  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend auto operator<=>(const Subspace& a, const Subspace& b) { return a.basis_ <=> b.basis_; }

  std::string to_string() const {
    std::string s = "basis=";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(basis_[i].idx);
    }
    return s;
  }

 private:
  friend class SubspaceBuilder;
  std::vector<Element> basis_;
};

/// Incremental echelon reduction producing canonical subspaces.
class SubspaceBuilder {
 public:
  explicit SubspaceBuilder(const FieldCtx& f) : f_(&f), pivot_row_(f.n(), -1) {}

  /// Reduces `x` against the current rows; returns its coordinates.
  std::vector<std::uint32_t> reduce(Element x) const {
    auto c = f_->coords(x);
    for (std::size_t col = 0; col < c.size(); ++col) {
      const int r = pivot_row_[col];
      if (r < 0 || c[col] == 0) continue;
      const std::uint32_t k = c[col];
      for (std::size_t j = 0; j <= col; ++j)
        c[j] = linalg::fq_sub(*f_, c[j], linalg::fq_mul(*f_, k, rows_[r][j]));
    }
    return c;
  }

  bool contains(Element x) const {
    for (auto v : reduce(x))
      if (v != 0) return false;
    return true;
  }

  /// Adds `x`; returns false when it was already in the span.
  bool insert(Element x) {
    auto c = reduce(x);
    std::size_t h = c.size();
    while (h > 0 && c[h - 1] == 0) --h;
    if (h == 0) return false;
    const std::size_t piv = h - 1;
    const std::uint32_t s = linalg::fq_inv(*f_, c[piv]);
    for (auto& v : c) v = linalg::fq_mul(*f_, v, s);
    for (auto& row : rows_) {
      if (row[piv] == 0) continue;
      const std::uint32_t k = row[piv];
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = linalg::fq_sub(*f_, row[j], linalg::fq_mul(*f_, k, c[j]));
    }
    pivot_row_[piv] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(c));
    return true;
  }

  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(rows_.size()); }

  Subspace finish() const {
    Subspace s;
    for (std::size_t col = 0; col < pivot_row_.size(); ++col)
      if (pivot_row_[col] >= 0) s.basis_.push_back(f_->from_coords(rows_[pivot_row_[col]]));
    return s;
  }

 private:
  const FieldCtx* f_;
  std::vector<int> pivot_row_;
  std::vector<std::vector<std::uint32_t>> rows_;
};

/// Largest subspace cardinality `enumerate` will materialize.
inline constexpr std::uint64_t kEnumerateBudget = std::uint64_t{1} << 26;

inline Subspace span(const FieldCtx& f, const std::vector<Element>& gens) {
  SubspaceBuilder b(f);
  for (auto g : gens) b.insert(g);
  return b.finish();
}

inline Subspace full_space(const FieldCtx& f) {
  std::vector<Element> g;
  for (std::uint32_t j = 0; j < f.n(); ++j) g.push_back(f.basis_vector(j));
  return span(f, g);
}

inline bool contains(const FieldCtx& f, const Subspace& U, Element x) {
  SubspaceBuilder b(f);
  for (auto e : U.basis()) b.insert(e);
  return b.contains(x);
}

inline bool is_subset(const FieldCtx& f, const Subspace& A, const Subspace& B) {
  SubspaceBuilder b(f);
  for (auto e : B.basis()) b.insert(e);
  for (auto e : A.basis())
    if (!b.contains(e)) return false;
  return true;
}

inline std::uint64_t cardinality(const FieldCtx& f, const Subspace& U) {
  std::uint64_t s = 1;
  for (std::uint32_t i = 0; i < U.dim(); ++i) s *= f.q();
  return s;
}

/// Every element of U exactly once, ascending by index.
inline std::vector<Element> enumerate(const FieldCtx& f, const Subspace& U) {
  const std::uint64_t size = detail::saturating_pow(f.q(), U.dim(), kEnumerateBudget);
  if (size > kEnumerateBudget) throw Error(Errc::BudgetExceeded, "subspace too large to enumerate");
  std::vector<Element> out{f.zero()};
  out.reserve(size);
  for (auto b : U.basis()) {
    const std::size_t prev = out.size();
    for (std::uint32_t lam = 1; lam < f.q(); ++lam) {
      const Element s = f.mul(Element(lam), b);
      for (std::size_t i = 0; i < prev; ++i) out.push_back(f.add(out[i], s));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Membership mask over all q^n field elements.
inline std::vector<std::uint8_t> membership_mask(const FieldCtx& f, const Subspace& U) {
  std::vector<std::uint8_t> mask(f.order(), 0);
  for (auto e : enumerate(f, U)) mask[e.idx] = 1;
  return mask;
}

/// Representative of the line F_q* c: highest nonzero coordinate scaled to 1.
inline Element normalize_line(const FieldCtx& f, Element c) {
  if (c.idx == 0) return c;
  auto co = f.coords(c);
  std::size_t h = co.size();
  while (co[h - 1] == 0) --h;
  return f.mul(f.inv(Element(co[h - 1])), c);
}

/// ker(x -> Tr(c x)) = c^{-1} U_{q,n}.
inline Subspace hyperplane_from_functional(const FieldCtx& f, Element c) {
  if (c.idx == 0) throw Error(Errc::ZeroFunctional, "functional coefficient must be nonzero");
  FqMatrix row(1, f.n());
  for (std::uint32_t j = 0; j < f.n(); ++j) row(0, j) = f.trace(f.mul(c, f.basis_vector(j))).idx;
  std::vector<Element> gens;
  for (const auto& v : linalg::nullspace(f, row)) gens.push_back(f.from_coords(v));
  return span(f, gens);
}

/// The trace-zero hyperplane U_{q,n}.
inline Subspace trace_zero_hyperplane(const FieldCtx& f) { return hyperplane_from_functional(f, f.one()); }

/// The normalized c with U = ker(x -> Tr(c x)), found from the trace-pairing
/// system Tr(c b_i) = 0 over U's basis.
inline Element functional_of_hyperplane(const FieldCtx& f, const Subspace& U) {
  if (U.dim() + 1 != f.n()) throw Error(Errc::WrongDimension, "expected a hyperplane of dimension n-1");
  FqMatrix a(U.dim(), f.n());
  for (std::uint32_t i = 0; i < U.dim(); ++i)
    for (std::uint32_t j = 0; j < f.n(); ++j) a(i, j) = f.trace(f.mul(U.basis()[i], f.basis_vector(j))).idx;
  const auto ns = linalg::nullspace(f, a);
  if (ns.size() != 1) throw Error(Errc::StructureViolation, "trace-pairing system has unexpected rank");
  return normalize_line(f, f.from_coords(ns.front()));
}

struct Hyperplane {
  Element delta;  // U = delta * U_{q,n}
  Subspace space;
};

/// All (q^n - 1)/(q - 1) hyperplanes, ordered by the index of their
/// normalized functional c; delta = c^{-1}.
inline std::vector<Hyperplane> all_hyperplanes(const FieldCtx& f) {
  std::vector<Hyperplane> out;
  for (std::uint32_t i = 1; i < f.order(); ++i) {
    const Element c(i);
    if (normalize_line(f, c) != c) continue;
    out.push_back({f.inv(c), hyperplane_from_functional(f, c)});
  }
  return out;
}

inline bool contains_nonzero_square(const FieldCtx& f, const Subspace& U) {
  if (U.dim() == 0) return false;
  if (!f.odd()) return true;
  if (cardinality(f, U) > (std::uint64_t{f.order()} - 1) / 2 + 1) return true;
  for (auto e : enumerate(f, U))
    if (e.idx != 0 && f.is_square(e)) return true;
  return false;
}

/// Whether a^2 F_{q^d} ⊆ U for the given a != 0, tested on an F_q-basis of
/// the subfield.
inline bool scaled_subfield_inside(const FieldCtx& f, const SubspaceBuilder& U, Element a,
                                   const std::vector<Element>& subfield_basis) {
  const Element a2 = f.mul(a, a);
  for (auto b : subfield_basis)
    if (!U.contains(f.mul(a2, b))) return false;
  return true;
}

/// D_U: the greatest divisor d of n (d <= d_U) with a^2 F_{q^d} ⊆ U for some
/// a != 0. Candidates a run over coset representatives g^j of F_{q^n}*/F_{q^d}*.
inline std::uint32_t D_invariant(const FieldCtx& f, const Subspace& U) {
  if (!contains_nonzero_square(f, U)) throw Error(Errc::NoNonzeroSquare, "U has no nonzero square");
  SubspaceBuilder ub(f);
  for (auto e : U.basis()) ub.insert(e);
  const auto divs = detail::divisors(f.n());
  const std::uint64_t N = f.order() - 1;
  for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
    const std::uint32_t d = *it;
    if (d > U.dim()) continue;
    const Subspace sub = span(f, f.subfield_elements(d));
    std::uint64_t qd = 1;
    for (std::uint32_t i = 0; i < d; ++i) qd *= f.q();
    const std::uint64_t cosets = N / (qd - 1);
    const Element g = f.generator();
    Element a = f.one();
    for (std::uint64_t j = 0; j < cosets; ++j, a = f.mul(a, g))
      if (scaled_subfield_inside(f, ub, a, sub.basis())) return d;
  }
  throw Error(Errc::StructureViolation, "nonzero square found but D_U search failed");
}

/// s(U) for a hyperplane when q is odd and n is even: +1 iff U = a^2 U_{q,n}.
inline int s_invariant(const FieldCtx& f, const Subspace& U) {
  if (!f.odd() || f.n() % 2 != 0) throw Error(Errc::WrongParity, "s(U) needs q odd and n even");
  if (U.dim() + 1 != f.n()) throw Error(Errc::WrongDimension, "s(U) needs a hyperplane");
  const Element delta = f.inv(functional_of_hyperplane(f, U));
  return f.is_square(delta) ? 1 : -1;
}

/// a * U, the image under multiplication by a != 0.
inline Subspace scale(const FieldCtx& f, const Subspace& U, Element a) {
  std::vector<Element> g;
  for (auto e : U.basis()) g.push_back(f.mul(a, e));
  return span(f, g);
}

/// Image of U under the prime Frobenius x -> x^{p^k}, an F_q-semilinear bijection.
inline Subspace frobenius_image(const FieldCtx& f, const Subspace& U, std::uint32_t k) {
  std::vector<Element> g;
  for (auto e : U.basis()) g.push_back(f.frobenius_prime(e, k));
  return span(f, g);
}

/// Number of d-dimensional subspaces of F_q^n (Gaussian binomial).
inline std::uint64_t gaussian_binomial(std::uint64_t q, std::uint32_t n, std::uint32_t d) {
  if (d > n) return 0;
  long double num = 1, den = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    num *= static_cast<long double>(detail::saturating_pow(q, n - i, ~std::uint64_t{0} >> 2) - 1);
    den *= static_cast<long double>(detail::saturating_pow(q, i + 1, ~std::uint64_t{0} >> 2) - 1);
  }
  return static_cast<std::uint64_t>(num / den + 0.5L);
}

/// Calls `fn` on every d-dimensional subspace, in canonical form, by walking
/// pivot patterns and their free entries. Deterministic order.
inline void for_each_subspace(const FieldCtx& f, std::uint32_t d, const std::function<void(const Subspace&)>& fn) {
  const std::uint32_t n = f.n();
  if (d > n) return;
  std::vector<std::uint32_t> piv(d);
  for (std::uint32_t i = 0; i < d; ++i) piv[i] = i;
  while (true) {
    std::vector<bool> is_piv(n, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> free;  // (row, col)
    for (std::uint32_t r = 0; r < d; ++r)
      for (std::uint32_t c = 0; c < piv[r]; ++c)
        if (!is_piv[c]) free.emplace_back(r, c);
    std::vector<std::uint32_t> vals(free.size(), 0);
    do {
      std::vector<std::vector<std::uint32_t>> rows(d, std::vector<std::uint32_t>(n, 0));
      for (std::uint32_t r = 0; r < d; ++r) rows[r][piv[r]] = 1;
      for (std::size_t k = 0; k < free.size(); ++k) rows[free[k].first][free[k].second] = vals[k];
      std::vector<Element> gens;
      for (const auto& row : rows) gens.push_back(f.from_coords(row));
      fn(span(f, gens));
    } while (detail::next_tuple(vals, f.q()));
    // next combination of pivot columns
    int i = static_cast<int>(d) - 1;
    while (i >= 0 && piv[i] == n - d + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++piv[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
  }
}

}  // namespace paleyvec
