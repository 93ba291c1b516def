#pragma once

// The graphs G_U: vertices are the elements of F_{q^n}, and distinct a, b are
// adjacent when ab lies in the F_q-subspace U.

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "paleyvec/clique.hpp"
#include "paleyvec/error.hpp"
#include "paleyvec/gf.hpp"
#include "paleyvec/linalg.hpp"

namespace paleyvec {

inline constexpr std::uint64_t kDefaultVertexBudget = 65536;

/// Vertex cap for graph construction; PALEYVEC_BUDGET_VERTICES overrides it.
inline std::uint64_t vertex_budget() {
  if (const char* env = std::getenv("PALEYVEC_BUDGET_VERTICES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultVertexBudget;
}

class GraphGU {
 public:
  /// Adjacency rows are filled by enumerating u in U \ {0} and marking
  /// u * v^{-1} in row v, plus the universal vertex 0.
  static GraphGU build(const FieldCtx& f, const Subspace& U, std::uint64_t max_vertices = vertex_budget()) {
    if (U.dim() == 0) throw Error(Errc::ZeroDimension, "G_U needs dim U >= 1");
    if (f.order() > max_vertices)
      throw Error(Errc::BudgetExceeded, std::to_string(f.order()) + " vertices exceed the budget of " +
                                            std::to_string(max_vertices));
    GraphGU g(f, U);
    const auto members = enumerate(f, U);
    g.member_.assign(f.order(), 0);
    for (auto e : members) g.member_[e.idx] = 1;
    for (std::uint32_t v = 1; v < f.order(); ++v) {
      g.adj_.add_edge(0, v);
      const Element vinv = f.inv(Element(v));
      for (auto u : members) {
        if (u.idx == 0) continue;
        g.adj_.set_arc(v, f.mul(u, vinv).idx);
      }
    }
    g.rule_.q = f.q();
    g.rule_.dim = U.dim();
    g.rule_.inner.assign(f.order(), 0);
    for (std::uint32_t v = 0; v < f.order(); ++v) g.rule_.inner[v] = g.member_[f.mul(Element(v), Element(v)).idx];
    return g;
  }

  const FieldCtx& field() const noexcept { return f_; }
  const Subspace& subspace() const noexcept { return U_; }
  const BitGraph& graph() const noexcept { return adj_; }
  std::size_t size() const noexcept { return adj_.size(); }

  bool in_subspace(Element x) const { return member_[x.idx] != 0; }
  /// a^2 in U.
  bool square_in_subspace(Element a) const { return rule_.inner[a.idx] != 0; }
  const StructureRule& structure_rule() const noexcept { return rule_; }

 private:
  GraphGU(const FieldCtx& f, const Subspace& U) : f_(f), U_(U), adj_(f.order()) {}

  FieldCtx f_;
  Subspace U_;
  BitGraph adj_;
  std::vector<std::uint8_t> member_;
  StructureRule rule_;
};

inline GraphGU build_graph(const FieldCtx& f, const Subspace& U) { return GraphGU::build(f, U); }

/// The guaranteed lower bound on omega(G_U): 3 always, and
/// q + min(1, d_U - 1) when U holds a nonzero square.
inline std::size_t omega_lower_bound(const FieldCtx& f, const Subspace& U) {
  std::size_t lb = 3;
  if (contains_nonzero_square(f, U)) lb = std::max<std::size_t>(lb, f.q() + (U.dim() > 1 ? 1 : 0));
  return lb;
}

struct OmegaOptions {
  unsigned workers = 1;
  bool use_structure_rule = true;
  bool seed_lower_bound = true;
  bool canonical_witness = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

inline CliqueResult clique_number_exact(const GraphGU& G, const OmegaOptions& o = {}) {
  CliqueOptions opt;
  opt.workers = o.workers;
  opt.deadline = o.deadline;
  opt.canonical_witness = o.canonical_witness;
  if (o.use_structure_rule) opt.rule = &G.structure_rule();
  if (o.seed_lower_bound) opt.lower_bound = omega_lower_bound(G.field(), G.subspace());
  return max_clique(G.graph(), opt);
}

inline std::vector<std::vector<std::uint32_t>> enumerate_maximal_cliques(const GraphGU& G,
                                                                         std::uint64_t cap = kDefaultCliqueCap) {
  return enumerate_maximal_cliques(G.graph(), cap);
}

struct CliqueDecomposition {
  Subspace V2;                 // {a in C : a^2 in U}, an F_q-space
  std::vector<Element> V1;     // the rest, F_q-linearly independent
  Subspace W;                  // span(V1)
  std::uint32_t t = 0;         // dim V2
  std::uint32_t r = 0;         // |V1|
};

/// Splits a maximal clique into its square-in-U part and the rest, checking
/// that the first is a subspace, the second is independent, their spans meet
/// only in 0, and (t, r) obey the counting constraint.
inline CliqueDecomposition decompose_clique(const GraphGU& G, const std::vector<std::uint32_t>& C) {
  if (!G.graph().is_maximal_clique(C)) throw Error(Errc::NotMaximal, "vertex set is not a maximal clique");
  const FieldCtx& f = G.field();
  CliqueDecomposition d;
  std::vector<Element> v2;
  for (auto v : C) {
    const Element a(v);
    if (G.square_in_subspace(a)) v2.push_back(a);
    else d.V1.push_back(a);
  }
  d.V2 = span(f, v2);
  d.W = span(f, d.V1);
  d.t = d.V2.dim();
  d.r = static_cast<std::uint32_t>(d.V1.size());
  if (cardinality(f, d.V2) != v2.size())
    throw Error(Errc::StructureViolation, "square-in-U part is not an F_q-subspace");
  if (d.W.dim() != d.r) throw Error(Errc::StructureViolation, "remaining vertices are linearly dependent");
  std::vector<Element> all = d.W.basis();
  all.insert(all.end(), d.V2.basis().begin(), d.V2.basis().end());
  if (span(f, all).dim() != d.W.dim() + d.V2.dim())
    throw Error(Errc::StructureViolation, "span of the outer part meets the inner subspace");
  const std::uint32_t dU = G.subspace().dim();
  const bool counts = d.t == 0 ? d.r <= dU + 1 : d.r + d.t <= dU;
  if (!counts) throw Error(Errc::StructureViolation, "(t, r) violates the counting constraint");
  return d;
}

}  // namespace paleyvec
