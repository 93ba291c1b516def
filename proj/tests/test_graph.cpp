#include <gtest/gtest.h>

#include <random>
#include <set>

#include "paleyvec/graph.hpp"

using namespace paleyvec;

namespace {

std::size_t omega(const FieldCtx& f, const Subspace& U, OmegaOptions o = {}) {
  return clique_number_exact(GraphGU::build(f, U), o).size;
}

Subspace random_subspace(const FieldCtx& f, std::uint32_t d, std::mt19937& rng) {
  std::vector<Element> g;
  Subspace U;
  while (U.dim() < d) {
    g.push_back(Element(rng() % f.order()));
    U = span(f, g);
  }
  return U;
}

}  // namespace

TEST(GraphGU, AdjacencyMatchesDefinition) {
  for (auto [p, m, n] : {std::tuple{3u, 1u, 3u}, {2u, 1u, 5u}, {2u, 2u, 2u}}) {
    const auto f = FieldCtx::build(p, m, n);
    std::mt19937 rng(n);
    for (std::uint32_t d = 1; d < n; ++d) {
      const Subspace U = random_subspace(f, d, rng);
      const auto G = GraphGU::build(f, U);
      ASSERT_TRUE(G.graph().is_symmetric());
      for (std::uint32_t a = 0; a < f.order(); ++a)
        for (std::uint32_t b = 0; b < f.order(); ++b) {
          const bool expected = a != b && contains(f, U, f.mul(Element(a), Element(b)));
          ASSERT_EQ(G.graph().has_edge(a, b), expected);
        }
    }
  }
}

TEST(GraphGU, BuildErrors) {
  const auto f = FieldCtx::build(2, 1, 4);
  EXPECT_THROW(GraphGU::build(f, Subspace{}), Error);
  try {
    GraphGU::build(f, trace_zero_hyperplane(f), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(GraphGU, F4WithPrimeSubfield) {
  const auto f = FieldCtx::build(2, 1, 2);
  const Subspace U = span(f, {f.one()});
  const auto G = GraphGU::build(f, U);
  const auto cliques = enumerate_maximal_cliques(G);
  const std::set<std::vector<std::uint32_t>> got(cliques.begin(), cliques.end());
  EXPECT_EQ(got, (std::set<std::vector<std::uint32_t>>{{0, 1}, {0, 2, 3}}));
  const auto dec = decompose_clique(G, {0, 2, 3});
  EXPECT_EQ(dec.t, 0u);
  EXPECT_EQ(dec.r, 2u);
  EXPECT_EQ(dec.V1, (std::vector<Element>{Element(2), Element(3)}));
  EXPECT_EQ(dec.V2.dim(), 0u);
  EXPECT_THROW(decompose_clique(G, {0, 2}), Error);
  EXPECT_EQ(omega(f, U), 3u);
}

TEST(GraphGU, EveryMaximalCliqueContainsZeroInF9) {
  const auto f = FieldCtx::build(3, 1, 2);
  for (const auto& h : all_hyperplanes(f)) {
    const auto G = GraphGU::build(f, h.space);
    for (const auto& C : enumerate_maximal_cliques(G)) {
      EXPECT_EQ(C.front(), 0u);
      EXPECT_NO_THROW(decompose_clique(G, C));
    }
  }
}

TEST(GraphGU, ExactAgreesWithMaximalCliqueOracle) {
  for (auto [p, m, n] : {std::tuple{2u, 1u, 4u}, {3u, 1u, 3u}, {2u, 2u, 2u}, {5u, 1u, 2u}, {2u, 1u, 6u}, {3u, 1u, 4u}}) {
    const auto f = FieldCtx::build(p, m, n);
    std::mt19937 rng(p * 100 + n);
    for (std::uint32_t d = 1; d < n; ++d)
      for (int k = 0; k < 4; ++k) {
        const Subspace U = random_subspace(f, d, rng);
        const auto G = GraphGU::build(f, U);
        std::size_t largest = 0;
        for_each_maximal_clique(G.graph(), [&](const auto& C) { largest = std::max(largest, C.size()); });
        const auto r = clique_number_exact(G);
        ASSERT_EQ(r.size, largest) << U.to_string();
        EXPECT_TRUE(G.graph().is_clique(r.witness));
        OmegaOptions plain;
        plain.use_structure_rule = false;
        plain.seed_lower_bound = false;
        const auto r2 = clique_number_exact(G, plain);
        EXPECT_EQ(r2.size, r.size);
        EXPECT_EQ(r2.witness, r.witness);
      }
  }
}

TEST(GraphGU, IsomorphismInvarianceUnderSquareScaling) {
  const auto f = FieldCtx::build(3, 1, 4);
  std::mt19937 rng(17);
  for (std::uint32_t d = 1; d < 4; ++d) {
    const Subspace U = random_subspace(f, d, rng);
    const auto w = omega(f, U);
    for (int k = 0; k < 20; ++k) {
      const Element a(1 + rng() % (f.order() - 1));
      EXPECT_EQ(omega(f, scale(f, U, f.mul(a, a))), w);
    }
  }
}

TEST(GraphGU, MonotoneUnderInclusion) {
  const auto f = FieldCtx::build(2, 1, 6);
  std::mt19937 rng(23);
  for (int k = 0; k < 15; ++k) {
    const Subspace small = random_subspace(f, 1 + k % 3, rng);
    std::vector<Element> g = small.basis();
    g.push_back(Element(rng() % f.order()));
    g.push_back(Element(rng() % f.order()));
    const Subspace big = span(f, g);
    if (big.dim() >= f.n()) continue;
    EXPECT_LE(omega(f, small), omega(f, big));
  }
}

TEST(GraphGU, LowerBoundsHold) {
  for (auto [p, n] : {std::pair{3u, 3u}, {5u, 2u}, {7u, 2u}, {3u, 4u}}) {
    const auto f = FieldCtx::build(p, 1, n);
    std::mt19937 rng(p + n);
    for (std::uint32_t d = 1; d < n; ++d)
      for (int k = 0; k < 5; ++k) {
        const Subspace U = random_subspace(f, d, rng);
        const auto w = omega(f, U);
        EXPECT_GE(w, omega_lower_bound(f, U));
        EXPECT_EQ(w == 3, !contains_nonzero_square(f, U) || (f.q() <= 3 && d == 1));
      }
  }
}

TEST(GraphGU, WorkersAndRuleDoNotChangeOmega) {
  const auto f = FieldCtx::build(3, 1, 5);
  const Subspace U = trace_zero_hyperplane(f);
  const auto G = GraphGU::build(f, U);
  OmegaOptions a, b, c;
  b.workers = 4;
  c.workers = 4;
  c.use_structure_rule = false;
  const auto ra = clique_number_exact(G, a), rb = clique_number_exact(G, b), rc = clique_number_exact(G, c);
  EXPECT_EQ(ra.size, 10u);  // 3^2 + 1 for odd n
  EXPECT_EQ(rb.size, ra.size);
  EXPECT_EQ(rc.size, ra.size);
  EXPECT_EQ(rb.witness, ra.witness);
}
