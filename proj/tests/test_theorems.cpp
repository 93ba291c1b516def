#include <gtest/gtest.h>

#include <cmath>

#include "paleyvec/sweep.hpp"

using namespace paleyvec;

TEST(OmegaQN, Values) {
  EXPECT_EQ(omega_qn(2, 3), 4u);
  EXPECT_EQ(omega_qn(2, 5), 6u);
  EXPECT_EQ(omega_qn(2, 6), 8u);
  EXPECT_EQ(omega_qn(3, 3), 4u);
  EXPECT_EQ(omega_qn(3, 4), 9u);
  EXPECT_EQ(omega_qn(2, 7), 9u);
}

TEST(HyperplaneTable, Cases) {
  EXPECT_EQ(hyperplane_omega(2, 4, 0), 5u);
  EXPECT_EQ(hyperplane_omega(2, 6, 0), 8u);
  EXPECT_EQ(hyperplane_omega(4, 3, 0), 5u);
  EXPECT_EQ(hyperplane_omega(3, 3, 0), 4u);
  EXPECT_EQ(hyperplane_omega(5, 2, 1), 3u);
  EXPECT_EQ(hyperplane_omega(5, 2, -1), 5u);
  EXPECT_EQ(hyperplane_omega(3, 2, 1), 3u);
  EXPECT_EQ(hyperplane_omega(3, 2, -1), 3u);
  EXPECT_EQ(hyperplane_omega(3, 4, -1), 9u);
  EXPECT_EQ(hyperplane_omega(3, 4, 1), 5u);
}

TEST(Kappa, SmallFieldDominatedBySubfield) {
  const Kappa k{2, 2, 2};
  EXPECT_TRUE(k.subfield_term_dominates());
  EXPECT_EQ(k.floor(), 2u);
  EXPECT_TRUE(k.at_least(4));
  EXPECT_FALSE(k.at_least(5));
}

TEST(Kappa, SumProductTermForLargeDimension) {
  const Kappa k{1, 8, 4};  // 7 + 7/64
  EXPECT_FALSE(k.subfield_term_dominates());
  EXPECT_EQ(k.floor(), 7u);
  EXPECT_NEAR(k.approx(), 7.0 + 7.0 / 64.0, 1e-12);
  const double bound = std::pow(4.0, 7.0 + 7.0 / 64.0);
  EXPECT_TRUE(k.at_least(static_cast<std::uint64_t>(std::floor(bound))));
  EXPECT_FALSE(k.at_least(static_cast<std::uint64_t>(std::floor(bound)) + 1));
}

TEST(Kappa, ExactTieBreakNearThreshold) {
  // e = 8D - 7d = 1: q^4 >= 128 decides
  EXPECT_FALSE((Kappa{1, 1, 2}.subfield_term_dominates()));
  EXPECT_FALSE((Kappa{1, 1, 3}.subfield_term_dominates()));
  EXPECT_TRUE((Kappa{1, 1, 4}.subfield_term_dominates()));
  EXPECT_TRUE((Kappa{9, 10, 2}.subfield_term_dominates()));  // e = 2, 2^8 >= 2^7
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 9u})
    for (std::uint32_t d = 1; d <= 12; ++d)
      for (std::uint32_t D = 1; D <= d; ++D) {
        const Kappa k{D, d, q};
        EXPECT_EQ(k.floor(), static_cast<std::uint32_t>(std::floor(k.approx() + 1e-12)));
      }
}

TEST(Predict, Examples) {
  const auto f25 = FieldCtx::build(5, 1, 2);
  for (const auto& h : all_hyperplanes(f25)) {
    const auto p = predict_omega(f25, h.space);
    ASSERT_EQ(p.kind, PredictionKind::ExactValue);
    EXPECT_EQ(*p.value(), s_invariant(f25, h.space) == 1 ? 3u : 5u);
  }
  const auto f9 = FieldCtx::build(3, 1, 2);
  int square_free = 0;
  for_each_subspace(f9, 1, [&](const Subspace& U) {
    const auto p = predict_omega(f9, U);
    EXPECT_EQ(*p.value(), 3u);
    square_free += !contains_nonzero_square(f9, U);
  });
  EXPECT_EQ(square_free, 2);
  try {
    predict_omega(f9, full_space(f9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionOutOfRange);
  }
}

TEST(Predict, CandidateSetsContainExactValues) {
  for (const auto& f : field_grid(4, 6, 64)) {
    OmegaEngine eng;
    for (std::uint32_t d = 1; d < f.n(); ++d)
      for (const auto& o : subspace_orbits(f, d)) {
        const auto p = predict_omega(f, o.rep);
        const auto w = eng.omega(f, o.rep);
        EXPECT_TRUE(p.admits(w)) << instance_tag(f, o.rep) << " " << p.to_string() << " vs " << w;
        EXPECT_LE(p.lo, w);
        EXPECT_GE(p.hi, w);
      }
  }
}

TEST(Corollary, QPowerExamples) {
  const auto f8 = FieldCtx::build(2, 1, 3);
  OmegaEngine eng;
  for_each_subspace(f8, 2, [&](const Subspace& U) {
    const auto G = GraphGU::build(f8, U);
    const auto w = eng.solve(G).size;
    EXPECT_EQ(w, 4u);
    EXPECT_TRUE(check_corollary_q_power(G, w).ok());
  });
  const auto f16 = FieldCtx::build(2, 1, 4);
  const Subspace F4 = span(f16, f16.subfield_elements(2));
  const auto G = GraphGU::build(f16, F4);
  EXPECT_EQ(eng.solve(G).size, 4u);
  EXPECT_TRUE(check_corollary_q_power(G, 4).ok());
  // a wrong omega is reported
  EXPECT_FALSE(check_corollary_q_power(G, 3).ok());
  const auto f27 = FieldCtx::build(3, 1, 3);
  for_each_subspace(f27, 2, [&](const Subspace& U) {
    const auto H = GraphGU::build(f27, U);
    const auto w = eng.solve(H).size;
    EXPECT_LE(w, 4u);
    EXPECT_TRUE(check_corollary_q_power(H, w).ok());
  });
}

TEST(Bounds, DetectsInjectedViolation) {
  const auto f = FieldCtx::build(3, 1, 4);
  const Subspace U = trace_zero_hyperplane(f);
  OmegaEngine eng;
  const auto w = eng.omega(f, U);
  EXPECT_TRUE(check_bounds(f, U, w).ok());
  EXPECT_FALSE(check_bounds(f, U, 2).ok());
  EXPECT_FALSE(check_bounds(f, U, 100).ok());
}

TEST(SumProduct, F4Example) {
  const auto f = FieldCtx::build(2, 1, 2);
  const auto r = sum_product_check(f, {Element(0), Element(1)}, {Element(2)});
  EXPECT_EQ(r.lhs, 4u);
  EXPECT_NEAR(r.rhs, std::pow(2.0, 0.75), 1e-12);
  EXPECT_TRUE(r.pass);
  try {
    sum_product_check(f, {Element(1)}, {Element(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PreconditionViolated);
  }
  EXPECT_THROW(sum_product_check(f, {Element(0), Element(1)}, {Element(1)}), Error);
}

TEST(SumProduct, SubfieldAvoidingSetInF64) {
  const auto f = FieldCtx::build(2, 1, 6);
  std::vector<Element> S;
  for (std::uint32_t v = 2; S.size() < 4; ++v)
    if (!f.in_subfield(Element(v), 2) && !f.in_subfield(Element(v), 3)) S.push_back(Element(v));
  ASSERT_FALSE(inside_proper_subfield(f, S));
  const auto r = sum_product_check(f, S, S);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(static_cast<double>(r.lhs), r.rhs);
}

TEST(SumProduct, TowerSubfieldsAreDetected) {
  const auto f = FieldCtx::build(2, 2, 2);  // F_16 over F_4
  // {0, 1} spans the prime field F_2, a proper subfield not containing F_4
  EXPECT_TRUE(inside_proper_subfield(f, {Element(1)}));
  EXPECT_TRUE(inside_proper_subfield(f, {Element(2), Element(3)}));
  EXPECT_FALSE(inside_proper_subfield(f, {Element(4)}));
}

TEST(Census, ClassSizes) {
  for (auto [p, n, size] : {std::tuple{3u, 2u, 2u}, {5u, 2u, 3u}, {3u, 4u, 20u}}) {
    const auto c = isomorphism_class_census(FieldCtx::build(p, 1, n));
    EXPECT_EQ(c.expected, size);
    EXPECT_EQ(c.plus, size);
    EXPECT_EQ(c.minus, size);
    EXPECT_TRUE(c.pass);
  }
  EXPECT_THROW(isomorphism_class_census(FieldCtx::build(3, 1, 3)), Error);
}

TEST(Orbits, SizesCoverEverySubspace) {
  for (const auto& f : field_grid(5, 6, 125))
    for (std::uint32_t d = 1; d < f.n(); ++d) {
      std::uint64_t total = 0;
      for (const auto& o : subspace_orbits(f, d)) total += o.size;
      EXPECT_EQ(total, gaussian_binomial(f.q(), f.n(), d)) << field_tag(f) << " d=" << d;
    }
}
