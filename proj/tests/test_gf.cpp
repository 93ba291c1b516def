#include <gtest/gtest.h>

#include <random>
#include <set>

#include "paleyvec/gf.hpp"

using namespace paleyvec;

namespace {

// Schoolbook multiplication of coordinate vectors over F_p, reduced by the
// monic extension modulus. Only valid for m = 1.
Element naive_mul(const FieldCtx& f, Element a, Element b) {
  const std::uint32_t p = f.p(), n = f.n();
  const auto ca = f.coords(a), cb = f.coords(b);
  std::vector<std::uint64_t> prod(2 * n, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p;
  const auto& mod = f.ext_modulus();
  for (std::uint32_t k = 2 * n - 1; k >= n; --k) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    for (std::uint32_t j = 0; j <= n; ++j) prod[k - n + j] = (prod[k - n + j] + (p - c) * mod[j]) % p;
  }
  std::vector<std::uint32_t> out(n);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return f.from_coords(out);
}

void expect_field_axioms(const FieldCtx& f, std::size_t samples) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint32_t> pick(0, f.order() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const Element a(pick(rng)), b(pick(rng)), c(pick(rng));
    ASSERT_EQ(f.add(a, b), f.add(b, a));
    ASSERT_EQ(f.mul(a, b), f.mul(b, a));
    ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
    ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    ASSERT_EQ(f.add(a, f.neg(a)), f.zero());
    ASSERT_EQ(f.sub(f.add(a, b), b), a);
    if (a.idx != 0) {
      ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
    }
  }
}

}  // namespace

TEST(Field, RejectsBadParameters) {
  EXPECT_THROW(FieldCtx::build(4, 1, 2), Error);
  try {
    FieldCtx::build(4, 1, 2);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPrime);
  }
  try {
    FieldCtx::build(2, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegreeOutOfRange);
  }
  try {
    FieldCtx::build(2, 1, 20, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(Field, LeastIrreducibleModuli) {
  EXPECT_EQ(FieldCtx::build(2, 1, 2).ext_modulus(), (detail::Poly{1, 1, 1}));
  EXPECT_EQ(FieldCtx::build(2, 1, 3).ext_modulus(), (detail::Poly{1, 0, 1, 1}));  // x^3 + x^2 + 1
  EXPECT_EQ(FieldCtx::build(3, 1, 2).ext_modulus(), (detail::Poly{1, 0, 1}));
  EXPECT_EQ(FieldCtx::build(5, 1, 2).ext_modulus(), (detail::Poly{1, 1, 1}));
  const auto f = FieldCtx::build(2, 2, 2);
  EXPECT_EQ(f.base_modulus(), (detail::Poly{1, 1, 1}));
  EXPECT_EQ(f.q(), 4u);
  EXPECT_EQ(f.order(), 16u);
}

TEST(Field, F9ByHand) {
  const auto f = FieldCtx::build(3, 1, 2);
  const Element i = f.basis_vector(1);
  EXPECT_EQ(i.idx, 3u);
  EXPECT_EQ(f.mul(i, i), Element(2));  // i^2 = -1
  EXPECT_EQ(f.trace(f.one()), Element(2));
  EXPECT_EQ(f.trace(i), f.zero());
  EXPECT_EQ(f.to_string(i), "y");
  EXPECT_EQ(f.to_string(Element(7)), "2y + 1");
  EXPECT_EQ(f.to_string(f.zero()), "0");
  EXPECT_EQ(f.spec_string(), "3^1^2");
}

TEST(Field, MultiplicationMatchesSchoolbook) {
  for (auto [p, n] : {std::pair{2u, 3u}, {2u, 6u}, {3u, 3u}, {5u, 2u}, {7u, 2u}, {3u, 5u}}) {
    const auto f = FieldCtx::build(p, 1, n);
    for (std::uint32_t a = 0; a < f.order(); a += 1 + f.order() / 97)
      for (std::uint32_t b = 0; b < f.order(); ++b)
        ASSERT_EQ(f.mul(Element(a), Element(b)), naive_mul(f, Element(a), Element(b))) << p << "^" << n;
  }
}

TEST(Field, AxiomsAcrossTowers) {
  for (auto [p, m, n] : {std::tuple{2u, 2u, 2u}, {2u, 2u, 3u}, {3u, 2u, 2u}, {2u, 3u, 2u}, {5u, 1u, 3u}, {2u, 1u, 10u}})
    expect_field_axioms(FieldCtx::build(p, m, n), 2000);
}

TEST(Field, PolynomialPathAboveTableBudget) {
  const auto f = FieldCtx::build(3, 1, 13);
  ASSERT_FALSE(f.has_tables());
  expect_field_axioms(f, 200);
  std::mt19937 rng(3);
  for (int s = 0; s < 20; ++s) {
    const Element a(rng() % f.order());
    EXPECT_EQ(f.frobenius(a, f.n()), a);
    EXPECT_EQ(f.mul(a, f.basis_vector(1)), naive_mul(f, a, f.basis_vector(1)));
  }
}

TEST(Field, GeneratorIsLeastPrimitive) {
  for (auto [p, m, n] : {std::tuple{2u, 1u, 4u}, {3u, 1u, 2u}, {5u, 1u, 2u}, {2u, 2u, 2u}, {3u, 1u, 4u}}) {
    const auto f = FieldCtx::build(p, m, n);
    const std::uint32_t N = f.order() - 1;
    auto order_of = [&](Element a) {
      Element x = a;
      std::uint32_t k = 1;
      while (x != f.one()) x = f.mul(x, a), ++k;
      return k;
    };
    const Element g = f.generator();
    EXPECT_EQ(order_of(g), N);
    for (std::uint32_t v = 1; v < g.idx; ++v) EXPECT_LT(order_of(Element(v)), N);
  }
}

TEST(Field, FrobeniusAndTrace) {
  const auto f = FieldCtx::build(3, 1, 4);
  std::vector<std::uint32_t> fiber(f.q(), 0);
  for (std::uint32_t v = 0; v < f.order(); ++v) {
    const Element a(v);
    const Element t = f.trace(a);
    ASSERT_TRUE(f.in_base(t));
    ++fiber[t.idx];
    const Element b(f.order() - 1 - v);
    ASSERT_EQ(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
    ASSERT_EQ(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
    ASSERT_EQ(f.trace(f.add(a, b)), f.add(t, f.trace(b)));
  }
  for (auto c : fiber) EXPECT_EQ(c, 27u);  // onto F_q, each fiber of size q^{n-1}
}

TEST(Field, SubfieldsOfBothFrobenii) {
  const auto f = FieldCtx::build(2, 2, 3);  // F_4 inside F_64
  EXPECT_EQ(f.subfield_elements(1).size(), 4u);
  EXPECT_EQ(f.subfield_elements(3).size(), 64u);
  for (std::uint32_t v = 0; v < 4; ++v) EXPECT_TRUE(f.in_base(Element(v)));
  std::uint32_t in_f8 = 0, in_f2 = 0;
  for (std::uint32_t v = 0; v < f.order(); ++v) {
    in_f8 += f.frobenius_prime(Element(v), 3) == Element(v);
    in_f2 += f.frobenius_prime(Element(v), 1) == Element(v);
  }
  EXPECT_EQ(in_f8, 8u);
  EXPECT_EQ(in_f2, 2u);
  EXPECT_THROW(f.subfield_elements(2), Error);
}

TEST(Field, SquaresAndCharacter) {
  const auto f = FieldCtx::build(5, 1, 2);
  std::set<std::uint32_t> squares;
  for (std::uint32_t v = 0; v < f.order(); ++v) squares.insert(f.mul(Element(v), Element(v)).idx);
  for (std::uint32_t v = 0; v < f.order(); ++v) EXPECT_EQ(f.is_square(Element(v)), squares.count(v) == 1);
  EXPECT_EQ(squares.size(), 13u);
  EXPECT_EQ(f.quadratic_character(Element(0)), 0);
  EXPECT_EQ(f.quadratic_character(Element(1)), 1);
  EXPECT_EQ(f.quadratic_character(Element(2)), -1);
  EXPECT_EQ(f.quadratic_character(Element(4)), 1);
  EXPECT_THROW(f.quadratic_character(f.basis_vector(1)), Error);
  // every element of F_5 is a square in F_25, but 2 is not a square in F_5
  EXPECT_TRUE(f.is_square(Element(2)));
  EXPECT_FALSE(f.is_square_in(Element(2), 1));
  EXPECT_THROW(FieldCtx::build(2, 1, 3).quadratic_character(Element(1)), Error);
}

TEST(Field, CoordinatesRoundTrip) {
  const auto f = FieldCtx::build(3, 2, 2);
  for (std::uint32_t v = 0; v < f.order(); ++v) EXPECT_EQ(f.from_coords(f.coords(Element(v))).idx, v);
  EXPECT_EQ(f.to_string(Element(3)), "x");
  EXPECT_EQ(f.to_string(f.basis_vector(1)), "y");
}
