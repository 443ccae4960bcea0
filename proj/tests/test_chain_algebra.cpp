#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "pseudodet/algebra.hpp"

using namespace pseudodet;

namespace {

// (Z/q)[U]/(U^2) on basis {1, U}.
AlgebraPtr dual_numbers(Mod mod) {
  return ChainAlgebra::make(mod, {"1", "U"},
                            {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}}, {1, 0});
}

// Split product k x k on orthogonal idempotent basis {e0, e1}.
AlgebraPtr split_pair(Mod mod) {
  return ChainAlgebra::make(mod, {"e0", "e1"},
                            {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}}, {1, 1});
}

std::set<Row> enumerate_span(const AlgebraPtr& alg, const ModMatrix& basis) {
  std::set<Row> out;
  Row c(basis.rows.size(), 0);
  while (true) {
    out.insert(row_times_matrix(alg->mod, c, basis));
    size_t i = 0;
    while (i < c.size() && ++c[i] == alg->mod.q) c[i++] = 0;
    if (i == c.size()) break;
  }
  return out;
}

}  // namespace

TEST_CASE("table verification rejects broken algebras") {
  Mod z4 = Mod::make(2, 2);
  // Unit law broken: unit declared as 2.
  REQUIRE_THROWS_AS(
      ChainAlgebra::make(z4, {"1"}, {{{1}}}, {2}),
      error);
  // Non-associative table: x*x = y, y*y = y, x*y = 0 gives (xx)y != x(xy).
  REQUIRE_THROWS_AS(
      ChainAlgebra::make(z4, {"1", "x", "y"},
                         {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                          {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}},
                          {{0, 0, 1}, {0, 0, 0}, {0, 0, 1}}},
                         {1, 0, 0}),
      error);
  // Non-commutative table is rejected before associativity.
  REQUIRE_THROWS_AS(
      ChainAlgebra::make(z4, {"1", "x"},
                         {{{1, 0}, {0, 1}}, {{1, 0}, {0, 0}}}, {1, 0}),
      error);
}

TEST_CASE("element arithmetic and inverses") {
  Mod z4 = Mod::make(2, 2);
  auto a = dual_numbers(z4);
  auto u = algebra_element(a, {0, 1});
  REQUIRE((u * u).is_zero());
  REQUIRE((algebra_unit(a) + u) * (algebra_unit(a) - u) == algebra_unit(a));

  // Units of (Z/4)[U]/(U^2) are exactly a + bU with a odd: 8 of 16.
  int units = 0;
  for (int64_t x = 0; x < 4; ++x)
    for (int64_t y = 0; y < 4; ++y) {
      auto e = algebra_element(a, {x, y});
      bool inv = is_unit(e);
      REQUIRE(inv == (x % 2 == 1));
      if (inv) {
        REQUIRE(invert(e) * e == algebra_unit(a));
        ++units;
      }
    }
  REQUIRE(units == 8);

  REQUIRE(element_pow(u + algebra_unit(a), 2) ==
          algebra_unit(a) + scale(2, u));
}

TEST_CASE("adjoin_quadratic_root examples") {
  SECTION("(Z/4)[a]/(a^2), rank 2") {
    auto z4 = scalar_algebra(Mod::make(2, 2));
    auto ext = adjoin_quadratic_root(z4, algebra_zero(z4), algebra_zero(z4));
    REQUIRE(ext.algebra->rank == 2);
    REQUIRE((ext.root * ext.root).is_zero());
  }
  SECTION("F2 with t = d = 1 gives the field with four elements") {
    auto f2 = scalar_algebra(Mod::make(2, 1));
    auto ext = adjoin_quadratic_root(f2, algebra_scalar(f2, 1),
                                     algebra_scalar(f2, 1));
    REQUIRE(ext.algebra->rank == 2);
    // a^2 = a + 1.
    REQUIRE(ext.root * ext.root == ext.root + algebra_unit(ext.algebra));
    // No zero divisors among the 16 products of nonzero elements.
    for (int64_t x = 0; x < 2; ++x)
      for (int64_t y = 0; y < 2; ++y)
        for (int64_t z = 0; z < 2; ++z)
          for (int64_t w = 0; w < 2; ++w) {
            auto e1 = algebra_element(ext.algebra, {x, y});
            auto e2 = algebra_element(ext.algebra, {z, w});
            if (!e1.is_zero() && !e2.is_zero()) REQUIRE(!(e1 * e2).is_zero());
          }
  }
  SECTION("Z/9 with t = 2, d = 1: (a - 1)^2 = 0") {
    auto z9 = scalar_algebra(Mod::make(3, 2));
    auto ext = adjoin_quadratic_root(z9, algebra_scalar(z9, 2),
                                     algebra_scalar(z9, 1));
    auto am1 = ext.root - algebra_unit(ext.algebra);
    REQUIRE((am1 * am1).is_zero());
  }
  SECTION("root satisfies its quadratic and embed is a verified hom") {
    auto z9 = scalar_algebra(Mod::make(3, 2));
    auto t = algebra_scalar(z9, 5);
    auto d = algebra_scalar(z9, 7);
    auto ext = adjoin_quadratic_root(z9, t, d);
    auto lhs = ext.root * ext.root - ext.embed.apply(t) * ext.root +
               ext.embed.apply(d);
    REQUIRE(lhs.is_zero());
  }
}

TEST_CASE("subalgebra_closure examples") {
  Mod z4 = Mod::make(2, 2);
  auto a = dual_numbers(z4);

  SECTION("no generators: span of the unit") {
    auto s = subalgebra_closure(a, {});
    REQUIRE(s.rows == std::vector<Row>{{1, 0}});
  }
  SECTION("generator U fills the rank-2 module") {
    auto s = subalgebra_closure(a, {algebra_element(a, {0, 1})});
    REQUIRE(span_equal(s, ModMatrix::identity(z4, 2)));
  }
  SECTION("generator 2U gives span{1, 2U}, checked against brute force") {
    auto s = subalgebra_closure(a, {algebra_element(a, {0, 2})});
    REQUIRE(s.rows == std::vector<Row>{{1, 0}, {0, 2}});
    // Brute force: the span must be closed under all 8x8 products.
    auto span = enumerate_span(a, s);
    REQUIRE(span.size() == 8);
    for (const auto& x : span)
      for (const auto& y : span)
        REQUIRE(span.count(a->mul_coords(x, y)) == 1);
  }
  SECTION("closure output is multiplicatively closed on random generators") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<AlgebraElement> gens;
      for (int i = 0; i < 2; ++i)
        gens.push_back(algebra_element(
            a, {int64_t(rng() % 4), int64_t(rng() % 4)}));
      auto s = subalgebra_closure(a, gens);
      auto hf = howell_form(s);
      for (const auto& x : s.rows)
        for (const auto& y : s.rows)
          REQUIRE(span_contains(hf, a->mul_coords(x, y)));
      for (const auto& g : gens) REQUIRE(span_contains(hf, g.coords));
      REQUIRE(span_contains(hf, a->unit));
    }
  }
}

TEST_CASE("annihilator_of_quotient examples") {
  Mod z4 = Mod::make(2, 2);
  auto a = dual_numbers(z4);
  auto alpha = algebra_element(a, {0, 1});

  SECTION("S = span{1}: quotient is free of rank one, annihilator = 0") {
    ModMatrix s = howell_form(ModMatrix::make(z4, {{1, 0}})).h;
    auto ann = annihilator_of_quotient(a, s, alpha);
    REQUIRE(ann.rows.empty());
  }
  SECTION("S = span{1, 2U}: annihilator contains 2, matches brute force") {
    ModMatrix s = howell_form(ModMatrix::make(z4, {{1, 0}, {0, 2}})).h;
    auto ann = annihilator_of_quotient(a, s, alpha);
    REQUIRE(!ann.rows.empty());
    auto ann_hf = howell_form(ann);
    REQUIRE(span_contains(ann_hf, {2, 0}));
    // Brute force over the 8 elements of S.
    auto s_hf = howell_form(s);
    std::set<Row> expected;
    for (const auto& x : enumerate_span(a, s))
      if (span_contains(s_hf, a->mul_coords(x, alpha.coords)))
        expected.insert(x);
    REQUIRE(enumerate_span(a, ann) == expected);
  }
  SECTION("alpha inside S: annihilator is all of S") {
    ModMatrix s = howell_form(ModMatrix::identity(z4, 2)).h;
    auto ann = annihilator_of_quotient(a, s, alpha);
    REQUIRE(span_equal(ann, s));
  }
  SECTION("cyclicity violation raises QuotientNotCyclic") {
    ModMatrix s = howell_form(ModMatrix::make(z4, {{1, 0}})).h;
    auto beta = algebra_element(a, {0, 2});
    try {
      annihilator_of_quotient(a, s, beta);
      FAIL("expected QuotientNotCyclic");
    } catch (const error& e) {
      REQUIRE(e.code() == errc::quotient_not_cyclic);
    }
  }
}

TEST_CASE("annihilator brute-force sweep over rank-2 algebras over Z/4") {
  // For every subring S of the dual numbers containing 1 and every alpha
  // with S + S*alpha full, the annihilator matches elementwise brute force.
  Mod z4 = Mod::make(2, 2);
  auto a = dual_numbers(z4);
  for (int64_t gx = 0; gx < 4; ++gx)
    for (int64_t gy = 0; gy < 4; ++gy) {
      ModMatrix s = subalgebra_closure(a, {algebra_element(a, {gx, gy})});
      auto s_hf = howell_form(s);
      for (int64_t ax = 0; ax < 4; ++ax)
        for (int64_t ay = 0; ay < 4; ++ay) {
          auto alpha = algebra_element(a, {ax, ay});
          std::vector<Row> stacked = s.rows;
          for (const auto& b : s.rows)
            stacked.push_back(a->mul_coords(b, alpha.coords));
          bool cyclic = span_equal(ModMatrix{z4, 2, stacked},
                                   ModMatrix::identity(z4, 2));
          if (!cyclic) continue;
          auto ann = annihilator_of_quotient(a, s, alpha);
          std::set<Row> expected;
          for (const auto& x : enumerate_span(a, s))
            if (span_contains(s_hf, a->mul_coords(x, alpha.coords)))
              expected.insert(x);
          REQUIRE(enumerate_span(a, ann) == expected);
        }
    }
}

TEST_CASE("free_basis_of_span") {
  Mod z4 = Mod::make(2, 2);
  SECTION("cyclic module with unit content is free on one generator") {
    auto b = free_basis_of_span(ModMatrix::make(z4, {{2, 1}}));
    REQUIRE(b.has_value());
    REQUIRE(b->rows.size() == 1);
  }
  SECTION("(2Z/4)^2 is not free") {
    REQUIRE(!free_basis_of_span(ModMatrix::make(z4, {{2, 0}, {0, 2}})).has_value());
  }
  SECTION("full module") {
    auto b = free_basis_of_span(ModMatrix::identity(z4, 3));
    REQUIRE(b.has_value());
    REQUIRE(b->rows.size() == 3);
  }
}

TEST_CASE("idempotents and components") {
  Mod z2 = Mod::make(2, 1);
  auto a = split_pair(z2);

  SECTION("power_idempotent trivial cases") {
    auto z4 = scalar_algebra(Mod::make(2, 2));
    REQUIRE(power_idempotent(algebra_scalar(z4, 2)).is_zero());
    REQUIRE(power_idempotent(algebra_scalar(z4, 3)) == algebra_unit(z4));
    REQUIRE(power_idempotent(algebra_zero(z4)).is_zero());
  }
  SECTION("power_idempotent separates the split pair") {
    auto x = algebra_element(a, {1, 0});
    REQUIRE(power_idempotent(x) == x);
    // (1, 0) + (0, 0): unit in first factor only.
    auto y = algebra_element(a, {1, 0});
    REQUIRE(power_idempotent(y * y + y).is_zero());  // y^2 + y = 0 in char 2
  }
  SECTION("component cut of the split pair") {
    auto e = algebra_element(a, {1, 0});
    auto comp = idempotent_component(a, e);
    REQUIRE(comp.algebra->rank == 1);
    auto x = algebra_element(a, {1, 1});
    auto px = component_project(comp, x);
    REQUIRE(px == algebra_unit(comp.algebra));
    REQUIRE(component_lift(comp, px) == e);
  }
  SECTION("component multiplication table is induced correctly over Z/9") {
    // Z/9 x Z/9 with idempotent (1, 0).
    auto s = split_pair(Mod::make(3, 2));
    auto e = algebra_element(s, {1, 0});
    auto comp = idempotent_component(s, e);
    REQUIRE(comp.algebra->rank == 1);
    auto five = component_project(comp, algebra_element(s, {5, 7}));
    auto two = component_project(comp, algebra_element(s, {2, 4}));
    REQUIRE(five * two == component_project(comp, algebra_element(s, {10, 28})));
  }
}

TEST_CASE("algebra homs") {
  auto z4 = scalar_algebra(Mod::make(2, 2));
  auto z2 = scalar_algebra(Mod::make(2, 1));
  auto red = AlgebraHom::make(z4, z2, ModMatrix::make(Mod::make(2, 1), {{1}}));
  REQUIRE(red.apply(algebra_scalar(z4, 3)) == algebra_scalar(z2, 1));
  REQUIRE(red.apply(algebra_scalar(z4, 2)).is_zero());

  // Multiplicativity violations are rejected: map 1 -> 1 on split basis
  // sending both idempotents to 1 fails e0*e1 = 0.
  auto a = split_pair(Mod::make(2, 1));
  REQUIRE_THROWS_AS(
      AlgebraHom::make(a, z2, ModMatrix::make(Mod::make(2, 1), {{1}, {1}})),
      error);
}
