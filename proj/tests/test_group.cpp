#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pseudodet/group.hpp"
#include "pseudodet/group_ring.hpp"

using namespace pseudodet;

namespace {

GroupPtr s3() {
  // (0 1) and (0 1 2) on three points.
  return group_from_permutations({{1, 0, 2}, {1, 2, 0}});
}

}  // namespace

TEST_CASE("group_from_permutations examples") {
  REQUIRE(s3()->order == 6);
  REQUIRE(group_from_permutations({})->order == 1);
  REQUIRE(group_from_permutations({{1, 2, 3, 4, 5, 6, 0}})->order == 7);
  s3()->validate();

  SECTION("cap enforcement") {
    try {
      group_from_permutations({{1, 2, 3, 4, 5, 6, 0}}, 5);
      FAIL("expected GroupTooLarge");
    } catch (const error& e) {
      REQUIRE(e.code() == errc::group_too_large);
    }
  }
  SECTION("non-bijections rejected") {
    REQUIRE_THROWS_AS(group_from_permutations({{0, 0, 1}}), error);
  }
}

TEST_CASE("group validation rejects malformed tables") {
  GroupModel g;
  g.order = 2;
  g.mult = {{0, 1}, {1, 1}};  // 1*1 = 1 breaks inverses
  g.inverse = {0, 1};
  REQUIRE_THROWS_AS(g.validate(), error);

  GroupModel h;
  h.order = 2;
  h.mult = {{0, 1}, {1, 0}};
  h.inverse = {0, 0};  // wrong inverse for element 1
  REQUIRE_THROWS_AS(h.validate(), error);
}

TEST_CASE("subgroup_elements examples") {
  auto g = s3();
  // Find a 3-cycle: an element of order 3.
  int three_cycle = -1;
  for (size_t i = 1; i < g->order; ++i)
    if (g->mul(int(i), int(i)) != 0 && g->mul(g->mul(int(i), int(i)), int(i)) == 0)
      three_cycle = int(i);
  REQUIRE(three_cycle >= 0);
  REQUIRE(subgroup_elements(*g, {three_cycle}).size() == 3);
  REQUIRE(subgroup_elements(*g, {}) == std::vector<int>{0});
  std::vector<int> all;
  for (size_t i = 0; i < g->order; ++i) all.push_back(int(i));
  REQUIRE(subgroup_elements(*g, all).size() == 6);
}

TEST_CASE("normal closure and normality") {
  auto g = s3();
  int transposition = -1, three_cycle = -1;
  for (size_t i = 1; i < g->order; ++i) {
    if (g->mul(int(i), int(i)) == 0) transposition = int(i);
    else three_cycle = int(i);
  }
  // A3 is normal; a transposition subgroup is not.
  auto a3 = subgroup_elements(*g, {three_cycle});
  std::vector<int> whole;
  for (size_t i = 0; i < g->order; ++i) whole.push_back(int(i));
  REQUIRE(is_subgroup_normal_in(*g, a3, whole));
  REQUIRE(!is_subgroup_normal_in(*g, subgroup_elements(*g, {transposition}), whole));
  REQUIRE(normal_closure(*g, {transposition}).size() == 6);
  REQUIRE(normal_closure(*g, {three_cycle}) == a3);
}

TEST_CASE("character validation") {
  auto g = s3();
  auto f4mod = Mod::make(2, 1);
  auto f2 = scalar_algebra(f4mod);
  int three_cycle = -1;
  for (size_t i = 1; i < g->order; ++i)
    if (g->mul(int(i), int(i)) != 0) three_cycle = int(i);
  auto a3 = subgroup_elements(*g, {three_cycle});

  SECTION("trivial character validates; inverses pair to 1") {
    auto chi = trivial_character(g, f2, a3);
    for (int x : chi.domain)
      REQUIRE(chi.at(x) * chi.at(g->inv(x)) == algebra_unit(f2));
  }
  SECTION("sign character on S3 over Z/9") {
    auto z9 = scalar_algebra(Mod::make(3, 2));
    std::vector<int> whole;
    std::map<int, AlgebraElement> values;
    for (size_t i = 0; i < g->order; ++i) {
      whole.push_back(int(i));
      bool is_transposition = g->mul(int(i), int(i)) == 0 && i != 0;
      values.emplace(int(i), algebra_scalar(z9, is_transposition ? -1 : 1));
    }
    auto chi = CharacterData::make(g, whole, values);
    for (int x : whole)
      for (int y : whole)
        REQUIRE(chi.at(g->mul(x, y)) == chi.at(x) * chi.at(y));
  }
  SECTION("non-multiplicative assignment is rejected") {
    auto z9 = scalar_algebra(Mod::make(3, 2));
    std::map<int, AlgebraElement> values;
    values.emplace(0, algebra_unit(z9));
    for (size_t i = 1; i < a3.size(); ++i)
      values.emplace(a3[i], algebra_scalar(z9, 2));  // 2*2 = 4 != value of product
    REQUIRE_THROWS_AS(CharacterData::make(g, a3, values), error);
  }
  SECTION("non-unit value is rejected") {
    auto z9 = scalar_algebra(Mod::make(3, 2));
    std::map<int, AlgebraElement> values;
    for (int x : a3)
      values.emplace(x, x == 0 ? algebra_unit(z9) : algebra_scalar(z9, 3));
    REQUIRE_THROWS_AS(CharacterData::make(g, a3, std::move(values)), error);
    // Identity must map to 1.
    std::map<int, AlgebraElement> bad;
    bad.emplace(0, algebra_scalar(z9, 2));
    REQUIRE_THROWS_AS(CharacterData::make(g, std::vector<int>{0}, std::move(bad)),
                      error);
  }
}

TEST_CASE("group ring arithmetic") {
  auto g = s3();
  auto z4 = scalar_algebra(Mod::make(2, 2));

  int a = 1, b = 2;  // any two non-identity elements
  auto x = ring_add(ring_basis(g, z4, a), ring_basis(g, z4, b));
  auto y = ring_basis(g, z4, a);

  SECTION("distributivity example: ([g]+[h])[g] = [g^2] + [hg]") {
    auto prod = ring_mul(x, y);
    auto expected = ring_add(ring_basis(g, z4, g->mul(a, a)),
                             ring_basis(g, z4, g->mul(b, a)));
    REQUIRE(prod == expected);
  }
  SECTION("x * 0 = 0") {
    REQUIRE(ring_mul(x, ring_zero(g, z4)).is_zero());
  }
  SECTION("ordinarity product expansion") {
    // ([h] - psi(h))([phi] - alpha) expands with four terms.
    auto psi_h = algebra_scalar(z4, 3);
    auto alpha = algebra_scalar(z4, 2);
    int h = a, phi = b;
    auto lhs = ring_mul(
        ring_sub(ring_basis(g, z4, h), ring_term(g, psi_h, 0)),
        ring_sub(ring_basis(g, z4, phi), ring_term(g, alpha, 0)));
    auto rhs = ring_sub(
        ring_sub(ring_basis(g, z4, g->mul(h, phi)),
                 ring_scale(alpha, ring_basis(g, z4, h))),
        ring_sub(ring_scale(psi_h, ring_basis(g, z4, phi)),
                 ring_term(g, psi_h * alpha, 0)));
    REQUIRE(lhs == rhs);
  }
  SECTION("associativity and distributivity on random triples") {
    std::mt19937_64 rng(101);
    auto random_elem = [&]() {
      GroupRingElement e = ring_zero(g, z4);
      for (int t = 0; t < 3; ++t)
        e = ring_add(e, ring_term(g, algebra_scalar(z4, int64_t(rng() % 4)),
                                  int(rng() % g->order)));
      return e;
    };
    for (int trial = 0; trial < 1000; ++trial) {
      auto u = random_elem(), v = random_elem(), w = random_elem();
      REQUIRE(ring_mul(ring_mul(u, v), w) == ring_mul(u, ring_mul(v, w)));
      REQUIRE(ring_mul(u, ring_add(v, w)) ==
              ring_add(ring_mul(u, v), ring_mul(u, w)));
    }
  }
  SECTION("zero coefficients are pruned") {
    auto e = ring_term(g, algebra_scalar(z4, 2), a);
    auto doubled = ring_add(e, e);  // 2 + 2 = 0 in Z/4
    REQUIRE(doubled.is_zero());
  }
}
