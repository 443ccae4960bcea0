#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "pseudodet/group_catalog.hpp"

using namespace pseudodet;

TEST_CASE("catalog counts match the classification") {
  // Number of isomorphism types for each order 1..24.
  const std::vector<size_t> expected{1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5,
                                     1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15};
  const auto& catalog = group_catalog_up_to_24();
  CHECK(catalog.size() == 74);
  std::map<size_t, size_t> counts;
  for (const auto& entry : catalog) {
    CHECK(entry.group->order == entry.order);
    ++counts[entry.order];
  }
  for (size_t n = 1; n <= 24; ++n) CHECK(counts[n] == expected[n - 1]);
}

TEST_CASE("catalog entries are pairwise non-isomorphic") {
  const auto& catalog = group_catalog_up_to_24();
  for (size_t i = 0; i < catalog.size(); ++i)
    for (size_t j = i + 1; j < catalog.size(); ++j) {
      if (catalog[i].order != catalog[j].order) continue;
      INFO(catalog[i].name << " vs " << catalog[j].name);
      CHECK(!groups_isomorphic(catalog[i].group, catalog[j].group));
    }
}

TEST_CASE("isomorphism tester accepts equivalent constructions") {
  auto z6 = group_from_permutations(cyclic_gens(6));
  auto z2xz3 = group_from_permutations(product_gens(cyclic_gens(2),
                                                    cyclic_gens(3)));
  CHECK(groups_isomorphic(z6, z2xz3));
  auto s3 = group_from_permutations(dihedral_gens(3));
  auto s3_semi = group_from_permutations(semidirect_cyclic_gens(3, 2, 2));
  CHECK(groups_isomorphic(s3, s3_semi));
  auto d4 = group_from_permutations(dihedral_gens(4));
  auto d4_semi = group_from_permutations(semidirect_cyclic_gens(4, 2, 3));
  CHECK(groups_isomorphic(d4, d4_semi));
  CHECK(!groups_isomorphic(d4, group_from_permutations(dicyclic_gens(2))));
}

TEST_CASE("sign characters") {
  auto by_name = [](const std::string& name) {
    for (const auto& entry : group_catalog_up_to_24())
      if (entry.name == name) return entry.group;
    FAIL("missing catalog entry");
    return GroupPtr{};
  };
  CHECK(sign_characters(*by_name("S4")).size() == 2);
  CHECK(sign_characters(*by_name("A4")).size() == 1);
  CHECK(sign_characters(*by_name("Q8")).size() == 4);
  CHECK(sign_characters(*by_name("Z2xZ2")).size() == 4);
  CHECK(sign_characters(*by_name("1")).size() == 1);
  // Each non-trivial character is onto: both values occur.
  for (const auto& chi : sign_characters(*by_name("S4"))) {
    CHECK(chi[0] == 0);
    for (int v : chi) CHECK((v == 0 || v == 1));
  }
}

TEST_CASE("sign swap representations satisfy the determinant axioms") {
  auto algebras = std::vector<AlgebraPtr>{
      scalar_algebra(Mod::make(2, 1)), scalar_algebra(Mod::make(3, 2))};
  for (const auto& name : {"S4", "Q8", "Z3", "D6"}) {
    GroupPtr g;
    for (const auto& entry : group_catalog_up_to_24())
      if (entry.name == name) g = entry.group;
    REQUIRE(g);
    auto signs = sign_characters(*g);
    for (const auto& alg : algebras) {
      auto pair = sign_swap_rep(g, alg, signs.back());
      CHECK(validate_axioms(pair).empty());
    }
  }
}
