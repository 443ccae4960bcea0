#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pseudodet/algebra.hpp"
#include "pseudodet/errors.hpp"

namespace pseudodet {

// Finite group on indices 0..order-1 with 0 the identity, plus the marked
// arithmetic-side data: inertia generators, the Frobenius element, and an
// optional decomposition subgroup containing both.
struct GroupModel;
using GroupPtr = std::shared_ptr<const GroupModel>;

struct GroupModel {
  size_t order = 0;
  std::vector<std::vector<int>> mult;
  std::vector<int> inverse;
  std::vector<int> inertia_gens;
  int frobenius = 0;
  std::optional<std::vector<int>> decomposition_gens;
  std::vector<std::string> labels;
  // Generating permutations, kept for serialization when available.
  std::vector<std::vector<int>> perm_gens;

  int mul(int g, int h) const { return mult[g][h]; }
  int inv(int g) const { return inverse[g]; }

  // Full axiom check: shape, identity at 0, inverses, associativity on all
  // triples (callers with huge groups sample instead; fixture scale is fine).
  void validate() const {
    require(order >= 1 && mult.size() == order, errc::validation_error,
            "multiplication table has wrong row count");
    for (const auto& row : mult) {
      require(row.size() == order, errc::validation_error,
              "multiplication table has wrong column count");
      for (int x : row)
        require(0 <= x && size_t(x) < order, errc::validation_error,
                "multiplication table entry out of range");
    }
    for (size_t g = 0; g < order; ++g) {
      require(mult[0][g] == int(g) && mult[g][0] == int(g),
              errc::validation_error, "index 0 is not an identity");
    }
    require(inverse.size() == order, errc::validation_error,
            "inverse table has wrong length");
    for (size_t g = 0; g < order; ++g) {
      require(0 <= inverse[g] && size_t(inverse[g]) < order,
              errc::validation_error, "inverse out of range");
      require(mult[g][inverse[g]] == 0 && mult[inverse[g]][g] == 0,
              errc::validation_error,
              "inverse table wrong at element " + std::to_string(g));
    }
    for (size_t a = 0; a < order; ++a)
      for (size_t b = 0; b < order; ++b)
        for (size_t c = 0; c < order; ++c)
          require(mult[mult[a][b]][c] == mult[a][mult[b][c]],
                  errc::validation_error,
                  "multiplication not associative at " + std::to_string(a) +
                      "," + std::to_string(b) + "," + std::to_string(c));
    for (int g : inertia_gens)
      require(0 <= g && size_t(g) < order, errc::validation_error,
              "inertia generator out of range");
    require(0 <= frobenius && size_t(frobenius) < order,
            errc::validation_error, "frobenius out of range");
    if (decomposition_gens)
      for (int g : *decomposition_gens)
        require(0 <= g && size_t(g) < order, errc::validation_error,
                "decomposition generator out of range");
  }
};

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || (a->order == b->order && a->mult == b->mult);
}

inline std::vector<int> compose_perm(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  // (a*b)(x) = a(b(x)): b acts first, matching matrix convention.
  std::vector<int> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline constexpr size_t kGroupOrderCap = 10080;

inline GroupPtr group_from_permutations(
    const std::vector<std::vector<int>>& gens, size_t cap = kGroupOrderCap) {
  size_t npoints = gens.empty() ? 1 : gens[0].size();
  for (const auto& g : gens) {
    require(g.size() == npoints, errc::validation_error,
            "generators permute different point sets");
    std::vector<bool> hit(npoints, false);
    for (int x : g) {
      require(0 <= x && size_t(x) < npoints, errc::validation_error,
              "permutation image out of range");
      require(!hit[x], errc::validation_error, "generator is not a bijection");
      hit[x] = true;
    }
  }
  std::vector<int> id(npoints);
  for (size_t i = 0; i < npoints; ++i) id[i] = int(i);
  std::vector<std::vector<int>> elems{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  for (size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : gens) {
      auto n = compose_perm(elems[head], g);
      if (index.emplace(n, int(elems.size())).second) {
        elems.push_back(std::move(n));
        require(elems.size() <= cap, errc::group_too_large,
                "generated group exceeds the order cap " + std::to_string(cap));
      }
    }
  }
  auto gm = std::make_shared<GroupModel>();
  gm->order = elems.size();
  gm->mult.assign(gm->order, std::vector<int>(gm->order));
  for (size_t a = 0; a < gm->order; ++a)
    for (size_t b = 0; b < gm->order; ++b)
      gm->mult[a][b] = index.at(compose_perm(elems[a], elems[b]));
  gm->inverse.assign(gm->order, 0);
  for (size_t a = 0; a < gm->order; ++a)
    for (size_t b = 0; b < gm->order; ++b)
      if (gm->mult[a][b] == 0) gm->inverse[a] = int(b);
  gm->perm_gens = gens;
  return gm;
}

inline std::vector<int> subgroup_elements(const GroupModel& g,
                                          const std::vector<int>& gens) {
  std::vector<bool> seen(g.order, false);
  std::vector<int> queue{0};
  seen[0] = true;
  for (size_t head = 0; head < queue.size(); ++head)
    for (int x : gens) {
      require(0 <= x && size_t(x) < g.order, errc::validation_error,
              "subgroup generator out of range");
      for (int y : {g.mul(queue[head], x), g.mul(queue[head], g.inv(x))})
        if (!seen[y]) {
          seen[y] = true;
          queue.push_back(y);
        }
    }
  std::sort(queue.begin(), queue.end());
  return queue;
}

inline std::vector<int> normal_closure(const GroupModel& g,
                                       const std::vector<int>& gens) {
  std::vector<bool> in(g.order, false);
  std::vector<int> work = gens;
  for (int x : work) in[x] = true;
  for (size_t head = 0; head < work.size(); ++head)
    for (size_t c = 0; c < g.order; ++c) {
      int y = g.mul(g.mul(int(c), work[head]), g.inv(int(c)));
      if (!in[y]) {
        in[y] = true;
        work.push_back(y);
      }
    }
  std::vector<int> conj;
  for (size_t i = 0; i < g.order; ++i)
    if (in[i]) conj.push_back(int(i));
  return subgroup_elements(g, conj);
}

inline bool is_subgroup_normal_in(const GroupModel& g,
                                  const std::vector<int>& sub,
                                  const std::vector<int>& super) {
  std::vector<bool> in(g.order, false);
  for (int x : sub) in[x] = true;
  for (int c : super)
    for (int x : sub)
      if (!in[g.mul(g.mul(c, x), g.inv(c))]) return false;
  return true;
}

// Unit-valued multiplicative function on a subgroup.
struct CharacterData {
  GroupPtr group;
  std::vector<int> domain;
  std::map<int, AlgebraElement> values;

  const AlgebraElement& at(int g) const {
    auto it = values.find(g);
    require(it != values.end(), errc::out_of_range,
            "character undefined at element " + std::to_string(g));
    return it->second;
  }

  static CharacterData make(GroupPtr group, std::vector<int> domain,
                            std::map<int, AlgebraElement> values) {
    CharacterData c{std::move(group), std::move(domain), std::move(values)};
    std::sort(c.domain.begin(), c.domain.end());
    require(!c.domain.empty() && c.domain[0] == 0, errc::validation_error,
            "character domain must contain the identity");
    for (int g : c.domain)
      require(c.values.count(g) == 1, errc::validation_error,
              "character missing a value on its domain");
    const auto& unit_val = c.values.at(0);
    require(unit_val == algebra_unit(unit_val.alg), errc::validation_error,
            "character must send the identity to 1");
    for (int g : c.domain) {
      require(is_unit(c.at(g)), errc::validation_error,
              "character value at " + std::to_string(g) + " is not a unit");
      for (int h : c.domain) {
        int gh = c.group->mul(g, h);
        require(std::binary_search(c.domain.begin(), c.domain.end(), gh),
                errc::validation_error, "character domain is not a subgroup");
        require(c.at(gh) == c.at(g) * c.at(h), errc::validation_error,
                "character not multiplicative at " + std::to_string(g) + "," +
                    std::to_string(h));
      }
    }
    return c;
  }
};

// The constant character 1 on the given subgroup.
inline CharacterData trivial_character(GroupPtr group, const AlgebraPtr& alg,
                                       const std::vector<int>& domain) {
  std::map<int, AlgebraElement> values;
  for (int g : domain) values.emplace(g, algebra_unit(alg));
  return CharacterData::make(std::move(group), domain, std::move(values));
}

}  // namespace pseudodet
