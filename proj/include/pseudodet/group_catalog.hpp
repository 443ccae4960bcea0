#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/determinant.hpp"
#include "pseudodet/group.hpp"

namespace pseudodet {

// Permutation-generator combinators. Every catalog group is produced as the
// closure of a small explicit generating set of permutations, so the group
// axioms are verified by construction rather than trusted.

inline std::vector<int> cycle_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = (i + 1) % n;
  return p;
}

inline std::vector<std::vector<int>> cyclic_gens(int n) {
  return {cycle_perm(n)};
}

// Generators of A x B acting on the disjoint union of the point sets.
inline std::vector<std::vector<int>> product_gens(
    const std::vector<std::vector<int>>& a,
    const std::vector<std::vector<int>>& b) {
  require(!a.empty() && !b.empty(), errc::validation_error,
          "product factors need at least one generator each");
  int na = int(a[0].size());
  int nb = int(b[0].size());
  std::vector<std::vector<int>> out;
  for (const auto& p : a) {
    auto q = p;
    for (int i = 0; i < nb; ++i) q.push_back(na + i);
    out.push_back(std::move(q));
  }
  for (const auto& p : b) {
    std::vector<int> q(na);
    std::iota(q.begin(), q.end(), 0);
    for (int x : p) q.push_back(na + x);
    out.push_back(std::move(q));
  }
  return out;
}

// Dihedral group of order 2n on n points, n >= 3.
inline std::vector<std::vector<int>> dihedral_gens(int n) {
  require(n >= 3, errc::validation_error,
          "dihedral groups below order 6 are realized as products");
  std::vector<int> refl(n);
  for (int i = 0; i < n; ++i) refl[i] = (n - i) % n;
  return {cycle_perm(n), refl};
}

// Z/n x| Z/m with the Z/m generator acting by multiplication by k; the
// permutations are the left regular action on the n*m pairs (i, j).
inline std::vector<std::vector<int>> semidirect_cyclic_gens(int n, int m,
                                                            int64_t k) {
  int64_t kp = 1;
  for (int t = 0; t < m; ++t) kp = kp * k % n;
  require(kp % n == 1 % n && std::gcd(int64_t(n), k) == 1,
          errc::validation_error, "action is not an order-dividing unit");
  auto idx = [m](int i, int j) { return i * m + j; };
  std::vector<int> px(n * m), py(n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      px[idx(i, j)] = idx((i + 1) % n, j);
      py[idx(i, j)] = idx(int(k * i % n), (j + 1) % m);
    }
  return {px, py};
}

// Dicyclic group of order 4n: a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1; the
// left regular action on pairs (i, j) with i mod 2n, j mod 2.
inline std::vector<std::vector<int>> dicyclic_gens(int n) {
  int nn = 2 * n;
  auto idx = [](int i, int j) { return i * 2 + j; };
  std::vector<int> pa(2 * nn), pb(2 * nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < 2; ++j) {
      pa[idx(i, j)] = idx((i + 1) % nn, j);
      pb[idx(i, j)] = idx(((n * j - i) % nn + nn) % nn, (j + 1) % 2);
    }
  return {pa, pb};
}

// Central product of the quaternion and cyclic groups of order 8 and 4:
// triples (i, x, y) with i mod 4 central and the cocycle product
// (i,x,y)(i',x',y') = (i + i' + 2yx', x + x', y + y').
inline std::vector<std::vector<int>> central_product_gens() {
  auto idx = [](int i, int x, int y) { return i * 4 + x * 2 + y; };
  std::vector<int> pc(16), px(16), pz(16);
  for (int i = 0; i < 4; ++i)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        pc[idx(i, x, y)] = idx((i + 1) % 4, x, y);
        px[idx(i, x, y)] = idx(i, (x + 1) % 2, y);
        pz[idx(i, x, y)] = idx((i + 2 * x) % 4, x, (y + 1) % 2);
      }
  return {pc, px, pz};
}

// (Z/2 x Z/2) x| Z/4 with the Z/4 generator swapping the two coordinates.
inline std::vector<std::vector<int>> swap_semidirect_gens() {
  auto idx = [](int x, int y, int j) { return (x * 2 + y) * 4 + j; };
  std::vector<int> g1(16), g2(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int j = 0; j < 4; ++j) {
        g1[idx(x, y, j)] = idx((x + 1) % 2, y, j);
        g2[idx(x, y, j)] = idx(y, x, (j + 1) % 4);
      }
  return {g1, g2};
}

// SL(2, 3) acting on the eight nonzero vectors of F3^2, generated by the
// shear [[1,1],[0,1]] and the rotation [[0,-1],[1,0]].
inline std::vector<std::vector<int>> sl2_f3_gens() {
  auto idx = [](int x, int y) { return 3 * x + y - 1; };
  std::vector<int> pa(8), pb(8);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      if (x == 0 && y == 0) continue;
      pa[idx(x, y)] = idx((x + y) % 3, y);
      pb[idx(x, y)] = idx((3 - y) % 3, x);
    }
  return {pa, pb};
}

struct CatalogEntry {
  std::string name;
  size_t order;
  GroupPtr group;
};

// All isomorphism types of order at most 24, one entry each, 74 in total.
// Completeness is certified in tests: the entries are pairwise
// non-isomorphic and the per-order counts match the classification.
inline const std::vector<CatalogEntry>& group_catalog_up_to_24() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> out;
    auto add = [&out](std::string name, std::vector<std::vector<int>> gens) {
      auto g = group_from_permutations(gens);
      g->validate();
      out.push_back({std::move(name), g->order, std::move(g)});
    };
    auto cyc = [](int n) { return cyclic_gens(n); };
    auto prod = [](const std::vector<std::vector<int>>& a,
                   const std::vector<std::vector<int>>& b) {
      return product_gens(a, b);
    };

    add("1", cyc(1));
    add("Z2", cyc(2));
    add("Z3", cyc(3));
    add("Z4", cyc(4));
    add("Z2xZ2", prod(cyc(2), cyc(2)));
    add("Z5", cyc(5));
    add("Z6", cyc(6));
    add("S3", dihedral_gens(3));
    add("Z7", cyc(7));
    add("Z8", cyc(8));
    add("Z4xZ2", prod(cyc(4), cyc(2)));
    add("Z2xZ2xZ2", prod(prod(cyc(2), cyc(2)), cyc(2)));
    add("D4", dihedral_gens(4));
    add("Q8", dicyclic_gens(2));
    add("Z9", cyc(9));
    add("Z3xZ3", prod(cyc(3), cyc(3)));
    add("Z10", cyc(10));
    add("D5", dihedral_gens(5));
    add("Z11", cyc(11));
    add("Z12", cyc(12));
    add("Z6xZ2", prod(cyc(6), cyc(2)));
    add("D6", dihedral_gens(6));
    add("A4", {{1, 2, 0, 3}, {0, 2, 3, 1}});
    add("Dic3", dicyclic_gens(3));
    add("Z13", cyc(13));
    add("Z14", cyc(14));
    add("D7", dihedral_gens(7));
    add("Z15", cyc(15));
    add("Z16", cyc(16));
    add("Z8xZ2", prod(cyc(8), cyc(2)));
    add("Z4xZ4", prod(cyc(4), cyc(4)));
    add("Z4xZ2xZ2", prod(prod(cyc(4), cyc(2)), cyc(2)));
    add("Z2^4", prod(prod(cyc(2), cyc(2)), prod(cyc(2), cyc(2))));
    add("D8", dihedral_gens(8));
    add("SD16", semidirect_cyclic_gens(8, 2, 3));
    add("M16", semidirect_cyclic_gens(8, 2, 5));
    add("Q16", dicyclic_gens(4));
    add("D4xZ2", prod(dihedral_gens(4), cyc(2)));
    add("Q8xZ2", prod(dicyclic_gens(2), cyc(2)));
    add("Z4:Z4", semidirect_cyclic_gens(4, 4, 3));
    add("(Z2xZ2):Z4", swap_semidirect_gens());
    add("Q8oZ4", central_product_gens());
    add("Z17", cyc(17));
    add("Z18", cyc(18));
    add("Z6xZ3", prod(cyc(6), cyc(3)));
    add("D9", dihedral_gens(9));
    add("S3xZ3", prod(dihedral_gens(3), cyc(3)));
    // Generalized dihedral group of Z3 x Z3: inversion on both factors.
    add("(Z3xZ3):Z2",
        {{1, 2, 0, 3, 4, 5}, {0, 1, 2, 4, 5, 3}, {0, 2, 1, 3, 5, 4}});
    add("Z19", cyc(19));
    add("Z20", cyc(20));
    add("Z10xZ2", prod(cyc(10), cyc(2)));
    add("D10", dihedral_gens(10));
    add("F20", semidirect_cyclic_gens(5, 4, 2));
    add("Dic5", dicyclic_gens(5));
    add("Z21", cyc(21));
    add("Z7:Z3", semidirect_cyclic_gens(7, 3, 2));
    add("Z22", cyc(22));
    add("D11", dihedral_gens(11));
    add("Z23", cyc(23));
    add("Z24", cyc(24));
    add("Z12xZ2", prod(cyc(12), cyc(2)));
    add("Z6xZ2xZ2", prod(prod(cyc(6), cyc(2)), cyc(2)));
    add("S4", {{1, 2, 3, 0}, {1, 0, 2, 3}});
    add("A4xZ2", prod({{1, 2, 0, 3}, {0, 2, 3, 1}}, cyc(2)));
    add("SL(2,3)", sl2_f3_gens());
    add("D12", dihedral_gens(12));
    add("Dic6", dicyclic_gens(6));
    add("Z3:Z8", semidirect_cyclic_gens(3, 8, 2));
    add("Z3xD4", prod(cyc(3), dihedral_gens(4)));
    add("Z3xQ8", prod(cyc(3), dicyclic_gens(2)));
    add("Z4xS3", prod(cyc(4), dihedral_gens(3)));
    add("Z2xDic3", prod(cyc(2), dicyclic_gens(3)));
    add("Z2xZ2xS3", prod(prod(cyc(2), cyc(2)), dihedral_gens(3)));
    // Z3 x| D4 with the rotation inverting and the reflection fixing: the
    // three-cycle, a four-cycle conjugating it to its inverse, and a
    // commuting reflection of the four-cycle.
    add("Z3:D4", {{1, 2, 0, 3, 4, 5, 6},
                  {0, 2, 1, 4, 5, 6, 3},
                  {0, 1, 2, 3, 6, 5, 4}});
    return out;
  }();
  return catalog;
}

inline int element_order(const GroupModel& g, int x) {
  int y = x, n = 1;
  while (y != 0) {
    y = g.mul(y, x);
    ++n;
  }
  return n;
}

// Greedy generating set: repeatedly adjoin the first element outside the
// subgroup generated so far.
inline std::vector<int> generating_set(const GroupModel& g) {
  std::vector<int> gens;
  std::vector<char> in(g.order, 0);
  auto close = [&] {
    std::fill(in.begin(), in.end(), 0);
    in[0] = 1;
    std::vector<int> queue{0};
    for (size_t head = 0; head < queue.size(); ++head)
      for (int s : gens) {
        int next = g.mul(queue[head], s);
        if (!in[next]) {
          in[next] = 1;
          queue.push_back(next);
        }
      }
    return queue.size();
  };
  size_t have = close();
  while (have < g.order) {
    int pick = 0;
    while (in[pick]) ++pick;
    gens.push_back(pick);
    have = close();
  }
  return gens;
}

namespace detail {

// Extend generator images to a full map by closure; accept only a bijective
// homomorphism.
inline bool extends_to_isomorphism(const GroupModel& a, const GroupModel& b,
                                   const std::vector<int>& gens,
                                   const std::vector<int>& img) {
  std::vector<int> phi(a.order, -1);
  phi[0] = 0;
  std::vector<int> queue{0};
  for (size_t head = 0; head < queue.size(); ++head)
    for (size_t i = 0; i < gens.size(); ++i) {
      int next = a.mul(queue[head], gens[i]);
      int to = b.mul(phi[queue[head]], img[i]);
      if (phi[next] == -1) {
        phi[next] = to;
        queue.push_back(next);
      } else if (phi[next] != to) {
        return false;
      }
    }
  std::vector<char> seen(b.order, 0);
  for (int v : phi) {
    if (v < 0 || seen[v]) return false;
    seen[v] = 1;
  }
  for (size_t x = 0; x < a.order; ++x)
    for (size_t y = 0; y < a.order; ++y)
      if (phi[a.mul(int(x), int(y))] != b.mul(phi[x], phi[y])) return false;
  return true;
}

inline bool is_abelian(const GroupModel& g) {
  for (size_t x = 0; x < g.order; ++x)
    for (size_t y = 0; y < x; ++y)
      if (g.mul(int(x), int(y)) != g.mul(int(y), int(x))) return false;
  return true;
}

inline size_t center_size(const GroupModel& g) {
  size_t n = 0;
  for (size_t x = 0; x < g.order; ++x) {
    bool central = true;
    for (size_t y = 0; y < g.order && central; ++y)
      central = g.mul(int(x), int(y)) == g.mul(int(y), int(x));
    if (central) ++n;
  }
  return n;
}

}  // namespace detail

// Backtracking isomorphism test: cheap invariants first, then a search over
// order-respecting generator images.
inline bool groups_isomorphic(const GroupPtr& a, const GroupPtr& b) {
  if (a->order != b->order) return false;
  std::vector<int> oa, ob;
  for (size_t x = 0; x < a->order; ++x) oa.push_back(element_order(*a, int(x)));
  for (size_t x = 0; x < b->order; ++x) ob.push_back(element_order(*b, int(x)));
  auto sa = oa, sb = ob;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  if (detail::is_abelian(*a) != detail::is_abelian(*b)) return false;
  if (detail::center_size(*a) != detail::center_size(*b)) return false;
  auto gens = generating_set(*a);
  std::vector<std::vector<int>> candidates(gens.size());
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t h = 0; h < b->order; ++h)
      if (ob[h] == oa[gens[i]]) candidates[i].push_back(int(h));
  std::vector<int> img(gens.size());
  std::function<bool(size_t)> search = [&](size_t at) {
    if (at == gens.size())
      return detail::extends_to_isomorphism(*a, *b, gens, img);
    for (int h : candidates[at]) {
      img[at] = h;
      if (search(at + 1)) return true;
    }
    return false;
  };
  return search(0);
}

// All homomorphisms to Z/2, as 0/1 vectors indexed by element. The trivial
// character is always present.
inline std::vector<std::vector<int>> sign_characters(const GroupModel& g) {
  auto gens = generating_set(g);
  std::vector<std::vector<int>> out;
  for (uint32_t mask = 0; mask < (1u << gens.size()); ++mask) {
    std::vector<int> phi(g.order, -1);
    phi[0] = 0;
    std::vector<int> queue{0};
    bool ok = true;
    for (size_t head = 0; head < queue.size() && ok; ++head)
      for (size_t i = 0; i < gens.size(); ++i) {
        int next = g.mul(queue[head], gens[i]);
        int to = phi[queue[head]] ^ int((mask >> i) & 1);
        if (phi[next] == -1) {
          phi[next] = to;
          queue.push_back(next);
        } else if (phi[next] != to) {
          ok = false;
          break;
        }
      }
    for (size_t x = 0; x < g.order && ok; ++x)
      for (size_t y = 0; y < g.order && ok; ++y)
        ok = phi[g.mul(int(x), int(y))] == (phi[x] ^ phi[y]);
    if (ok) out.push_back(std::move(phi));
  }
  return out;
}

// The two-dimensional permutation representation attached to a sign
// character: identity or coordinate swap.
inline DeterminantPair sign_swap_rep(const GroupPtr& g, const AlgebraPtr& alg,
                                     const std::vector<int>& sign) {
  require(sign.size() == g->order, errc::validation_error,
          "sign character has the wrong length");
  auto one = algebra_unit(alg);
  auto zero = algebra_zero(alg);
  Mat2 id = mat2_identity(alg);
  Mat2 swap{zero, one, one, zero};
  std::vector<Mat2> mats;
  for (size_t x = 0; x < g->order; ++x) mats.push_back(sign[x] ? swap : id);
  return from_matrix_rep(g, alg, mats);
}

}  // namespace pseudodet
