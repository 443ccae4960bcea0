#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/algebra.hpp"
#include "pseudodet/group.hpp"
#include "pseudodet/group_ring.hpp"

namespace pseudodet {

// 2x2 matrix over a ChainAlgebra, row major.
struct Mat2 {
  AlgebraElement a, b, c, d;

  bool operator==(const Mat2& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool is_zero() const {
    return a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero();
  }
};

inline Mat2 mat2_identity(const AlgebraPtr& alg) {
  return Mat2{algebra_unit(alg), algebra_zero(alg), algebra_zero(alg),
              algebra_unit(alg)};
}

inline Mat2 mat2_scalar(const AlgebraElement& s) {
  return Mat2{s, algebra_zero(s.alg), algebra_zero(s.alg), s};
}

inline Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
  return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
              x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2 mat2_sub(const Mat2& x, const Mat2& y) {
  return Mat2{x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline AlgebraElement mat2_trace(const Mat2& x) { return x.a + x.d; }

inline AlgebraElement mat2_det(const Mat2& x) { return x.a * x.d - x.b * x.c; }

// The degree-2 determinant data (T, D) on group elements. D is a unit-valued
// homomorphism and T a central function; validate_axioms checks the defining
// identities exhaustively.
struct DeterminantPair {
  GroupPtr group;
  AlgebraPtr algebra;
  std::vector<AlgebraElement> T;
  std::vector<AlgebraElement> D;
};

struct AxiomViolation {
  std::string rule;
  int g = 0;
  int h = 0;
};

inline std::vector<AxiomViolation> validate_axioms(const DeterminantPair& p) {
  std::vector<AxiomViolation> out;
  const auto& gr = *p.group;
  require(p.T.size() == gr.order && p.D.size() == gr.order,
          errc::validation_error, "T/D must be defined on every element");
  auto two = algebra_scalar(p.algebra, 2);
  if (!(p.T[0] == two)) out.push_back({"T(1) != 2", 0, 0});
  for (size_t g = 0; g < gr.order; ++g)
    if (!is_unit(p.D[g]))
      out.push_back({"D value is not a unit", int(g), 0});
  for (size_t g = 0; g < gr.order; ++g)
    for (size_t h = 0; h < gr.order; ++h) {
      int gh = gr.mult[g][h];
      if (!(p.D[gh] == p.D[g] * p.D[h]))
        out.push_back({"D not multiplicative", int(g), int(h)});
      if (!(p.T[gh] == p.T[gr.mult[h][g]]))
        out.push_back({"T not central", int(g), int(h)});
      int ginv_h = gr.mult[gr.inverse[g]][h];
      auto lhs = p.D[g] * p.T[ginv_h] - p.T[g] * p.T[h] + p.T[gh];
      if (!lhs.is_zero())
        out.push_back({"trace identity fails", int(g), int(h)});
    }
  return out;
}

// Build (T, D) = (trace, det) from a 2x2 matrix representation, verifying
// multiplicativity on the whole table first.
inline DeterminantPair from_matrix_rep(GroupPtr group, AlgebraPtr algebra,
                                       const std::vector<Mat2>& mats) {
  require(mats.size() == group->order, errc::not_a_representation,
          "one matrix per group element required");
  require(mats[0] == mat2_identity(algebra), errc::not_a_representation,
          "identity element must map to the identity matrix");
  for (size_t g = 0; g < group->order; ++g)
    for (size_t h = 0; h < group->order; ++h)
      require(mat2_mul(mats[g], mats[h]) == mats[group->mult[g][h]],
              errc::not_a_representation,
              "matrices are not multiplicative at " + std::to_string(g) + "," +
                  std::to_string(h));
  DeterminantPair p{std::move(group), std::move(algebra), {}, {}};
  for (const auto& m : mats) {
    p.T.push_back(mat2_trace(m));
    p.D.push_back(mat2_det(m));
  }
  require(validate_axioms(p).empty(), errc::internal,
          "trace/determinant of a representation violated the axioms");
  return p;
}

// Extend a generator-indexed assignment to the whole group by breadth-first
// products; inconsistent assignments are rejected.
inline std::vector<Mat2> rep_from_generators(
    const GroupPtr& group, const AlgebraPtr& algebra,
    const std::vector<std::pair<int, Mat2>>& gens) {
  std::vector<std::optional<Mat2>> mats(group->order);
  mats[0] = mat2_identity(algebra);
  std::vector<int> queue{0};
  for (size_t head = 0; head < queue.size(); ++head)
    for (const auto& [s, ms] : gens) {
      int next = group->mul(queue[head], s);
      Mat2 prod = mat2_mul(*mats[queue[head]], ms);
      if (!mats[next]) {
        mats[next] = prod;
        queue.push_back(next);
      } else {
        require(*mats[next] == prod, errc::not_a_representation,
                "generator matrices are inconsistent");
      }
    }
  std::vector<Mat2> out;
  for (auto& m : mats) {
    require(m.has_value(), errc::not_a_representation,
            "generators do not generate the group");
    out.push_back(std::move(*m));
  }
  return out;
}

inline void require_compatible(const DeterminantPair& p,
                               const GroupRingElement& x) {
  require(same_group(p.group, x.group), errc::validation_error,
          "group ring element over a different group");
  require(p.algebra == x.algebra || p.algebra->same_structure(*x.algebra),
          errc::validation_error, "group ring element over a different algebra");
}

// Linear extension of T to the group ring.
inline AlgebraElement extend_T(const DeterminantPair& p,
                               const GroupRingElement& x) {
  require_compatible(p, x);
  auto acc = algebra_zero(p.algebra);
  for (const auto& [g, c] : x.support)
    acc = acc + AlgebraElement{p.algebra, p.algebra->mul_coords(c, p.T[g].coords)};
  return acc;
}

// Degree-2 polynomial-law extension of D: quadratic in the coefficients,
// with the bilinear form B(g, h) = T(g)T(h) - T(gh) on mixed terms.
inline AlgebraElement extend_D(const DeterminantPair& p,
                               const GroupRingElement& x) {
  require_compatible(p, x);
  auto acc = algebra_zero(p.algebra);
  for (auto it = x.support.begin(); it != x.support.end(); ++it) {
    auto ag = AlgebraElement{p.algebra, it->second};
    acc = acc + ag * ag * p.D[it->first];
    for (auto jt = std::next(it); jt != x.support.end(); ++jt) {
      auto ah = AlgebraElement{p.algebra, jt->second};
      int gh = p.group->mul(it->first, jt->first);
      acc = acc + ag * ah *
                      (p.T[it->first] * p.T[jt->first] - p.T[gh]);
    }
  }
  return acc;
}

// X^2 - T(x) X + D(x).
struct CharPoly {
  AlgebraElement trace_coeff;
  AlgebraElement det_coeff;
};

inline CharPoly char_poly(const DeterminantPair& p, const GroupRingElement& x) {
  return CharPoly{extend_T(p, x), extend_D(p, x)};
}

// T(sigma) = D(sigma + 1) - D(sigma) - 1, using only D through extend_D.
inline AlgebraElement recover_T_from_D(const DeterminantPair& p, int sigma) {
  auto one = ring_basis(p.group, p.algebra, 0);
  auto s = ring_basis(p.group, p.algebra, sigma);
  return extend_D(p, ring_add(s, one)) - extend_D(p, s) -
         algebra_unit(p.algebra);
}

// D(sigma) = (T(sigma)^2 - T(sigma^2)) / 2; needs 2 invertible.
inline AlgebraElement recover_D_from_T(const DeterminantPair& p, int sigma) {
  require(p.algebra->mod.p != 2, errc::two_not_invertible,
          "recovering D from T requires 2 to be a unit");
  auto half = invert(algebra_scalar(p.algebra, 2));
  int sigma2 = p.group->mul(sigma, sigma);
  return (p.T[sigma] * p.T[sigma] - p.T[sigma2]) * half;
}

// x lies in the kernel iff T kills x * [g] for every g and D kills x.
// Quantifying y over group elements suffices by linearity of T in y.
inline bool kernel_test(const DeterminantPair& p, const GroupRingElement& x) {
  require_compatible(p, x);
  if (!extend_D(p, x).is_zero()) return false;
  for (size_t g = 0; g < p.group->order; ++g)
    if (!extend_T(p, ring_mul(x, ring_basis(p.group, p.algebra, int(g))))
             .is_zero())
      return false;
  return true;
}

// Inertia-in-kernel test: T(hg) = T(g) for all inertia h and all g, plus
// D(h - 1) = 0. On failure the first violating witness is reported.
struct UnramWitness {
  bool ok = true;
  std::optional<std::pair<int, int>> trace_pair;  // (h, g) with T(hg) != T(g)
  std::optional<int> d_element;                   // h with D(h - 1) != 0
};

inline UnramWitness unramified_test(const DeterminantPair& p) {
  UnramWitness w;
  auto inertia = subgroup_elements(*p.group, p.group->inertia_gens);
  for (int h : inertia)
    for (size_t g = 0; g < p.group->order; ++g)
      if (!(p.T[p.group->mult[h][g]] == p.T[g])) {
        w.ok = false;
        w.trace_pair = {h, int(g)};
        return w;
      }
  for (int h : inertia) {
    auto hm1 = ring_sub(ring_basis(p.group, p.algebra, h),
                        ring_basis(p.group, p.algebra, 0));
    if (!extend_D(p, hm1).is_zero()) {
      w.ok = false;
      w.d_element = h;
      return w;
    }
  }
  return w;
}

// Enumerates the matrix group generated by invertible 2x2 matrices over the
// coefficient algebra; index 0 is the identity and indices follow breadth
// first discovery, so the i-th generator sits at index i+1 when the
// generators are distinct and nontrivial. Returns the group together with
// the matrix of every element.
inline std::pair<GroupPtr, std::vector<Mat2>> group_from_matrix_generators(
    const AlgebraPtr& alg, const std::vector<Mat2>& gens,
    size_t cap = kGroupOrderCap) {
  auto key = [](const Mat2& m) {
    std::vector<int64_t> k;
    for (const auto* e : {&m.a, &m.b, &m.c, &m.d})
      k.insert(k.end(), e->coords.begin(), e->coords.end());
    return k;
  };
  for (const auto& g : gens)
    require(is_unit(mat2_det(g)), errc::validation_error,
            "matrix generator is not invertible");
  std::vector<Mat2> elems{mat2_identity(alg)};
  std::map<std::vector<int64_t>, int> index{{key(elems[0]), 0}};
  for (size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      Mat2 prod = mat2_mul(elems[i], g);
      auto k = key(prod);
      if (index.count(k)) continue;
      require(elems.size() < cap, errc::group_too_large,
              "matrix group exceeds the order cap");
      index.emplace(std::move(k), int(elems.size()));
      elems.push_back(prod);
    }
  auto model = std::make_shared<GroupModel>();
  model->order = elems.size();
  model->mult.assign(model->order, std::vector<int>(model->order, -1));
  for (size_t i = 0; i < elems.size(); ++i)
    for (size_t j = 0; j < elems.size(); ++j) {
      auto it = index.find(key(mat2_mul(elems[i], elems[j])));
      require(it != index.end(), errc::internal,
              "matrix product escaped the enumerated closure");
      model->mult[i][j] = it->second;
    }
  model->inverse.assign(model->order, -1);
  for (size_t i = 0; i < elems.size(); ++i)
    for (size_t j = 0; j < elems.size(); ++j)
      if (model->mult[i][j] == 0) model->inverse[i] = int(j);
  model->validate();
  return {GroupPtr(std::move(model)), std::move(elems)};
}

inline DeterminantPair base_change(const DeterminantPair& p,
                                   const AlgebraHom& f) {
  require(f.source == p.algebra || f.source->same_structure(*p.algebra),
          errc::validation_error, "hom source does not match the pair");
  DeterminantPair q{p.group, f.target, {}, {}};
  for (size_t g = 0; g < p.group->order; ++g) {
    q.T.push_back(f.apply(p.T[g]));
    q.D.push_back(f.apply(p.D[g]));
  }
  require(validate_axioms(q).empty(), errc::internal,
          "base change broke the determinant axioms");
  return q;
}

}  // namespace pseudodet
