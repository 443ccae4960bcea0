#pragma once

#include <map>
#include <utility>

#include "pseudodet/algebra.hpp"
#include "pseudodet/group.hpp"

namespace pseudodet {

// Sparse element of A[G]: coefficient rows keyed by group index, zeros
// pruned so that equality is structural.
struct GroupRingElement {
  GroupPtr group;
  AlgebraPtr algebra;
  std::map<int, Row> support;

  bool is_zero() const { return support.empty(); }
  bool operator==(const GroupRingElement& o) const {
    return same_group(group, o.group) && support == o.support &&
           (algebra == o.algebra || algebra->same_structure(*o.algebra));
  }
};

inline GroupRingElement ring_zero(GroupPtr group, AlgebraPtr algebra) {
  return GroupRingElement{std::move(group), std::move(algebra), {}};
}

inline GroupRingElement ring_term(GroupPtr group, const AlgebraElement& coeff,
                                  int g) {
  require(0 <= g && size_t(g) < group->order, errc::out_of_range,
          "group index out of range");
  GroupRingElement x{std::move(group), coeff.alg, {}};
  if (!coeff.is_zero()) x.support.emplace(g, coeff.coords);
  return x;
}

// [g] with coefficient 1.
inline GroupRingElement ring_basis(GroupPtr group, const AlgebraPtr& algebra,
                                   int g) {
  return ring_term(std::move(group), algebra_unit(algebra), g);
}

inline void ring_accumulate(GroupRingElement& x, int g, const Row& coeff) {
  auto [it, fresh] = x.support.emplace(g, coeff);
  if (!fresh) it->second = row_add(x.algebra->mod, it->second, coeff);
  if (row_is_zero(it->second)) x.support.erase(it);
}

inline GroupRingElement ring_add(const GroupRingElement& x,
                                 const GroupRingElement& y) {
  require(same_group(x.group, y.group), errc::validation_error,
          "group ring elements over different groups");
  GroupRingElement r = x;
  for (const auto& [g, c] : y.support) ring_accumulate(r, g, c);
  return r;
}

inline GroupRingElement ring_scale(const AlgebraElement& c,
                                   const GroupRingElement& x) {
  GroupRingElement r{x.group, x.algebra, {}};
  for (const auto& [g, coeff] : x.support)
    ring_accumulate(r, g, x.algebra->mul_coords(c.coords, coeff));
  return r;
}

inline GroupRingElement ring_neg(const GroupRingElement& x) {
  return ring_scale(algebra_scalar(x.algebra, -1), x);
}

inline GroupRingElement ring_sub(const GroupRingElement& x,
                                 const GroupRingElement& y) {
  return ring_add(x, ring_neg(y));
}

// Convolution product over the group multiplication table.
inline GroupRingElement ring_mul(const GroupRingElement& x,
                                 const GroupRingElement& y) {
  require(same_group(x.group, y.group), errc::validation_error,
          "group ring elements over different groups");
  require(x.algebra == y.algebra || x.algebra->same_structure(*y.algebra),
          errc::validation_error, "group ring elements over different algebras");
  GroupRingElement r{x.group, x.algebra, {}};
  for (const auto& [g, cg] : x.support)
    for (const auto& [h, ch] : y.support)
      ring_accumulate(r, x.group->mul(g, h), x.algebra->mul_coords(cg, ch));
  return r;
}

}  // namespace pseudodet
