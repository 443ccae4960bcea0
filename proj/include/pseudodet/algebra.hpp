#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodet/errors.hpp"
#include "pseudodet/howell.hpp"
#include "pseudodet/modring.hpp"

namespace pseudodet {

// Finite commutative Z/p^m-algebra presented by structure constants on a
// free module basis. Every instance is table-verified on construction:
// commutativity, associativity, and the unit law hold on basis elements,
// which extends to the whole algebra by bilinearity.
struct ChainAlgebra;
using AlgebraPtr = std::shared_ptr<const ChainAlgebra>;

struct ChainAlgebra {
  Mod mod;
  size_t rank = 0;
  std::vector<std::string> basis_names;
  // table[i][j] = coordinates of basis_i * basis_j.
  std::vector<std::vector<Row>> table;
  Row unit;

  Row mul_coords(const Row& x, const Row& y) const {
    Row out(rank, 0);
    for (size_t i = 0; i < rank; ++i) {
      if (x[i] == 0) continue;
      for (size_t j = 0; j < rank; ++j) {
        if (y[j] == 0) continue;
        int64_t c = mod.mul(x[i], y[j]);
        const Row& t = table[i][j];
        for (size_t k = 0; k < rank; ++k)
          out[k] = mod.add(out[k], mod.mul(c, t[k]));
      }
    }
    return out;
  }

  static AlgebraPtr make(Mod mod, std::vector<std::string> names,
                         std::vector<std::vector<Row>> table, Row unit) {
    auto a = std::make_shared<ChainAlgebra>();
    a->mod = mod;
    a->rank = names.size();
    a->basis_names = std::move(names);
    a->table = std::move(table);
    a->unit = std::move(unit);
    require(a->rank >= 1, errc::validation_error, "algebra rank must be >= 1");
    require(a->table.size() == a->rank, errc::validation_error,
            "table row count != rank");
    for (auto& row : a->table) {
      require(row.size() == a->rank, errc::validation_error,
              "table column count != rank");
      for (auto& entry : row) {
        require(entry.size() == a->rank, errc::validation_error,
                "table entry length != rank");
        for (auto& x : entry) x = mod.reduce(x);
      }
    }
    require(a->unit.size() == a->rank, errc::validation_error,
            "unit length != rank");
    for (auto& x : a->unit) x = mod.reduce(x);
    a->verify_table();
    return a;
  }

  void verify_table() const {
    Row ei(rank, 0);
    for (size_t i = 0; i < rank; ++i) {
      std::fill(ei.begin(), ei.end(), 0);
      ei[i] = mod.reduce(1);
      require(mul_coords(unit, ei) == ei, errc::validation_error,
              "unit law fails at basis " + std::to_string(i));
      for (size_t j = 0; j < rank; ++j)
        require(table[i][j] == table[j][i], errc::validation_error,
                "multiplication not commutative at basis pair " +
                    std::to_string(i) + "," + std::to_string(j));
    }
    for (size_t i = 0; i < rank; ++i)
      for (size_t j = 0; j < rank; ++j)
        for (size_t k = 0; k < rank; ++k) {
          Row ek(rank, 0);
          ek[k] = mod.reduce(1);
          Row lhs = mul_coords(table[i][j], ek);
          Row ej(rank, 0);
          ej[j] = mod.reduce(1);
          Row ei2(rank, 0);
          ei2[i] = mod.reduce(1);
          Row rhs = mul_coords(ei2, table[j][k]);
          require(lhs == rhs, errc::validation_error,
                  "multiplication not associative at basis triple " +
                      std::to_string(i) + "," + std::to_string(j) + "," +
                      std::to_string(k));
        }
  }

  bool same_structure(const ChainAlgebra& o) const {
    return mod == o.mod && rank == o.rank && table == o.table && unit == o.unit;
  }
};

// Z/p^m itself, as the rank-1 algebra.
inline AlgebraPtr scalar_algebra(Mod mod) {
  return ChainAlgebra::make(mod, {"1"}, {{{1}}}, {1});
}

struct AlgebraElement {
  AlgebraPtr alg;
  Row coords;

  bool is_zero() const { return row_is_zero(coords); }
  bool operator==(const AlgebraElement& o) const {
    return coords == o.coords && (alg == o.alg || alg->same_structure(*o.alg));
  }
};

inline void require_same_algebra(const AlgebraElement& x, const AlgebraElement& y) {
  require(x.alg == y.alg || x.alg->same_structure(*y.alg), errc::validation_error,
          "elements of different algebras");
}

inline AlgebraElement algebra_element(AlgebraPtr alg, Row coords) {
  require(coords.size() == alg->rank, errc::validation_error,
          "coordinate length != algebra rank");
  for (auto& x : coords) x = alg->mod.reduce(x);
  return AlgebraElement{std::move(alg), std::move(coords)};
}

inline AlgebraElement algebra_zero(const AlgebraPtr& alg) {
  return AlgebraElement{alg, Row(alg->rank, 0)};
}

inline AlgebraElement algebra_unit(const AlgebraPtr& alg) {
  return AlgebraElement{alg, alg->unit};
}

inline AlgebraElement algebra_scalar(const AlgebraPtr& alg, int64_t c) {
  return AlgebraElement{alg, row_scale(alg->mod, c, alg->unit)};
}

// The scalar c with x = c * 1, when x lies on the prime line.
inline std::optional<int64_t> scalar_value(const AlgebraElement& x) {
  for (int64_t c = 0; c < x.alg->mod.q; ++c)
    if (x.coords == row_scale(x.alg->mod, c, x.alg->unit)) return c;
  return std::nullopt;
}

inline AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x, y);
  return AlgebraElement{x.alg, row_add(x.alg->mod, x.coords, y.coords)};
}

inline AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x, y);
  return AlgebraElement{x.alg, row_sub(x.alg->mod, x.coords, y.coords)};
}

inline AlgebraElement operator-(const AlgebraElement& x) {
  return AlgebraElement{x.alg, row_scale(x.alg->mod, -1, x.coords)};
}

inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x, y);
  return AlgebraElement{x.alg, x.alg->mul_coords(x.coords, y.coords)};
}

inline AlgebraElement scale(int64_t c, const AlgebraElement& x) {
  return AlgebraElement{x.alg, row_scale(x.alg->mod, c, x.coords)};
}

inline AlgebraElement element_pow(const AlgebraElement& x, int64_t e) {
  require(e >= 0, errc::internal, "negative element power");
  AlgebraElement r = algebra_unit(x.alg);
  AlgebraElement b = x;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

// Matrix of multiplication by x on the module basis: row j = coords of
// x * basis_j. Solving y * M = unit inverts x.
inline ModMatrix mult_operator(const AlgebraElement& x) {
  const auto& a = *x.alg;
  ModMatrix m = ModMatrix::zero(a.mod, a.rank, a.rank);
  for (size_t j = 0; j < a.rank; ++j) {
    Row ej(a.rank, 0);
    ej[j] = a.mod.reduce(1);
    m.rows[j] = a.mul_coords(x.coords, ej);
  }
  return m;
}

inline std::optional<AlgebraElement> try_invert(const AlgebraElement& x) {
  auto sol = solve_in_span(mult_operator(x), x.alg->unit);
  if (!sol) return std::nullopt;
  AlgebraElement y = algebra_element(x.alg, *sol);
  if (!((y * x) == algebra_unit(x.alg))) return std::nullopt;
  return y;
}

inline bool is_unit(const AlgebraElement& x) { return try_invert(x).has_value(); }

inline AlgebraElement invert(const AlgebraElement& x) {
  auto y = try_invert(x);
  require(y.has_value(), errc::validation_error, "element is not a unit");
  return *y;
}

// Unit-preserving, multiplicative map between algebras, stored by images of
// the source basis. Verified on construction.
struct AlgebraHom {
  AlgebraPtr source;
  AlgebraPtr target;
  ModMatrix matrix;

  AlgebraElement apply(const AlgebraElement& x) const {
    require(x.alg == source || x.alg->same_structure(*source),
            errc::validation_error, "hom applied to foreign element");
    return AlgebraElement{target, row_times_matrix(target->mod, x.coords, matrix)};
  }

  static AlgebraHom make(AlgebraPtr source, AlgebraPtr target, ModMatrix matrix) {
    // Reductions Z/p^m -> Z/p^m' with m' <= m are legitimate homs: p^m maps
    // to zero on the target side, so images stay well defined.
    require(source->mod.p == target->mod.p && source->mod.m >= target->mod.m,
            errc::validation_error, "hom between incompatible moduli");
    require(matrix.rows.size() == source->rank && matrix.cols == target->rank,
            errc::validation_error, "hom matrix shape mismatch");
    AlgebraHom h{std::move(source), std::move(target), std::move(matrix)};
    const Mod& mod = h.target->mod;
    Row unit_img = row_times_matrix(mod, h.source->unit, h.matrix);
    require(unit_img == h.target->unit, errc::validation_error,
            "hom does not preserve the unit");
    for (size_t i = 0; i < h.source->rank; ++i)
      for (size_t j = 0; j < h.source->rank; ++j) {
        Row lhs = row_times_matrix(mod, h.source->table[i][j], h.matrix);
        Row rhs = h.target->mul_coords(h.matrix.rows[i], h.matrix.rows[j]);
        require(lhs == rhs, errc::validation_error,
                "hom not multiplicative at basis pair " + std::to_string(i) +
                    "," + std::to_string(j));
      }
    return h;
  }
};

inline AlgebraHom identity_hom(const AlgebraPtr& a) {
  return AlgebraHom::make(a, a, ModMatrix::identity(a->mod, a->rank));
}

// A[alpha]/(alpha^2 - t alpha + d): free of rank 2 over A on basis {1, alpha}.
struct QuadExtension {
  AlgebraPtr algebra;
  AlgebraHom embed;
  AlgebraElement root;
};

inline QuadExtension adjoin_quadratic_root(const AlgebraPtr& a,
                                           const AlgebraElement& t,
                                           const AlgebraElement& d) {
  require(t.alg == a || t.alg->same_structure(*a), errc::validation_error,
          "quadratic coefficient t outside the base algebra");
  require(d.alg == a || d.alg->same_structure(*a), errc::validation_error,
          "quadratic coefficient d outside the base algebra");
  const Mod& mod = a->mod;
  size_t r = a->rank;
  size_t r2 = 2 * r;
  std::vector<std::string> names(r2);
  for (size_t i = 0; i < r; ++i) {
    names[i] = a->basis_names[i];
    names[r + i] = a->basis_names[i] + "*a";
  }
  auto entry = [&](const Row& base_part, const Row& alpha_part) {
    Row e(r2, 0);
    for (size_t k = 0; k < r; ++k) {
      e[k] = base_part[k];
      e[r + k] = alpha_part[k];
    }
    return e;
  };
  Row zero(r, 0);
  std::vector<std::vector<Row>> table(r2, std::vector<Row>(r2));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      const Row& bb = a->table[i][j];
      // b_i * b_j stays in the base; b_i * (b_j a) picks up one alpha;
      // (b_i a)(b_j a) = (b_i b_j)(t a - d).
      table[i][j] = entry(bb, zero);
      table[i][r + j] = entry(zero, bb);
      table[r + i][j] = entry(zero, bb);
      table[r + i][r + j] =
          entry(row_scale(mod, -1, a->mul_coords(bb, d.coords)),
                a->mul_coords(bb, t.coords));
    }
  Row unit = entry(a->unit, zero);
  AlgebraPtr ext = ChainAlgebra::make(mod, std::move(names), std::move(table),
                                      std::move(unit));
  ModMatrix emb = ModMatrix::zero(mod, r, r2);
  for (size_t i = 0; i < r; ++i) emb.rows[i][i] = mod.reduce(1);
  Row root(r2, 0);
  for (size_t k = 0; k < r; ++k) root[r + k] = a->unit[k];
  return QuadExtension{ext, AlgebraHom::make(a, ext, std::move(emb)),
                       algebra_element(ext, std::move(root))};
}

// Howell basis of the unital subring generated by the given elements. Each
// round adjoins all pairwise products of the current module basis; the span
// must stabilize within rank(algebra) rounds for a correct table.
inline ModMatrix subalgebra_closure(const AlgebraPtr& a,
                                    const std::vector<AlgebraElement>& gens) {
  std::vector<Row> rows{a->unit};
  for (const auto& g : gens) {
    require(g.alg == a || g.alg->same_structure(*a), errc::validation_error,
            "closure generator outside the algebra");
    rows.push_back(g.coords);
  }
  ModMatrix span = howell_form(ModMatrix{a->mod, a->rank, std::move(rows)}).h;
  for (size_t round = 0; round <= a->rank; ++round) {
    std::vector<Row> next = span.rows;
    for (size_t i = 0; i < span.rows.size(); ++i)
      for (size_t j = i; j < span.rows.size(); ++j)
        next.push_back(a->mul_coords(span.rows[i], span.rows[j]));
    ModMatrix grown = howell_form(ModMatrix{a->mod, a->rank, std::move(next)}).h;
    if (grown.rows == span.rows) return span;
    span = std::move(grown);
  }
  fail(errc::internal, "subalgebra closure did not stabilize");
}

// Annihilator of the S-module Stilde/S where Stilde = S + S*alpha, returned
// as a Howell basis of { s in S : s*alpha in S }. Requires the cyclicity
// S + S*alpha = Stilde, i.e. the stacked span must fill the whole module.
inline ModMatrix annihilator_of_quotient(const AlgebraPtr& stilde,
                                         const ModMatrix& s_basis,
                                         const AlgebraElement& alpha) {
  require(alpha.alg == stilde || alpha.alg->same_structure(*stilde),
          errc::validation_error, "alpha outside the ambient algebra");
  require(s_basis.cols == stilde->rank, errc::validation_error,
          "subring basis width != ambient rank");
  const Mod& mod = stilde->mod;
  std::vector<Row> salpha;
  for (const auto& b : s_basis.rows)
    salpha.push_back(stilde->mul_coords(b, alpha.coords));
  std::vector<Row> stacked = s_basis.rows;
  stacked.insert(stacked.end(), salpha.begin(), salpha.end());
  require(span_equal(ModMatrix{mod, stilde->rank, stacked},
                     ModMatrix::identity(mod, stilde->rank)),
          errc::quotient_not_cyclic, "S + S*alpha does not fill the module");
  // s = c * s_basis annihilates iff c * salpha lands back in span(s_basis):
  // (c, d) ranges over the left kernel of [salpha; s_basis].
  std::vector<Row> ann_rows;
  std::vector<Row> kernel_input = salpha;
  kernel_input.insert(kernel_input.end(), s_basis.rows.begin(), s_basis.rows.end());
  ModMatrix ker = left_kernel(ModMatrix{mod, stilde->rank, kernel_input});
  for (const auto& k : ker.rows) {
    Row c(k.begin(), k.begin() + salpha.size());
    Row s = row_times_matrix(mod, c, s_basis);
    if (!row_is_zero(s)) ann_rows.push_back(std::move(s));
  }
  return howell_form(ModMatrix{mod, stilde->rank, std::move(ann_rows)}).h;
}

// Idempotent cut e*A of the ambient algebra, with unit e. The cut of a free
// module over the chain ring is free, so a free basis always exists for a
// genuine idempotent.
struct AlgebraComponent {
  AlgebraPtr algebra;
  // Rows are ambient coordinates of the component basis.
  ModMatrix basis;
  AlgebraElement idempotent;
};

inline AlgebraComponent idempotent_component(const AlgebraPtr& a,
                                             const AlgebraElement& e) {
  require(e.alg == a || e.alg->same_structure(*a), errc::validation_error,
          "idempotent outside the algebra");
  require((e * e) == e, errc::validation_error, "element is not idempotent");
  const Mod& mod = a->mod;
  std::vector<Row> image;
  for (size_t j = 0; j < a->rank; ++j) {
    Row ej(a->rank, 0);
    ej[j] = mod.reduce(1);
    image.push_back(a->mul_coords(e.coords, ej));
  }
  auto basis = free_basis_of_span(ModMatrix{mod, a->rank, image});
  require(basis.has_value(), errc::internal,
          "idempotent cut has no free basis");
  HowellForm hf = howell_form(*basis);
  size_t k = basis->rows.size();
  std::vector<std::string> names(k);
  for (size_t i = 0; i < k; ++i) names[i] = "c" + std::to_string(i);
  std::vector<std::vector<Row>> table(k, std::vector<Row>(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      Row prod = a->mul_coords(basis->rows[i], basis->rows[j]);
      auto c = solve_with(hf, prod);
      require(c.has_value(), errc::internal, "component not closed under product");
      table[i][j] = *c;
    }
  auto unit = solve_with(hf, e.coords);
  require(unit.has_value(), errc::internal, "idempotent outside its own cut");
  AlgebraPtr comp = ChainAlgebra::make(mod, std::move(names), std::move(table),
                                       std::move(*unit));
  return AlgebraComponent{comp, *basis, e};
}

// Project x to the component: coordinates of e*x on the component basis.
inline AlgebraElement component_project(const AlgebraComponent& c,
                                        const AlgebraElement& x) {
  Row ex = c.idempotent.alg->mul_coords(c.idempotent.coords, x.coords);
  auto coords = solve_with(howell_form(c.basis), ex);
  require(coords.has_value(), errc::internal, "projection failed to solve");
  return algebra_element(c.algebra, *coords);
}

inline AlgebraElement component_lift(const AlgebraComponent& c,
                                     const AlgebraElement& x) {
  return algebra_element(c.idempotent.alg,
                         row_times_matrix(c.basis.mod, x.coords, c.basis));
}

// Stable idempotent of the squaring orbit of x: detect the cycle of
// x, x^2, x^4, ... and return z^(2^d - 1) for z in the cycle of length d.
// In every local factor this is 1 when x is a unit and 0 when x is
// topologically nilpotent.
inline AlgebraElement power_idempotent(const AlgebraElement& x) {
  std::vector<AlgebraElement> seen{x};
  AlgebraElement z = x;
  size_t cycle_start = 0, cycle_len = 0;
  for (size_t step = 0; step < 4096; ++step) {
    z = z * z;
    bool found = false;
    for (size_t i = 0; i < seen.size(); ++i)
      if (seen[i] == z) {
        cycle_start = i;
        cycle_len = seen.size() - i;
        found = true;
        break;
      }
    if (found) break;
    seen.push_back(z);
  }
  require(cycle_len > 0, errc::internal, "squaring orbit did not cycle");
  AlgebraElement base = seen[cycle_start];
  AlgebraElement e = algebra_unit(x.alg);
  AlgebraElement power = base;
  for (size_t i = 0; i < cycle_len; ++i) {
    e = e * power;
    power = power * power;
  }
  require((e * e) == e, errc::internal, "stable power is not idempotent");
  return e;
}

}  // namespace pseudodet
